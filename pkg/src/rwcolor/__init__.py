"""Toolkit for constructing, verifying, and refuting low rank-width
colorings of graphs, with desk-scale exact oracles."""

__version__ = "0.1.0"

from .graph import (
    GF2Matrix,
    Graph,
    bfs_distances,
    build_graph,
    complement,
    cutrank,
    gf2_rank,
    induced_subgraph,
    power,
)
from .orderings import LinearOrder, wcol_exact, wcol_heuristic, wcol_of_order, wreach
from .widths import (
    RankDecomposition,
    WidthReport,
    balanced_partition,
    rank_width_exact,
    rank_width_upper,
    tree_depth_exact,
    verify_decomposition,
)
from .coloring import (
    Coloring,
    ColoringProfile,
    RefinementColoring,
    excellent_refinement,
    expand_excellent,
    expand_good,
    good_refinement,
    is_closure,
    is_hitter,
    low_rankwidth_coloring_of_power,
    treedepth_coloring,
    verify_low_rw_coloring,
    verify_td_coloring,
)

__all__ = [
    "GF2Matrix",
    "Graph",
    "LinearOrder",
    "Coloring",
    "ColoringProfile",
    "RankDecomposition",
    "RefinementColoring",
    "WidthReport",
    "balanced_partition",
    "bfs_distances",
    "build_graph",
    "complement",
    "cutrank",
    "excellent_refinement",
    "expand_excellent",
    "expand_good",
    "gf2_rank",
    "good_refinement",
    "induced_subgraph",
    "is_closure",
    "is_hitter",
    "low_rankwidth_coloring_of_power",
    "power",
    "rank_width_exact",
    "rank_width_upper",
    "tree_depth_exact",
    "treedepth_coloring",
    "verify_decomposition",
    "verify_low_rw_coloring",
    "verify_td_coloring",
    "wcol_exact",
    "wcol_heuristic",
    "wcol_of_order",
    "wreach",
]
