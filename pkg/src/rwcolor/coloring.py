"""Refinement colorings of graph powers and their verifiers.

The pipeline refines a tree-depth coloring so that unions of few refined
color classes can be grown into distance-preserving supersets touching few
base colors; the power of the graph then inherits a rank-width budget on
every small union of classes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

from .graph import Graph, all_pairs_distances, bfs_distances, bits_of, induced_subgraph
from .orderings import LinearOrder, wcol_heuristic, wcol_of_order, wreach_sets
from .widths import (
    RANK_WIDTH_EXACT_CAP,
    TREE_DEPTH_EXACT_CAP,
    rank_width_of_subgraph,
    tree_depth_exact,
)


@dataclass(frozen=True)
class Coloring:
    """Vertex coloring with colors 1..palette_size."""

    colors: tuple[int, ...]
    palette_size: int

    def __post_init__(self):
        if self.palette_size < 1:
            raise ValueError("palette must have at least one color")
        for v, c in enumerate(self.colors):
            if not 1 <= c <= self.palette_size:
                raise ValueError(f"vertex {v} has color {c} outside 1..{self.palette_size}")

    @classmethod
    def from_list(cls, colors: Sequence[int]) -> "Coloring":
        return cls(tuple(colors), max(colors) if colors else 1)

    def classes(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return {c: tuple(vs) for c, vs in out.items()}

    def colors_on(self, X: Iterable[int]) -> frozenset:
        return frozenset(self.colors[v] for v in X)


@dataclass(frozen=True)
class RefinementColoring:
    """A refined coloring plus the decode data needed to expand vertex sets.

    decode maps each refined color to the set of base colors it stands for.
    For multi-radius refinements, inner holds the next level down and the
    decode of this level speaks in terms of inner.refined's palette.
    """

    base: Coloring
    refined: Coloring
    decode: Mapping[int, frozenset]
    radius: int
    order: LinearOrder
    budget: int
    inner: "RefinementColoring | None" = None

    @property
    def d(self) -> int:
        """Product of per-level budgets across the whole refinement chain."""
        return self.budget * (self.inner.d if self.inner is not None else 1)

    def orders(self) -> list[LinearOrder]:
        """Orders used per radius, ascending from radius 2."""
        chain = []
        node: RefinementColoring | None = self
        while node is not None:
            chain.append(node.order)
            node = node.inner
        return list(reversed(chain))

    @property
    def original_base(self) -> Coloring:
        node = self
        while node.inner is not None:
            node = node.inner
        return node.base


def _high_shortest_path(
    G: Graph, pos: Sequence[int], u: int, v: int, r: int
) -> list[int] | None:
    """Shortest u-v path of length <= r whose internal vertices are above v.

    BFS from u through {w : pos[w] > pos[v]}, with v admitted only as the
    endpoint.  The path is reconstructed with smallest-id parents, so the
    outcome is deterministic.
    """
    allowed = 0
    pv = pos[v]
    for w in range(G.n):
        if pos[w] > pv:
            allowed |= 1 << w
    layers = [1 << u]
    seen = 1 << u
    found = u == v
    while not found and len(layers) <= r:
        nxt = 0
        for w in bits_of(layers[-1]):
            nxt |= G.adj[w]
        nxt &= (allowed | 1 << v) & ~seen
        if not nxt:
            return None
        if nxt >> v & 1:
            nxt = 1 << v
            found = True
        seen |= nxt
        layers.append(nxt)
    if not found:
        return None
    path = [v]
    for depth in range(len(layers) - 2, -1, -1):
        tail = path[-1]
        parent = min(bits_of(G.adj[tail] & layers[depth]))
        path.append(parent)
    return list(reversed(path))


def good_refinement(G: Graph, c: Coloring, r: int, L: LinearOrder) -> RefinementColoring:
    """Refine *c* so small unions of new classes admit shortest-path hitters.

    Each vertex v collects base colors in two rounds: the colors of its
    weakly r-reachable set, and, for every non-adjacent weakly reachable
    u < v, the color of the highest vertex on a shortest u-v detour running
    entirely above v (when one of length <= r exists).  The collected sets,
    interned to dense ids, are the refined colors.
    """
    if r < 2:
        raise ValueError("good refinements need radius >= 2")
    if len(c.colors) != G.n:
        raise ValueError("coloring does not match the graph")
    pos = L.position
    wsets = wreach_sets(G, L, r)
    budget = 2 * max(len(s) for s in wsets)
    collected: list[set[int]] = [set() for _ in range(G.n)]
    for v in range(G.n):
        for u in wsets[v]:
            collected[v].add(c.colors[u])
    for v in range(G.n):
        for u in sorted(wsets[v]):
            if u == v or G.has_edge(u, v):
                continue
            path = _high_shortest_path(G, pos, u, v, r)
            if path is not None:
                z = max(path, key=lambda w: pos[w])
                collected[v].add(c.colors[z])
    for v, cs in enumerate(collected):
        assert len(cs) <= budget, f"vertex {v} exceeded the 2*wcol budget"
    keys = sorted({tuple(sorted(cs)) for cs in collected})
    ids = {k: i + 1 for i, k in enumerate(keys)}
    refined = Coloring(
        tuple(ids[tuple(sorted(cs))] for cs in collected), len(keys)
    )
    decode = {ids[k]: frozenset(k) for k in keys}
    return RefinementColoring(c, refined, decode, r, L, budget)


def expand_good(R: RefinementColoring, X: Iterable[int]) -> set[int]:
    """All vertices whose base color appears in the decode of X's refined colors."""
    X = set(X)
    if not X:
        return set()
    base_union: set[int] = set()
    for q in {R.refined.colors[v] for v in X}:
        base_union |= R.decode[q]
    return {v for v, col in enumerate(R.base.colors) if col in base_union}


def expand_excellent(R: RefinementColoring, X: Iterable[int]) -> set[int]:
    """Expand through the whole refinement chain, outermost level first."""
    cur = set(X)
    node: RefinementColoring | None = R
    while node is not None:
        cur = expand_good(node, cur)
        node = node.inner
    return cur


def excellent_refinement(
    G: Graph, c: Coloring, r: int, orders: Sequence[LinearOrder]
) -> RefinementColoring:
    """Compose good refinements at radii 2..r into one distance-closing chain.

    orders must supply one linear order per radius, ascending from 2.
    """
    if r < 2:
        raise ValueError("excellent refinements need radius >= 2")
    if len(orders) != r - 1:
        raise ValueError(f"need one order per radius 2..{r}, got {len(orders)} orders")
    chain: RefinementColoring | None = None
    current = c
    for i, radius in enumerate(range(2, r + 1)):
        level = good_refinement(G, current, radius, orders[i])
        level = replace(level, inner=chain)
        chain = level
        current = level.refined
    assert chain is not None
    return chain


def is_hitter(
    G: Graph,
    X: Iterable[int],
    Xp: Iterable[int],
    r: int,
    dist: list[list] | None = None,
) -> bool:
    """Does Xp contain an internal vertex of some shortest path for every
    X-pair at distance in (1, r]?"""
    X = set(X)
    Xp = set(Xp)
    if not X <= Xp:
        raise ValueError("X must be contained in its candidate hitter")
    if dist is None:
        dist = all_pairs_distances(G)
    for u, v in itertools.combinations(sorted(X), 2):
        d = dist[u][v]
        if 1 < d <= r:
            if not any(
                z not in (u, v) and dist[u][z] + dist[z][v] == d for z in Xp
            ):
                return False
    return True


def is_closure(
    G: Graph,
    X: Iterable[int],
    Xp: Iterable[int],
    r: int,
    dist: list[list] | None = None,
) -> bool:
    """Does the subgraph induced on Xp preserve all X-distances up to r?"""
    X = set(X)
    Xp = set(Xp)
    if not X <= Xp:
        raise ValueError("X must be contained in its candidate closure")
    if dist is None:
        dist = all_pairs_distances(G)
    sub, index = induced_subgraph(G, Xp)
    sub_dist: dict[int, list] = {}
    for u, v in itertools.combinations(sorted(X), 2):
        d = dist[u][v]
        if d <= 1 or d > r:
            continue
        du = sub_dist.get(u)
        if du is None:
            du = bfs_distances(sub, index[u])
            sub_dist[u] = du
        if du[index[v]] != d:
            return False
    return True


def greedy_proper_coloring(G: Graph, order: Sequence[int] | None = None) -> Coloring:
    """Greedy proper coloring along an order (degeneracy order by default)."""
    if order is None:
        remaining = (1 << G.n) - 1
        suffix = []
        while remaining:
            v = min(
                bits_of(remaining),
                key=lambda u: ((G.adj[u] & remaining).bit_count(), u),
            )
            suffix.append(v)
            remaining &= ~(1 << v)
        order = list(reversed(suffix))
    colors = [0] * G.n
    for v in order:
        used = {colors[u] for u in bits_of(G.adj[v]) if colors[u]}
        col = 1
        while col in used:
            col += 1
        colors[v] = col
    return Coloring(tuple(colors), max(colors))


@dataclass
class TdColoringReport:
    ok: bool
    checked_unions: int
    failures: list[tuple[tuple[int, ...], int, int]]  # (colors, size i, td found)


def verify_td_coloring(
    G: Graph, c: Coloring, p: int, td_cap: int = TREE_DEPTH_EXACT_CAP
) -> TdColoringReport:
    """Check that every union of i <= p classes induces tree-depth <= i.

    Unions no larger than i pass outright (tree-depth never exceeds the
    vertex count); everything else goes through the exact solver per
    component, erroring if a component exceeds the solver cap.
    """
    classes = c.classes()
    palette = sorted(classes)
    failures = []
    checked = 0
    for i in range(1, min(p, len(palette)) + 1):
        for combo in itertools.combinations(palette, i):
            union = [v for col in combo for v in classes[col]]
            checked += 1
            if len(union) <= i:
                continue
            sub, _ = induced_subgraph(G, union)
            td = _td_by_component(sub, td_cap)
            if td > i:
                failures.append((combo, i, td))
    return TdColoringReport(not failures, checked, failures)


def _td_by_component(G: Graph, td_cap: int) -> int:
    best = 0
    left = (1 << G.n) - 1
    while left:
        start = left & -left
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            for v in bits_of(frontier):
                nxt |= G.adj[v]
            nxt &= left & ~seen
            seen |= nxt
            frontier = nxt
        comp = sorted(bits_of(seen))
        if len(comp) > td_cap:
            raise ValueError(
                f"component of size {len(comp)} exceeds the exact tree-depth cap {td_cap}; "
                "use a smaller instance"
            )
        comp_g, _ = induced_subgraph(G, comp)
        best = max(best, tree_depth_exact(comp_g, cap=td_cap))
        left &= ~seen
    return best


def _exact_small_td_coloring(G: Graph, p: int, td_cap: int) -> Coloring:
    """Smallest-palette coloring passing the union tree-depth checks.

    Backtracking over restricted-growth assignments; after placing each
    vertex, only unions involving its class are re-checked on the colored
    prefix, which is sound because induced subgraphs never increase
    tree-depth.
    """
    n = G.n

    def union_ok(assign: list[int], upto: int, k: int) -> bool:
        cols = sorted(set(assign[: upto + 1]))
        target = assign[upto]
        for i in range(1, min(p, len(cols)) + 1):
            for combo in itertools.combinations(cols, i):
                if target not in combo:
                    continue
                union = [v for v in range(upto + 1) if assign[v] in combo]
                if len(union) <= i:
                    continue
                sub, _ = induced_subgraph(G, union)
                if _td_by_component(sub, td_cap) > i:
                    return False
        return True

    for k in range(1, n + 1):
        assign = [0] * n

        def backtrack(v: int, used: int) -> bool:
            if v == n:
                return True
            limit = min(k, used + 1)
            for col in range(1, limit + 1):
                assign[v] = col
                if union_ok(assign, v, k) and backtrack(v + 1, max(used, col)):
                    return True
            assign[v] = 0
            return False

        if backtrack(0, 0):
            return Coloring(tuple(assign), max(assign))
    raise AssertionError("identity coloring always satisfies the constraints")


def treedepth_coloring(
    G: Graph,
    p: int,
    strategy: str | None = None,
    td_cap: int = TREE_DEPTH_EXACT_CAP,
) -> Coloring:
    """Coloring whose every union of i <= p classes has tree-depth <= i.

    Strategies: "exact-small" searches palettes exhaustively (small graphs);
    "wcol-greedy" colors greedily against weakly reachable sets at radius
    2^p and verifies, doubling the radius on failure.  The returned coloring
    is always verified.  When p >= n, giving every vertex its own color
    already qualifies, so that shortcut is taken first.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if strategy is None:
        if p >= G.n:
            strategy = "identity"
        elif p == 1:
            strategy = "proper"
        elif G.n <= 12:
            strategy = "exact-small"
        else:
            strategy = "wcol-greedy"

    if strategy == "identity" or (strategy != "proper" and p >= G.n):
        return Coloring(tuple(range(1, G.n + 1)), G.n)
    if strategy == "proper" or p == 1:
        c = greedy_proper_coloring(G)
        report = verify_td_coloring(G, c, 1, td_cap)
        assert report.ok
        return c
    if strategy == "exact-small":
        c = _exact_small_td_coloring(G, p, td_cap)
        report = verify_td_coloring(G, c, p, td_cap)
        assert report.ok
        return c
    if strategy == "wcol-greedy":
        radius = min(2**p, G.n)
        for _ in range(4):
            _, L = wcol_heuristic(G, radius)
            wsets = wreach_sets(G, L, radius)
            colors = [0] * G.n
            for v in L.order:
                used = {colors[u] for u in wsets[v] if u != v and colors[u]}
                col = 1
                while col in used:
                    col += 1
                colors[v] = col
            c = Coloring(tuple(colors), max(colors))
            if verify_td_coloring(G, c, p, td_cap).ok:
                return c
            if radius >= G.n:
                break
            radius = min(radius * 2, G.n)
        raise ValueError(
            "greedy tree-depth coloring failed verification at every radius; "
            "use a smaller instance or the exact strategy"
        )
    raise ValueError(f"unknown strategy {strategy!r}")


@dataclass
class ColoringProfile:
    """Budget and measurement record for a low rank-width coloring."""

    p: int
    n_colors: int
    d: int
    radius: int
    q: dict[int, int]
    base_colors: int = 0
    measured: dict[int, tuple[int, str]] = field(default_factory=dict)
    verified: bool | None = None
    seed: int | None = None


def gurski_wanke_budget(r: int, q: int) -> int:
    """Rank-width bound for the r-th power of a graph of tree-width <= q."""
    return 2 * (r + 1) ** (q + 1) - 2


def low_rankwidth_coloring_of_power(
    G: Graph,
    r: int,
    p: int,
    td_cap: int = TREE_DEPTH_EXACT_CAP,
    td_strategy: str | None = None,
) -> tuple[RefinementColoring, ColoringProfile]:
    """Color G so that small class unions of power(G, r) have bounded width.

    Takes a (d*p)-tree-depth coloring, where d multiplies the per-radius
    doubled weak-coloring values of heuristic orders for radii 2..r, and
    refines it through the excellent chain.  The profile carries the width
    budget per union size.
    """
    if r < 2:
        raise ValueError("power coloring needs radius >= 2")
    orders = []
    d = 1
    for radius in range(2, r + 1):
        _, L = wcol_heuristic(G, radius)
        orders.append(L)
        d *= 2 * wcol_of_order(G, L, radius)
    base = treedepth_coloring(G, d * p, strategy=td_strategy, td_cap=td_cap)
    ref = excellent_refinement(G, base, r, orders)
    assert ref.d == d
    q = {i: gurski_wanke_budget(r, d * i) for i in range(1, p + 1)}
    profile = ColoringProfile(
        p=p,
        n_colors=ref.refined.palette_size,
        d=d,
        radius=r,
        q=q,
        base_colors=base.palette_size,
    )
    return ref, profile


def verify_low_rw_coloring(
    H: Graph,
    c: Coloring,
    p: int,
    Q: Mapping[int, int] | Callable[[int], int],
    exact_cap: int = RANK_WIDTH_EXACT_CAP,
    max_unions: int = 1_000_000,
) -> ColoringProfile:
    """Measure widths of all unions of <= p classes of c on H against Q.

    Components small enough are measured exactly, larger ones contribute
    flagged upper bounds.  The profile verifies iff every measured value
    stays within its budget.
    """
    budget = Q if callable(Q) else (lambda i: Q[i])
    classes = c.classes()
    palette = sorted(classes)
    total = sum(
        math.comb(len(palette), i) for i in range(1, min(p, len(palette)) + 1)
    )
    if total > max_unions:
        raise ValueError(f"{total} unions exceed the enumeration budget {max_unions}")
    measured: dict[int, tuple[int, str]] = {}
    verified = True
    q_table: dict[int, int] = {}
    for i in range(1, min(p, len(palette)) + 1):
        q_table[i] = budget(i)
        worst = 0
        method = "exact"
        for combo in itertools.combinations(palette, i):
            union = [v for col in combo for v in classes[col]]
            value, m = rank_width_of_subgraph(H, union, exact_cap)
            if m == "upper-bound":
                method = "upper-bound"
            worst = max(worst, value)
        measured[i] = (worst, method)
        if worst > q_table[i]:
            verified = False
    return ColoringProfile(
        p=p,
        n_colors=c.palette_size,
        d=0,
        radius=0,
        q=q_table,
        measured=measured,
        verified=verified,
    )
