import itertools
import random

import pytest

from rwcolor.graph import build_graph, cutrank, induced_subgraph
from rwcolor.families import h_graph
from rwcolor.orderings import LinearOrder
from rwcolor.widths import (
    RankDecomposition,
    balanced_partition,
    caterpillar_decomposition,
    rank_width_exact,
    rank_width_upper,
    restrict_decomposition,
    tree_depth_exact,
    verify_decomposition,
)

import oracles


def complete(n):
    return build_graph(n, list(itertools.combinations(range(n), 2)))


def pathg(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def test_verify_k2():
    k2 = build_graph(2, [(0, 1)])
    D = RankDecomposition(2, ((0, 1),), ((0, 0), (1, 1)))
    assert verify_decomposition(k2, D) == 1


def test_verify_isolated_vertices():
    g = build_graph(4, [])
    D = caterpillar_decomposition([0, 1, 2, 3])
    assert verify_decomposition(g, D) == 0


def test_verify_c4_caterpillar():
    c4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    D = caterpillar_decomposition([0, 1, 2, 3])
    # prefix cuts {0}, {0,1}, {0,1,2} have cut-ranks 1, 2, 1
    assert verify_decomposition(c4, D) == 2


def test_verify_rejects_degree_violation():
    # a path of 3 tree nodes has a degree-2 node
    D = RankDecomposition(3, ((0, 1), (1, 2)), ((0, 0), (2, 1)))
    with pytest.raises(ValueError, match="degree"):
        verify_decomposition(build_graph(2, [(0, 1)]), D)


def test_verify_rejects_bad_leaf_map():
    D = RankDecomposition(2, ((0, 1),), ((0, 0), (1, 0)))
    with pytest.raises(ValueError, match="bijection"):
        verify_decomposition(build_graph(2, [(0, 1)]), D)


def test_verify_rejects_disconnected_tree():
    D = RankDecomposition(4, ((0, 1), (2, 3)), ((0, 0), (1, 1), (2, 2), (3, 3)))
    with pytest.raises(ValueError):
        verify_decomposition(build_graph(4, []), D)


def test_exact_single_vertex():
    rep = rank_width_exact(build_graph(1, []))
    assert rep.value == 0 and rep.decomposition is None


@pytest.mark.parametrize("n", range(2, 9))
def test_exact_complete_graphs(n):
    rep = rank_width_exact(complete(n))
    assert rep.value == 1
    assert verify_decomposition(complete(n), rep.decomposition) == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_exact_paths(n):
    rep = rank_width_exact(pathg(n))
    assert rep.value == 1
    assert verify_decomposition(pathg(n), rep.decomposition) == 1


def test_exact_c5():
    c5 = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
    rep = rank_width_exact(c5)
    assert rep.value == 2
    assert verify_decomposition(c5, rep.decomposition) == 2


def test_exact_matches_full_tree_enumeration():
    for g in oracles.all_graphs(4):
        assert rank_width_exact(g).value == oracles.rank_width_by_trees(g)
    rng = random.Random(13)
    for n in (5, 6):
        for _ in range(6):
            g = oracles.random_graph(n, 0.4, rng)
            assert rank_width_exact(g).value == oracles.rank_width_by_trees(g)


def test_exact_cap_advises_upper():
    with pytest.raises(ValueError, match="rank_width_upper"):
        rank_width_exact(complete(13))


def test_exact_monotone_under_induced_subgraphs():
    rng = random.Random(21)
    for _ in range(8):
        g = oracles.random_graph(8, 0.4, rng)
        rw = rank_width_exact(g).value
        for _ in range(5):
            size = rng.randint(1, 8)
            X = sorted(rng.sample(range(8), size))
            sub, _ = induced_subgraph(g, X)
            assert rank_width_exact(sub).value <= rw


def test_upper_path_order():
    for n in (2, 4, 7):
        rep = rank_width_upper(pathg(n), "id")
        assert rep.value == 1
        assert verify_decomposition(pathg(n), rep.decomposition) == 1


def test_upper_complete_any_order():
    rep = rank_width_upper(complete(6), "degeneracy")
    assert rep.value == 1


def test_upper_dominates_exact_all_strategies():
    rng = random.Random(4)
    graphs = list(oracles.all_graphs(4)) + [oracles.random_graph(7, 0.4, rng) for _ in range(8)]
    for g in graphs:
        if g.n < 2:
            continue
        exact = rank_width_exact(g).value
        for strategy in ("id", "bfs", "degeneracy"):
            rep = rank_width_upper(g, strategy)
            assert rep.value >= exact
            assert verify_decomposition(g, rep.decomposition) == rep.value


def test_upper_accepts_explicit_order():
    g = pathg(5)
    rep = rank_width_upper(g, LinearOrder.from_order([4, 3, 2, 1, 0]))
    assert rep.value == 1


def test_balanced_partition_p4():
    p4 = pathg(4)
    D = rank_width_exact(p4).decomposition
    X, Y = balanced_partition(p4, range(4), D)
    assert len(X) >= 2 and len(Y) >= 2
    assert cutrank(p4, X) <= 1


def test_balanced_partition_three_element_core():
    g = complete(6)
    D = rank_width_exact(g).decomposition
    C = {0, 3, 5}
    X, Y = balanced_partition(g, C, D)
    assert len(X & C) in (1, 2)
    assert len(Y & C) in (1, 2)


def test_balanced_partition_h22_cut_bound():
    g = h_graph(2, 2)
    rep = rank_width_exact(g)
    X, Y = balanced_partition(g, range(g.n), rep.decomposition)
    assert cutrank(g, X) <= rep.value
    assert len(X) >= g.n / 3 and len(Y) >= g.n / 3


def test_balanced_partition_small_core_rejected():
    g = complete(4)
    D = rank_width_exact(g).decomposition
    with pytest.raises(ValueError):
        balanced_partition(g, {0, 1}, D)


def test_balanced_partition_random_cores():
    rng = random.Random(61)
    for _ in range(12):
        g = oracles.random_graph(9, 0.35, rng)
        rep = rank_width_exact(g)
        C = set(rng.sample(range(9), rng.randint(3, 9)))
        X, Y = balanced_partition(g, C, rep.decomposition)
        assert X | Y == set(range(9)) and not X & Y
        assert 3 * len(X & C) >= len(C)
        assert 3 * len(Y & C) >= len(C)
        assert cutrank(g, X) <= rep.value


def test_treedepth_base_cases():
    assert tree_depth_exact(build_graph(1, [])) == 1
    assert tree_depth_exact(build_graph(2, [(0, 1)])) == 2


def test_treedepth_p4():
    assert tree_depth_exact(pathg(4)) == 3
    assert oracles.treedepth_by_recursion(pathg(4)) == 3


def test_treedepth_matches_recursion_oracle():
    rng = random.Random(8)
    for _ in range(15):
        g = oracles.random_graph(7, 0.3, rng)
        assert tree_depth_exact(g) == oracles.treedepth_by_recursion(g)


def test_treedepth_relabeling_invariant():
    rng = random.Random(12)
    for _ in range(10):
        g = oracles.random_graph(7, 0.35, rng)
        perm = rng.sample(range(7), 7)
        edges = [(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in g.edges()]
        assert tree_depth_exact(g) == tree_depth_exact(build_graph(7, edges))


def test_treedepth_cap():
    with pytest.raises(ValueError):
        tree_depth_exact(build_graph(15, []))


def test_rank_width_at_most_treedepth():
    for g in oracles.all_graphs(4):
        assert rank_width_exact(g).value <= tree_depth_exact(g)
    rng = random.Random(44)
    for n in (5, 6, 7):
        for _ in range(12):
            g = oracles.random_graph(n, 0.4, rng)
            assert rank_width_exact(g).value <= tree_depth_exact(g)


def test_restrict_decomposition_keeps_width():
    rng = random.Random(9)
    for _ in range(8):
        g = oracles.random_graph(8, 0.4, rng)
        rep = rank_width_exact(g)
        keep = sorted(rng.sample(range(8), rng.randint(2, 7)))
        sub, idx = induced_subgraph(g, keep)
        D = restrict_decomposition(rep.decomposition, keep, idx)
        assert verify_decomposition(sub, D) <= rep.value
