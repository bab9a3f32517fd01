"""Exact and heuristic rank-width, tree-depth, and balanced partitions.

This is the oracle layer: every coloring or certificate produced elsewhere
in the package is checkable against the exact solvers here, which only need
to work at desk scale.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Graph, bits_of, cutrank_mask, induced_subgraph
from .orderings import LinearOrder

RANK_WIDTH_EXACT_CAP = 12
TREE_DEPTH_EXACT_CAP = 14


@dataclass(frozen=True)
class RankDecomposition:
    """Subcubic tree with leaves bijectively mapped to graph vertices.

    Nodes are 0..node_count-1; leaf_map lists (leaf_node, vertex) pairs.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    leaf_map: tuple[tuple[int, int], ...]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def leaf_vertex(self) -> dict[int, int]:
        return dict(self.leaf_map)

    def side_mask(self, edge: tuple[int, int]) -> int:
        """Bitmask of graph vertices on the first-endpoint side of *edge*."""
        a, b = edge
        adj = self.adjacency()
        leaf = self.leaf_vertex()
        stack = [a]
        seen = {a}
        mask = 0
        while stack:
            t = stack.pop()
            if t in leaf:
                mask |= 1 << leaf[t]
            for s in adj[t]:
                if not (t == a and s == b) and s not in seen:
                    seen.add(s)
                    stack.append(s)
        return mask


@dataclass
class WidthReport:
    value: int
    method: str  # "exact" | "upper-bound"
    decomposition: RankDecomposition | None
    elapsed: float


def _check_structure(G: Graph, D: RankDecomposition) -> None:
    n_nodes = D.node_count
    if n_nodes < 2:
        raise ValueError("decomposition tree must have at least 2 nodes")
    if len(D.edges) != n_nodes - 1:
        raise ValueError(
            f"tree on {n_nodes} nodes needs {n_nodes - 1} edges, got {len(D.edges)}"
        )
    adj = D.adjacency()
    for a, b in D.edges:
        if not (0 <= a < n_nodes and 0 <= b < n_nodes):
            raise ValueError(f"edge ({a}, {b}) leaves the node range")
    seen = {0}
    stack = [0]
    while stack:
        t = stack.pop()
        for s in adj[t]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    if len(seen) != n_nodes:
        raise ValueError("decomposition tree is disconnected")
    degrees = [len(a) for a in adj]
    for t, d in enumerate(degrees):
        if d not in (1, 3):
            raise ValueError(f"node {t} has degree {d}; every node must have degree 1 or 3")
    leaves = {t for t, d in enumerate(degrees) if d == 1}
    leaf = D.leaf_vertex()
    if set(leaf) != leaves:
        raise ValueError("leaf_map domain differs from the tree's leaves")
    mapped = sorted(leaf.values())
    if mapped != list(range(G.n)):
        raise ValueError("leaf_map is not a bijection onto the vertex set")


def verify_decomposition(G: Graph, D: RankDecomposition) -> int:
    """Width of a rank-decomposition: max cut-rank over its tree edges.

    Raises on structural violations (degree, connectivity, leaf bijection).
    """
    _check_structure(G, D)
    width = 0
    for e in D.edges:
        width = max(width, cutrank_mask(G, D.side_mask(e)))
    return width


def _popcount_order(n: int) -> list[int]:
    masks = list(range(1, 1 << n))
    masks.sort(key=lambda m: m.bit_count())
    return masks


def rank_width_exact(G: Graph, cap: int = RANK_WIDTH_EXACT_CAP) -> WidthReport:
    """Exact rank-width with a witness decomposition.

    Minimizes over all leaf-labeled subcubic trees; the sweep is factored
    through subsets, memoizing the best rooted subtree per vertex subset, so
    each unordered bipartition of each subset is inspected exactly once.
    Graphs on <= 1 vertex have width 0 and no decomposition.
    """
    t0 = time.perf_counter()
    n = G.n
    if n <= 1:
        return WidthReport(0, "exact", None, time.perf_counter() - t0)
    if n > cap:
        raise ValueError(
            f"exact rank-width is capped at n={cap}; use rank_width_upper instead"
        )
    full = (1 << n) - 1
    cut = [0] * (full + 1)
    for mask in range(1, full + 1):
        cut[mask] = cutrank_mask(G, mask)
    best = [0] * (full + 1)
    choice = [0] * (full + 1)
    for mask in _popcount_order(n):
        if mask.bit_count() < 2:
            continue
        b = None
        bsub = 0
        sub = (mask - 1) & mask
        while sub:
            rest = mask ^ sub
            if sub < rest:
                w = max(best[sub], best[rest], cut[sub], cut[rest])
                if b is None or w < b:
                    b = w
                    bsub = sub
            sub = (sub - 1) & mask
        best[mask] = b
        choice[mask] = bsub

    nodes = 0
    edges: list[tuple[int, int]] = []
    leaf_map: list[tuple[int, int]] = []

    def build(mask: int) -> int:
        nonlocal nodes
        node = nodes
        nodes += 1
        if mask.bit_count() == 1:
            leaf_map.append((node, mask.bit_length() - 1))
            return node
        sub = choice[mask]
        a = build(sub)
        b2 = build(mask ^ sub)
        edges.append((node, a))
        edges.append((node, b2))
        return node

    top = choice[full]
    a = build(top)
    b = build(full ^ top)
    edges.append((a, b))
    D = RankDecomposition(nodes, tuple(edges), tuple(leaf_map))
    return WidthReport(best[full], "exact", D, time.perf_counter() - t0)


def caterpillar_decomposition(order: Sequence[int]) -> RankDecomposition:
    """Caterpillar tree whose i-th leaf is order[i]; cuts are the prefixes."""
    n = len(order)
    if n < 2:
        raise ValueError("caterpillar needs at least 2 vertices")
    if n == 2:
        return RankDecomposition(2, ((0, 1),), ((0, order[0]), (1, order[1])))
    # leaves 0..n-1, spine nodes n..2n-3
    edges = [(0, n), (1, n)]
    for i in range(n - 3):
        edges.append((n + i, n + i + 1))
        edges.append((i + 2, n + i + 1))
    edges.append((2 * n - 3, n - 1))
    leaf_map = tuple((i, order[i]) for i in range(n))
    return RankDecomposition(2 * n - 2, tuple(edges), leaf_map)


def rank_width_upper(G: Graph, strategy: str | LinearOrder = "degeneracy") -> WidthReport:
    """Upper bound from the caterpillar decomposition of a vertex order.

    The width equals the maximum cut-rank over prefix cuts of the order,
    which always dominates the exact rank-width.
    """
    t0 = time.perf_counter()
    if G.n < 2:
        raise ValueError("rank_width_upper needs at least 2 vertices")
    if isinstance(strategy, LinearOrder):
        order = list(strategy.order)
    elif strategy == "id":
        order = list(range(G.n))
    elif strategy == "bfs":
        order = _bfs_order(G)
    elif strategy == "degeneracy":
        order = _degeneracy_order(G)
    else:
        raise ValueError(f"unknown ordering strategy {strategy!r}")
    value = 0
    mask = 0
    for v in order[:-1]:
        mask |= 1 << v
        value = max(value, cutrank_mask(G, mask))
    D = caterpillar_decomposition(order)
    return WidthReport(value, "upper-bound", D, time.perf_counter() - t0)


def _bfs_order(G: Graph) -> list[int]:
    order = []
    seen = 0
    for start in range(G.n):
        if seen >> start & 1:
            continue
        frontier = 1 << start
        seen |= frontier
        while frontier:
            vs = list(bits_of(frontier))
            order.extend(vs)
            nxt = 0
            for v in vs:
                nxt |= G.adj[v]
            frontier = nxt & ~seen
            seen |= frontier
    return order


def _degeneracy_order(G: Graph) -> list[int]:
    remaining = (1 << G.n) - 1
    suffix = []
    while remaining:
        v = min(bits_of(remaining), key=lambda u: ((G.adj[u] & remaining).bit_count(), u))
        suffix.append(v)
        remaining &= ~(1 << v)
    return list(reversed(suffix))


def balanced_partition(
    G: Graph, C: Iterable[int], D: RankDecomposition
) -> tuple[set[int], set[int]]:
    """Bipartition (X, Y) with |C|/3 <= |X cap C| <= 2|C|/3 and small cut-rank.

    Roots the decomposition by subdividing its lexicographically smallest
    edge, then takes the deepest node (smallest id on ties) whose descendant
    leaves hold at least a third of C.  The returned cut is a tree cut of D,
    so its cut-rank is at most the width of D.
    """
    c_set = set(C)
    if len(c_set) < 3:
        raise ValueError("balanced partition needs |C| >= 3")
    _check_structure(G, D)
    root_edge = min(tuple(sorted(e)) for e in D.edges)
    adj = D.adjacency()
    leaf = D.leaf_vertex()
    root = D.node_count  # virtual node subdividing root_edge
    children: dict[int, list[int]] = {root: list(root_edge)}
    parent = {root_edge[0]: root, root_edge[1]: root}
    depth = {root: 0, root_edge[0]: 1, root_edge[1]: 1}
    stack = [root_edge[0], root_edge[1]]
    while stack:
        t = stack.pop()
        kids = [s for s in adj[t] if s != parent.get(t) and not (
            {t, s} == set(root_edge))]
        children[t] = kids
        for s in kids:
            parent[s] = t
            depth[s] = depth[t] + 1
            stack.append(s)

    mu: dict[int, int] = {}
    vertices_under: dict[int, int] = {}
    post = []
    stack = [root]
    while stack:
        t = stack.pop()
        post.append(t)
        stack.extend(children.get(t, []))
    for t in reversed(post):
        if t in leaf:
            vertices_under[t] = 1 << leaf[t]
        else:
            m = 0
            for s in children.get(t, []):
                m |= vertices_under[s]
            vertices_under[t] = m
        mu[t] = sum(1 for v in bits_of(vertices_under[t]) if v in c_set)
    csize = len(c_set)
    candidates = [
        t for t in mu if t != root and 3 * mu[t] >= csize
    ]
    t = max(candidates, key=lambda s: (depth[s], -s))
    x_mask = vertices_under[t]
    X = set(bits_of(x_mask))
    Y = set(range(G.n)) - X
    return X, Y


def tree_depth_exact(G: Graph, cap: int = TREE_DEPTH_EXACT_CAP) -> int:
    """Exact tree-depth by the deletion recursion, memoized on vertex subsets.

    A single vertex has depth 1; a connected graph takes 1 + the best vertex
    deletion; a disconnected graph takes the max over its components.
    """
    if G.n > cap:
        raise ValueError(f"exact tree-depth is capped at n={cap}")
    memo: dict[int, int] = {}

    def components(mask: int) -> list[int]:
        comps = []
        left = mask
        while left:
            start = left & -left
            seen = start
            frontier = start
            while frontier:
                nxt = 0
                for v in bits_of(frontier):
                    nxt |= G.adj[v]
                nxt &= mask & ~seen
                seen |= nxt
                frontier = nxt
            comps.append(seen)
            left &= ~seen
        return comps

    def td(mask: int) -> int:
        if mask.bit_count() == 1:
            return 1
        got = memo.get(mask)
        if got is not None:
            return got
        comps = components(mask)
        if len(comps) > 1:
            val = max(td(c) for c in comps)
        else:
            val = 1 + min(td(mask & ~(1 << v)) for v in bits_of(mask))
        memo[mask] = val
        return val

    return td((1 << G.n) - 1)


def restrict_decomposition(
    D: RankDecomposition, keep_vertices: Iterable[int], relabel: dict[int, int] | None = None
) -> RankDecomposition | None:
    """Decomposition induced on a vertex subset by pruning and suppression.

    Drops leaves outside the subset, prunes dead branches, and suppresses
    the resulting degree-2 nodes.  Cut-ranks of the surviving cuts only
    shrink, so the width never grows.  Returns None for subsets of size < 2.
    With *relabel*, leaf vertices are renamed old->new.
    """
    keep = set(keep_vertices)
    if len(keep) < 2:
        return None
    leaf = D.leaf_vertex()
    alive = set(range(D.node_count))
    adj = {t: set() for t in alive}
    for a, b in D.edges:
        adj[a].add(b)
        adj[b].add(a)
    kept_leaves = {t for t, v in leaf.items() if v in keep}
    # prune branches that carry no kept leaf
    changed = True
    while changed:
        changed = False
        for t in list(alive):
            if t in kept_leaves:
                continue
            if len(adj[t]) <= 1:
                for s in adj[t]:
                    adj[s].discard(t)
                adj.pop(t)
                alive.discard(t)
                changed = True
    # suppress degree-2 nodes
    for t in list(alive):
        if t not in kept_leaves and len(adj[t]) == 2:
            a, b = sorted(adj[t])
            adj[a].discard(t)
            adj[b].discard(t)
            adj[a].add(b)
            adj[b].add(a)
            adj.pop(t)
            alive.discard(t)
    new_id = {t: i for i, t in enumerate(sorted(alive))}
    edges = set()
    for t in alive:
        for s in adj[t]:
            edges.add((min(new_id[t], new_id[s]), max(new_id[t], new_id[s])))
    leaf_map = []
    for t in sorted(kept_leaves):
        v = leaf[t]
        leaf_map.append((new_id[t], relabel[v] if relabel is not None else v))
    return RankDecomposition(len(alive), tuple(sorted(edges)), tuple(leaf_map))


def rank_width_of_subgraph(
    G: Graph, X: Iterable[int], exact_cap: int = RANK_WIDTH_EXACT_CAP
) -> tuple[int, str]:
    """Width of the induced subgraph: exact per component when small enough.

    Rank-width of a disconnected graph is the max over its components.
    Components above the exact cap contribute a flagged upper bound.
    """
    keep = sorted(set(X))
    if not keep:
        return 0, "exact"
    sub, _ = induced_subgraph(G, keep)
    value = 0
    method = "exact"
    left = (1 << sub.n) - 1
    while left:
        start = left & -left
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            for v in bits_of(frontier):
                nxt |= sub.adj[v]
            nxt &= left & ~seen
            seen |= nxt
            frontier = nxt
        comp = sorted(bits_of(seen))
        comp_g, _ = induced_subgraph(sub, comp)
        if comp_g.n <= exact_cap:
            rep = rank_width_exact(comp_g, cap=exact_cap)
        else:
            rep = rank_width_upper(comp_g)
            method = "upper-bound"
        value = max(value, rep.value)
        left &= ~seen
    return value, method
