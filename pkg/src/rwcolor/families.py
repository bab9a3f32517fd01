"""Graph families: layered H-graphs, twisted chains, intersection models,
map graphs via radial squares, line graphs via subdivision, and utility
generators.

Canonical vertex numbering is row-major for H-graphs; twisted chains lay
out the A block (by scalar index), then B, then C in row-major (i, j)
order.  Labels carry the family coordinates for verifiers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .coloring import Coloring
from .graph import Graph, build_graph, induced_subgraph, power


def h_graph(n: int, m: int) -> Graph:
    """Layered graph on n rows of m columns; row i vertex j is adjacent to
    the first j vertices of row i+1.  Rows are independent sets."""
    return _h_family(n, m, row_cliques=False)


def h_tilde(n: int, m: int) -> Graph:
    """h_graph with every row turned into a clique."""
    return _h_family(n, m, row_cliques=True)


def _h_family(n: int, m: int, row_cliques: bool) -> Graph:
    if n < 1 or m < 1:
        raise ValueError("need n, m >= 1")
    N = n * m
    adj = [0] * N

    def vid(i: int, j: int) -> int:
        return (i - 1) * m + (j - 1)

    for i in range(1, n):
        for j in range(1, m + 1):
            v = vid(i, j)
            row_below = ((1 << j) - 1) << vid(i + 1, 1)
            adj[v] |= row_below
            for jp in range(1, j + 1):
                adj[vid(i + 1, jp)] |= 1 << v
    if row_cliques:
        for i in range(1, n + 1):
            row_mask = ((1 << m) - 1) << vid(i, 1)
            for j in range(1, m + 1):
                v = vid(i, j)
                adj[v] |= row_mask & ~(1 << v)
    labels = tuple(
        {"row": i, "col": j} for i in range(1, n + 1) for j in range(1, m + 1)
    )
    return Graph(N, tuple(adj), labels)


def row_coloring(n: int, m: int, p: int) -> Coloring:
    """Color row i with (i mod (p+1)) + 1; unions of few classes split into
    short stacked segments of the family."""
    if p < 1:
        raise ValueError("p must be >= 1")
    colors = []
    for i in range(1, n + 1):
        colors.extend([(i % (p + 1)) + 1] * m)
    return Coloring(tuple(colors), p + 1)


TWISTED_CHAIN_VARIANTS = ("bare", "interval", "permutation-derived")


def _tc_scalar_row(x: int, y: int, n: int) -> int:
    return n * (x - 1) + y


def _tc_scalar_col(x: int, y: int, n: int) -> int:
    return n * (y - 1) + x


def twisted_chain(n: int, variant: str = "bare") -> Graph:
    """Twisted chain graph of order n.

    A = v_1..v_{n^2}, B = w_1..w_{n^2}, C = z_(i,j) row-major.  v_k with
    k = n(x-1)+y is adjacent to z_(i,j) iff x < i, or x = i and y <= j
    (equivalently k <= n(i-1)+j); w_k uses the transposed rule
    k <= n(j-1)+i.  The free parts (edges inside A u B and inside C) are
    fixed by the variant: "bare" leaves them empty, "interval" makes A, B,
    and C cliques (no A-B edges), and "permutation-derived" gives C the
    crossing relation of its segment model while A and B stay edgeless.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    if variant not in TWISTED_CHAIN_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    nn = n * n
    N = 3 * nn
    a0, b0, c0 = 0, nn, 2 * nn
    adj = [0] * N
    # A-C: v_k's z-neighbours are the contiguous scalar range k..n^2
    for k in range(1, nn + 1):
        zmask = (((1 << (nn - k + 1)) - 1) << (k - 1)) << c0
        adj[a0 + k - 1] |= zmask
        for s in range(k, nn + 1):
            adj[c0 + s - 1] |= 1 << (a0 + k - 1)
    # B-C: z_(i,j)'s w-neighbours are the contiguous range 1..n(j-1)+i
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            z = c0 + _tc_scalar_row(i, j, n) - 1
            t = _tc_scalar_col(i, j, n)
            adj[z] |= ((1 << t) - 1) << b0
            for k in range(1, t + 1):
                adj[b0 + k - 1] |= 1 << z
    if variant == "interval":
        for block_start, size in ((a0, nn), (b0, nn), (c0, nn)):
            block = ((1 << size) - 1) << block_start
            for v in range(block_start, block_start + size):
                adj[v] |= block & ~(1 << v)
    elif variant == "permutation-derived":
        coords = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
        for ai in range(nn):
            for bi in range(ai + 1, nn):
                x1, y1 = coords[ai]
                x2, y2 = coords[bi]
                s1, s2 = _tc_scalar_row(x1, y1, n), _tc_scalar_row(x2, y2, n)
                t1, t2 = _tc_scalar_col(x1, y1, n), _tc_scalar_col(x2, y2, n)
                # the model puts the column-major scalar on the reversed top
                # line, so segments cross exactly when the two orders agree
                if (s1 - s2) * (t1 - t2) > 0:
                    adj[c0 + ai] |= 1 << (c0 + bi)
                    adj[c0 + bi] |= 1 << (c0 + ai)
    labels = (
        tuple({"role": "A", "k": k} for k in range(1, nn + 1))
        + tuple({"role": "B", "k": k} for k in range(1, nn + 1))
        + tuple(
            {"role": "C", "i": i, "j": j}
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        )
    )
    return Graph(N, tuple(adj), labels)


def chain_order(G: Graph) -> int:
    """Order n of a canonically labeled twisted chain; validates the labels."""
    if G.labels is None:
        raise ValueError("twisted chain operations need labels")
    if G.n % 3 != 0:
        raise ValueError("vertex count is not 3*n^2")
    nn = G.n // 3
    n = int(round(nn**0.5))
    if n * n != nn:
        raise ValueError("vertex count is not 3*n^2")
    for k in range(1, nn + 1):
        if dict(G.labels[k - 1]) != {"role": "A", "k": k}:
            raise ValueError(f"vertex {k - 1} is not labeled A/{k}")
        if dict(G.labels[nn + k - 1]) != {"role": "B", "k": k}:
            raise ValueError(f"vertex {nn + k - 1} is not labeled B/{k}")
    idx = 2 * nn
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if dict(G.labels[idx]) != {"role": "C", "i": i, "j": j}:
                raise ValueError(f"vertex {idx} is not labeled C/({i},{j})")
            idx += 1
    return n


def verify_twisted_chain(G: Graph) -> int:
    """Check both block adjacency rules against the labels; returns the order."""
    n = chain_order(G)
    nn = n * n
    a0, b0, c0 = 0, nn, 2 * nn
    for k in range(1, nn + 1):
        x, y = (k - 1) // n + 1, (k - 1) % n + 1
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                z = c0 + (i - 1) * n + (j - 1)
                want_a = (x < i) or (x == i and y <= j)
                if G.has_edge(a0 + k - 1, z) != want_a:
                    raise ValueError(f"A-C rule violated at v_{k}, z_({i},{j})")
                want_b = (x < j) or (x == j and y <= i)
                if G.has_edge(b0 + k - 1, z) != want_b:
                    raise ValueError(f"B-C rule violated at w_{k}, z_({i},{j})")
    return n


@dataclass(frozen=True)
class IntervalModel:
    """Closed intervals on the integer line realizing a twisted chain.

    Vertex order matches the chain layout (A block, B block, C row-major)
    but with reversed indices; relabel_to_chain[model_vertex] gives the
    vertex of twisted_chain(n, "interval") it plays.
    """

    n: int
    scale: int
    intervals: tuple[tuple[int, int], ...]
    relabel_to_chain: tuple[int, ...]


@dataclass(frozen=True)
class SegmentModel:
    """Segments between two horizontal lines realizing a twisted chain.

    segments[v] = (bottom_x, top_x); crossing pairs are adjacent.  The same
    index reversal as the interval model maps onto
    twisted_chain(n, "permutation-derived").
    """

    n: int
    scale: int
    segments: tuple[tuple[int, int], ...]
    relabel_to_chain: tuple[int, ...]


def _reversal_relabeling(n: int) -> tuple[int, ...]:
    nn = n * n
    out = []
    for k in range(1, nn + 1):  # v_k -> v_{n^2+1-k}
        out.append(nn - k)
    for k in range(1, nn + 1):  # w_k -> w_{n^2+1-k}
        out.append(nn + (nn - k))
    for x in range(1, n + 1):  # z_(x,y) -> z_(n+1-x, n+1-y)
        for y in range(1, n + 1):
            out.append(2 * nn + (n - x) * n + (n - y))
    return tuple(out)


def interval_model(n: int) -> IntervalModel:
    """Interval model with M = 2n^2 + 1: v_i = [0, i], w_i = [M-i, M],
    z_(x,y) = [(x-1)n+y, M-(y-1)n-x]."""
    if n < 1:
        raise ValueError("order must be >= 1")
    nn = n * n
    M = 2 * nn + 1
    iv = []
    for i in range(1, nn + 1):
        iv.append((0, i))
    for i in range(1, nn + 1):
        iv.append((M - i, M))
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            iv.append(((x - 1) * n + y, M - (y - 1) * n - x))
    return IntervalModel(n, M, tuple(iv), _reversal_relabeling(n))


def segment_model(n: int) -> SegmentModel:
    """Segment model with M = 10n^2 + 1: v_i vertical at i, w_i vertical at
    M-i, z_(x,y) from ((x-1)n+y, 0) up to (M-(y-1)n-x, 1)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    nn = n * n
    M = 10 * nn + 1
    segs = []
    for i in range(1, nn + 1):
        segs.append((i, i))
    for i in range(1, nn + 1):
        segs.append((M - i, M - i))
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            segs.append(((x - 1) * n + y, M - (y - 1) * n - x))
    return SegmentModel(n, M, tuple(segs), _reversal_relabeling(n))


def intersection_graph(model: IntervalModel | SegmentModel) -> Graph:
    """Adjacency by nonempty closed-interval overlap, or by segment crossing
    (shared endpoint coordinates count as crossing)."""
    if isinstance(model, IntervalModel):
        items = model.intervals
        N = len(items)
        edges = []
        for u in range(N):
            lo1, hi1 = items[u]
            for v in range(u + 1, N):
                lo2, hi2 = items[v]
                if max(lo1, lo2) <= min(hi1, hi2):
                    edges.append((u, v))
        return build_graph(N, edges)
    if isinstance(model, SegmentModel):
        items = model.segments
        N = len(items)
        edges = []
        for u in range(N):
            b1, t1 = items[u]
            for v in range(u + 1, N):
                b2, t2 = items[v]
                if (b1 - b2) * (t1 - t2) <= 0:
                    edges.append((u, v))
        return build_graph(N, edges)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def trace_faces(rotations: Sequence[Sequence[int]]) -> list[list[tuple[int, int]]]:
    """Face boundaries of a plane rotation system as dart cycles.

    Successive dart of (u, v) is (v, w) with w following u in the cyclic
    order around v.  The rotation system must describe a connected simple
    graph and satisfy Euler's formula, else it is rejected.
    """
    n = len(rotations)
    if n < 1:
        raise ValueError("rotation system needs at least one vertex")
    nbrs = []
    for v, rot in enumerate(rotations):
        if len(set(rot)) != len(rot):
            raise ValueError(f"rotation of vertex {v} repeats a neighbor")
        for u in rot:
            if not 0 <= u < n or u == v:
                raise ValueError(f"rotation of vertex {v} mentions invalid vertex {u}")
        nbrs.append(list(rot))
    for v in range(n):
        for u in nbrs[v]:
            if v not in nbrs[u]:
                raise ValueError(f"rotation system is asymmetric at ({v}, {u})")
    m = sum(len(r) for r in nbrs) // 2
    # connectivity
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in nbrs[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != n:
        raise ValueError("rotation system describes a disconnected graph")
    if m == 0:
        return [[]]  # single vertex: one face, empty boundary walk
    succ = {}
    for v, rot in enumerate(nbrs):
        for idx, u in enumerate(rot):
            succ[(v, u)] = rot[(idx + 1) % len(rot)]
    faces = []
    visited = set()
    for start in sorted(succ):
        if start in visited:
            continue
        cycle = []
        dart = start
        while dart not in visited:
            visited.add(dart)
            cycle.append(dart)
            u, v = dart
            dart = (v, succ[(v, u)])
        faces.append(cycle)
    if n - m + len(faces) != 2:
        raise ValueError(
            f"face tracing found {len(faces)} faces on {n} vertices and {m} edges; "
            "the rotation system is not plane"
        )
    return faces


def radial_graph(rotations: Sequence[Sequence[int]]) -> tuple[Graph, int]:
    """Bipartite incidence graph between vertices and traced faces.

    Returns the radial graph and the number of original vertices; faces are
    the vertices n..n+F-1.
    """
    n = len(rotations)
    faces = trace_faces(rotations)
    edges = []
    for f, cycle in enumerate(faces):
        boundary = {u for u, _ in cycle} if cycle else {0}
        for u in sorted(boundary):
            edges.append((u, n + f))
    labels = tuple({"kind": "vertex", "id": v} for v in range(n)) + tuple(
        {"kind": "face", "id": f} for f in range(len(faces))
    )
    return build_graph(n + len(faces), edges, labels), n


def map_graph_from_rotation(rotations: Sequence[Sequence[int]]) -> Graph:
    """Adjacency of faces sharing a vertex: the square of the radial graph
    induced on its face vertices."""
    R, n = radial_graph(rotations)
    sq = power(R, 2)
    faces = list(range(n, R.n))
    sub, _ = induced_subgraph(sq, faces)
    return sub


def line_graph_via_subdivision(G: Graph) -> Graph:
    """Line graph obtained by subdividing every edge once and taking the
    square induced on the subdividing vertices."""
    edge_list = G.edges()
    if not edge_list:
        raise ValueError("line graph of an edgeless graph is empty")
    n = G.n
    edges1 = []
    for e, (u, v) in enumerate(edge_list):
        edges1.append((u, n + e))
        edges1.append((v, n + e))
    G1 = build_graph(n + len(edge_list), edges1)
    sq = power(G1, 2)
    sub, _ = induced_subgraph(sq, range(n, n + len(edge_list)))
    return sub


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("need n >= 1")
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def grid(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("need a, b >= 1")
    edges = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            if j + 1 < b:
                edges.append((v, v + 1))
            if i + 1 < a:
                edges.append((v, v + b))
    return build_graph(a * b, edges)


def random_degenerate(n: int, d: int, seed: int) -> Graph:
    """d-degenerate graph from seeded random back-edges; vertices after the
    first pick 1..d earlier neighbors each (so d >= 1 gives a connected
    graph)."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        if d == 0:
            break
        cnt = rng.randint(1, min(d, v))
        for u in rng.sample(range(v), cnt):
            edges.append((u, v))
    return build_graph(n, edges)
