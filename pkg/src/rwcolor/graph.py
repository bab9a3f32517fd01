"""Immutable bit-row graphs and GF(2) linear algebra over them.

Vertices are dense integers 0..n-1.  Adjacency is one integer bitmask per
vertex, so neighbourhood algebra, cut matrices, and subset sweeps are
word-parallel.  Labels are an optional side table consulted only by
verifiers and reporters, never by algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

INF = float("inf")


def mask_of(vertices: Iterable[int]) -> int:
    """Pack an iterable of vertex ids into a bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> Iterator[int]:
    """Yield the set bit positions of *mask* in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with bit-row adjacency.

    Instances are immutable; all operations on them are pure and safe to
    share across threads.  Construction through :func:`build_graph` (or any
    generator in this package) guarantees a symmetric, loop-free adjacency.
    """

    n: int
    adj: tuple[int, ...]
    labels: tuple[Mapping, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph must have at least one vertex")
        if len(self.adj) != self.n:
            raise ValueError("adjacency row count differs from vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside 0..{self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop on vertex {v}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels, when present, must cover all vertices")

    def validate_symmetric(self) -> None:
        """Raise if the adjacency relation is not symmetric."""
        for u in range(self.n):
            for v in bits_of(self.adj[u]):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency at ({u}, {v})")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> Iterator[int]:
        return bits_of(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted (u, v) pairs with u < v, lexicographically."""
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1) << (u + 1)
            for v in bits_of(row):
                out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def vertices(self) -> range:
        return range(self.n)


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Sequence[Mapping] | None = None,
) -> Graph:
    """Build a graph from an edge list, taking the symmetric closure.

    Duplicate pairs (in either orientation) collapse.  Out-of-range
    endpoints and self-loops are rejected with the offending pair index.
    """
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    adj = [0] * n
    for idx, (u, v) in enumerate(edges):
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {idx}: endpoint out of range: ({u}, {v})")
        if u == v:
            raise ValueError(f"edge {idx}: self-loop on vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    g = Graph(n, tuple(adj), tuple(labels) if labels is not None else None)
    g.validate_symmetric()
    return g


def induced_subgraph(G: Graph, X: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on X, plus the old->new index map.

    Vertices of X are renumbered 0..|X|-1 preserving relative order.
    """
    keep = sorted(set(X))
    if not keep:
        raise ValueError("induced subgraph on an empty vertex set")
    for v in keep:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} not in graph")
    index = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        row = 0
        old = G.adj[v]
        for u, i in index.items():
            if old >> u & 1:
                row |= 1 << i
        adj.append(row)
    labels = tuple(G.labels[v] for v in keep) if G.labels is not None else None
    return Graph(len(keep), tuple(adj), labels), index


def bfs_distances(G: Graph, source: int) -> list:
    """Single-source shortest-path distances; INF marks unreachable vertices."""
    if not 0 <= source < G.n:
        raise ValueError(f"source {source} not in graph")
    dist = [INF] * G.n
    dist[source] = 0
    seen = 1 << source
    frontier = seen
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in bits_of(frontier):
            nxt |= G.adj[v]
        nxt &= ~seen
        for v in bits_of(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def all_pairs_distances(G: Graph) -> list[list]:
    return [bfs_distances(G, v) for v in range(G.n)]


def power(G: Graph, r: int) -> Graph:
    """r-th power: u ~ v iff 1 <= dist(u, v) <= r.  Requires r >= 1."""
    if r < 1:
        raise ValueError("power radius must be >= 1")
    if r == 1:
        return G
    adj = []
    for v in range(G.n):
        seen = 1 << v
        frontier = seen
        for _ in range(r):
            nxt = 0
            for u in bits_of(frontier):
                nxt |= G.adj[u]
            nxt &= ~seen
            if not nxt:
                break
            seen |= nxt
            frontier = nxt
        adj.append(seen & ~(1 << v))
    return Graph(G.n, tuple(adj), G.labels)


def complement(G: Graph) -> Graph:
    full = (1 << G.n) - 1
    adj = tuple((full ^ row) & ~(1 << v) for v, row in enumerate(G.adj))
    return Graph(G.n, adj, G.labels)


@dataclass(frozen=True)
class GF2Matrix:
    """Rectangular 0/1 matrix stored as integer bit-rows."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError("negative column count")
        full = (1 << self.ncols) - 1
        for i, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {i} has bits beyond column {self.ncols - 1}")

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "GF2Matrix":
        if not rows:
            return cls((), 0)
        ncols = len(rows[0])
        packed = []
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError(f"ragged rows: row {i} has {len(row)} entries, expected {ncols}")
            bits = 0
            for j, entry in enumerate(row):
                if entry not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) is {entry!r}, not 0/1")
                bits |= entry << j
            packed.append(bits)
        return cls(tuple(packed), ncols)

    def to_lists(self) -> list[list[int]]:
        return [[row >> j & 1 for j in range(self.ncols)] for row in self.rows]


def rank_of_bitrows(rows: Iterable[int]) -> int:
    """GF(2) rank of integer bit-rows via an XOR basis keyed by leading bit."""
    basis: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            hb = row.bit_length() - 1
            piv = basis.get(hb)
            if piv is None:
                basis[hb] = row
                rank += 1
                break
            row ^= piv
    return rank


def gf2_rank(M: GF2Matrix | Sequence[Sequence[int]]) -> int:
    """Rank of a 0/1 matrix over GF(2)."""
    if not isinstance(M, GF2Matrix):
        M = GF2Matrix.from_lists(M)
    return rank_of_bitrows(M.rows)


def cutrank_mask(G: Graph, mask: int) -> int:
    """Cut-rank of the bipartition (mask, rest), with mask given as a bitmask."""
    full = (1 << G.n) - 1
    mask &= full
    co = full ^ mask
    if not mask or not co:
        return 0
    # rank is invariant under transposition; eliminate on the smaller side
    if mask.bit_count() > co.bit_count():
        mask, co = co, mask
    return rank_of_bitrows(G.adj[v] & co for v in bits_of(mask))


def cutrank(G: Graph, X: Iterable[int]) -> int:
    """GF(2) rank of the adjacency block between X and its complement.

    Empty or full X has cut-rank 0 by convention.
    """
    return cutrank_mask(G, mask_of(X))
