"""Linear orders, weakly reachable sets, and weak coloring numbers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, bits_of

WCOL_EXACT_CAP = 9


@dataclass(frozen=True)
class LinearOrder:
    """A linear order of the vertices: order[i] is the vertex at rank i."""

    order: tuple[int, ...]
    position: tuple[int, ...]

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "LinearOrder":
        n = len(order)
        if sorted(order) != list(range(n)):
            raise ValueError("order is not a permutation of 0..n-1")
        position = [0] * n
        for i, v in enumerate(order):
            position[v] = i
        return cls(tuple(order), tuple(position))

    @classmethod
    def identity(cls, n: int) -> "LinearOrder":
        idx = tuple(range(n))
        return cls(idx, idx)

    def __len__(self) -> int:
        return len(self.order)


def _restricted_ball(G: Graph, pos: Sequence[int], u: int, r: int) -> int:
    """Vertices reachable from u within r steps using only vertices above u.

    Every vertex of such a walk other than u sits strictly later than u in
    the order, so u is the minimum of the traversed path.  Returns a bitmask
    including u itself.
    """
    above = 0
    pu = pos[u]
    for w in range(G.n):
        if pos[w] > pu:
            above |= 1 << w
    seen = 1 << u
    frontier = seen
    for _ in range(r):
        nxt = 0
        for v in bits_of(frontier):
            nxt |= G.adj[v]
        nxt &= above & ~seen
        if not nxt:
            break
        seen |= nxt
        frontier = nxt
    return seen


def wreach_sets(G: Graph, L: LinearOrder, r: int) -> list[frozenset]:
    """Weakly r-reachable sets for all vertices at once.

    One bounded search per source u marks u into the set of every vertex it
    reaches while staying above u in the order.
    """
    if r < 0:
        raise ValueError("radius must be non-negative")
    result: list[set] = [set() for _ in range(G.n)]
    for u in range(G.n):
        ball = _restricted_ball(G, L.position, u, r)
        for v in bits_of(ball):
            result[v].add(u)
    return [frozenset(s) for s in result]


def wreach(G: Graph, L: LinearOrder, r: int, v: int) -> frozenset:
    """Vertices u that are the order-minimum on some u--v path of length <= r."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    pv = L.position[v]
    out = set()
    for u in range(G.n):
        if L.position[u] <= pv and _restricted_ball(G, L.position, u, r) >> v & 1:
            out.add(u)
    return frozenset(out)


def wcol_of_order(G: Graph, L: LinearOrder, r: int, cutoff: int | None = None) -> int | None:
    """Max weakly-r-reachable set size under L.

    With a cutoff, returns None as soon as the value provably reaches it;
    used by the exact sweep to prune dominated orders.
    """
    counts = [0] * G.n
    best = 0
    for u in range(G.n):
        ball = _restricted_ball(G, L.position, u, r)
        for v in bits_of(ball):
            counts[v] += 1
            if counts[v] > best:
                best = counts[v]
                if cutoff is not None and best >= cutoff:
                    return None
    return best


def wcol_exact(G: Graph, r: int, cap: int = WCOL_EXACT_CAP) -> tuple[int, LinearOrder]:
    """Exact weak r-coloring number with an optimal witness order.

    Sweeps all n! orders; instances above the cap are rejected in favour of
    wcol_heuristic.
    """
    if G.n > cap:
        raise ValueError(
            f"wcol_exact sweeps n! orders and is capped at n={cap}; "
            "use wcol_heuristic for larger graphs"
        )
    best_val = G.n + 1
    best_order = None
    for perm in itertools.permutations(range(G.n)):
        L = LinearOrder.from_order(perm)
        val = wcol_of_order(G, L, r, cutoff=best_val)
        if val is not None and val < best_val:
            best_val = val
            best_order = L
    assert best_order is not None
    return best_val, best_order


def wcol_heuristic(G: Graph, r: int) -> tuple[int, LinearOrder]:
    """Degeneracy-style order: repeatedly place a low-reach vertex last.

    The removed vertex minimizes a weighted count of remaining vertices
    within distance r (shell at distance d weighted 2^(r-d)); ties go to the
    smallest vertex id.  Returns the measured wcol of the produced order.
    """
    remaining = (1 << G.n) - 1
    suffix: list[int] = []
    while remaining:
        best_v = -1
        best_score = None
        for v in bits_of(remaining):
            seen = 1 << v
            frontier = seen
            score = 0
            for d in range(1, r + 1):
                nxt = 0
                for u in bits_of(frontier):
                    nxt |= G.adj[u]
                nxt &= remaining & ~seen
                if not nxt:
                    break
                score += nxt.bit_count() << (r - d)
                seen |= nxt
                frontier = nxt
            if best_score is None or score < best_score:
                best_score = score
                best_v = v
        suffix.append(best_v)
        remaining &= ~(1 << best_v)
    order = list(reversed(suffix))
    L = LinearOrder.from_order(order)
    return wcol_of_order(G, L, r), L
