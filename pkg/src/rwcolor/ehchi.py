"""Cograph extraction, clique-or-independent-set witnesses, and product
colorings for graphs coming with small-width colorings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .coloring import Coloring, greedy_proper_coloring
from .graph import Graph, bits_of, induced_subgraph, mask_of
from .widths import (
    RANK_WIDTH_EXACT_CAP,
    RankDecomposition,
    balanced_partition,
    rank_width_exact,
    rank_width_of_subgraph,
    restrict_decomposition,
    verify_decomposition,
)


@dataclass(frozen=True)
class Cotree:
    """Union/join construction tree; leaves carry vertex ids."""

    op: str  # "leaf" | "union" | "join"
    vertex: int | None = None
    children: tuple["Cotree", ...] = ()

    def leaves(self) -> list[int]:
        if self.op == "leaf":
            return [self.vertex]
        out = []
        for ch in self.children:
            out.extend(ch.leaves())
        return out


def is_cograph(G: Graph) -> tuple[bool, Cotree | None]:
    """Recognize by the defining recursion: single vertices are cographs,
    disconnected graphs are unions of their components, co-disconnected
    graphs are joins of their co-components, anything else is out."""

    def comps(mask: int, row: Callable[[int], int]) -> list[int]:
        out = []
        left = mask
        while left:
            seen = left & -left
            frontier = seen
            while frontier:
                nxt = 0
                for v in bits_of(frontier):
                    nxt |= row(v)
                nxt &= mask & ~seen
                seen |= nxt
                frontier = nxt
            out.append(seen)
            left &= ~seen
        return out

    def rec(mask: int) -> Cotree | None:
        if mask.bit_count() == 1:
            return Cotree("leaf", mask.bit_length() - 1)
        parts = comps(mask, lambda v: G.adj[v])
        if len(parts) > 1:
            kids = [rec(p) for p in parts]
            if any(k is None for k in kids):
                return None
            return Cotree("union", None, tuple(kids))
        full = (1 << G.n) - 1
        parts = comps(mask, lambda v: (full ^ G.adj[v]) & ~(1 << v))
        if len(parts) > 1:
            kids = [rec(p) for p in parts]
            if any(k is None for k in kids):
                return None
            return Cotree("join", None, tuple(kids))
        return None

    ct = rec((1 << G.n) - 1)
    return ct is not None, ct


def cotree_to_graph(ct: Cotree, n: int) -> Graph:
    """Evaluate a cotree back into the graph it describes."""
    adj = [0] * n

    def rec(node: Cotree) -> int:
        if node.op == "leaf":
            return 1 << node.vertex
        masks = [rec(ch) for ch in node.children]
        if node.op == "join":
            for i, mi in enumerate(masks):
                others = 0
                for j, mj in enumerate(masks):
                    if j != i:
                        others |= mj
                for v in bits_of(mi):
                    adj[v] |= others
        total = 0
        for m in masks:
            total |= m
        return total

    rec(ct)
    return Graph(n, tuple(adj))


def decomposition_from_cotree(ct: Cotree) -> RankDecomposition | None:
    """Width-at-most-1 rank decomposition read off a cotree.

    Every tree cut groups whole modules, whose members share an outside
    neighbourhood, so each cut matrix has at most one distinct nonzero row.
    Returns None for a single leaf.
    """
    leaves = ct.leaves()
    if len(leaves) < 2:
        return None
    nodes = 0
    edges: list[tuple[int, int]] = []
    leaf_map: list[tuple[int, int]] = []

    def new_node() -> int:
        nonlocal nodes
        nodes += 1
        return nodes - 1

    def build(node: Cotree) -> int:
        if node.op == "leaf":
            nid = new_node()
            leaf_map.append((nid, node.vertex))
            return nid
        roots = [build(ch) for ch in node.children]
        cur = roots[0]
        for nxt in roots[1:]:
            mid = new_node()
            edges.append((mid, cur))
            edges.append((mid, nxt))
            cur = mid
        return cur

    if ct.op == "leaf":
        return None
    roots = [build(ch) for ch in ct.children]
    cur = roots[0]
    for nxt in roots[1:-1]:
        mid = new_node()
        edges.append((mid, cur))
        edges.append((mid, nxt))
        cur = mid
    edges.append((cur, roots[-1]))
    return RankDecomposition(nodes, tuple(edges), tuple(leaf_map))


def kappa(p: int) -> float:
    return 1.0 / (math.log2(3) + p)


def delta(p: int) -> float:
    return kappa(p) / 2.0


@dataclass(frozen=True)
class EHParams:
    """Exponents governing extraction sizes for width p and a palette N1."""

    p: int
    kappa: float
    delta: float
    epsilon: float | None = None

    @classmethod
    def for_width(cls, p: int, n_colors: int | None = None) -> "EHParams":
        k = kappa(p)
        dl = delta(p)
        eps = None
        if n_colors is not None:
            terms = [dl / 2.0]
            if n_colors > 1:
                terms.append(1.0 / (2.0 * math.log2(n_colors)))
            eps = min(terms)
        return cls(p, k, dl, eps)


def uniform_blocks(
    G: Graph, A: Iterable[int], B: Iterable[int], p: int
) -> tuple[set[int], set[int], str]:
    """Largest same-neighbourhood class of A with a uniform block of B.

    A cut of rank at most p admits at most 2^p distinct rows, so the
    largest class keeps at least |A|/2^p vertices; its members see a common
    neighbourhood P in B, and the larger of (P, B minus P) is completely
    adjacent, respectively non-adjacent, to all of it.
    """
    A = sorted(set(A))
    B = sorted(set(B))
    if not A or not B:
        raise ValueError("both sides must be nonempty")
    bmask = mask_of(B)
    groups: dict[int, list[int]] = {}
    for v in A:
        groups.setdefault(G.adj[v] & bmask, []).append(v)
    if len(groups) > 2**p:
        from .graph import cutrank

        rank = cutrank(G, A)
        raise ValueError(
            f"{len(groups)} neighbourhood patterns on the cut exceed 2^{p}; "
            f"measured cut-rank is {rank}, violating the width-{p} precondition"
        )
    pattern, members = max(groups.items(), key=lambda kv: (len(kv[1]), -min(kv[1])))
    a_prime = set(members)
    b_in = set(bits_of(pattern))
    b_out = set(B) - b_in
    if len(b_in) > len(b_out):
        return a_prime, b_in, "complete"
    return a_prime, b_out, "anticomplete"


def cograph_extract(G: Graph, D: RankDecomposition | None, p: int) -> set[int]:
    """Vertex set of size >= n^kappa(p) inducing a cograph.

    Splits along a balanced tree cut of the width-p decomposition, keeps a
    uniform block pair, recurses on both sides, and returns their union;
    uniformity between the sides makes the union a cograph.
    """
    if G.n > 2:
        if D is None:
            raise ValueError("graphs on more than 2 vertices need a decomposition")
        w = verify_decomposition(G, D)
        if w > p:
            raise ValueError(f"decomposition width {w} exceeds the bound {p}")

    def rec(H: Graph, DH: RankDecomposition | None) -> set[int]:
        if H.n <= 2:
            return set(range(H.n))
        A, B = balanced_partition(H, range(H.n), DH)
        a_p, b_p, _ = uniform_blocks(H, A, B, p)
        out: set[int] = set()
        for block in (sorted(a_p), sorted(b_p)):
            if len(block) == 1:
                out.add(block[0])
                continue
            sub, idx = induced_subgraph(H, block)
            back = {new: old for old, new in idx.items()}
            sub_d = restrict_decomposition(DH, block, idx)
            got = rec(sub, sub_d)
            out |= {back[v] for v in got}
        bound = H.n ** kappa(p)
        assert len(out) >= bound - 1e-9, (
            f"extracted {len(out)} vertices, below {H.n}^kappa({p}) = {bound:.4f}"
        )
        return out

    return rec(G, D)


def cograph_clique_or_is(G: Graph, ct: Cotree) -> tuple[str, set[int]]:
    """Best clique or independent set realized by cotree dynamic programming.

    Clique sizes add across joins and max across unions; independent sets
    dually.  The winner is scan-verified and has size at least the square
    root of the cograph's order.
    """

    def rec(node: Cotree) -> tuple[int, set[int], int, set[int]]:
        if node.op == "leaf":
            s = {node.vertex}
            return 1, s, 1, s
        parts = [rec(ch) for ch in node.children]
        if node.op == "union":
            w, ws = max(((p[0], p[1]) for p in parts), key=lambda t: t[0])
            a = sum(p[2] for p in parts)
            aset = set().union(*(p[3] for p in parts))
            return w, ws, a, aset
        w = sum(p[0] for p in parts)
        wset = set().union(*(p[1] for p in parts))
        a, aset = max(((p[2], p[3]) for p in parts), key=lambda t: t[0])
        return w, wset, a, aset

    omega, clique, alpha, indep = rec(ct)
    total = len(ct.leaves())
    if omega >= alpha:
        kind, out = "clique", clique
    else:
        kind, out = "independent", indep
    for u in out:
        for v in out:
            if u < v:
                adjacent = G.has_edge(u, v)
                if kind == "clique" and not adjacent:
                    raise AssertionError(f"claimed clique misses edge ({u}, {v})")
                if kind == "independent" and adjacent:
                    raise AssertionError(f"claimed independent set has edge ({u}, {v})")
    assert len(out) * len(out) >= total
    return kind, out


ColoringProvider = Callable[[Graph], tuple[Coloring, int]]


def even_split_provider(n_classes: int, width_bound: int) -> ColoringProvider:
    """Provider assigning colors round-robin; useful when any n_classes-way
    split keeps class widths below the bound."""

    def provide(G: Graph) -> tuple[Coloring, int]:
        k = min(n_classes, G.n)
        colors = tuple(v % k + 1 for v in range(G.n))
        return Coloring(colors, k), width_bound

    return provide


def eh_witness(
    G: Graph,
    provider: ColoringProvider,
    exact_cap: int = RANK_WIDTH_EXACT_CAP,
) -> tuple[set[int], str, EHParams]:
    """Clique or independent set of size >= ceil(n^epsilon).

    The provider's single-level coloring is width-verified class by class;
    for n at least the squared palette, the majority class is decomposed
    exactly, reduced to a cograph, and mined for its clique or independent
    set.  Smaller graphs settle for a pair of vertices, which the epsilon
    bound already permits.
    """
    c, r1 = provider(G)
    if len(c.colors) != G.n:
        raise ValueError("provider coloring does not match the graph")
    n1 = c.palette_size
    classes = c.classes()
    for col, vs in sorted(classes.items()):
        value, _ = rank_width_of_subgraph(G, vs, exact_cap)
        if value > r1:
            raise ValueError(
                f"class {col} has rank-width bound {value} > provider bound {r1}"
            )
    params = EHParams.for_width(r1, n1)
    n = G.n
    if n >= n1 * n1:
        col, members = max(sorted(classes.items()), key=lambda kv: (len(kv[1]), -kv[0]))
        sub, idx = induced_subgraph(G, members)
        back = {new: old for old, new in idx.items()}
        if sub.n <= 2:
            local = set(range(sub.n))
        else:
            rep = rank_width_exact(sub, cap=exact_cap)
            local = cograph_extract(sub, rep.decomposition, r1)
        core, core_idx = induced_subgraph(sub, sorted(local)) if local else (sub, {})
        ok, ct = is_cograph(core)
        assert ok, "extraction did not deliver a cograph"
        kind, got = cograph_clique_or_is(core, ct)
        core_back = {new: old for old, new in core_idx.items()}
        witness = {back[core_back[v]] for v in got}
    else:
        if n >= 2:
            witness = {0, 1}
            kind = "clique" if G.has_edge(0, 1) else "independent"
        else:
            witness = {0}
            kind = "independent"
    if params.epsilon is not None:
        need = math.ceil(n**params.epsilon - 1e-9)
        assert len(witness) >= need, (
            f"witness of size {len(witness)} below ceil(n^eps) = {need}"
        )
    return witness, kind, params


def chi_product_coloring(
    G: Graph,
    c: Coloring,
    proper_colorer: Callable[[Graph], Coloring] | None = None,
) -> Coloring:
    """Proper coloring by pairing each class color with a per-class proper
    coloring; pairs are interned to dense ids.  Palette is at most the
    class count times the largest per-class palette."""
    if len(c.colors) != G.n:
        raise ValueError("coloring does not match the graph")
    if proper_colorer is None:
        proper_colorer = greedy_proper_coloring
    pair: list[tuple[int, int] | None] = [None] * G.n
    for col, members in sorted(c.classes().items()):
        sub, idx = induced_subgraph(G, members)
        sub_col = proper_colorer(sub)
        back = {new: old for old, new in idx.items()}
        for a in range(sub.n):
            for b in bits_of(sub.adj[a]):
                if a < b and sub_col.colors[a] == sub_col.colors[b]:
                    raise ValueError(
                        f"per-class coloring of class {col} is improper on edge "
                        f"({back[a]}, {back[b]})"
                    )
        for v in members:
            pair[v] = (col, sub_col.colors[idx[v]])
    keys = sorted({p for p in pair if p is not None})
    ids = {k: i + 1 for i, k in enumerate(keys)}
    out = Coloring(tuple(ids[p] for p in pair), len(keys))
    for u in range(G.n):
        for v in bits_of(G.adj[u]):
            if u < v and out.colors[u] == out.colors[v]:
                raise AssertionError(f"product coloring is improper on edge ({u}, {v})")
    return out
