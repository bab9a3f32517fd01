"""Cut-rank lower-bound machinery for twisted chains.

Ordered matchings across a bipartition pin a triangular identity-diagonal
submatrix inside the cut matrix, certifying a rank lower bound.  Balanced
bipartitions of a chain always contain such matchings, which is how large
chains defeat small rank-width.  A product-Ramsey reducer extracts
few-colored sub-chains from colored chains.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .graph import Graph, induced_subgraph, rank_of_bitrows
from .families import chain_order, twisted_chain, verify_twisted_chain


@dataclass(frozen=True)
class Bipartition:
    """Disjoint cover (S, T) of the vertex set."""

    S: frozenset
    T: frozenset

    @classmethod
    def of(cls, G: Graph, S: Iterable[int]) -> "Bipartition":
        S = frozenset(S)
        all_v = frozenset(range(G.n))
        if not S <= all_v:
            raise ValueError("S contains vertices outside the graph")
        return cls(S, all_v - S)

    def side(self, v: int) -> str:
        if v in self.S:
            return "S"
        if v in self.T:
            return "T"
        raise ValueError(f"vertex {v} is on neither side")


@dataclass(frozen=True)
class MatchingCertificate:
    """Ordered matching certifying a cut-rank lower bound.

    pairs[i] = (a_i, b_i, c_i) couples the a_i-th vertex of the A (or B)
    block with z_(b_i, c_i).  The interleaving condition
    a_1 <= s_1 < a_2 <= s_2 < ... with s_i the scalar index of the z
    partner (row-major for side A, column-major for side B) forces the cut
    submatrix to be triangular with an all-ones diagonal.
    """

    side: str  # "A" | "B"
    direction: tuple[str, str]  # ("S","T") or ("T","S")
    pairs: tuple[tuple[int, int, int], ...]
    m: int

    @property
    def order(self) -> int:
        return len(self.pairs)

    def partner_scalar(self, i: int) -> int:
        _, b, c = self.pairs[i]
        return (b - 1) * self.m + c if self.side == "A" else (c - 1) * self.m + b

    def check_chain(self) -> None:
        prev_s = None
        for i, (a, b, c) in enumerate(self.pairs):
            if not (1 <= a <= self.m * self.m and 1 <= b <= self.m and 1 <= c <= self.m):
                raise ValueError(f"pair {i} is out of range for order {self.m}")
            s = self.partner_scalar(i)
            if prev_s is not None and not prev_s < a:
                raise ValueError(f"chain condition fails at index {i}: {prev_s} !< {a}")
            if not a <= s:
                raise ValueError(f"chain condition fails at index {i}: {a} !<= {s}")
            prev_s = s


@dataclass
class ImbalanceReport:
    """Evidence that a bipartition is not balanced on the C block."""

    heavy_side: str
    heavy_count: int
    c_size: int
    mixed_rows: int
    mixed_cols: int

    @property
    def exceeds_two_thirds(self) -> bool:
        return 3 * self.heavy_count > 2 * self.c_size


def _block_ids(G: Graph) -> tuple[int, int, int, int]:
    n = chain_order(G)
    nn = n * n
    return n, 0, nn, 2 * nn


def certificate_rank(G: Graph, cert: MatchingCertificate) -> int:
    """GF(2) rank of the cut submatrix the certificate points at.

    Validates the interleaving condition first (naming the failing index);
    for a certificate built from a genuine chain the rank equals its order.
    """
    n, a0, b0, c0 = _block_ids(G)
    if cert.m != n:
        raise ValueError(f"certificate is for order {cert.m}, graph has order {n}")
    cert.check_chain()
    row_base = a0 if cert.side == "A" else b0
    cols = [c0 + (b - 1) * n + (c - 1) for _, b, c in cert.pairs]
    rows = []
    for a, _, _ in cert.pairs:
        src = G.adj[row_base + a - 1]
        bitsrow = 0
        for jj, z in enumerate(cols):
            if src >> z & 1:
                bitsrow |= 1 << jj
        rows.append(bitsrow)
    return rank_of_bitrows(rows)


def mixed_lines(G: Graph, partition: Bipartition) -> tuple[list[int], list[int]]:
    """Row and column indices of C containing vertices from both sides."""
    n, _, _, c0 = _block_ids(G)
    rows, cols = [], []
    for i in range(1, n + 1):
        sides = {partition.side(c0 + (i - 1) * n + (j - 1)) for j in range(1, n + 1)}
        if len(sides) == 2:
            rows.append(i)
    for j in range(1, n + 1):
        sides = {partition.side(c0 + (i - 1) * n + (j - 1)) for i in range(1, n + 1)}
        if len(sides) == 2:
            cols.append(j)
    return rows, cols


def alternating_sequence(
    G: Graph, partition: Bipartition, lex: int
) -> list[tuple[int, int]]:
    """Greedy S/T-alternating sequence of C coordinates along a lex order.

    lex=1 walks mixed rows in row order, lex=2 mixed columns in column
    order, taking an S element from the first line, a T element from the
    second, and so on.  Mixed lines contain both, so the sequence is as
    long as the number of mixed lines.
    """
    if lex not in (1, 2):
        raise ValueError("lex must be 1 or 2")
    n, _, _, c0 = _block_ids(G)
    mrows, mcols = mixed_lines(G, partition)
    lines = mrows if lex == 1 else mcols
    seq = []
    for pos, line in enumerate(lines):
        want = "S" if pos % 2 == 0 else "T"
        found = None
        for other in range(1, n + 1):
            i, j = (line, other) if lex == 1 else (other, line)
            if partition.side(c0 + (i - 1) * n + (j - 1)) == want:
                found = (i, j)
                break
        assert found is not None, "mixed line lost a side"
        seq.append(found)
    return seq


def matching_from_alternation(
    G: Graph,
    partition: Bipartition,
    seq: Sequence[tuple[int, int]],
    side: str,
) -> MatchingCertificate:
    """Pair alternation elements into an ordered matching of half their count.

    Consecutive sequence elements (odd, even) contribute the A/B vertex
    whose scalar index is the odd element's, paired with whichever z of the
    two lies on the opposite side; keeping the majority direction yields at
    least a quarter of the sequence length as matching order.
    """
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    if len(seq) < 4:
        raise ValueError("alternating sequence must have length >= 4")
    n, a0, b0, c0 = _block_ids(G)
    scalar = (
        (lambda i, j: (i - 1) * n + j) if side == "A" else (lambda i, j: (j - 1) * n + i)
    )
    prev = None
    for idx, (i, j) in enumerate(seq):
        zid = c0 + (i - 1) * n + (j - 1)
        want = "S" if idx % 2 == 0 else "T"
        if partition.side(zid) != want:
            raise ValueError(f"sequence element {idx} is not on side {want}")
        s = scalar(i, j)
        if prev is not None and s <= prev:
            raise ValueError(f"sequence element {idx} breaks the lex order")
        prev = s
    row_base = a0 if side == "A" else b0
    st_pairs, ts_pairs = [], []
    for i2 in range(len(seq) // 2):
        odd = seq[2 * i2]
        even = seq[2 * i2 + 1]
        a = scalar(*odd)
        a_side = partition.side(row_base + a - 1)
        partner = even if a_side == "S" else odd
        entry = (a, partner[0], partner[1])
        (st_pairs if a_side == "S" else ts_pairs).append(entry)
    if len(st_pairs) >= len(ts_pairs):
        pairs, direction = st_pairs, ("S", "T")
    else:
        pairs, direction = ts_pairs, ("T", "S")
    cert = MatchingCertificate(side, direction, tuple(pairs), n)
    cert.check_chain()
    return cert


def lower_bound_certificate(
    G: Graph, partition: Bipartition
) -> MatchingCertificate | ImbalanceReport:
    """Certificate of order >= floor(m/12) from a C-balanced bipartition.

    Enough mixed rows feed the row-lex pipeline, enough mixed columns the
    column-lex one; if both counts fall short, the non-mixed lines all sit
    on one side, which already overfills it past 2|C|/3 -- returned as an
    imbalance report instead of a certificate.
    """
    n, _, _, c0 = _block_ids(G)
    if n < 12:
        raise ValueError("lower-bound pipeline needs chain order >= 12")
    c_ids = range(c0, c0 + n * n)
    s_count = sum(1 for v in c_ids if v in partition.S)
    t_count = n * n - s_count
    k = n // 12
    mrows, mcols = mixed_lines(G, partition)
    if 3 * s_count < n * n or 3 * t_count < n * n:
        heavy = "S" if s_count >= t_count else "T"
        return ImbalanceReport(heavy, max(s_count, t_count), n * n, len(mrows), len(mcols))
    if len(mrows) >= 4 * k:
        seq = alternating_sequence(G, partition, lex=1)
        return matching_from_alternation(G, partition, seq, "A")
    if len(mcols) >= 4 * k:
        seq = alternating_sequence(G, partition, lex=2)
        return matching_from_alternation(G, partition, seq, "B")
    # few mixed lines force all non-mixed rows onto one side
    heavy = "S" if s_count >= t_count else "T"
    return ImbalanceReport(heavy, max(s_count, t_count), n * n, len(mrows), len(mcols))


def random_balanced_bipartition(G: Graph, seed: int) -> Bipartition:
    """Seeded bipartition balanced with respect to the C block."""
    import random as _random

    n, a0, b0, c0 = _block_ids(G)
    rng = _random.Random(seed)
    nn = n * n
    c_list = list(range(c0, c0 + nn))
    rng.shuffle(c_list)
    cut = rng.randint((nn + 2) // 3, nn - (nn + 2) // 3)
    S = set(c_list[:cut])
    for v in range(c0):
        if rng.random() < 0.5:
            S.add(v)
    return Bipartition.of(G, S)


def ramsey_threshold(k: int, d: int) -> int:
    """Set size above which a k-by-k single-valued block always exists."""
    return k * d ** (d * k)


def ramsey_threshold_within(k: int, d: int, limit: int) -> int | None:
    """The threshold when it is at most *limit*, else None.

    The value grows doubly fast under iteration, so it must never be
    materialized unless it fits; the log test keeps huge exponents out.
    """
    if limit < 1:
        return None
    if d == 1:
        return k if k <= limit else None
    if k * d * math.log2(d) + math.log2(max(k, 1)) > math.log2(limit) + 1:
        return None
    t = k * d ** (d * k)
    return t if t <= limit else None


@dataclass
class RamseyResult:
    xs: tuple
    ys: tuple
    color: object
    guaranteed: bool

    @property
    def size(self) -> int:
        return min(len(self.xs), len(self.ys))


def ramsey_bireduce(
    f: Callable[[object, object], object],
    X: Sequence,
    Y: Sequence,
    k: int,
    d: int,
) -> RamseyResult:
    """Find X' x Y' of size k on which f is constant, by type counting.

    Fixes the first d*k elements of X, groups Y by the restriction pattern
    of f, then picks a value hit k times inside the largest group's shared
    pattern.  At the threshold size this always succeeds (guaranteed=True);
    below it the best block found is returned, flagged.
    """
    if k < 1 or d < 1:
        raise ValueError("need k, d >= 1")
    M = ramsey_threshold_within(k, d, max(len(X), len(Y)))
    guaranteed = M is not None and len(X) >= M and len(Y) >= M
    X0 = list(X[: min(d * k, len(X))])
    groups: dict[tuple, list] = {}
    for y in Y:
        groups.setdefault(tuple(f(x, y) for x in X0), []).append(y)
    best: RamseyResult | None = None
    for gtype, members in sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0])):
        counts: dict[object, int] = {}
        for val in gtype:
            counts[val] = counts.get(val, 0) + 1
        for val, cnt in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            size = min(k, len(members), cnt)
            if best is not None and size <= best.size:
                continue
            xs = tuple(x for x, v in zip(X0, gtype) if v == val)[:size]
            ys = tuple(members[:size])
            assert all(f(x, y) == val for x in xs for y in ys)
            best = RamseyResult(xs, ys, val, guaranteed)
            if size == k:
                if guaranteed:
                    return best
                break
    if best is None:
        best = RamseyResult((), (), None, False)
    if guaranteed and best.size < k:
        raise AssertionError("counting argument failed above the threshold")
    if best.size < k:
        best.guaranteed = False
    return best


@dataclass
class ExtractionReport:
    """Outcome of the three-stage extraction.

    thresholds holds the stage sizes (outermost first) that would make each
    counting step unconditional; None marks a threshold beyond the instance
    order (the usual case at desk scale).
    """

    target: int
    achieved: int
    guaranteed: bool
    colors_used: tuple
    stage_sizes: tuple[int, int, int]
    thresholds: tuple[int | None, int | None, int | None]
    x_rows: tuple[int, ...]
    y_cols: tuple[int, ...]


def monochromatic_substructure(
    G: Graph,
    c,
    target: int,
    combo_budget: int = 300_000,
) -> tuple[Graph, ExtractionReport]:
    """Extract a sub-chain whose three blocks are each single-colored.

    Reduces the index grid in three stages (C, then A, then B layer); with
    chain orders past the triple Ramsey threshold the stage-wise counting
    is guaranteed, otherwise a backtracking search over equal-size index
    blocks maximizes the achieved order.  The output graph carries fresh
    canonical chain labels and receives at most 3 colors.
    """
    n, a0, b0, c0 = _block_ids(G)
    if target < 1:
        raise ValueError("target must be >= 1")
    c = list(c.colors) if hasattr(c, "colors") else list(c)
    if len(c) != G.n:
        raise ValueError("coloring does not match the graph")
    d = len(set(c))

    def cz(x: int, y: int):
        return c[c0 + (x - 1) * n + (y - 1)]

    def cv(x: int, y: int):
        return c[a0 + (x - 1) * n + (y - 1)]

    def cw(x: int, y: int):
        return c[b0 + (y - 1) * n + (x - 1)]

    def chain_thresholds(t: int) -> tuple[int | None, int | None, int | None]:
        t1 = ramsey_threshold_within(t, d, n)
        t2 = ramsey_threshold_within(t1, d, n) if t1 is not None else None
        t3 = ramsey_threshold_within(t2, d, n) if t2 is not None else None
        return t1, t2, t3

    # largest target whose full threshold chain fits inside this instance
    t_eff = None
    for t in range(n, target - 1, -1):
        t1, t2, t3 = chain_thresholds(t)
        if t3 is not None and n >= t3:
            t_eff = t
            m1, m2, m3 = t1, t2, t3
            break
    guaranteed = t_eff is not None
    if not guaranteed:
        m1, m2, m3 = chain_thresholds(target)

    best_xs: tuple[int, ...] = ()
    best_ys: tuple[int, ...] = ()
    best_colors: tuple = ()
    stage_sizes = (0, 0, 0)

    if guaranteed:
        idx = list(range(1, n + 1))
        s1 = ramsey_bireduce(lambda x, y: cz(x, y), idx, idx, m2, d)
        s2 = ramsey_bireduce(lambda x, y: cv(x, y), list(s1.xs), list(s1.ys), m1, d)
        s3 = ramsey_bireduce(lambda x, y: cw(x, y), list(s2.xs), list(s2.ys), t_eff, d)
        best_xs, best_ys = tuple(sorted(s3.xs)), tuple(sorted(s3.ys))
        best_colors = (
            cz(best_xs[0], best_ys[0]),
            cv(best_xs[0], best_ys[0]),
            cw(best_xs[0], best_ys[0]),
        )
        stage_sizes = (len(s1.xs), len(s2.xs), len(s3.xs))
    else:
        # Any order-k sub-chain restricts to stages of exactly size k, so
        # scanning equal-size row sets is complete.  For each row x and each
        # color triple, precompute the bitmask of columns where all three
        # layers hit that triple; candidate columns of a row set are then
        # one AND per triple.
        triples = sorted(
            {
                (cz(x, y), cv(x, y), cw(x, y))
                for x in range(1, n + 1)
                for y in range(1, n + 1)
            }
        )
        row_masks: list[dict[tuple, int]] = [{}]
        for x in range(1, n + 1):
            masks = {t: 0 for t in triples}
            for y in range(1, n + 1):
                t = (cz(x, y), cv(x, y), cw(x, y))
                masks[t] |= 1 << (y - 1)
            row_masks.append(masks)
        k = 1
        while k <= n and math.comb(n, k) <= combo_budget:
            found = None
            for xs in itertools.combinations(range(1, n + 1), k):
                for t in triples:
                    cand = row_masks[xs[0]][t]
                    for x in xs[1:]:
                        cand &= row_masks[x][t]
                        if cand.bit_count() < k:
                            break
                    if cand.bit_count() >= k:
                        ys = []
                        while cand and len(ys) < k:
                            low = cand & -cand
                            ys.append(low.bit_length())
                            cand ^= low
                        found = (xs, tuple(ys), t)
                        break
                if found:
                    break
            if not found:
                break
            best_xs, best_ys, best_colors = found
            stage_sizes = (k, k, k)
            k += 1

    achieved = len(best_xs)
    if achieved == 0:
        raise AssertionError("an order-1 block always exists")
    sel = []
    for x in best_xs:
        for y in best_ys:
            sel.append(a0 + (x - 1) * n + (y - 1))
            sel.append(b0 + (y - 1) * n + (x - 1))
            sel.append(c0 + (x - 1) * n + (y - 1))
    sub, _ = induced_subgraph(G, sel)
    fresh = twisted_chain(achieved, "bare")
    out = Graph(sub.n, sub.adj, fresh.labels)
    verify_twisted_chain(out)
    report = ExtractionReport(
        target=target,
        achieved=achieved,
        guaranteed=bool(guaranteed and achieved >= target),
        colors_used=best_colors,
        stage_sizes=stage_sizes,
        thresholds=(m3, m2, m1),
        x_rows=best_xs,
        y_cols=best_ys,
    )
    return out, report
