"""Covering sequences and block decompositions.

A covering sequence for a weight w and ratio D > 1 is the strictly
increasing index sequence n_N < ... < n_M picked so that the tail sums
of w decay geometrically with ratio D along it.  The construction keeps,
for each occupied dyadic-like level, the largest index whose tail lies
in that level band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional

from .instance import Instance
from .numerics import INF, ext_pow
from .weights import TestSequence, WeightSeq, head_sum, tail_sum

NEG_INF = -math.inf


@dataclass(frozen=True)
class CoveringSeq:
    """Covering sequence data: ratio D, index range [N, M], picked indices.

    ``indices`` holds (n_{N-1}, n_N, ..., n_M) where the leading entry is
    the -inf sentinel.  ``levels`` holds the occupied level exponents m_k
    used during construction, one per finite index.
    """

    D: float
    N: int
    M: int
    indices: tuple   # (-inf, n_N, ..., n_M)
    levels: tuple    # (m_N, ..., m_M)

    @property
    def picks(self) -> tuple:
        """The finite indices n_N..n_M."""
        return self.indices[1:]

    def index(self, k: int):
        """n_k for k in [N-1, M]; n_{N-1} is -inf."""
        if not (self.N - 1 <= k <= self.M):
            raise IndexError(f"k out of range: {k}")
        return self.indices[k - self.N + 1]


def _level(t: float, D: float) -> int:
    """The integer k with D^-k < t <= D^-(k-1), for t > 0."""
    k = math.floor(-math.log(t) / math.log(D)) + 1
    # Guard against log rounding at exact level boundaries.
    while t <= D ** (-k):
        k += 1
    while t > D ** (-k + 1):
        k -= 1
    return k


def covering_sequence(w: WeightSeq, D: float) -> CoveringSeq:
    """Build the covering sequence of w for ratio D > 1.

    Each window index j with positive tail is assigned to the level band
    containing its tail sum; the pick for a band is its largest index.
    Raises on an identically zero weight.
    """
    if not D > 1:
        raise ValueError("D must exceed 1")
    if tail_sum(w, w.start) == 0.0:
        raise ValueError("empty weight: all entries are zero")
    picks: Dict[int, int] = {}
    for j in w.indices():
        t = tail_sum(w, j)
        if t <= 0.0:
            break
        picks[_level(t, D)] = j  # ascending j: later wins, giving sup A_m
    levels = tuple(sorted(picks))
    indices = (NEG_INF,) + tuple(picks[m] for m in levels)
    return CoveringSeq(D=float(D), N=0, M=len(levels) - 1, indices=indices,
                       levels=levels)


@dataclass(frozen=True)
class CoveringReport:
    ok: bool
    failed_clause: Optional[str] = None
    detail: str = ""


def verify_covering(w: WeightSeq, cs: CoveringSeq) -> CoveringReport:
    """Re-check the three covering-sequence clauses numerically."""
    picks = cs.picks
    if any(picks[i] >= picks[i + 1] for i in range(len(picks) - 1)):
        return CoveringReport(False, "i", "indices not strictly increasing")
    n_M = picks[-1]
    if tail_sum(w, n_M) <= 0.0:
        return CoveringReport(False, "i", f"tail at n_M={n_M} is zero")
    if tail_sum(w, n_M + 1) != 0.0:
        return CoveringReport(False, "i", f"nonzero tail beyond n_M={n_M}")
    for k in range(cs.N, cs.M + 1):
        prev = cs.index(k - 1)
        lo = w.start if prev == NEG_INF else int(prev) + 1
        if tail_sum(w, lo) > cs.D * tail_sum(w, cs.index(k)):
            return CoveringReport(False, "ii", f"clause (ii) fails at k={k}")
    for k in range(cs.N + 1, cs.M):
        if cs.D * tail_sum(w, cs.index(k) + 1) > tail_sum(w, cs.index(k - 1)):
            return CoveringReport(False, "iii", f"clause (iii) fails at k={k}")
    return CoveringReport(True)


@dataclass(frozen=True)
class SumBounds:
    lower: float
    middle: float
    upper: float


def weighted_sum_bounds(w: WeightSeq, b: TestSequence, cs: CoveringSeq) -> SumBounds:
    """Two-sided bound on sum of w_n b_n via covering-sequence pivots.

    Requires b nondecreasing on the window.  With
    S = sum over k of tail(n_k) * b_{n_k}, the bound is
    ((D-1)/(3D)) * S <= sum w_n b_n <= D * S.
    """
    if b.start != w.start or len(b) != len(w):
        raise ValueError("b must share the window with w")
    for i in range(len(b.values) - 1):
        if b.values[i] > b.values[i + 1]:
            raise ValueError(f"b is not nondecreasing at offset {i}")
    middle = sum(w[n] * b[n] for n in w.indices())
    S = sum(tail_sum(w, nk) * b[nk] for nk in cs.picks)
    D = cs.D
    return SumBounds(lower=(D - 1.0) / (3.0 * D) * S, middle=middle, upper=D * S)


@dataclass(frozen=True)
class BlockDecomposition:
    lhs: float
    block_term: float
    cross_term: float
    ratio: float


def l24_threshold(p: float, q: float, c_star: float) -> float:
    """Smallest admissible covering ratio for the block decomposition."""
    m = max(1.0, 2.0 ** (q / p - 1.0))
    return 2.0 * m * m * ext_pow(c_star, q / p)


def default_ratio(p: float, q: float, c_star: float) -> float:
    """Default D: valid for the block decomposition and at least 2."""
    return max(2.0, math.ceil(l24_threshold(p, q, c_star)))


def l24_decompose(inst: Instance, a: TestSequence, cs: CoveringSeq) -> BlockDecomposition:
    """Split the iterated-sum functional into block and cross terms.

    lhs is sum over n of w_n (sum_{i<=n} U(i,n)^p a_i^p)^(q/p); the block
    term runs over covering blocks evaluated at the pivots, and the cross
    term carries the interaction between consecutive blocks.  Requires
    p <= 1, finite q and a covering ratio at or above the admissible
    threshold for the regularity constant of U^p.
    """
    p, q = inst.p, inst.q
    if not (0 < p <= 1):
        raise ValueError("block decomposition requires 0 < p <= 1")
    if math.isinf(q):
        raise ValueError("block decomposition requires finite q")
    c_star = inst.kernel.power(p).regularity_constant()
    need = l24_threshold(p, q, c_star)
    if math.isinf(need) or cs.D < need:
        raise ValueError(
            f"covering ratio D={cs.D} below the required threshold "
            f"2*max(1,2^(q/p-1))^2*C^(q/p) = {need}")
    w, U = inst.w, inst.kernel
    lo = inst.start

    def inner(i0: int, i1: int, n: int) -> float:
        return sum(ext_pow(U.eval(i, n), p) * ext_pow(a[i], p)
                   for i in range(max(i0, lo), min(i1, n) + 1))

    lhs = sum(w[n] * ext_pow(inner(lo, n, n), q / p) for n in inst.v.indices())
    block = 0.0
    cross = 0.0
    for k in range(cs.N, cs.M + 1):
        nk = cs.index(k)
        prev = cs.index(k - 1)
        b0 = lo if prev == NEG_INF else int(prev) + 1
        block += tail_sum(w, nk) * ext_pow(inner(b0, nk, nk), q / p)
        if prev != NEG_INF:
            head = sum(ext_pow(a[i], p) for i in range(lo, int(prev) + 1))
            cross += (tail_sum(w, nk) * ext_pow(U.eval(int(prev), nk), q)
                      * ext_pow(head, q / p))
    denom = block + cross
    ratio = 1.0 if lhs == denom == 0.0 else (lhs / denom if denom > 0 else INF)
    return BlockDecomposition(lhs=lhs, block_term=block, cross_term=cross, ratio=ratio)
