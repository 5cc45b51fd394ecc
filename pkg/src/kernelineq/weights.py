"""Finite-window weight sequences with zero extension.

A sequence is stored as a start index and a finite list of nonnegative
values; it is implicitly zero everywhere else on the integers.  This is
the single truncation convention of the whole package: every "infinite"
sum or supremum is evaluated under it, so all computations are finite.

Empty index ranges follow the usual lattice conventions: empty sums are
0 and empty suprema are 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .numerics import INF, ext, ext_pow


@dataclass(frozen=True)
class WeightSeq:
    """Nonnegative sequence on a window [start, start + len - 1], zero outside."""

    start: int
    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("weight sequence needs at least one entry")
        for v in vals:
            ext(v)
            if math.isinf(v):
                raise ValueError("weight entries must be finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def stop(self) -> int:
        """Last index of the window (inclusive)."""
        return self.start + len(self.values) - 1

    def __getitem__(self, n: int) -> float:
        if self.start <= n <= self.stop:
            return self.values[n - self.start]
        return 0.0

    def indices(self) -> range:
        return range(self.start, self.stop + 1)

    def scaled(self, factor: float) -> "WeightSeq":
        return WeightSeq(self.start, tuple(factor * v for v in self.values))


# Test sequences share representation and semantics with weights.
TestSequence = WeightSeq
# Keep test collectors from treating the alias as a test case.
TestSequence.__test__ = False


def tail_sum(w: WeightSeq, n: int) -> float:
    """Sum of w_i for i >= n; finite because of zero extension."""
    lo = max(n, w.start)
    if lo > w.stop:
        return 0.0
    return float(sum(w.values[lo - w.start:]))


def head_sum(w: WeightSeq, n: int) -> float:
    """Sum of w_i for i <= n."""
    hi = min(n, w.stop)
    if hi < w.start:
        return 0.0
    return float(sum(w.values[: hi - w.start + 1]))


def sigma_p(v: WeightSeq, p: float, N, M: int) -> float:
    """Dual-norm quantity over the index range [N, M].

    For 1 < p < inf this is (sum v_i^(1-p'))^(1/p'); for p = 1 it is
    sup v_i^(-1).  N may be -inf, in which case the range is clipped at
    the window bottom (the documented finite-support reading).  A finite
    N or M outside the window pulls in zero entries, whose reciprocal
    powers are +inf.
    """
    if p < 1 or math.isinf(p):
        raise ValueError("sigma_p is defined for 1 <= p < inf only")
    if not math.isinf(N) and N > M:
        raise ValueError(f"empty index range: N={N} > M={M}")
    lo = v.start if math.isinf(N) else int(N)
    if M < v.start or lo > v.stop:
        # Range entirely outside the window: all entries are zero.
        return INF
    out_of_window = lo < v.start or M > v.stop
    lo_c = max(lo, v.start)
    hi_c = min(int(M), v.stop)
    entries = [v[i] for i in range(lo_c, hi_c + 1)]
    if p == 1.0:
        best = INF if out_of_window else 0.0
        for x in entries:
            best = max(best, ext_pow(x, -1.0))
        return best
    pc = p / (p - 1.0)
    total = INF if out_of_window else 0.0
    for x in entries:
        term = ext_pow(x, 1.0 - pc)
        if math.isinf(term):
            return INF
        if not math.isinf(total):
            total += term
    return ext_pow(total, 1.0 / pc)
