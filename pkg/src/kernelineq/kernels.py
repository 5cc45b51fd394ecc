"""Kernel representations and regularity diagnostics.

A kernel K(i, n) is defined for window pairs i <= n, is nonnegative and
finite, and is ideally nonincreasing in i and nondecreasing in n.  The
regularity constant is the smallest C with
K(i, n) <= C * (K(i, j) + K(j, n)) over all window triples i <= j <= n;
it is measured by scanning, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .numerics import INF, ext_pow
from .weights import WeightSeq


@dataclass(frozen=True)
class ConstantKernel:
    c: float


@dataclass(frozen=True)
class TabulatedKernel:
    """Explicit entries K(i, n) for i <= n; rows indexed from `start`."""

    start: int
    entries: tuple  # tuple of rows; row for i holds K(i, n), n = i..top


@dataclass(frozen=True)
class SupSequenceKernel:
    """K(i, n) = max of u_j over i <= j <= n; always monotone and regular."""

    u: WeightSeq


@dataclass(frozen=True)
class RowSequenceKernel:
    """K(i, n) = u_i, constant along rows; not monotone in general."""

    u: WeightSeq


@dataclass(frozen=True)
class PowerKernel:
    base: "object"
    r: float


KernelSpec = (ConstantKernel, TabulatedKernel, SupSequenceKernel, RowSequenceKernel, PowerKernel)


def _materialize(spec, start: int, length: int) -> List[List[float]]:
    """Upper-triangular matrix rows[i][n - i] for window indices i <= n."""
    if isinstance(spec, ConstantKernel):
        if spec.c < 0 or math.isinf(spec.c) or math.isnan(spec.c):
            raise ValueError("constant kernel value must be finite and nonnegative")
        return [[float(spec.c)] * (length - i) for i in range(length)]
    if isinstance(spec, TabulatedKernel):
        if spec.start != start or len(spec.entries) != length:
            raise ValueError("tabulated kernel does not match the window")
        rows = []
        for i, row in enumerate(spec.entries):
            row = [float(x) for x in row]
            if len(row) != length - i:
                raise ValueError(f"row {i} must have {length - i} entries")
            for x in row:
                if x < 0 or math.isinf(x) or math.isnan(x):
                    raise ValueError("kernel entries must be finite and nonnegative")
            rows.append(row)
        return rows
    if isinstance(spec, SupSequenceKernel):
        u = spec.u
        if u.start != start or len(u) != length:
            raise ValueError("kernel sequence does not match the window")
        rows = []
        for i in range(length):
            row = []
            running = 0.0
            for n in range(i, length):
                running = max(running, u.values[n])
                row.append(running)
            rows.append(row)
        return rows
    if isinstance(spec, RowSequenceKernel):
        u = spec.u
        if u.start != start or len(u) != length:
            raise ValueError("kernel sequence does not match the window")
        return [[u.values[i]] * (length - i) for i in range(length)]
    if isinstance(spec, PowerKernel):
        if spec.r <= 0:
            raise ValueError("power kernel exponent must be positive")
        base = _materialize(spec.base, start, length)
        return [[ext_pow(x, spec.r) for x in row] for row in base]
    raise TypeError(f"unknown kernel spec: {spec!r}")


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    violations: tuple  # (i, j, n) triples; j = i + 1 marks first-variable steps


@dataclass(frozen=True)
class ChainReport:
    ok: bool
    worst_chain: tuple
    worst_ratio: float
    note: str = "consecutive-index chains only"


class Kernel:
    """Evaluable kernel on a window, with cached diagnostics."""

    def __init__(self, spec, start: int, length: int):
        if length < 1:
            raise ValueError("window must contain at least one index")
        self.spec = spec
        self.start = int(start)
        self.length = int(length)
        self._rows = _materialize(spec, self.start, self.length)
        self._monotone: Optional[MonotonicityReport] = None
        self._regularity: Optional[float] = None

    @property
    def stop(self) -> int:
        return self.start + self.length - 1

    def eval(self, i: int, n: int) -> float:
        if not (self.start <= i <= n <= self.stop):
            raise IndexError(f"kernel index out of range: ({i}, {n})")
        return self._rows[i - self.start][n - i]

    def monotonicity_check(self) -> MonotonicityReport:
        if self._monotone is None:
            bad = []
            for i in range(self.start, self.stop + 1):
                for n in range(i, self.stop + 1):
                    if i + 1 <= n and self.eval(i, n) < self.eval(i + 1, n):
                        bad.append((i, i + 1, n))
                    if n + 1 <= self.stop and self.eval(i, n) > self.eval(i, n + 1):
                        bad.append((i, n, n + 1))
            self._monotone = MonotonicityReport(ok=not bad, violations=tuple(bad))
        return self._monotone

    def regularity_constant(self) -> float:
        """Max over triples i <= j <= n of K(i,n) / (K(i,j) + K(j,n)).

        0/0 counts as 0 and positive/0 as +inf; +inf means the kernel is
        not regular on this window.
        """
        if self._regularity is None:
            worst = 0.0
            for i in range(self.start, self.stop + 1):
                for j in range(i, self.stop + 1):
                    for n in range(j, self.stop + 1):
                        num = self.eval(i, n)
                        den = self.eval(i, j) + self.eval(j, n)
                        if num == 0.0:
                            continue
                        worst = max(worst, num / den if den > 0 else INF)
            self._regularity = worst
        return self._regularity

    def power(self, r: float) -> "Kernel":
        if r <= 0:
            raise ValueError("power exponent must be positive")
        return Kernel(PowerKernel(self.spec, r), self.start, self.length)

    def chain_alpha_check(self, alpha: float, c: float, max_len: int) -> ChainReport:
        """Check K(x1, xm) <= c * (sum K(x_t, x_{t+1})^alpha)^(1/alpha).

        Chains run over consecutive window indices x1 < x1+1 < ... < xm
        with 3 <= m <= max_len; length-2 chains are trivially tight and
        carry no information.  Full chain enumeration would be
        exponential and the blockwise estimates only ever use
        consecutive runs.
        """
        if not (0 < alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")
        if c <= 0:
            raise ValueError("c must be positive")
        if not (2 <= max_len <= self.length):
            raise ValueError("max_len must lie in [2, window length]")
        worst_ratio = 0.0
        worst_chain: Tuple[int, ...] = ()
        for m in range(3, max_len + 1):
            for x1 in range(self.start, self.stop - m + 2):
                chain = tuple(range(x1, x1 + m))
                lhs = self.eval(chain[0], chain[-1])
                acc = 0.0
                for t in range(m - 1):
                    acc += ext_pow(self.eval(chain[t], chain[t + 1]), alpha)
                rhs = ext_pow(acc, 1.0 / alpha)
                if lhs == 0.0:
                    continue
                ratio = lhs / rhs if rhs > 0 else INF
                if ratio > worst_ratio:
                    worst_ratio = ratio
                    worst_chain = chain
        return ChainReport(ok=worst_ratio <= c, worst_chain=worst_chain,
                           worst_ratio=worst_ratio)

    def reversed_(self) -> "Kernel":
        """Index-change transform K~(i, n) = K(-n, -i) on the negated window."""
        if isinstance(self.spec, ConstantKernel):
            return Kernel(self.spec, -self.stop, self.length)
        if isinstance(self.spec, SupSequenceKernel):
            u = self.spec.u
            ru = WeightSeq(-u.stop, tuple(reversed(u.values)))
            return Kernel(SupSequenceKernel(ru), -self.stop, self.length)
        new_start = -self.stop
        rows = []
        for i in range(self.length):
            row = []
            for off in range(self.length - i):
                n = i + off
                # new (i, n) maps to old (-n, -i) in window coordinates
                oi = self.length - 1 - n
                on = self.length - 1 - i
                row.append(self._rows[oi][on - oi])
            rows.append(tuple(row))
        return Kernel(TabulatedKernel(new_start, tuple(rows)), new_start, self.length)


def constant_kernel(c: float, start: int, length: int) -> Kernel:
    return Kernel(ConstantKernel(c), start, length)


def tabulated_kernel(rows, start: int, length: int) -> Kernel:
    return Kernel(TabulatedKernel(start, tuple(tuple(r) for r in rows)), start, length)
