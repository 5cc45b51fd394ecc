"""Extended-real arithmetic and exponent bookkeeping.

All constants and norms produced by this package live on the nonnegative
extended real line [0, +inf].  The conventions fixed here (0*inf = 0,
0^r for r < 0 equal to +inf, and so on) are used by every other module;
nothing else in the package touches raw float powers directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


def ext(x: float) -> float:
    """Validate a nonnegative extended real.  NaN and negatives are rejected."""
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise TypeError(f"not a number: {x!r}")
    x = float(x)
    if math.isnan(x):
        raise ValueError("NaN is not a valid extended real")
    if x < 0:
        raise ValueError(f"negative value not allowed: {x}")
    return x


def ext_mul(x: float, y: float) -> float:
    """Product with the convention 0 * inf = 0."""
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y


def ext_pow(x: float, r: float) -> float:
    """x**r on [0, inf] with fixed conventions.

    0^r = 0 for r > 0, +inf for r < 0, 1 for r = 0.
    inf^r = +inf for r > 0, 0 for r < 0, 1 for r = 0.
    Finite positive x uses the ordinary power.
    """
    x = ext(x)
    if math.isnan(r):
        raise ValueError("NaN exponent")
    if r == 0.0:
        return 1.0
    if x == 0.0:
        return 0.0 if r > 0 else INF
    if math.isinf(x):
        return INF if r > 0 else 0.0
    if math.isinf(r):
        # x^inf on finite positive x: standard limit conventions.
        if x > 1.0:
            return INF if r > 0 else 0.0
        if x < 1.0:
            return 0.0 if r > 0 else INF
        return 1.0
    try:
        return x ** r
    except OverflowError:
        return INF


def conjugate(p: float) -> float:
    """Conjugate exponent p/(p-1); +inf at p = 1 and 1 at p = +inf.

    Negative for p in (0, 1).
    """
    if math.isnan(p) or p <= 0:
        raise ValueError(f"exponent must lie in (0, inf]: {p}")
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return INF
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentPair:
    """The exponent pair (p, q); both lie in (0, inf]."""

    p: float
    q: float

    def __post_init__(self):
        for name, value in (("p", self.p), ("q", self.q)):
            if math.isnan(value) or value <= 0:
                raise ValueError(f"{name} must lie in (0, inf]: {value}")

    @property
    def p_conj(self) -> float:
        return conjugate(self.p)

    @property
    def q_conj(self) -> float:
        return conjugate(self.q)


# Kernel-inequality characterization, cases (i)-(x); NA when 1 <= p <= inf
# does not hold (or p = inf with 0 < q < 1, which the case list omits).
KERNEL_CASES = (
    "K_I", "K_II", "K_III", "K_IV", "K_V",
    "K_VI", "K_VII", "K_VIII", "K_IX", "K_X", "NA",
)

# p <= 1 characterization of the same inequality.
P_LE1_Q_GE_P = "P_LE1_Q_GE_P"
P_LE1_Q_INF = "P_LE1_Q_INF"
P_LE1_Q_LT_P = "P_LE1_Q_LT_P"

# Supremum-operator characterization, cases (i)-(v).
SUP_CASES = ("S_I", "S_II", "S_III", "S_IV", "S_V", "NA")


@dataclass(frozen=True)
class RegimeLabel:
    """One label per characterization family for a single (p, q)."""

    kernel_case: str    # one of KERNEL_CASES
    small_p_case: str   # one of the P_LE1_* labels, or "NA"
    sup_case: str       # one of SUP_CASES


def _kernel_case(p: float, q: float) -> str:
    if p < 1:
        return "NA"
    if p == 1:
        if math.isinf(q):
            return "K_II"
        return "K_I" if q >= 1 else "K_X"
    if math.isinf(p):
        if math.isinf(q):
            return "K_VI"
        return "K_III" if q >= 1 else "NA"
    # 1 < p < inf
    if math.isinf(q):
        return "K_V"
    if q == 1:
        return "K_IV"
    if q >= p:
        return "K_VII"
    if q > 1:
        return "K_VIII"
    return "K_IX"


def _small_p_case(p: float, q: float) -> str:
    if p > 1:
        return "NA"
    if math.isinf(q):
        return P_LE1_Q_INF
    if q >= p:
        return P_LE1_Q_GE_P
    return P_LE1_Q_LT_P


def _sup_case(p: float, q: float) -> str:
    if p < 1:
        return "NA"
    if math.isinf(q):
        return "S_III" if math.isinf(p) else "S_II"
    if math.isinf(p):
        return "S_IV"
    if p <= q:
        return "S_I"
    return "S_V"


def regime(e: ExponentPair) -> RegimeLabel:
    """Classify (p, q) under all three characterization families at once.

    Each family gets exactly one label; "NA" marks (p, q) outside the
    family's parameter range.
    """
    return RegimeLabel(
        kernel_case=_kernel_case(e.p, e.q),
        small_p_case=_small_p_case(e.p, e.q),
        sup_case=_sup_case(e.p, e.q),
    )
