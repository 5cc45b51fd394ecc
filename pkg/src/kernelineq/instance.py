"""Problem instances: window, exponents, weights and kernel together."""

from __future__ import annotations

from dataclasses import dataclass

from .kernels import Kernel
from .numerics import ExponentPair
from .weights import WeightSeq


@dataclass(frozen=True)
class Instance:
    """One weighted kernel-inequality problem on a shared finite window."""

    exponents: ExponentPair
    v: WeightSeq
    w: WeightSeq
    kernel: Kernel

    def __post_init__(self):
        a, b = self.v, self.w
        k = self.kernel
        if not (a.start == b.start == k.start and len(a) == len(b) == k.length):
            raise ValueError("v, w and kernel must share the window")

    @property
    def start(self) -> int:
        return self.v.start

    @property
    def stop(self) -> int:
        return self.v.stop

    @property
    def length(self) -> int:
        return len(self.v)

    @property
    def p(self) -> float:
        return self.exponents.p

    @property
    def q(self) -> float:
        return self.exponents.q
