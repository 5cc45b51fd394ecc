"""Shared random-data builders for the test suite."""

import math
import random

from kernelineq import (ExponentPair, Instance, Kernel, WeightSeq,
                        constant_kernel, tabulated_kernel)
from kernelineq.kernels import RowSequenceKernel, SupSequenceKernel

POSITIVE_CHOICES = (0.5, 1.0, 2.0, 3.0)


def monotone_tabulated(rng: random.Random, start: int, length: int) -> Kernel:
    """Tabulated kernel K(i,n) = sum_{j=i..n} u_j with u > 0.

    Nonincreasing in i, nondecreasing in n, regular with constant 1.
    """
    u = [rng.choice(POSITIVE_CHOICES) for _ in range(length)]
    rows = []
    for i in range(length):
        row, acc = [], 0.0
        for n in range(i, length):
            acc += u[n]
            row.append(acc)
        rows.append(row)
    return tabulated_kernel(rows, start, length)


def sup_kernel(rng: random.Random, start: int, length: int) -> Kernel:
    u = WeightSeq(start, tuple(rng.choice(POSITIVE_CHOICES)
                               for _ in range(length)))
    return Kernel(SupSequenceKernel(u), start, length)


def row_kernel(rng: random.Random, start: int, length: int) -> Kernel:
    u = WeightSeq(start, tuple(rng.choice(POSITIVE_CHOICES)
                               for _ in range(length)))
    return Kernel(RowSequenceKernel(u), start, length)


def random_kernel(rng: random.Random, start: int, length: int,
                  kinds=("constant", "sup", "tabulated")) -> Kernel:
    kind = rng.choice(kinds)
    if kind == "constant":
        return constant_kernel(rng.choice((1.0, 2.0)), start, length)
    if kind == "sup":
        return sup_kernel(rng, start, length)
    if kind == "row":
        return row_kernel(rng, start, length)
    return monotone_tabulated(rng, start, length)


def random_instance(rng: random.Random, p: float, q: float,
                    length=None, kinds=("constant", "sup", "tabulated"),
                    allow_zero_v: bool = False,
                    max_length: int = 5) -> Instance:
    if length is None:
        length = rng.randint(1, max_length)
    start = rng.randint(-3, 3)
    v = []
    for i in range(length):
        if allow_zero_v and rng.random() < 0.25:
            v.append(0.0)
        else:
            v.append(rng.choice(POSITIVE_CHOICES))
    w = [rng.choice((0.5, 1.0, 2.0)) for _ in range(length)]
    return Instance(ExponentPair(p, q), WeightSeq(start, tuple(v)),
                    WeightSeq(start, tuple(w)),
                    random_kernel(rng, start, length, kinds))


def close(x: float, y: float, rel: float = 1e-12) -> bool:
    if x == y:
        return True
    if math.isinf(x) or math.isinf(y):
        return False
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))
