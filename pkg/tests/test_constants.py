import math
import random

import pytest

from kernelineq import (INF, ExponentPair, Instance, WeightSeq, characterize,
                        condition_A, condition_D, constant_kernel)

from conftest import close, random_instance


def unit_instance(p, q, length=3):
    w = WeightSeq(0, (1.0,) * length)
    return Instance(ExponentPair(p, q), w, w, constant_kernel(1.0, 0, length))


class TestConditionA:
    def test_a1_example(self):
        assert condition_A(1, unit_instance(1.0, 1.0)) == 3.0

    def test_a12_a13_example(self):
        inst = unit_instance(1.0, 0.5, length=2)
        assert close(condition_A(12, inst), 3.0)
        assert close(condition_A(13, inst), 3.0)

    def test_regime_mismatch(self):
        with pytest.raises(ValueError):
            condition_A(4, unit_instance(1.0, 1.0))  # A4 needs 1 < p < inf
        with pytest.raises(ValueError):
            condition_A(1, unit_instance(2.0, 1.0))  # A1 needs q >= p, p <= 1

    def test_zero_w_gives_zero(self):
        inst = Instance(ExponentPair(1.0, 1.0), WeightSeq(0, (1.0, 1.0)),
                        WeightSeq(0, (0.0, 0.0)), constant_kernel(1.0, 0, 2))
        assert condition_A(1, inst) == 0.0

    def test_zero_v_gives_inf(self):
        inst = Instance(ExponentPair(1.0, 1.0), WeightSeq(0, (0.0, 1.0)),
                        WeightSeq(0, (1.0, 1.0)), constant_kernel(1.0, 0, 2))
        assert condition_A(1, inst) == INF


class TestConditionD:
    def test_d1_example(self):
        assert close(condition_D(1, unit_instance(2.0, 2.0, length=2)),
                     math.sqrt(2.0))

    def test_d4_example(self):
        assert condition_D(4, unit_instance(INF, 1.0)) == 6.0

    def test_d5_example(self):
        assert close(condition_D(5, unit_instance(2.0, 1.0, length=2)),
                     math.sqrt(3.0))

    def test_regime_mismatch(self):
        with pytest.raises(ValueError):
            condition_D(4, unit_instance(2.0, 1.0))  # D4 needs p = inf
        with pytest.raises(ValueError):
            condition_D(1, unit_instance(2.0, 1.0))  # D1 needs q >= p


class TestCharacterize:
    def test_unit_example(self):
        rep = characterize(unit_instance(1.0, 1.0))
        assert rep.constants["A_1"] == 3.0
        assert rep.predicted_C == 3.0

    def test_sum_regime(self):
        rep = characterize(unit_instance(1.0, 0.5, length=2))
        assert close(rep.predicted_C, 6.0)
        assert close(rep.constants["A_12"], 3.0)
        assert close(rep.constants["A_13"], 3.0)

    def test_zero_w(self):
        inst = Instance(ExponentPair(1.0, 1.0), WeightSeq(0, (1.0, 1.0)),
                        WeightSeq(0, (0.0, 0.0)), constant_kernel(1.0, 0, 2))
        rep = characterize(inst)
        assert rep.predicted_C == 0.0
        assert all(val == 0.0 for val in rep.constants.values())

    def test_every_regime_computes(self):
        rng = random.Random(7)
        for p in (0.5, 1.0, 1.5, 2.0, INF):
            for q in (0.5, 1.0, 2.0, 3.0, INF):
                inst = random_instance(rng, p, q)
                rep = characterize(inst)
                if not (math.isinf(p) and q < 1.0):
                    assert rep.predicted_kernel is not None, (p, q)
                for val in rep.constants.values():
                    assert val >= 0.0

    def test_finiteness_consistency(self):
        rng = random.Random(8)
        for _ in range(60):
            p = rng.choice((0.5, 1.0, 2.0))
            q = rng.choice((0.5, 1.0, 2.0))
            inst = random_instance(rng, p, q, allow_zero_v=True)
            rep = characterize(inst)
            if rep.predicted_kernel is None:
                continue
            names = [n for n in rep.constants if n.startswith("A_")]
            required_inf = any(math.isinf(rep.constants[n]) for n in names)
            assert math.isinf(rep.predicted_kernel) == required_inf


class TestHomogeneity:
    def test_w_scaling(self):
        rng = random.Random(9)
        for _ in range(40):
            p = rng.choice((0.5, 1.0, 2.0))
            q = rng.choice((0.5, 1.0, 2.0))
            inst = random_instance(rng, p, q)
            mu = 3.7
            scaled = Instance(inst.exponents, inst.v, inst.w.scaled(mu),
                              inst.kernel)
            base, after = characterize(inst), characterize(scaled)
            for name, val in base.constants.items():
                got = after.constants[name]
                if math.isinf(val):
                    assert math.isinf(got)
                else:
                    assert close(got, mu ** (1.0 / q) * val, 1e-11), name

    def test_v_scaling(self):
        rng = random.Random(10)
        for _ in range(40):
            p = rng.choice((0.5, 1.0, 2.0))
            q = rng.choice((0.5, 1.0, 2.0))
            inst = random_instance(rng, p, q)
            lam = 2.3
            scaled = Instance(inst.exponents, inst.v.scaled(lam), inst.w,
                              inst.kernel)
            base, after = characterize(inst), characterize(scaled)
            for name, val in base.constants.items():
                if name in ("D_5", "D_6"):
                    # Printed as products of sigma_p powers whose combined
                    # v-exponent is not -1/p; not a pure power in v.
                    continue
                got = after.constants[name]
                if math.isinf(val):
                    assert math.isinf(got)
                else:
                    assert close(got, lam ** (-1.0 / p) * val, 1e-11), name


class TestMonotonicity:
    def test_random_perturbations(self):
        rng = random.Random(11)
        for _ in range(60):
            p = rng.choice((0.5, 1.0, 2.0))
            q = rng.choice((0.5, 1.0, 2.0))
            inst = random_instance(rng, p, q)
            i = rng.randrange(inst.length)
            base = characterize(inst)

            w_up = list(inst.w.values)
            w_up[i] += 1.0
            rep = characterize(Instance(inst.exponents, inst.v,
                                        WeightSeq(inst.start, tuple(w_up)),
                                        inst.kernel))
            for name, val in base.constants.items():
                assert rep.constants[name] >= val - 1e-12 * max(1.0, val), name

            v_up = list(inst.v.values)
            v_up[i] += 1.0
            rep = characterize(Instance(inst.exponents,
                                        WeightSeq(inst.start, tuple(v_up)),
                                        inst.w, inst.kernel))
            for name, val in base.constants.items():
                if name in ("D_5", "D_6"):
                    continue
                assert rep.constants[name] <= val + 1e-12 * max(1.0, val), name
