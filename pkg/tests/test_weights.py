import math

import pytest
from hypothesis import given, strategies as st

from kernelineq import INF, TestSequence, WeightSeq, head_sum, sigma_p, tail_sum

from conftest import close

w111 = WeightSeq(0, (1.0, 1.0, 1.0))


class TestWeightSeq:
    def test_zero_extension(self):
        assert w111[-1] == 0.0
        assert w111[3] == 0.0
        assert w111[1] == 1.0

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            WeightSeq(0, (1.0, -1.0))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            WeightSeq(0, ())

    def test_rejects_inf_entry(self):
        with pytest.raises(ValueError):
            WeightSeq(0, (1.0, INF))


class TestTailSum:
    def test_examples(self):
        assert tail_sum(w111, 0) == 3.0
        assert tail_sum(w111, 3) == 0.0
        assert tail_sum(w111, -5) == 3.0

    @given(st.integers(-2, 4))
    def test_difference_is_weight(self, n):
        assert tail_sum(w111, n) - tail_sum(w111, n + 1) == w111[n]

    def test_head_sum(self):
        assert head_sum(w111, 1) == 2.0
        assert head_sum(w111, -1) == 0.0
        assert head_sum(w111, 10) == 3.0


class TestSigmaP:
    def test_p2_example(self):
        assert close(sigma_p(WeightSeq(0, (1.0, 1.0, 1.0)), 2.0, 0, 2),
                     math.sqrt(3.0))

    def test_p1_example(self):
        assert sigma_p(WeightSeq(0, (1.0, 2.0)), 1.0, 0, 1) == 1.0

    def test_empty_range_error(self):
        with pytest.raises(ValueError):
            sigma_p(WeightSeq(0, (1.0, 1.0)), 2.0, 0, -1)

    def test_regime_errors(self):
        with pytest.raises(ValueError):
            sigma_p(w111, 0.5, 0, 2)
        with pytest.raises(ValueError):
            sigma_p(w111, INF, 0, 2)

    def test_zero_weight_is_infinite(self):
        assert sigma_p(WeightSeq(0, (0.0, 1.0)), 2.0, 0, 1) == INF
        assert sigma_p(WeightSeq(0, (0.0, 1.0)), 1.0, 0, 1) == INF

    def test_monotone_in_window(self):
        v = WeightSeq(0, (1.0, 2.0, 0.5, 3.0))
        for p in (1.0, 2.0, 3.0):
            prev = 0.0
            for M in range(4):
                cur = sigma_p(v, p, 0, M)
                assert cur >= prev
                prev = cur
            assert sigma_p(v, p, 1, 3) <= sigma_p(v, p, 0, 3)

    @given(st.floats(min_value=0.01, max_value=100.0),
           st.sampled_from([1.0, 1.5, 2.0, 4.0]))
    def test_scaling(self, lam, p):
        v = WeightSeq(0, (1.0, 2.0, 0.5))
        base = sigma_p(v, p, 0, 2)
        scaled = sigma_p(v.scaled(lam), p, 0, 2)
        assert close(scaled, lam ** (-1.0 / p) * base, 1e-12)


class TestTestSequence:
    def test_scaled(self):
        a = TestSequence(0, (1.0, 2.0))
        b = a.scaled(3.0)
        assert b.values == (3.0, 6.0)
        assert b.start == 0
