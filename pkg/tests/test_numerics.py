"""
Tests for log-domain series summation.
"""
import math

import numpy as np
import pytest

from walters_thermo.errors import DivergentSeries, DomainError
from walters_thermo.numerics import (
    geometric_sum,
    log1mexp,
    log_sum_exp,
    pattern_series,
    series_log,
    weighted_geometric_sum,
)
from walters_thermo.potential import Side
from walters_thermo.pressure import pressure


def brute_series(f, side, q, t, P, weighted=False, start=0, terms=20000):
    head, run = f.branch(side)
    exponents = [
        t * head.value_at(q + j) + t * run.partial_sum(q, j) - j * P
        + (math.log(j - start + 1) if weighted else 0.0)
        for j in range(start, start + terms)
    ]
    return log_sum_exp(exponents)


class TestPrimitives:
    def test_log_sum_exp_large_exponents(self):
        assert log_sum_exp([1000.0, 1000.0]) == pytest.approx(1000.0 + math.log(2.0))

    def test_log_sum_exp_empty_is_minus_inf(self):
        assert log_sum_exp([]) == -math.inf
        assert log_sum_exp([-math.inf, -math.inf]) == -math.inf

    def test_log1mexp_both_branches(self):
        assert log1mexp(-math.log(2.0)) == pytest.approx(math.log(0.5))
        assert log1mexp(-1e-20) == pytest.approx(math.log(1e-20))
        assert log1mexp(-50.0) == pytest.approx(-math.exp(-50.0), rel=1e-12)

    def test_log1mexp_domain(self):
        with pytest.raises(DomainError):
            log1mexp(0.0)

    def test_geometric_sums(self):
        z = -math.log(2.0)
        assert geometric_sum(z) == pytest.approx(math.log(2.0))
        assert geometric_sum(z, 3) == pytest.approx(math.log(0.25))
        # sum (j+1) 2^-j = 4
        assert weighted_geometric_sum(z) == pytest.approx(math.log(4.0))

    def test_weighted_sum_with_offset(self):
        z = -0.3
        direct = math.log(sum((j + 1) * math.exp(j * z) for j in range(5, 400)))
        assert weighted_geometric_sum(z, 5) == pytest.approx(direct, rel=1e-12)

    def test_geometric_limit_of_small_excess(self):
        # eps * sum_{j>=1} e^{-j eps} -> 1
        eps = 1e-12
        assert math.exp(math.log(eps) + geometric_sum(-eps, 1)) == pytest.approx(1.0, rel=1e-9)

    def test_divergent_z(self):
        with pytest.raises(DomainError):
            geometric_sum(0.0)
        with pytest.raises(DomainError):
            weighted_geometric_sum(0.1)


class TestSeries:
    @pytest.mark.parametrize("side", [Side.D, Side.B])
    @pytest.mark.parametrize("weighted", [False, True])
    def test_matches_brute_force(self, example, side, weighted):
        t = 1.0
        P = pressure(example, t).P
        value = series_log(example, side, 1, t, P - t * example.max_ac, weighted=weighted)
        assert value.log_value == pytest.approx(brute_series(example, side, 1, t, P, weighted), abs=1e-12)

    def test_start_offset(self, thm2):
        t = 0.5
        P = pressure(thm2, t).P
        value = series_log(thm2, Side.D, 1, t, P, weighted=True, start=4)
        assert value.log_value == pytest.approx(brute_series(thm2, Side.D, 1, t, P, True, 4), abs=1e-12)

    def test_deep_q(self, example):
        t = 1.0
        P = pressure(example, t).P
        for q in (1, 5, 20):
            value = pattern_series(example, Side.B, q, t, P)
            assert value.log_value == pytest.approx(brute_series(example, Side.B, q, t, P), abs=1e-12)

    def test_truncation_bound_small(self, example):
        value = series_log(example, Side.D, 1, 10.0, 1e-3)
        assert value.truncation_bound < 1e-12
        assert np.isfinite(value.log_value)

    def test_tiny_excess_stays_finite(self, example):
        t = 100.0
        value = series_log(example, Side.D, 1, t, 1e-150)
        closed_tail = t * (example.d + example.a_seq.tail_sum(1)) + 150 * math.log(10.0)
        assert np.isfinite(value.log_value)
        assert value.log_value >= closed_tail - 1e-6

    def test_divergence(self, example):
        with pytest.raises(DivergentSeries):
            series_log(example, Side.D, 1, 1.0, 0.0)
        with pytest.raises(DivergentSeries):
            pattern_series(example, Side.D, 1, 1.0, 0.0)

    def test_base_index_below_one(self, example):
        with pytest.raises(DomainError) as info:
            series_log(example, Side.D, 0, 1.0, 0.5)
        assert info.value.module == "numerics"


@pytest.fixture(params=["example", "thm2"])
def instance(request):
    return request.getfixturevalue(request.param)


class TestSeriesInvariants:
    @pytest.mark.parametrize("side", [Side.D, Side.B])
    @pytest.mark.parametrize("q", [1, 3, 10])
    @pytest.mark.parametrize("t", [0.5, 5.0])
    def test_weighted_dominates_plain(self, instance, side, q, t):
        P = pressure(instance, t).P
        plain = pattern_series(instance, side, q, t, P).log_value
        weighted = pattern_series(instance, side, q, t, P, weighted=True).log_value
        assert weighted >= plain

    @pytest.mark.parametrize("side", [Side.D, Side.B])
    @pytest.mark.parametrize("weighted", [False, True])
    def test_strictly_decreasing_in_pressure(self, instance, side, weighted):
        t = 2.0
        P0 = pressure(instance, t).P
        values = [
            pattern_series(instance, side, 2, t, P0 + dP, weighted=weighted).log_value
            for dP in (-0.5 * (P0 - t * instance.max_ac), 0.0, 0.1, 1.0, 5.0)
        ]
        assert np.all(np.diff(values) < 0)

    def test_log_sum_exp_ignores_order(self, instance):
        rng = np.random.default_rng(7)
        P = pressure(instance, 3.0).P
        head, run = instance.branch(Side.D)
        terms = [3.0 * head.value_at(1 + j) + 3.0 * run.partial_sum(1, j) - j * P for j in range(200)]
        terms += [-math.inf, 700.0, -700.0]
        expected = log_sum_exp(terms)
        for _ in range(5):
            assert log_sum_exp(rng.permutation(terms)) == pytest.approx(expected, abs=1e-12)
