"""
Tests for Gibbs cylinder measures.
"""
import itertools
import math

import pytest

from walters_thermo.gibbs import TAIL, cylinder_measure, ratio_log, s0_s1, top_cylinders
from walters_thermo.specs import example1


def words_up_to(n):
    for length in range(1, n + 1):
        for bits in itertools.product("01", repeat=length):
            yield "".join(bits)


def mu(f, t, w, **kwargs):
    return math.exp(cylinder_measure(f, t, w, **kwargs))


def test_zero_potential_is_uniform(zero):
    for w in words_up_to(6):
        assert mu(zero, 1.0, w) == pytest.approx(2.0 ** -len(w), abs=1e-12)


def test_base_cylinders(thm2):
    table = top_cylinders(thm2, 2.0)
    assert math.exp(table.mu0) + math.exp(table.mu1) == pytest.approx(1.0, abs=1e-12)
    assert table.mu01 == table.mu10
    assert mu(thm2, 2.0, "01") == pytest.approx(mu(thm2, 2.0, "10"), rel=1e-12)


@pytest.mark.parametrize("b1", [-1.0, -0.2])
@pytest.mark.parametrize("t", [1.0, 5.0, 20.0])
def test_example_splits_evenly(b1, t):
    f = example1(b1)
    assert mu(f, t, "0") == pytest.approx(0.5, abs=1e-10)
    log_s0, log_s1 = s0_s1(f, t)
    assert log_s0 == pytest.approx(log_s1, abs=1e-10)


@pytest.mark.parametrize("b1", [-1.0, -0.2])
def test_example_symmetric_runs(b1):
    f = example1(b1)
    for j in range(2, 7):
        left = cylinder_measure(f, 5.0, "0" * j + "1")
        right = cylinder_measure(f, 5.0, "1" * j + "0")
        assert abs(math.expm1(left - right)) <= 1e-8


def test_s0_s1_cross_check(thm2):
    series = s0_s1(thm2, 1.0)
    direct = s0_s1(thm2, 1.0, mode="alpha")
    assert direct[0] == pytest.approx(series[0], abs=1e-9)
    assert direct[1] == pytest.approx(series[1], abs=1e-9)


def test_unknown_modes(example):
    with pytest.raises(ValueError):
        s0_s1(example, 1.0, mode="power")
    with pytest.raises(ValueError):
        cylinder_measure(example, 1.0, "00", pure_runs="guess")


def test_pure_run_modes_agree(example):
    for n in range(2, 7):
        subtract = cylinder_measure(example, 2.0, "0" * n)
        tail = cylinder_measure(example, 2.0, "0" * n, pure_runs=TAIL)
        assert tail == pytest.approx(subtract, abs=1e-9)
        assert cylinder_measure(example, 2.0, "1" * n, pure_runs=TAIL) == pytest.approx(
            cylinder_measure(example, 2.0, "1" * n), abs=1e-9
        )


def test_tail_mode_survives_cancellation(example):
    # mu([0^n]) stays close to mu([0]) at low temperature; the tail form keeps full precision
    t = 40.0
    log_mu = cylinder_measure(example, t, "0" * 6, pure_runs=TAIL)
    assert math.isfinite(log_mu)
    assert log_mu < cylinder_measure(example, t, "0")


def test_additivity_and_shift_invariance(example):
    t = 1.0
    for w in words_up_to(5):
        total = mu(example, t, w)
        assert mu(example, t, w + "0") + mu(example, t, w + "1") == pytest.approx(total, abs=1e-12)
        assert mu(example, t, "0" + w) + mu(example, t, "1" + w) == pytest.approx(total, abs=1e-12)


def test_theorem2_prefers_one(thm2):
    grid = (5.0, 10.0, 20.0, 40.0)
    mu1 = [mu(thm2, t, "1") for t in grid]
    assert all(b > a for a, b in zip(mu1, mu1[1:]))
    rates = [ratio_log(thm2, t) / t for t in grid]
    assert all(r < 0 for r in rates)
    assert all(b <= a + 1e-12 for a, b in zip(rates, rates[1:]))


def test_mirror_prefers_zero(thm2_mirror):
    grid = (5.0, 10.0, 20.0, 40.0)
    mu0 = [mu(thm2_mirror, t, "0") for t in grid]
    assert all(b > a for a, b in zip(mu0, mu0[1:]))
    assert all(ratio_log(thm2_mirror, t) > 0 for t in grid)


def test_corpus_structural_invariants(nonpositive_corpus):
    t = 1.0
    for f in nonpositive_corpus:
        table = top_cylinders(f, t)
        assert math.exp(table.mu0) + math.exp(table.mu1) == pytest.approx(1.0, abs=1e-12)
        for w in words_up_to(5):
            total = mu(f, t, w)
            assert mu(f, t, w + "0") + mu(f, t, w + "1") == pytest.approx(total, abs=1e-10)
            assert mu(f, t, "0" + w) + mu(f, t, "1" + w) == pytest.approx(total, abs=1e-10)
