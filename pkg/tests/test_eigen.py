"""
Tests for the explicit eigenfunction of the Ruelle operator.
"""

import pytest

from walters_thermo.eigen import eigen_residual, h_on_word, h_values
from walters_thermo.potential import PatternPoint, Word
from walters_thermo.specs import builtin, example1
from walters_thermo.zerotemp import Subaction, compute_A


def residual_points(q_max=30):
    points = [PatternPoint.zero_inf(), PatternPoint.one_inf()]
    points += [PatternPoint.zero_run(q) for q in range(1, q_max + 1)]
    points += [PatternPoint.one_run(q) for q in range(1, q_max + 1)]
    return points


def test_zero_potential_is_constant(zero):
    e = h_values(zero, 1.0)
    assert e.beta_inf == pytest.approx(0.0, abs=1e-12)
    for q in range(1, 31):
        assert e.alpha(q) == pytest.approx(0.0, abs=1e-12)
        assert e.beta(q) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("name", ["example1", "thm2", "thm2-mirror", "symmetric"])
@pytest.mark.parametrize("t", [1.0, 10.0, 50.0])
def test_recurrence_residual(name, t):
    f = builtin(name)
    e = h_values(f, t)
    worst = max(eigen_residual(f, t, p, e) for p in residual_points())
    assert worst < 1e-9


@pytest.mark.parametrize("b1", [-1.0, -0.2])
@pytest.mark.parametrize("t", [1.0, 5.0, 20.0])
def test_example_beta_inf(b1, t):
    e = h_values(example1(b1), t)
    assert e.beta_inf == pytest.approx(-t / 2, abs=1e-8)


@pytest.mark.parametrize("t", [1.0, 5.0, 20.0])
def test_example_ratio_identity(example, t):
    e = h_values(example, t)
    for q in range(2, 15):
        expected = t * (example.c_seq.partial_sum(1, q - 1) - example.a_seq.partial_sum(1, q - 1))
        assert e.alpha(q) - e.beta(q) == pytest.approx(expected, abs=1e-10)


def test_values_past_the_cache(example):
    short = h_values(example, 2.0, q_max=5)
    full = h_values(example, 2.0, q_max=12)
    assert short.q_max == 5
    assert short.alpha(9) == pytest.approx(full.alpha(9), abs=1e-14)
    assert short.beta(12) == pytest.approx(full.beta(12), abs=1e-14)


def test_h_on_word(example):
    e = h_values(example, 1.0)
    assert h_on_word(e, Word("0010")) == e.alpha(2)
    assert h_on_word(e, Word("10")) == e.beta(1)
    assert h_on_word(e, Word("000")) is None


def test_invalid_arguments(example):
    with pytest.raises(ValueError):
        h_values(example, 1.0, q_max=0)
    with pytest.raises(ValueError):
        h_values(example, 1.0).alpha(0)
    with pytest.raises(ValueError):
        eigen_residual(example, 1.0, PatternPoint.zero_one_run(2))


def test_log_eigenfunction_approaches_subaction(example):
    A, _ = compute_A(example)
    V = Subaction(example, A)
    for q in (1, 2, 3, 5):
        gaps = [abs(h_values(example, t).alpha(q) / t - V.zero_run(q)) for t in (20.0, 40.0, 80.0)]
        assert gaps[2] <= gaps[0] + 1e-12
        assert gaps[2] < 0.1
    gaps = [abs(h_values(example, t).beta_inf / t - V.one_inf()) for t in (20.0, 40.0, 80.0)]
    assert max(gaps) < 1e-9
