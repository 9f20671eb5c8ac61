"""
Tests for the pressure solver.
"""
import math

import pytest

from walters_thermo.errors import DomainError, HypothesisViolation
from walters_thermo.numerics import log_sum_exp
from walters_thermo.oracle import oracle_pressure
from walters_thermo.potential import ConstantTail, SequenceSpec, WaltersPotential
from walters_thermo.pressure import epsilon, example_pressure_identity, pressure, pressure_function
from walters_thermo.specs import constant_potential, example1


@pytest.mark.parametrize("t", [0.5, 1.0, 10.0, 100.0])
def test_zero_potential_is_log2(zero, t):
    assert pressure(zero, t).P == pytest.approx(math.log(2.0), abs=1e-12)


@pytest.mark.parametrize("t", [1.0, 10.0, 50.0])
def test_constant_shift(t):
    f = constant_potential(-0.3)
    assert pressure(f, t).P == pytest.approx(math.log(2.0) - 0.3 * t, abs=1e-10)


def test_shift_identity_on_example(example):
    t = 2.0
    shifted = example.shifted(-0.7)
    assert pressure(shifted, t).P == pytest.approx(pressure(example, t).P - 0.7 * t, abs=1e-10)


def test_root_residual(example):
    solution = pressure(example, 3.0)
    assert solution.residual <= 1e-12
    assert pressure_function(example, 3.0, solution.epsilon) == pytest.approx(0.0, abs=1e-12)
    assert solution.excess == solution.epsilon


def test_epsilon_positive_and_decreasing(example):
    values = [epsilon(example, t) for t in (5.0, 10.0, 20.0, 40.0)]
    assert all(v > 0 for v in values)
    assert all(b < a for a, b in zip(values, values[1:]))


def test_epsilon_representable_at_large_t(example):
    eps = epsilon(example, 80.0)
    assert 0 < eps < 1e-100
    assert math.log(eps) / 80.0 == pytest.approx(-3.5, abs=0.2)


def test_pressure_increasing_in_t_for_positive_sup():
    tail = ConstantTail(0.4)
    f = WaltersPotential(
        a_seq=SequenceSpec(2, (), tail), b_seq=SequenceSpec(1, (), ConstantTail(-1.0)),
        c_seq=SequenceSpec(2, (), tail), d_seq=SequenceSpec(1, (), ConstantTail(-1.0)),
    )
    assert pressure(f, 2.0).P > pressure(f, 1.0).P > 0.4


def test_agrees_with_oracle_at_depth_12(thm2):
    P = pressure(thm2, 1.0).P
    assert oracle_pressure(thm2, 1.0, 12) == pytest.approx(P, abs=5e-3)


def test_rejects_nonpositive_t(example):
    with pytest.raises(DomainError):
        pressure(example, 0.0)


def test_epsilon_requires_equal_limits():
    f = WaltersPotential(
        a_seq=SequenceSpec(2, (), ConstantTail(0.0)), b_seq=SequenceSpec(1, (), ConstantTail(-1.0)),
        c_seq=SequenceSpec(2, (), ConstantTail(-0.5)), d_seq=SequenceSpec(1, (), ConstantTail(-1.0)),
    )
    assert pressure(f, 1.0).P > 0
    with pytest.raises(HypothesisViolation):
        epsilon(f, 1.0)


def test_equation_holds_directly(symmetric):
    t = 1.5
    P = pressure(symmetric, t).P
    log_d = log_sum_exp(
        t * symmetric.d_seq.value_at(1 + j) + t * symmetric.a_seq.partial_sum(1, j) - j * P for j in range(20000)
    )
    assert 2 * log_d == pytest.approx(2 * P, abs=1e-9)


@pytest.mark.parametrize("b1", [-1.0, -0.2])
@pytest.mark.parametrize("t", [1.0, 5.0])
def test_example_partial_sum_identity(b1, t):
    f = example1(b1)
    assert example_pressure_identity(f, t) < 1e-9
    assert example_pressure_identity(f, t, horizon=200) == pytest.approx(example_pressure_identity(f, t), abs=1e-12)
