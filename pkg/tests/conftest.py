"""
Shared potentials for the test suite.
"""
import numpy as np
import pytest

from walters_thermo.potential import ConstantTail, GeometricTail, SequenceSpec, WaltersPotential
from walters_thermo.specs import builtin, example1


def random_nonpositive(rng: np.random.Generator, index: int) -> WaltersPotential:
    """a = c = 0, constant negative b and d, strictly negative geometric a_n and c_n."""
    def run_seq() -> SequenceSpec:
        prefix = (-float(rng.uniform(0.5, 8.0)),) if rng.uniform() < 0.5 else ()
        return SequenceSpec(2, prefix, GeometricTail(0.0, -float(rng.uniform(0.5, 6.0)), float(rng.uniform(0.2, 0.7))))

    b = -float(rng.uniform(0.2, 3.0))
    d = -float(rng.uniform(0.2, 3.0))
    return WaltersPotential(
        a_seq=run_seq(),
        b_seq=SequenceSpec(1, (), ConstantTail(b)),
        c_seq=run_seq(),
        d_seq=SequenceSpec(1, (), ConstantTail(d)),
        name=f"random-{index}",
    )


@pytest.fixture
def zero():
    return builtin("zero")


@pytest.fixture
def example():
    return example1()


@pytest.fixture
def thm2():
    return builtin("thm2")


@pytest.fixture
def thm2_mirror():
    return builtin("thm2-mirror")


@pytest.fixture
def symmetric():
    return builtin("symmetric")


@pytest.fixture(scope="session")
def nonpositive_corpus():
    rng = np.random.default_rng(20240611)
    return [random_nonpositive(rng, i) for i in range(20)]
