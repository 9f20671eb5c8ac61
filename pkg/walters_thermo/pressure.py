"""
Pressure of tf for a Walters potential.

P(tf) is the unique root of D(P) * B(P) = e^{2P}. The solver works on the excess
eps = P - t*max(a, c) and bisects

    G(eps) = log D + log B - 2 t max(a, c) - 2 eps,

which is strictly decreasing on (0, t*(sup f - max(a, c)) + log 2].
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import optimize

from walters_thermo.config import Config
from walters_thermo.errors import (
    BracketFailure,
    DomainError,
    HypothesisViolation,
    NonConvergence,
)
from walters_thermo.logging_config import get_logger
from walters_thermo.numerics import geometric_sum, log_sum_exp, series_log
from walters_thermo.potential import Side, WaltersPotential, sup_f

logger = get_logger(__name__)

SMALLEST_EXCESS = 1e-300
MAX_BISECTIONS = 400


@dataclass(frozen=True)
class PressureSolution:
    """
    Attributes:
        t: Inverse temperature
        P: Pressure P(tf)
        epsilon: P - t*max(a, c), solved for directly; equals P - t*beta(f) when a = c
        iterations: Bracket halvings plus bisection steps
        residual: |G| at the returned root
        log_d: log of the D-series at q = 1
        log_b: log of the B-series at q = 1
    """

    t: float
    P: float
    epsilon: float
    iterations: int
    residual: float
    log_d: float
    log_b: float

    @property
    def excess(self) -> float:
        return self.epsilon


def pressure_function(f: WaltersPotential, t: float, excess: float) -> float:
    """G at P = t*max(a, c) + excess."""
    log_d = series_log(f, Side.D, 1, t, excess).log_value
    log_b = series_log(f, Side.B, 1, t, excess).log_value
    return log_d + log_b - 2.0 * t * f.max_ac - 2.0 * excess


@lru_cache(maxsize=512)
def _solve(f: WaltersPotential, t: float, tol: float) -> PressureSolution:
    def g(eps: float) -> float:
        return pressure_function(f, t, eps)

    upper = t * (sup_f(f) - f.max_ac) + math.log(2.0)
    eta = 1.0
    halvings = 0
    while g(eta) <= 0:
        eta /= 2.0
        halvings += 1
        if eta < SMALLEST_EXCESS:
            logger.error(f"No sign change of G for t={t}: G <= 0 down to excess {eta:.3e}")
            raise BracketFailure(
                f"no sign change of G(P) above t*max(a,c) for t={t}", module="pressure"
            )
    hi = upper if halvings == 0 else 2.0 * eta
    if halvings == 0 and g(hi) > 0:
        logger.error(f"G stays positive at the upper bracket {hi} for t={t}")
        raise BracketFailure(f"G(P) > 0 at the upper bracket for t={t}", module="pressure")
    logger.debug(f"Pressure bracket for t={t}: excess in [{eta:.6e}, {hi:.6e}] after {halvings} halvings")

    root, result = optimize.bisect(
        g, eta, hi,
        xtol=SMALLEST_EXCESS, rtol=4 * np.finfo(float).eps,
        maxiter=MAX_BISECTIONS, full_output=True, disp=False,
    )
    if not result.converged:
        logger.error(f"Bisection did not converge for t={t} after {result.iterations} iterations")
        raise NonConvergence(
            f"pressure bisection did not converge for t={t} ({result.flag})", module="pressure"
        )

    log_d = series_log(f, Side.D, 1, t, root).log_value
    log_b = series_log(f, Side.B, 1, t, root).log_value
    residual = abs(log_d + log_b - 2.0 * t * f.max_ac - 2.0 * root)
    if residual > tol:
        logger.warning(f"Pressure residual {residual:.3e} exceeds tol {tol:.1e} at t={t}")
    P = t * f.max_ac + root
    logger.debug(f"Solved t={t}: P={P:.15g}, excess={root:.6e}, residual={residual:.2e}")
    return PressureSolution(
        t=t, P=P, epsilon=root,
        iterations=halvings + result.iterations,
        residual=residual, log_d=log_d, log_b=log_b,
    )


def pressure(f: WaltersPotential, t: float, tol: Optional[float] = None) -> PressureSolution:
    """
    Solve the pressure equation at inverse temperature t.

    Args:
        f: The potential
        t: Inverse temperature, t > 0
        tol: Tolerance on |G(P)|; defaults to Config.PRESSURE_TOL

    Returns:
        PressureSolution

    Raises:
        DomainError: If t <= 0
        BracketFailure: If G has no sign change
        NonConvergence: If bisection stalls
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}", module="pressure")
    return _solve(f, float(t), Config.PRESSURE_TOL if tol is None else float(tol))


def epsilon(f: WaltersPotential, t: float, tol: Optional[float] = None) -> float:
    """
    eps_t = P(tf) - t*beta(f) under the standing hypothesis beta(f) = a = c.

    Raises:
        HypothesisViolation: If a != c
    """
    if f.a != f.c:
        raise HypothesisViolation(
            f"epsilon needs beta(f) = a = c, got a={f.a}, c={f.c}", module="pressure"
        )
    return pressure(f, t, tol).epsilon


def example_pressure_identity(f: WaltersPotential, t: float, horizon: int = 60) -> float:
    """
    |e^{t d_1 - P} + sum_{j>=1} e^{t(d_{1+j} + b_{1+j}) - (j+1)P} - 1| for the
    example potential, whose b and d are partial sums of a and c.
    """
    P = pressure(f, t).P
    exponents = [t * f.d_seq.value_at(1) - P]
    exponents += [t * (f.d_seq.value_at(1 + j) + f.b_seq.value_at(1 + j)) - (j + 1) * P for j in range(1, horizon)]
    exponents.append(t * (f.d + f.b) - P + geometric_sum(-P, horizon))
    return abs(math.expm1(log_sum_exp(exponents)))
