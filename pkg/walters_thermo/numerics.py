"""
Log-domain summation of the pattern series.

Every positive quantity of size e^{O(t)} is carried as its natural log (a
LogValue, -inf encoding zero). The two pattern series

    D_q = sum_{j>=0} e^{t d_{q+j} + t (a_{q+1} + ... + a_{q+j}) - j P}
    B_q = same with (d, a) replaced by (b, c)

are summed exactly over the region where the tail corrections still matter and
in closed form beyond it. They are evaluated through the excess
eps = P - t*max(a, c) so that pressures very close to t*max(a, c) stay exact.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.special import logsumexp

from walters_thermo.config import Config
from walters_thermo.errors import DivergentSeries, DomainError
from walters_thermo.logging_config import get_logger
from walters_thermo.potential import Side, WaltersPotential

logger = get_logger(__name__)

LogValue = float
"""Natural log of a non-negative quantity; -inf encodes zero."""

MAX_EXACT_TERMS = 100_000


@dataclass(frozen=True)
class SeriesValue:
    """
    A summed pattern series.

    Attributes:
        log_value: log of the series
        truncation_bound: Bound on the relative error introduced by the closed-form tail
        exact_terms: Number of leading terms summed one by one
    """

    log_value: LogValue
    truncation_bound: float
    exact_terms: int


def log_sum_exp(terms: Iterable[LogValue]) -> LogValue:
    """Stable log of sum(exp(terms)); an empty stream gives -inf."""
    values = np.fromiter(terms, dtype=float)
    if values.size == 0 or np.all(np.isneginf(values)):
        return -math.inf
    return float(logsumexp(values))


def log1mexp(x: float) -> float:
    """log(1 - e^x) for x < 0."""
    if x >= 0:
        raise DomainError(f"log(1 - e^x) needs x < 0, got {x}", module="numerics")
    if x > -math.log(2):
        return math.log(-math.expm1(x))
    return math.log1p(-math.exp(x))


def geometric_sum(z: float, j1: int = 0) -> LogValue:
    """
    log of sum_{j>=j1} e^{j z} = j1*z - log(1 - e^z).

    Raises:
        DomainError: If z >= 0
    """
    if z >= 0:
        raise DomainError(f"geometric sum diverges for z={z}", module="numerics")
    if j1 < 0:
        raise DomainError(f"j1 must be non-negative, got {j1}", module="numerics")
    return j1 * z - log1mexp(z)


def weighted_geometric_sum(z: float, j1: int = 0) -> LogValue:
    """
    log of sum_{j>=j1} (j+1) e^{j z} = log(e^{j1 z} (j1/(1-e^z) + 1/(1-e^z)^2)).

    Raises:
        DomainError: If z >= 0
    """
    if z >= 0:
        raise DomainError(f"weighted geometric sum diverges for z={z}", module="numerics")
    if j1 < 0:
        raise DomainError(f"j1 must be non-negative, got {j1}", module="numerics")
    log_u = log1mexp(z)
    return j1 * z - 2.0 * log_u + math.log1p(j1 * math.exp(log_u))


def exact_horizon(f: WaltersPotential, side: Side, q: int, t: float, tol: float) -> int:
    """Smallest J past both prefixes whose remaining tail corrections are below tol."""
    head, run = f.branch(side)
    j = max(0, head.last_prefix_index + 1 - q, run.last_prefix_index - q)
    while j < MAX_EXACT_TERMS:
        drift = t * (head.correction_bound(q + j) + run.remainder_bound(q + j + 1))
        if drift <= tol:
            return j
        j += 1
    logger.warning(f"Series horizon capped at {MAX_EXACT_TERMS} terms (side={side.value}, q={q}, t={t})")
    return j


def series_log(
    f: WaltersPotential,
    side: Side,
    q: int,
    t: float,
    excess: float,
    weighted: bool = False,
    start: int = 0,
    series_tol: Optional[float] = None,
) -> SeriesValue:
    """
    log of sum_{j>=start} w_j e^{t head_{q+j} + t (run_{q+1} + ... + run_{q+j}) - j P}.

    P enters only through excess = P - t*max(a, c). The weight w_j is
    (j - start + 1) when weighted, else 1.

    Args:
        f: The potential
        side: Side.D sums over (d, a), Side.B over (b, c)
        q: Base index, q >= 1
        t: Inverse temperature, t > 0
        excess: P - t*max(a, c), must be positive
        weighted: Whether to include the linear weight
        start: First summation index
        series_tol: Absolute exponent drift below which the closed-form tail takes over

    Returns:
        SeriesValue with the log of the series and its relative error bound

    Raises:
        DivergentSeries: If excess <= 0
    """
    if excess <= 0:
        raise DivergentSeries(
            f"series diverges: P - t*max(a,c) = {excess} <= 0 (t={t})", module="numerics"
        )
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}", module="numerics")
    tol = Config.SERIES_TOL if series_tol is None else series_tol
    head, run = f.branch(side)
    m = f.max_ac
    z = t * (run.limit - m) - excess

    horizon = max(exact_horizon(f, side, q, t, tol), start)
    js = np.arange(start, horizon)
    exponents = np.array(
        [t * head.value_at(q + j) + t * run.deviation_sum(q, j) + j * z for j in js],
        dtype=float,
    )
    if weighted:
        exponents = exponents + np.log(js - start + 1.0)

    offset = t * (head.limit + run.tail_sum(q))
    if weighted:
        log_tail = offset + start * z + weighted_geometric_sum(z, horizon - start)
    else:
        log_tail = offset + geometric_sum(z, horizon)
    log_total = log_sum_exp(np.append(exponents, log_tail))

    drift = t * (head.correction_bound(q + horizon) + run.remainder_bound(q + horizon + 1))
    bound = math.expm1(drift) * math.exp(log_tail - log_total) if math.isfinite(drift) else math.inf
    return SeriesValue(log_value=log_total, truncation_bound=bound, exact_terms=len(js))


def pattern_series(
    f: WaltersPotential,
    side: Side,
    q: int,
    t: float,
    P: float,
    weighted: bool = False,
    series_tol: Optional[float] = None,
) -> SeriesValue:
    """
    The pattern series D_q (side D) or B_q (side B) at pressure P, optionally
    with weights (j+1).

    Raises:
        DivergentSeries: If P <= t*max(a, c)
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}", module="numerics")
    excess = P - t * f.max_ac
    if excess <= 0:
        raise DivergentSeries(
            f"series diverges: P={P} <= t*max(a,c)={t * f.max_ac}", module="numerics"
        )
    return series_log(f, side, q, t, excess, weighted=weighted, series_tol=series_tol)
