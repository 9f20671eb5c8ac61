"""
Gibbs cylinder measures mu_t([w]) for Walters potentials.

The base cylinders come from the S0/S1 ratios:

    mu([0]) = S0/(S0+S1),  mu([1]) = S1/(S0+S1),  mu([01]) = mu([10]) = 1/(S0+S1).

Longer words are reduced from the left with

    mu([w]) = mu([sigma w]) * exp(t f|_w + log h|_w - log h|_{sigma w} - P),

which needs f constant on [w] and h constant on [sigma w]. The two word shapes
where that fails are handled exactly: 01^k and 10^k by the shift-invariance swap
mu([0 1^k]) = mu([1^k 0]), pure runs by the run identities.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from walters_thermo.config import Config
from walters_thermo.eigen import EigenValues, h_on_word, h_values
from walters_thermo.errors import NonConvergence, ReductionFailure
from walters_thermo.logging_config import get_logger
from walters_thermo.numerics import LogValue, log_sum_exp, series_log
from walters_thermo.potential import Side, WaltersPotential, Word, f_on_word
from walters_thermo.pressure import pressure

logger = get_logger(__name__)

SUBTRACT = "subtract"
TAIL = "tail"
PURE_RUN_MODES = (SUBTRACT, TAIL)

CLAMP_WARNING = 1e-12
CROSS_CHECK_MAX_TERMS = 20_000


def s0_s1(f: WaltersPotential, t: float, mode: str = "series", tol: Optional[float] = None) -> tuple[LogValue, LogValue]:
    """
    log S0 and log S1 at inverse temperature t.

    Args:
        f: The potential
        t: Inverse temperature
        mode: "series" uses weighted/unweighted pattern series at q = 1;
            "alpha" sums 1 + sum_{j>=2} e^{-(j-1)P + t(a_2+...+a_j)} alpha_j/alpha_1
            (and the B-side analogue) term by term
        tol: Pressure tolerance

    Returns:
        (log S0, log S1)

    Raises:
        NonConvergence: If the term-by-term sum has not settled after its cap
    """
    solution = pressure(f, t, tol)
    if mode == "series":
        eps = solution.epsilon
        log_s0 = (series_log(f, Side.D, 1, t, eps, weighted=True).log_value
                  - series_log(f, Side.D, 1, t, eps).log_value)
        log_s1 = (series_log(f, Side.B, 1, t, eps, weighted=True).log_value
                  - series_log(f, Side.B, 1, t, eps).log_value)
        return log_s0, log_s1
    if mode == "alpha":
        e = h_values(f, t, tol=tol)
        return (_run_sum(f.a_seq, e.alpha, solution.P, t),
                _run_sum(f.c_seq, e.beta, solution.P, t))
    raise ValueError(f"unknown S0/S1 mode {mode!r}")


def _run_sum(run_seq, h, P: float, t: float) -> LogValue:
    log_h1 = h(1)
    total = 0.0
    for j in range(2, CROSS_CHECK_MAX_TERMS):
        term = -(j - 1) * P + t * run_seq.partial_sum(1, j - 1) + h(j) - log_h1
        total = float(np.logaddexp(total, term))
        if j > 8 and term < total - 45.0:
            return total
    logger.error(f"S0/S1 cross-check did not settle after {CROSS_CHECK_MAX_TERMS} terms at t={t}")
    raise NonConvergence(f"S0/S1 term-by-term sum did not settle at t={t}", module="gibbs")


@dataclass
class GibbsTable:
    """
    Base cylinders of mu_t and a per-word cache of reduced measures (log scale).
    """

    f: WaltersPotential
    t: float
    P: float
    eigen: EigenValues
    log_s0: LogValue
    log_s1: LogValue
    mu0: LogValue
    mu1: LogValue
    mu01: LogValue
    reduction_depth: int = 4
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def mu10(self) -> LogValue:
        return self.mu01

    def measure(self, w: Union[Word, str], pure_runs: str = SUBTRACT) -> LogValue:
        """log mu_t([w])."""
        if pure_runs not in PURE_RUN_MODES:
            raise ValueError(f"pure_runs must be one of {PURE_RUN_MODES}, got {pure_runs!r}")
        w = Word(w) if isinstance(w, str) else w
        return self._measure(w, pure_runs, 2 * len(w) + self.reduction_depth)

    def _measure(self, w: Word, mode: str, budget: int) -> LogValue:
        key = (w.bits, mode)
        if key in self.cache:
            return self.cache[key]
        if budget < 0:
            logger.error(f"Reduction budget exhausted at word {w} (t={self.t})")
            raise ReductionFailure(f"cannot reduce [{w}] within the configured depth", module="gibbs")

        if len(w) == 1:
            value = self.mu0 if w.bits == "0" else self.mu1
        elif w.is_pure_run():
            value = self._pure_run(w, mode)
        elif w.bits in ("01", "10"):
            value = self.mu01
        else:
            value = self._reduce(w, mode, budget)
        self.cache[key] = value
        return value

    def _reduce(self, w: Word, mode: str, budget: int) -> LogValue:
        f_w = f_on_word(self.f, w)
        if f_w is None:
            (symbol, first_len), (_, second_len) = w.runs[0], w.runs[1]
            if len(w.runs) != 2 or first_len != 1:
                raise ReductionFailure(f"f is not determined on [{w}]", module="gibbs")
            swapped = Word(str(1 - symbol) * second_len + str(symbol))
            return self._measure(swapped, mode, budget - 1)

        shifted = w.shift()
        h_w = h_on_word(self.eigen, w)
        h_shifted = h_on_word(self.eigen, shifted)
        if h_shifted is None:
            raise ReductionFailure(f"h is not determined on [{shifted}]", module="gibbs")
        base = self._measure(shifted, mode, budget - 1)
        if base == -math.inf:
            return base
        return base + self.t * f_w + h_w - h_shifted - self.P

    def _pure_run(self, w: Word, mode: str) -> LogValue:
        symbol, n = w.first_run()
        if mode == TAIL:
            side = Side.D if symbol == 0 else Side.B
            eps = self.eigen.excess
            weighted = series_log(self.f, side, 1, self.t, eps, weighted=True, start=n - 1).log_value
            plain = series_log(self.f, side, 1, self.t, eps).log_value
            return self.mu01 - plain + weighted

        other = str(1 - symbol)
        base = math.exp(self.mu0 if symbol == 0 else self.mu1)
        parts = [base] + [-math.exp(self.measure(str(symbol) * j + other)) for j in range(1, n)]
        total = math.fsum(parts)
        if total <= 0.0:
            if total < -CLAMP_WARNING:
                logger.warning(f"Clamped mu([{w}]) = {total:.3e} to 0 at t={self.t}")
            return -math.inf
        if base > 0 and total / base < 1e-8:
            logger.debug(f"Cancellation in mu([{w}]) at t={self.t}: kept {total / base:.2e} of mu([{symbol}])")
        return math.log(total)


@lru_cache(maxsize=128)
def _table(f: WaltersPotential, t: float, tol: Optional[float], reduction_depth: int) -> GibbsTable:
    solution = pressure(f, t, tol)
    eigen = h_values(f, t, tol=tol)
    log_s0, log_s1 = s0_s1(f, t, tol=tol)
    log_norm = log_sum_exp([log_s0, log_s1])
    logger.debug(f"Gibbs base cylinders at t={t}: log S0={log_s0:.12g}, log S1={log_s1:.12g}")
    return GibbsTable(
        f=f, t=t, P=solution.P, eigen=eigen,
        log_s0=log_s0, log_s1=log_s1,
        mu0=log_s0 - log_norm, mu1=log_s1 - log_norm, mu01=-log_norm,
        reduction_depth=reduction_depth,
    )


def top_cylinders(
    f: WaltersPotential, t: float, tol: Optional[float] = None, reduction_depth: Optional[int] = None
) -> GibbsTable:
    """
    Gibbs table at inverse temperature t with mu([0]), mu([1]) and mu([01]) filled in.

    Tables are shared per (f, t) so repeated cylinder queries reuse the word cache.
    """
    depth = Config.REDUCTION_DEPTH if reduction_depth is None else reduction_depth
    return _table(f, float(t), tol, depth)


def cylinder_measure(
    f: WaltersPotential, t: float, w: Union[Word, str], pure_runs: str = SUBTRACT, tol: Optional[float] = None
) -> LogValue:
    """
    log mu_t([w]).

    Args:
        f: The potential
        t: Inverse temperature
        w: Cylinder word
        pure_runs: "subtract" for mu([0^n]) = mu([0]) - sum_{j<n} mu([0^j 1]),
            "tail" for the equivalent sum over j >= n
        tol: Pressure tolerance

    Raises:
        ReductionFailure: If the word cannot be reduced to the base cylinders
    """
    return top_cylinders(f, t, tol).measure(w, pure_runs)


def ratio_log(f: WaltersPotential, t: float, tol: Optional[float] = None) -> float:
    """log(mu_t([0]) / mu_t([1])) = log S0 - log S1."""
    table = top_cylinders(f, t, tol)
    return table.log_s0 - table.log_s1
