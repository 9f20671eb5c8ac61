"""
Explicit eigenfunction of the Ruelle operator L_{tf}, normalized by h(0^inf) = 1.

    alpha_q = h(0^q 1 z),  beta_q = h(1^q 0 z),  beta_inf = h(1^inf).

All values are held as logs.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from walters_thermo.config import Config
from walters_thermo.logging_config import get_logger
from walters_thermo.numerics import LogValue, log1mexp, log_sum_exp, series_log
from walters_thermo.potential import PatternKind, PatternPoint, Side, WaltersPotential, Word, pattern_value
from walters_thermo.pressure import pressure

logger = get_logger(__name__)


@dataclass(frozen=True)
class EigenValues:
    """
    Eigenfunction values at one inverse temperature.

    alpha(q) and beta(q) are precomputed for q <= q_max and evaluated from the
    same closed forms beyond.
    """

    f: WaltersPotential
    t: float
    P: float
    excess: float
    beta_inf: LogValue
    alpha_table: tuple
    beta_table: tuple

    @property
    def q_max(self) -> int:
        return len(self.alpha_table)

    def alpha(self, q: int) -> LogValue:
        if q < 1:
            raise ValueError(f"alpha needs q >= 1, got {q}")
        if q <= len(self.alpha_table):
            return self.alpha_table[q - 1]
        return _log_alpha(self.f, self.t, self.excess, q)

    def beta(self, q: int) -> LogValue:
        if q < 1:
            raise ValueError(f"beta needs q >= 1, got {q}")
        if q <= len(self.beta_table):
            return self.beta_table[q - 1]
        return _log_beta(self.f, self.t, self.excess, self.beta_inf, q)

    def on_pattern(self, p: PatternPoint) -> LogValue:
        """log h on a pattern class; h depends only on the first run."""
        symbol, length = p.first_run()
        if length is None:
            return 0.0 if symbol == 0 else self.beta_inf
        return self.alpha(length) if symbol == 0 else self.beta(length)


def _log_alpha(f: WaltersPotential, t: float, excess: float, q: int) -> LogValue:
    log_d = series_log(f, Side.D, q, t, excess).log_value
    return log1mexp(t * (f.a - f.max_ac) - excess) - t * f.d + log_d


def _log_beta(f: WaltersPotential, t: float, excess: float, beta_inf: LogValue, q: int) -> LogValue:
    log_b = series_log(f, Side.B, q, t, excess).log_value
    return beta_inf + log1mexp(t * (f.c - f.max_ac) - excess) - t * f.b + log_b


def h_values(f: WaltersPotential, t: float, q_max: Optional[int] = None, tol: Optional[float] = None) -> EigenValues:
    """
    Eigenfunction values of L_{tf}.

    Args:
        f: The potential
        t: Inverse temperature
        q_max: Number of alpha/beta values precomputed; defaults to Config.Q_MAX
        tol: Pressure tolerance

    Returns:
        EigenValues in log scale
    """
    q_max = Config.Q_MAX if q_max is None else q_max
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    return _eigen_values(f, float(t), q_max, tol)


@lru_cache(maxsize=256)
def _eigen_values(f: WaltersPotential, t: float, q_max: int, tol: Optional[float]) -> EigenValues:
    solution = pressure(f, t, tol)
    eps = solution.epsilon
    P = solution.P

    log_d1 = series_log(f, Side.D, 1, t, eps).log_value
    beta_inf = (
        t * (f.b - f.d)
        + log1mexp(t * (f.a - f.max_ac) - eps)
        - P
        - log1mexp(t * (f.c - f.max_ac) - eps)
        + log_d1
    )
    alphas = tuple(_log_alpha(f, t, eps, q) for q in range(1, q_max + 1))
    betas = tuple(_log_beta(f, t, eps, beta_inf, q) for q in range(1, q_max + 1))
    logger.debug(f"Eigenfunction at t={t}: log beta_inf={beta_inf:.12g}, log alpha_1={alphas[0]:.12g}")
    return EigenValues(
        f=f, t=t, P=P, excess=eps, beta_inf=beta_inf, alpha_table=alphas, beta_table=betas,
    )


def h_on_word(e: EigenValues, w: Word) -> Optional[LogValue]:
    """log h on [w], or None for pure runs where h is not constant."""
    if w.is_pure_run():
        return None
    symbol, length = w.first_run()
    return e.alpha(length) if symbol == 0 else e.beta(length)


_RESIDUAL_KINDS = (PatternKind.ZERO_INF, PatternKind.ONE_INF, PatternKind.ZERO_RUN, PatternKind.ONE_RUN)


def eigen_residual(f: WaltersPotential, t: float, p: PatternPoint, e: Optional[EigenValues] = None) -> float:
    """
    Relative residual |L h(x) - e^P h(x)| / (e^P h(x)) at a pattern class.

    Both preimages 0x and 1x of a pattern point lie in pattern classes on which
    f and h are constant, so the check is exact up to rounding.
    """
    if p.kind not in _RESIDUAL_KINDS:
        raise ValueError(f"eigen residual is checked on 0^inf, 1^inf and run classes, not {p.kind.value}")
    e = h_values(f, t) if e is None else e
    terms = []
    for symbol in (0, 1):
        pre = p.prepend(symbol)
        terms.append(t * pattern_value(f, pre) + e.on_pattern(pre))
    lhs = log_sum_exp(terms)
    rhs = e.P + e.on_pattern(p)
    return abs(math.expm1(lhs - rhs))
