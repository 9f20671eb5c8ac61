"""
Zero-temperature analysis of Walters potentials.

Under the standing hypothesis beta(f) = a = c, the excess eps_t = P(tf) - t*beta(f)
decays like e^{tA}. This module finds A by screening its four candidate closed
forms against the limiting pressure equation

    M_D(1) + M_B(1) = 2 beta,   M_side(q) = max{ sup_branch(side, q), limit_term(side, q) - A },

evaluates the selected calibrated subaction V, screens the non-positive class and
its measure-selection verdict, and fits finite-t rates.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import stats

from walters_thermo.errors import (
    DegenerateFit,
    HypothesisViolation,
    MultipleCandidates,
    NoCandidate,
    NotNonPositive,
)
from walters_thermo.gibbs import cylinder_measure
from walters_thermo.logging_config import get_logger
from walters_thermo.numerics import exact_horizon
from walters_thermo.potential import (
    PatternPoint,
    Side,
    WaltersPotential,
    Word,
    pattern_value,
)
from walters_thermo.pressure import epsilon
from walters_thermo.sweep import map_grid

logger = get_logger(__name__)

SUP_TOL = 1e-15
HYPOTHESIS_TOL = 1e-12
CANDIDATE_TOL = 1e-10


def _require_equal_limits(f: WaltersPotential) -> float:
    if f.a != f.c:
        raise HypothesisViolation(
            f"beta(f) = a = c is required, got a={f.a}, c={f.c}", module="zerotemp"
        )
    return f.a


@dataclass(frozen=True)
class BranchSup:
    """
    Supremum over j >= 0 of g(j) = head_{q+j} + (run_{q+1} + ... + run_{q+j}) - j*beta.

    Attributes:
        value: The supremum
        argmax: First j attaining it, or None when it is attained only as j -> inf
        limit_value: lim g(j)
        horizon: Index past which g(j) is within tolerance of its limit
    """

    value: float
    argmax: Optional[int]
    limit_value: float
    horizon: int

    @property
    def attained_in_limit(self) -> bool:
        return self.argmax is None


def sup_branch(f: WaltersPotential, side: Side, q: int = 1, tol: float = SUP_TOL) -> BranchSup:
    """
    sup_j g(j) for the D-branch (head d, run a) or the B-branch (head b, run c).

    Raises:
        HypothesisViolation: If a != c
    """
    beta = _require_equal_limits(f)
    head, run = f.branch(side)
    horizon = exact_horizon(f, side, q, 1.0, tol)
    drift = run.limit - beta
    values = np.array(
        [head.value_at(q + j) + run.deviation_sum(q, j) + j * drift for j in range(horizon + 1)]
    )
    j0 = int(np.argmax(values))
    best = float(values[j0])
    limit = head.limit + run.tail_sum(q) if drift == 0 else -math.inf
    tails_vanish = head.tail_coeff == 0.0 and run.tail_coeff == 0.0

    if best > limit + tol or (best >= limit - tol and (j0 < horizon or tails_vanish)):
        return BranchSup(value=best, argmax=j0, limit_value=limit, horizon=horizon)
    return BranchSup(value=limit, argmax=None, limit_value=limit, horizon=horizon)


@dataclass(frozen=True)
class HypothesisPass:
    sup_d: float
    sup_b: float


@dataclass(frozen=True)
class PeriodicAttainer:
    """(0^{j0+1} 1^{j1+1})^inf attains (or exceeds, when excess > 0) beta(f)."""

    j0: int
    j1: int
    excess: float = 0.0


def check_max_hypothesis(f: WaltersPotential) -> Union[HypothesisPass, PeriodicAttainer]:
    """
    Screen the maximizing-measure hypothesis: sup_D(1) + sup_B(1) < 2 beta, or
    equality attained only in the limit.
    """
    beta = _require_equal_limits(f)
    sup_d = sup_branch(f, Side.D, 1)
    sup_b = sup_branch(f, Side.B, 1)
    gap = sup_d.value + sup_b.value - 2.0 * beta
    if gap < -HYPOTHESIS_TOL:
        return HypothesisPass(sup_d.value, sup_b.value)
    if sup_d.argmax is not None and sup_b.argmax is not None:
        return PeriodicAttainer(sup_d.argmax, sup_b.argmax, max(gap, 0.0))
    if gap > HYPOTHESIS_TOL:
        j0 = sup_d.horizon if sup_d.argmax is None else sup_d.argmax
        j1 = sup_b.horizon if sup_b.argmax is None else sup_b.argmax
        return PeriodicAttainer(j0, j1, gap)
    return HypothesisPass(sup_d.value, sup_b.value)


def beta_max(f: WaltersPotential) -> float:
    """
    beta(f) under the standing hypothesis beta(f) = a = c.

    Raises:
        HypothesisViolation: If a != c
    """
    beta = _require_equal_limits(f)
    screen = check_max_hypothesis(f)
    if isinstance(screen, PeriodicAttainer):
        logger.warning(
            f"Periodic orbit (0^{screen.j0 + 1} 1^{screen.j1 + 1})^inf reaches beta(f)={beta}; "
            f"zero-temperature formulas do not apply to {f.name}"
        )
    return beta


def branch_limit(f: WaltersPotential, side: Side, q: int, A: float) -> float:
    """lim (1/t) log of the q-th pattern series: max{sup_branch, limit term - A}."""
    head, run = f.branch(side)
    return max(sup_branch(f, side, q).value, head.limit + run.tail_sum(q) - A)


def limiting_equation(f: WaltersPotential, A: float) -> float:
    """Left side of M_D(1) + M_B(1) = 2 beta at a trial A."""
    return branch_limit(f, Side.D, 1, A) + branch_limit(f, Side.B, 1, A)


def compute_A(f: WaltersPotential) -> tuple[float, str]:
    """
    The unique non-positive candidate that solves the limiting pressure equation.

    Returns:
        (A, label) with label one of "Zero", "A1", "A2", "A3"

    Raises:
        HypothesisViolation: If a != c or a periodic orbit attains beta(f)
        NoCandidate: If no candidate solves the equation
        MultipleCandidates: If distinct candidates solve it
    """
    beta = _require_equal_limits(f)
    screen = check_max_hypothesis(f)
    if isinstance(screen, PeriodicAttainer):
        raise HypothesisViolation(
            f"periodic orbit with j0={screen.j0}, j1={screen.j1} attains beta(f)", module="zerotemp"
        )
    sum_a = f.a_seq.tail_sum(1)
    sum_c = f.c_seq.tail_sum(1)
    candidates = [
        ("Zero", 0.0),
        ("A1", (f.d + f.b) / 2 + sum_a / 2 + sum_c / 2 - beta),
        ("A2", f.b + sum_c + screen.sup_d - 2 * beta),
        ("A3", f.d + sum_a + screen.sup_b - 2 * beta),
    ]
    matches = []
    for label, value in candidates:
        residual = limiting_equation(f, value) - 2 * beta
        logger.debug(f"Candidate {label}={value:.15g}: residual {residual:.3e}")
        if value <= CANDIDATE_TOL and abs(residual) <= CANDIDATE_TOL:
            if not any(abs(value - seen) <= CANDIDATE_TOL for _, seen in matches):
                matches.append((label, value))
    if not matches:
        logger.error(f"No candidate for A solves the limiting equation for {f.name}")
        raise NoCandidate(f"no candidate value of A fits {f.name}", module="zerotemp")
    if len(matches) > 1:
        logger.error(f"Several candidates for A fit {f.name}: {matches}")
        raise MultipleCandidates(f"distinct candidates {matches} all fit", module="zerotemp")
    label, value = matches[0]
    return value, label


def is_nonpositive(f: WaltersPotential) -> bool:
    """a = c = 0, b_n = b < 0 and d_n = d < 0 constant, all a_n and c_n negative."""
    return (
        f.a == 0.0 and f.c == 0.0
        and f.b_seq.is_constant() and f.b < 0
        and f.d_seq.is_constant() and f.d < 0
        and f.a_seq.all_below(0.0) and f.c_seq.all_below(0.0)
    )


def nonpositive_case(f: WaltersPotential) -> int:
    """
    Which branch of the non-positive closed form applies (1, 2 or 3).

    Raises:
        NotNonPositive: If f is outside the class
    """
    if not is_nonpositive(f):
        raise NotNonPositive(f"{f.name} is not a non-positive potential", module="zerotemp")
    sum_a = f.a_seq.tail_sum(1)
    sum_c = f.c_seq.tail_sum(1)
    if sum_a <= f.b + f.d + sum_c:
        return 1
    if sum_c <= f.b + f.d + sum_a:
        return 2
    return 3


def nonpositive_A(f: WaltersPotential) -> float:
    """Closed form of A on the non-positive class."""
    case = nonpositive_case(f)
    sum_a = f.a_seq.tail_sum(1)
    sum_c = f.c_seq.tail_sum(1)
    if case == 1:
        return f.b + f.d + sum_c
    if case == 2:
        return f.b + f.d + sum_a
    return (f.b + f.d) / 2 + sum_a / 2 + sum_c / 2


class Subaction:
    """
    The calibrated subaction V selected by (1/t) log h_t, as a function on pattern classes.
    """

    def __init__(self, f: WaltersPotential, A: float):
        self.f = f
        self.A = A
        self.beta = _require_equal_limits(f)
        self._m_d1 = branch_limit(f, Side.D, 1, A)

    def zero_run(self, q: int) -> float:
        """V(0^q 1 z)."""
        return self.A - self.f.d + branch_limit(self.f, Side.D, q, self.A)

    def one_run(self, q: int) -> float:
        """V(1^q 0 z)."""
        return -self.f.d - self.beta + self.A + self._m_d1 + branch_limit(self.f, Side.B, q, self.A)

    def one_inf(self) -> float:
        """V(1^inf)."""
        return self.f.b - self.f.d - self.beta + self._m_d1

    def tail_forms(self) -> dict:
        """Limits of V(0^q 1 z) and V(1^q 0 z) as q -> inf."""
        m_d = max(self.f.d, self.f.d - self.A)
        m_b = max(self.f.b, self.f.b - self.A)
        return {
            "0^q1z (q->inf)": self.A - self.f.d + m_d,
            "1^q0z (q->inf)": -self.f.d - self.beta + self.A + self._m_d1 + m_b,
        }

    def __call__(self, p: PatternPoint) -> float:
        symbol, length = p.first_run()
        if length is None:
            return 0.0 if symbol == 0 else self.one_inf()
        return self.zero_run(length) if symbol == 0 else self.one_run(length)


def subaction(f: WaltersPotential, A: float, p: PatternPoint) -> float:
    """V at a pattern class."""
    return Subaction(f, A)(p)


def calibration_patterns(q_max: int) -> list[PatternPoint]:
    points = [PatternPoint.zero_inf(), PatternPoint.one_inf()]
    points += [PatternPoint.zero_run(q) for q in range(1, q_max + 1)]
    points += [PatternPoint.one_run(q) for q in range(1, q_max + 1)]
    return points


def calibration_residual(f: WaltersPotential, V: Callable[[PatternPoint], float], q_max: int = 30) -> float:
    """max over pattern points y of |V(y) - max_{sigma x = y}(f(x) + V(x)) + beta(f)|."""
    beta = _require_equal_limits(f)
    worst = 0.0
    for y in calibration_patterns(q_max):
        best = max(pattern_value(f, y.prepend(s)) + V(y.prepend(s)) for s in (0, 1))
        worst = max(worst, abs(V(y) - best + beta))
    return worst


class Selection(str, Enum):
    DELTA0 = "Delta0"
    DELTA1 = "Delta1"
    MIXED = "MixedOrUndetermined"


@dataclass(frozen=True)
class SelectionVerdict:
    """
    Attributes:
        verdict: Which Dirac mass the Gibbs states select, if decided
        in_class: Whether f is a non-positive potential
        sum_a: a_2 + a_3 + ...
        sum_c: c_2 + c_3 + ...
        rhs_one: b + d + sum_c (compared with sum_a)
        rhs_zero: b + d + sum_a (compared with sum_c)
    """

    verdict: Selection
    in_class: bool
    sum_a: float
    sum_c: float
    rhs_one: float
    rhs_zero: float


def select_measure(f: WaltersPotential) -> SelectionVerdict:
    """Measure-selection verdict on the non-positive class."""
    sum_a = f.a_seq.tail_sum(1)
    sum_c = f.c_seq.tail_sum(1)
    rhs_one = f.b + f.d + sum_c
    rhs_zero = f.b + f.d + sum_a
    in_class = is_nonpositive(f)
    if in_class and sum_a < rhs_one:
        verdict = Selection.DELTA1
    elif in_class and sum_c < rhs_zero:
        verdict = Selection.DELTA0
    else:
        verdict = Selection.MIXED
    return SelectionVerdict(verdict, in_class, sum_a, sum_c, rhs_one, rhs_zero)


@dataclass(frozen=True)
class SlopeFit:
    """
    Least-squares fit of log X_t against t.

    Attributes:
        slope: Estimate of lim (1/t) log X_t
        intercept: Fitted intercept
        r_squared: Coefficient of determination
        residuals: Fit residuals per grid point
        per_point: (1/t) log X_t per grid point
        ts: The grid
        log_values: log X_t per grid point
    """

    slope: float
    intercept: float
    r_squared: float
    residuals: tuple
    per_point: tuple
    ts: tuple = ()
    log_values: tuple = ()


def numeric_slope(values: Sequence[tuple[float, float]]) -> SlopeFit:
    """
    Fit log X_t = slope * t + intercept.

    Raises:
        DegenerateFit: With fewer than three points, non-increasing t or non-finite logs
    """
    if len(values) < 3:
        raise DegenerateFit(f"slope fit needs at least 3 points, got {len(values)}", module="zerotemp")
    ts = np.array([t for t, _ in values], dtype=float)
    ys = np.array([y for _, y in values], dtype=float)
    if np.any(np.diff(ts) <= 0):
        raise DegenerateFit("slope fit needs strictly increasing t", module="zerotemp")
    if not np.all(np.isfinite(ys)):
        raise DegenerateFit("slope fit got a non-finite log value", module="zerotemp")
    fit = stats.linregress(ts, ys)
    residuals = ys - (fit.slope * ts + fit.intercept)
    return SlopeFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        residuals=tuple(float(r) for r in residuals),
        per_point=tuple(float(y / t) for t, y in zip(ts, ys)),
        ts=tuple(float(t) for t in ts),
        log_values=tuple(float(y) for y in ys),
    )


def cylinder_rate(
    f: WaltersPotential, w: Union[Word, str], t_grid: Sequence[float], n_jobs: Optional[int] = None
) -> SlopeFit:
    """Fitted rate of (1/t) log mu_t([w]) over the grid."""
    logs = map_grid(lambda t: cylinder_measure(f, t, w), t_grid, n_jobs)
    return numeric_slope(list(zip(t_grid, logs)))


def epsilon_rate(f: WaltersPotential, t_grid: Sequence[float], n_jobs: Optional[int] = None) -> SlopeFit:
    """Fitted rate of (1/t) log eps_t over the grid."""
    logs = map_grid(lambda t: math.log(epsilon(f, t)), t_grid, n_jobs)
    return numeric_slope(list(zip(t_grid, logs)))


def psi(f: WaltersPotential, t: float, A: Optional[float] = None) -> float:
    """log eps_t - t*A."""
    if A is None:
        A, _ = compute_A(f)
    return math.log(epsilon(f, t)) - t * A


@dataclass
class LimitReport:
    """
    Zero-temperature summary of a potential.

    Attributes:
        beta: beta(f)
        A: Exponential rate of eps_t
        A_case: Which candidate produced A
        V: Subaction values by pattern label
        selection: Measure-selection verdict
        calibration_residual: Worst calibration defect over the pattern set
        rate_estimates: Fitted rates by label
    """

    beta: float
    A: float
    A_case: str
    V: dict
    selection: SelectionVerdict
    calibration_residual: float
    rate_estimates: dict = field(default_factory=dict)


def limit_report(
    f: WaltersPotential,
    q_max: int = 10,
    t_grid: Optional[Sequence[float]] = None,
    words: Sequence[str] = (),
    n_jobs: Optional[int] = None,
) -> LimitReport:
    """
    Assemble A, V, the selection verdict and, given a t-grid, rate estimates.
    """
    beta = beta_max(f)
    A, case = compute_A(f)
    V = Subaction(f, A)
    values = {PatternPoint.zero_inf().label(): 0.0, PatternPoint.one_inf().label(): V.one_inf()}
    for q in range(1, q_max + 1):
        values[PatternPoint.zero_run(q).label()] = V.zero_run(q)
    for q in range(1, q_max + 1):
        values[PatternPoint.one_run(q).label()] = V.one_run(q)
    values.update(V.tail_forms())
    report = LimitReport(
        beta=beta, A=A, A_case=case, V=values,
        selection=select_measure(f),
        calibration_residual=calibration_residual(f, V, q_max),
    )
    if t_grid:
        report.rate_estimates["epsilon"] = epsilon_rate(f, t_grid, n_jobs)
        for w in words:
            report.rate_estimates[w] = cylinder_rate(f, w, t_grid, n_jobs)
    return report

