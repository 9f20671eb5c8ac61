"""
Finite-memory oracle: the depth-k Markov approximation of a Walters potential.

States are the 2^k words of length k, stored as integers with the first symbol
in the most significant bit. The approximate operator maps a function h of the
first k symbols to

    (L_k h)(u) = sum_{s in {0,1}} exp(t f_k(s u)) h((s << (k-1)) | (u >> 1)),

where f_k evaluates f on the (k+1)-word s·u extended to a full pattern. Power
iteration runs matrix-free in log scale since every state has exactly two
predecessors and two successors.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.special import logsumexp

from walters_thermo.config import Config
from walters_thermo.errors import NonConvergence, SpecValidationError
from walters_thermo.logging_config import get_logger
from walters_thermo.potential import WaltersPotential, Word, f_on_word

logger = get_logger(__name__)

CONSTANT_EXTENSION = "constant"
PERIODIC_EXTENSION = "periodic"
POWER_TOL = 1e-13
MAX_ITERATIONS = 200_000


def extended_value(f: WaltersPotential, w: Word, extension: str = CONSTANT_EXTENSION) -> float:
    """
    f on a point starting with w, completed either by continuing the last run
    forever or by repeating w periodically.
    """
    runs = w.runs
    symbol, first_len = runs[0]
    if len(runs) == 1:
        return f.a if symbol == 0 else f.c
    if extension == PERIODIC_EXTENSION:
        return f_on_word(f, Word(w.bits * 2))
    if first_len >= 2:
        return f.a_seq.value_at(first_len) if symbol == 0 else f.c_seq.value_at(first_len)
    if len(runs) >= 3:
        second_len = runs[1][1]
        return f.b_seq.value_at(second_len) if symbol == 0 else f.d_seq.value_at(second_len)
    return f.b if symbol == 0 else f.d


@dataclass(frozen=True)
class DepthKModel:
    """
    Depth-k approximation at inverse temperature t.

    Attributes:
        k: Memory depth
        t: Inverse temperature
        log_weights: Array of shape (2^k, 2); entry [u, s] is t*f_k(s·u)
        extension: How truncated words are completed
    """

    k: int
    t: float
    log_weights: np.ndarray
    extension: str = CONSTANT_EXTENSION

    @property
    def n_states(self) -> int:
        return 1 << self.k

    @classmethod
    def build(cls, f: WaltersPotential, t: float, k: int, extension: str = CONSTANT_EXTENSION) -> "DepthKModel":
        check_depth(k)
        if extension not in (CONSTANT_EXTENSION, PERIODIC_EXTENSION):
            raise SpecValidationError(f"unknown extension {extension!r}", module="oracle")
        n = 1 << k
        # Values depend only on the run structure of s·u; memoize by word.
        seen = {}
        weights = np.empty((n, 2), dtype=float)
        for u in range(n):
            tail = format(u, f"0{k}b")
            for s in (0, 1):
                bits = str(s) + tail
                if bits not in seen:
                    seen[bits] = t * extended_value(f, Word(bits), extension)
                weights[u, s] = seen[bits]
        return cls(k=k, t=t, log_weights=weights, extension=extension)

    def _successors(self) -> tuple[np.ndarray, np.ndarray]:
        u = np.arange(self.n_states)
        high = 1 << (self.k - 1)
        return u >> 1, high | (u >> 1)

    def apply(self, log_h: np.ndarray) -> np.ndarray:
        """log of L_k h."""
        succ0, succ1 = self._successors()
        return np.logaddexp(self.log_weights[:, 0] + log_h[succ0], self.log_weights[:, 1] + log_h[succ1])

    def apply_dual(self, log_nu: np.ndarray) -> np.ndarray:
        """log of nu L_k (the transposed action)."""
        v = np.arange(self.n_states)
        s = v >> (self.k - 1)
        mask = self.n_states - 1
        pred0 = (v << 1) & mask
        pred1 = pred0 | 1
        return np.logaddexp(
            self.log_weights[pred0, s] + log_nu[pred0],
            self.log_weights[pred1, s] + log_nu[pred1],
        )


def _power_iteration(step, n: int, label: str) -> tuple[float, np.ndarray]:
    """
    Iterate a positive log-linear map until the Collatz-Wielandt bounds meet.

    Returns:
        (log eigenvalue, log eigenvector normalized to log-sum zero)
    """
    x = np.zeros(n)
    for iteration in range(1, MAX_ITERATIONS + 1):
        y = step(x)
        ratio = y - x
        lo, hi = float(ratio.min()), float(ratio.max())
        x = y - logsumexp(y)
        if hi - lo < POWER_TOL:
            logger.debug(f"{label} power iteration converged in {iteration} steps")
            return 0.5 * (lo + hi), x
    logger.error(f"{label} power iteration stalled after {MAX_ITERATIONS} steps (gap {hi - lo:.3e})")
    raise NonConvergence(f"{label} power iteration did not converge", module="oracle")


@dataclass(frozen=True)
class OracleSolution:
    k: int
    t: float
    log_lambda: float
    log_stationary: np.ndarray


def check_depth(k: int) -> None:
    if k < 2:
        raise SpecValidationError(f"oracle depth must be >= 2, got {k}", module="oracle")
    if k > Config.MAX_DEPTH:
        raise SpecValidationError(
            f"oracle depth {k} exceeds the configured maximum {Config.MAX_DEPTH}", module="oracle"
        )


def _solve(f: WaltersPotential, t: float, k: int, extension: str) -> OracleSolution:
    check_depth(k)
    return _solve_cached(f, t, k, extension)


@lru_cache(maxsize=64)
def _solve_cached(f: WaltersPotential, t: float, k: int, extension: str) -> OracleSolution:
    model = DepthKModel.build(f, t, k, extension)
    log_lambda, log_h = _power_iteration(model.apply, model.n_states, f"depth-{k} right")
    _, log_nu = _power_iteration(model.apply_dual, model.n_states, f"depth-{k} left")
    log_pi = log_h + log_nu
    log_pi = log_pi - logsumexp(log_pi)
    logger.debug(f"Oracle k={k}, t={t}: log lambda={log_lambda:.15g}")
    return OracleSolution(k=k, t=t, log_lambda=log_lambda, log_stationary=log_pi)


def oracle_pressure(f: WaltersPotential, t: float, k: int, extension: str = CONSTANT_EXTENSION) -> float:
    """
    log of the dominant eigenvalue of the depth-k operator.

    Raises:
        NonConvergence: If power iteration does not settle
    """
    return _solve(f, float(t), k, extension).log_lambda


def oracle_cylinder(
    f: WaltersPotential, t: float, k: int, w: Union[Word, str], extension: str = CONSTANT_EXTENSION
) -> float:
    """Stationary probability of [w] under the depth-k model, for |w| <= k."""
    w = Word(w) if isinstance(w, str) else w
    if len(w) > k:
        raise SpecValidationError(f"word length {len(w)} exceeds oracle depth {k}", module="oracle")
    solution = _solve(f, float(t), k, extension)
    shift = k - len(w)
    lo = int(w.bits, 2) << shift
    hi = lo + (1 << shift)
    return float(math.exp(logsumexp(solution.log_stationary[lo:hi])))
