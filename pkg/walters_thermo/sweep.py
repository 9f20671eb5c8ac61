"""
Inverse-temperature grids and parallel evaluation over them.
"""
from typing import Callable, Optional, Sequence, TypeVar

import numpy as np
from joblib import Parallel, delayed

from walters_thermo.config import Config
from walters_thermo.errors import SpecValidationError
from walters_thermo.logging_config import get_logger

logger = get_logger(__name__)

T = TypeVar("T")


def parse_t_grid(text: str) -> list[float]:
    """
    Parse "A:B:N" (linear) or "A:B:N:log" into N strictly increasing positive values.

    Raises:
        SpecValidationError: On malformed or non-increasing grids
    """
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("lin", "log")):
        raise SpecValidationError(f"t-grid must look like A:B:N[:log], got {text!r}", module="cli")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise SpecValidationError(f"t-grid has non-numeric fields: {text!r}", module="cli")
    if start <= 0 or stop <= start or count < 1:
        raise SpecValidationError(f"t-grid needs 0 < A < B and N >= 1, got {text!r}", module="cli")
    if count == 1:
        return [start]
    if len(parts) == 4 and parts[3] == "log":
        grid = np.geomspace(start, stop, count)
    else:
        grid = np.linspace(start, stop, count)
    return [float(t) for t in grid]


def map_grid(fn: Callable[[float], T], grid: Sequence[float], n_jobs: Optional[int] = None) -> list[T]:
    """Evaluate fn at every grid point, in parallel threads, preserving grid order."""
    n_jobs = Config.THREADS if n_jobs is None else n_jobs
    if n_jobs == 1 or len(grid) < 2:
        return [fn(t) for t in grid]
    logger.debug(f"Sweeping {len(grid)} grid points on {n_jobs} threads")
    return Parallel(n_jobs=n_jobs, backend="threading")(delayed(fn)(t) for t in grid)
