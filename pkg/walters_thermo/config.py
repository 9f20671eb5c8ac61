"""
Configuration module for walters-thermo.
Loads and validates environment variables.
"""
import logging
import os
from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()


def _float_env(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")


def _int_env(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


class Config:
    """Application configuration from environment variables."""

    # Parallel workers for t-grid sweeps
    THREADS: int = _int_env("WALTERS_THERMO_THREADS", "1")

    # Report store (SQLAlchemy URL)
    DATABASE_URL: str = os.getenv("WALTERS_THERMO_DATABASE_URL", "sqlite:///walters_thermo.db")

    LOG_LEVEL: str = os.getenv("WALTERS_THERMO_LOG_LEVEL", "INFO").upper()

    # Tolerance on G(P) = log D + log B - 2P
    PRESSURE_TOL: float = _float_env("WALTERS_THERMO_PRESSURE_TOL", "1e-12")

    # Relative size of the neglected tail correction before switching to closed forms
    SERIES_TOL: float = _float_env("WALTERS_THERMO_SERIES_TOL", "1e-15")

    # Eigenfunction values precomputed for q <= Q_MAX
    Q_MAX: int = _int_env("WALTERS_THERMO_Q_MAX", "64")

    # Memory-depth ceiling for the transfer-matrix oracle (2^k states)
    MAX_DEPTH: int = _int_env("WALTERS_THERMO_MAX_DEPTH", "16")

    # Extra reduction steps allowed when resolving a cylinder word
    REDUCTION_DEPTH: int = _int_env("WALTERS_THERMO_REDUCTION_DEPTH", "4")

    @classmethod
    def validate(cls) -> None:
        """Validate configuration values."""
        if cls.THREADS < 1:
            raise ValueError("WALTERS_THERMO_THREADS must be at least 1")

        if not cls.DATABASE_URL:
            raise ValueError("WALTERS_THERMO_DATABASE_URL must not be empty")

        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError("WALTERS_THERMO_LOG_LEVEL must be a standard logging level name")

        if not 0 < cls.PRESSURE_TOL < 1:
            raise ValueError("WALTERS_THERMO_PRESSURE_TOL must lie in (0, 1)")

        if not 0 < cls.SERIES_TOL < 1:
            raise ValueError("WALTERS_THERMO_SERIES_TOL must lie in (0, 1)")

        if cls.Q_MAX < 2:
            raise ValueError("WALTERS_THERMO_Q_MAX must be at least 2")

        if not 2 <= cls.MAX_DEPTH <= 24:
            raise ValueError("WALTERS_THERMO_MAX_DEPTH must lie in [2, 24]")

        if cls.REDUCTION_DEPTH < 0:
            raise ValueError("WALTERS_THERMO_REDUCTION_DEPTH must be non-negative")

    @classmethod
    def log_level(cls) -> int:
        """Numeric logging level for LOG_LEVEL."""
        return getattr(logging, cls.LOG_LEVEL)


# Validate configuration on import
Config.validate()
