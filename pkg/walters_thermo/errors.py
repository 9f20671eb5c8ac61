"""
Exception hierarchy for walters-thermo.

Validation errors (bad potentials, violated hypotheses, unusable fits) map to
CLI exit code 2; numerical failures map to exit code 3.
"""
from typing import Optional


class WaltersThermoError(Exception):
    """Base class; `module` names the library module that raised."""

    exit_code = 3

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        self.module = module

    def __str__(self) -> str:
        message = super().__str__()
        if self.module:
            return f"[{self.module}] {message}"
        return message


class SpecValidationError(WaltersThermoError, ValueError):
    """The input potential or request is invalid."""

    exit_code = 2


class HypothesisViolation(SpecValidationError):
    """A standing hypothesis (a = c = beta(f), maximizing-measure form) fails."""


class NotNonPositive(SpecValidationError):
    """The potential is outside the non-positive class."""


class DegenerateFit(SpecValidationError):
    """A slope fit was requested on fewer than three distinct, increasing t."""


class NumericalFailure(WaltersThermoError, ArithmeticError):
    """A numerical procedure failed."""

    exit_code = 3


class DomainError(NumericalFailure):
    """A closed form was evaluated outside its domain."""


class DivergentSeries(NumericalFailure):
    """A pattern series was evaluated at P <= t*max(a, c)."""


class BracketFailure(NumericalFailure):
    """No sign change of the pressure function was found."""


class NonConvergence(NumericalFailure):
    """An iterative method hit its iteration cap."""


class ReductionFailure(NumericalFailure):
    """A cylinder word could not be reduced to the base cylinders."""


class NoCandidate(NumericalFailure):
    """No candidate value of A satisfies the limiting pressure equation."""


class MultipleCandidates(NumericalFailure):
    """More than one distinct candidate value of A satisfies the equation."""
