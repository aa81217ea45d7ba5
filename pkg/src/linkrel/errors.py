"""Exception hierarchy shared by all linkrel modules."""

from __future__ import annotations


class ReliabilityError(Exception):
    """Base class for every error raised by linkrel."""


class DomainError(ReliabilityError, ValueError):
    """An argument lies outside the domain of the function (e.g. t < 0)."""


class HazardUndefinedError(ReliabilityError, ArithmeticError):
    """Survival underflowed to zero, so f(t)/R(t) has no value."""

    def __init__(self, t: float, message: str | None = None):
        self.t = float(t)
        super().__init__(message or f"hazard undefined at t={self.t!r}: survival is zero")


class NoSolutionError(ReliabilityError, ValueError):
    """Moments cannot be matched by the requested distribution family."""


class QuadratureError(ReliabilityError, ArithmeticError):
    """Adaptive quadrature failed to converge. Carries the partial result."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ModelValidationError(ReliabilityError, ValueError):
    """A system model violates one or more structural invariants.

    ``violations`` holds every problem found, not only the first one.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnknownComponentError(ReliabilityError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown component {name!r}")

    def __str__(self) -> str:
        return self.args[0]
