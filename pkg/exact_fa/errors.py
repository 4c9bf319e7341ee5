"""Exception hierarchy shared by the algebra kernel, the fitters and the CLI."""

from __future__ import annotations

from typing import Any, Dict, Optional


class ExactFAError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ExactFAError, ValueError):
    """An input violates a precondition (zero polynomial, wrong shape, ...)."""


class StructuralError(DomainError):
    """Objects from different rings (arity mismatch) were combined."""


# Constructor arguments go to ``Exception.__init__`` unchanged so that errors raised in
# worker processes unpickle in the parent.


class SingularCovariance(DomainError):
    """The covariance matrix has zero determinant."""

    def __init__(self, message: str = "covariance matrix is singular") -> None:
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.message}; consider a ridge term S + lambda*I (--ridge)"


class SingularSigma(DomainError):
    """The model covariance LL^T + Psi is not invertible."""


class ResourceExceeded(ExactFAError):
    """A configured budget (basis size, degree, reductions, terms, seconds) was exhausted."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, diagnostics)
        self.message = message
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def __str__(self) -> str:
        if not self.diagnostics:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in sorted(self.diagnostics.items()))
        return f"{self.message} ({details})"


class PrecisionFailure(ExactFAError):
    """Interval refinement could not decide a generator's sign."""

    def __init__(self, generator: str, rounds: int) -> None:
        super().__init__(generator, rounds)
        self.generator = generator
        self.rounds = rounds

    def __str__(self) -> str:
        return f"precision stalled after {self.rounds} rounds on generator {self.generator}"


class EmptySample(ExactFAError):
    """Every random slice of a positive-dimensional variety came back empty."""


__all__ = [
    "DomainError",
    "EmptySample",
    "ExactFAError",
    "PrecisionFailure",
    "ResourceExceeded",
    "SingularCovariance",
    "SingularSigma",
    "StructuralError",
]
