"""Exception hierarchy.

Two families: invalid input (``InvalidParameterError``, a ``ValueError``)
and numerical breakdown (``NumericalError``, an ``ArithmeticError``).
The CLI maps the first to exit code 2 and the second to exit code 3.
"""

from __future__ import annotations


class IsoCoulombError(Exception):
    """Base class for all package errors."""

    kind: str = "error"


# ── Invalid input ───────────────────────────────────────────────────

class InvalidParameterError(IsoCoulombError, ValueError):
    """A precondition on quantum numbers, grids or counts is violated."""

    kind = "invalid_config"


class SingularParameterError(InvalidParameterError):
    """gamma lies in the singular band [0, critical_gamma(l)) or the mode is unsupported."""

    kind = "singular_gamma"


# ── Numerical breakdown ─────────────────────────────────────────────

class NumericalError(IsoCoulombError, ArithmeticError):
    """A computation failed to produce a trustworthy number."""

    kind = "numerical_failure"


class DenominatorVanishingError(NumericalError):
    """gamma - I_l(r) vanished at a sampled radius."""

    kind = "denominator_vanishing"

    def __init__(self, message: str, radius: float) -> None:
        super().__init__(message)
        self.radius = radius


class CriticalGammaOverflowError(NumericalError):
    """(2l)! (l/2)^(2l+1) exceeds the float range."""

    kind = "overflow"


class QuadratureError(NumericalError):
    """Adaptive quadrature exhausted its subdivision budget."""

    kind = "quadrature_failure"


class ConvergenceError(NumericalError):
    """An iterative solver did not converge."""

    kind = "non_convergence"


class CertificationError(NumericalError):
    """A Sturm count disagrees with the claimed eigenvalue index."""

    kind = "certification_failure"
