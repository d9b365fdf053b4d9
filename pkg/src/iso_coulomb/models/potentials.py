"""Evaluable radial potentials.

Three kinds are provided:

1. **CoulombEffective** — l(l+1)/r² - 2/r, the hydrogen channel potential.
2. **DeformedFamily** — Ṽ_{l-1} for one (l, γ_l); singular γ is refused
   unless explicitly overridden.
3. **CriticalL1Closed** — the closed critical member of the l = 1 family.

All implement ``PotentialSpec`` and act on u(r) = r R(r), i.e. they are
the V of -u'' + V u = λ u.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, ClassVar

from numpy.typing import ArrayLike

from iso_coulomb.errors import InvalidParameterError, SingularParameterError
from iso_coulomb.factorization.core import (
    Radius,
    coulomb_effective,
    critical_potential_l1,
    potential_tilde,
    singular_pole,
)
from iso_coulomb.models.base import FactorizationParams, GammaMode

logger = logging.getLogger(__name__)


class PotentialKind(str, Enum):
    """Available potential families."""

    COULOMB_EFFECTIVE = "coulomb_effective"
    DEFORMED_FAMILY = "deformed_family"
    CRITICAL_L1_CLOSED = "critical_l1_closed"


# =====================================================================
# Protocol
# =====================================================================

class PotentialSpec(ABC):
    """A named radial potential, evaluable at any r > 0."""

    kind: ClassVar[PotentialKind]

    @abstractmethod
    def evaluate(self, r: ArrayLike) -> Radius:
        """V(r) at one radius or an array of radii."""
        ...

    @property
    @abstractmethod
    def label(self) -> str:
        """Short human-readable name."""
        ...

    def __call__(self, r: ArrayLike) -> Radius:
        return self.evaluate(r)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label})"


# =====================================================================
# Kinds
# =====================================================================

class CoulombEffective(PotentialSpec):
    """Hydrogen channel potential l(l+1)/r² - 2/r."""

    kind = PotentialKind.COULOMB_EFFECTIVE

    def __init__(self, l: int) -> None:
        if l < 0:
            raise InvalidParameterError(f"Angular momentum must be >= 0, got {l}.")
        self.l = l

    def evaluate(self, r: ArrayLike) -> Radius:
        return coulomb_effective(self.l, r)

    @property
    def label(self) -> str:
        return f"coulomb l={self.l}"


class DeformedFamily(PotentialSpec):
    """Ṽ_{l-1} for one family member.

    Args:
        params: The (l, γ_l) pair.
        allow_singular: Permit 0 <= γ < γ_c; evaluation then fails only
            at the pole itself.
    """

    kind = PotentialKind.DEFORMED_FAMILY

    def __init__(self, params: FactorizationParams, allow_singular: bool = False) -> None:
        if params.mode is GammaMode.SINGULAR:
            if not allow_singular:
                raise SingularParameterError(
                    f"gamma={params.gamma!r} is singular for l={params.l}; "
                    "pass allow_singular to evaluate away from the pole."
                )
            logger.warning(
                "Singular override: gamma=%r (l=%d) has a pole at r=%.6g.",
                params.gamma, params.l, singular_pole(params),
            )
        self.params = params
        self.allow_singular = allow_singular

    def evaluate(self, r: ArrayLike) -> Radius:
        return potential_tilde(self.params, r)

    @property
    def label(self) -> str:
        return f"deformed l={self.params.l} gamma={self.params.gamma!r} ({self.params.mode.value})"


class CriticalL1Closed(PotentialSpec):
    """-2/r + 16r(r+1)/(2r²+2r+1)²."""

    kind = PotentialKind.CRITICAL_L1_CLOSED

    def evaluate(self, r: ArrayLike) -> Radius:
        return critical_potential_l1(r)

    @property
    def label(self) -> str:
        return "critical closed form l=1"


# =====================================================================
# Factory
# =====================================================================

def create_potential(kind: str, **kwargs: Any) -> PotentialSpec:
    """Create a potential by kind name.

    Args:
        kind: One of the ``PotentialKind`` values.
        **kwargs: Forwarded to the constructor.
    """
    kinds: dict[str, type[PotentialSpec]] = {
        PotentialKind.COULOMB_EFFECTIVE.value: CoulombEffective,
        PotentialKind.DEFORMED_FAMILY.value: DeformedFamily,
        PotentialKind.CRITICAL_L1_CLOSED.value: CriticalL1Closed,
    }
    cls = kinds.get(kind.lower())
    if cls is None:
        raise InvalidParameterError(f"Unknown potential kind: {kind!r}. Choose from {list(kinds)}.")
    return cls(**kwargs)
