"""Core data models: quantum numbers, family parameters, grids and sampled functions.

The parameter models are frozen pydantic models, so they validate on
construction and can be shared between threads.  ``RadialFunction`` is
a plain frozen dataclass around ``numpy`` arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator


# =====================================================================
# Quantum numbers
# =====================================================================

class QuantumNumbers(BaseModel):
    """Labels (n, l) of a bound hydrogen state R_nl."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=1, description="Principal quantum number.")
    l: int = Field(..., ge=0, description="Angular momentum.")

    @model_validator(mode="after")
    def _check_ladder(self) -> QuantumNumbers:
        if self.n < self.l + 1:
            raise ValueError(f"n must be >= l + 1, got n={self.n}, l={self.l}.")
        return self

    @property
    def eigenvalue(self) -> float:
        """λ_n = -1/n²."""
        return -1.0 / (self.n * self.n)


# =====================================================================
# Family parameters
# =====================================================================

class GammaMode(str, Enum):
    """Regularity class of the family parameter γ_l."""

    REGULAR = "regular"
    CRITICAL = "critical"
    SINGULAR = "singular"


class FactorizationParams(BaseModel):
    """The pair (l, γ_l) selecting one member of the deformed family.

    ``gamma = ±inf`` is accepted and stands for the classical particular
    solution β_l = l/r - 1/l.  ``mode`` is derived, never supplied.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    l: int = Field(..., ge=1, description="Angular momentum of the factorized channel.")
    gamma: float = Field(..., description="Integration constant of the Riccati solution.")

    @field_validator("gamma", mode="after")
    @classmethod
    def _not_nan(cls, v: float) -> float:
        if math.isnan(v):
            raise ValueError("gamma must not be NaN.")
        return v

    @computed_field  # type: ignore[prop-decorator]
    @property
    def mode(self) -> GammaMode:
        from iso_coulomb.factorization.core import classify_gamma

        return classify_gamma(self.l, self.gamma)

    @property
    def is_classical(self) -> bool:
        """True for γ = ±inf (no correction term)."""
        return math.isinf(self.gamma)


# =====================================================================
# Grids
# =====================================================================

class RadialGrid(BaseModel):
    """Uniform grid r_i = r_min + i h, i = 0..n_points-1."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    r_min: float = Field(..., gt=0.0)
    r_max: float = Field(...)
    n_points: int = Field(..., ge=3)

    @model_validator(mode="after")
    def _check_order(self) -> RadialGrid:
        if not self.r_max > self.r_min:
            raise ValueError(f"r_max ({self.r_max}) must exceed r_min ({self.r_min}).")
        return self

    @classmethod
    def uniform(cls, step: float, r_max: float) -> RadialGrid:
        """Origin-anchored grid: r_min = h and the last point is r_max."""
        n_points = int(round(r_max / step))
        return cls(r_min=r_max / n_points, r_max=r_max, n_points=n_points)

    @property
    def step(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @property
    def anchored_at_origin(self) -> bool:
        return math.isclose(self.r_min, self.step, rel_tol=1e-9)

    def points(self) -> NDArray[np.float64]:
        return np.linspace(self.r_min, self.r_max, self.n_points)

    def refined(self) -> RadialGrid:
        """The grid with half the spacing over the same domain."""
        if self.anchored_at_origin:
            return RadialGrid.uniform(self.step / 2.0, self.r_max)
        return RadialGrid(r_min=self.r_min, r_max=self.r_max, n_points=2 * self.n_points - 1)


# =====================================================================
# Sampled radial functions
# =====================================================================

MEASURE_4PI_R2 = "4pi*r^2*dr"


@dataclass(frozen=True)
class RadialFunction:
    """Samples of R(r) on a strictly increasing positive grid.

    Inner products use the Hilbert-space measure 4π r² dr with the
    local spacing of the grid as quadrature weight.
    """

    grid: NDArray[np.float64]
    values: NDArray[np.float64]
    measure: str = field(default=MEASURE_4PI_R2)

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length.")
        if grid.size and (grid[0] <= 0 or np.any(np.diff(grid) <= 0)):
            raise ValueError("grid must be strictly increasing and positive.")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite at every grid point.")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def weights(self) -> NDArray[np.float64]:
        return 4.0 * np.pi * self.grid**2 * np.gradient(self.grid)

    def inner(self, other: RadialFunction) -> float:
        if not np.array_equal(self.grid, other.grid):
            raise ValueError("Inner product needs functions sampled on the same grid.")
        return float(np.sum(self.weights() * self.values * other.values))

    def norm(self) -> float:
        return math.sqrt(self.inner(self))

    def sign_changes(self, rel_threshold: float = 1e-10) -> int:
        """Interior sign changes, ignoring samples below ``rel_threshold`` of the peak."""
        cutoff = rel_threshold * float(np.max(np.abs(self.values), initial=0.0))
        signs = np.sign(self.values[np.abs(self.values) > cutoff])
        return int(np.count_nonzero(signs[1:] != signs[:-1]))
