"""Run configuration — single entry point for numerical settings and CLI runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class Subcommand(str, Enum):
    """Available CLI subcommands."""

    POTENTIAL = "potential"
    STATES = "states"
    SPECTRUM = "spectrum"
    VERIFY = "verify"
    FIGURES = "figures"


class OutputFormat(str, Enum):
    """Tabular output encodings."""

    CSV = "csv"
    JSON = "json"


# ── Numerical tolerances ───────────────────────────────────────────
CRITICAL_RTOL = 1e-12
DENOMINATOR_TOL = 1e-14
QUADRATURE_ABS_TOL = 1e-12
QUADRATURE_REL_TOL = 1e-12
QUADRATURE_TAIL_FRACTION = 1e-14
STURM_TOL = 1e-10
CERTIFICATION_OFFSET = 1e-9
INVERSE_ITERATION_STEPS = 50
# Outer Dirichlet radius needed for level n: LEVEL_RADIUS_FACTOR * n²
LEVEL_RADIUS_FACTOR = 4.0


@dataclass(frozen=True)
class GridConfig:
    """Uniform radial grid parameters.

    ``r_min`` defaults to the step itself so that the Dirichlet node
    sits at the origin.
    """

    r_min: float = 0.02
    r_max: float = 60.0
    n_points: int = 3000

    @property
    def step(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)


@dataclass(frozen=True)
class VerificationConfig:
    """Settings of the isospectrality check.

    Attributes:
        step: Coarse grid spacing; one halving is always computed.
        r_max: Outer Dirichlet radius.
        k: Number of eigenvalues compared.
        tolerance: Absolute residual accepted per eigenvalue.
    """

    step: float = 0.02
    r_max: float = 60.0
    k: int = 4
    tolerance: float = 1e-5


@dataclass(frozen=True)
class FigureConfig:
    """Canonical parameter set of the reproducible figure data."""

    r_min: float = 0.01
    r_max: float = 15.0
    n_points: int = 1500
    # ``None`` stands for the critical value of l = 1
    gammas: tuple[float | None, ...] = (0.251, 0.3, 0.5, 1.0, 5.0, -1.0, None)


DEFAULT_VERIFICATION = VerificationConfig()
DEFAULT_FIGURES = FigureConfig()


@dataclass
class RunConfig:
    """Complete configuration of one CLI invocation.

    Attributes:
        subcommand: Which table or report to produce.
        l: Angular momentum of the factorized channel (the new potential
            belongs to channel ``l - 1``).
        gammas: Family parameters, processed in input order.
        grid: Sampling grid for tables, or the coarse oracle grid.
        k: Eigenvalue / state count.
        output_format: ``csv`` or ``json``.
        output_path: Target file (``figures``: target directory).
            ``None`` writes to standard output.
        allow_singular: Evaluate singular gammas away from their pole.
        tolerance: Residual tolerance of ``verify``.
    """

    subcommand: Subcommand
    l: int = 1
    gammas: list[float] = field(default_factory=lambda: [1.0])
    grid: GridConfig = field(default_factory=GridConfig)
    k: int = 4
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Path | None = None
    allow_singular: bool = False
    tolerance: float = DEFAULT_VERIFICATION.tolerance
