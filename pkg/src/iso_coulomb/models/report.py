"""Result documents: spectrum reports, tabular documents and figure manifests.

Every document is a pydantic model whose field order is the canonical
JSON order, so ``model_validate_json(s).model_dump_json(indent=2) == s``.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GridDiagnostics(BaseModel):
    """Discretisation bookkeeping of one verification run."""

    model_config = ConfigDict(extra="forbid")

    step: float = Field(..., description="Coarse grid spacing h.")
    refined_step: float = Field(..., description="Spacing of the halved grid.")
    r_max: float = Field(..., description="Outer Dirichlet radius.")
    n_points: int = Field(..., description="Coarse grid size.")
    convergence_order: list[float | None] = Field(
        default_factory=list,
        description="Per level: log2(|E_h - T| / |E_{h/2} - T|), null when undefined.",
    )


class SpectrumReport(BaseModel):
    """Oracle eigenvalues of one deformed potential against -1/n² targets."""

    model_config = ConfigDict(extra="forbid")

    l: int
    gamma: float
    mode: str
    eigenvalues: list[float] = Field(..., description="Richardson-extrapolated values.")
    coarse_eigenvalues: list[float]
    fine_eigenvalues: list[float]
    targets: list[float]
    principal_numbers: list[int] = Field(..., description="n of each target -1/n².")
    residuals: list[float]
    tolerance: float
    passed: bool
    certified: bool = Field(..., description="Every eigenvalue confirmed by Sturm counts.")
    diagnostics: GridDiagnostics

    @model_validator(mode="after")
    def _check_invariants(self) -> SpectrumReport:
        if any(b <= a for a, b in zip(self.eigenvalues, self.eigenvalues[1:])):
            raise ValueError("eigenvalues must be strictly ascending.")
        if any(r < 0 for r in self.residuals):
            raise ValueError("residuals must be non-negative.")
        return self


class TableDocument(BaseModel):
    """JSON form of a table: ``{params, columns, data, diagnostics}``."""

    model_config = ConfigDict(extra="forbid")

    params: dict[str, Any] = Field(default_factory=dict)
    columns: list[str]
    data: list[list[float | None]]
    diagnostics: dict[str, Any] = Field(default_factory=dict)


class FigureManifest(BaseModel):
    """Parameters and checksums of one ``figures`` emission."""

    model_config = ConfigDict(extra="forbid")

    params: dict[str, Any]
    files: dict[str, str] = Field(..., description="File name -> SHA-256 hex digest.")
    norms: dict[str, float | None] = Field(
        default_factory=dict,
        description="fig2 column -> quadrature norm (null when not normalisable).",
    )
