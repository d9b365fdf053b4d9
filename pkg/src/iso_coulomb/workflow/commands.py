"""Subcommands — thin orchestration over the numerical modules.

Each ``cmd_*`` turns a ``RunConfig`` into a result object (a ``Table``,
a verification document or a figure manifest) without touching the
filesystem; ``write_table`` and ``write_document`` do the output.

Per-gamma work runs concurrently (``asyncio.to_thread`` tasks joined with
``asyncio.gather``) and is merged in input order, so the output does not
depend on scheduling.
"""

from __future__ import annotations

import asyncio
import logging
import sys
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
import pandas as pd
from numpy.typing import NDArray
from pydantic import BaseModel

from iso_coulomb.config import (
    DEFAULT_FIGURES,
    FigureConfig,
    GridConfig,
    OutputFormat,
    RunConfig,
)
from iso_coulomb.errors import InvalidParameterError, SingularParameterError
from iso_coulomb.factorization.core import (
    missing_state,
    missing_state_is_normalizable,
    transformed_state,
)
from iso_coulomb.models.base import FactorizationParams, GammaMode, QuantumNumbers, RadialGrid
from iso_coulomb.models.potentials import PotentialKind, create_potential
from iso_coulomb.models.report import FigureManifest, SpectrumReport, TableDocument
from iso_coulomb.spectral.oracle import discretize, lowest_eigenvalues, verify_isospectral
from iso_coulomb.spectral.quadrature import radial_inner_product
from iso_coulomb.special.functions import critical_gamma
from iso_coulomb.utils.formatting import (
    CSV_DELIMITER,
    FLOAT_FORMAT,
    LINE_TERMINATOR,
    format_gamma,
    gamma_column,
    sha256_file,
)
from iso_coulomb.validation.rules import run_identity_checks

logger = logging.getLogger(__name__)

T = TypeVar("T")
U = TypeVar("U")


# ── Helpers ─────────────────────────────────────────────────────────

async def _gather_in_order(func: Callable[[T], U], items: Sequence[T]) -> list[U]:
    return list(await asyncio.gather(*(asyncio.to_thread(func, item) for item in items)))


def map_in_order(func: Callable[[T], U], items: Sequence[T]) -> list[U]:
    """Apply ``func`` to every item concurrently; results keep input order.

    Runs its own event loop. Called from a thread that already has a running
    loop, it uses a thread pool instead, since ``asyncio.run`` cannot nest.
    """
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(_gather_in_order(func, items))
    with ThreadPoolExecutor() as pool:
        return list(pool.map(func, items))


def _family(config: RunConfig, *, allow_singular: bool) -> list[FactorizationParams]:
    """Validated (l, γ) pairs of a family subcommand."""
    if not config.gammas:
        raise InvalidParameterError("At least one gamma is required.")
    family = [FactorizationParams(l=config.l, gamma=g) for g in config.gammas]
    for params in family:
        if params.mode is GammaMode.SINGULAR and not allow_singular:
            raise SingularParameterError(
                f"gamma={params.gamma!r} is singular for l={params.l} "
                f"(0 <= gamma < {critical_gamma(params.l)!r}); use --allow-singular."
            )
    return family


def _grid(config: GridConfig) -> RadialGrid:
    return RadialGrid(r_min=config.r_min, r_max=config.r_max, n_points=config.n_points)


def _params_summary(config: RunConfig) -> dict[str, Any]:
    return {
        "subcommand": config.subcommand.value,
        "l": config.l,
        "gammas": list(config.gammas),
        "r_min": config.grid.r_min,
        "r_max": config.grid.r_max,
        "n_points": config.grid.n_points,
        "k": config.k,
    }


# =====================================================================
# Tables
# =====================================================================

@dataclass
class Table:
    """Column-major numeric table with JSON metadata."""

    columns: list[str]
    values: NDArray[np.float64]  # (rows, columns)
    params: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.values.ndim != 2 or self.values.shape[1] != len(self.columns):
            raise ValueError("values must be 2-D with one column per label.")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, columns=self.columns)

    def to_document(self) -> TableDocument:
        data = [
            [float(v) if np.isfinite(v) else None for v in row]
            for row in self.values.tolist()
        ]
        return TableDocument(
            params=self.params, columns=self.columns, data=data, diagnostics=self.diagnostics
        )


def write_table(table: Table, fmt: OutputFormat, path: Path | None) -> None:
    """CSV (header row, ``%.17g`` cells, ``\\n`` endings) or JSON document."""
    if fmt is OutputFormat.JSON:
        write_document(table.to_document(), path)
        return
    frame = table.to_frame()
    if path is None:
        frame.to_csv(sys.stdout, sep=CSV_DELIMITER, index=False, float_format=FLOAT_FORMAT,
                     lineterminator=LINE_TERMINATOR)
    else:
        frame.to_csv(path, sep=CSV_DELIMITER, index=False, float_format=FLOAT_FORMAT,
                     lineterminator=LINE_TERMINATOR, encoding="utf-8")
        logger.info("Wrote %d rows to %s.", len(frame), path)


def write_document(document: BaseModel, path: Path | None) -> None:
    text = document.model_dump_json(indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")
        logger.info("Wrote %s.", path)


# =====================================================================
# potential
# =====================================================================

def _potential_table(
    l: int, family: list[FactorizationParams], r: NDArray[np.float64], allow_singular: bool
) -> tuple[list[str], list[NDArray[np.float64]]]:
    def column(params: FactorizationParams) -> NDArray[np.float64]:
        deformed = create_potential(
            PotentialKind.DEFORMED_FAMILY.value, params=params, allow_singular=allow_singular
        )
        return np.asarray(deformed(r))

    columns = ["r", "V_coulomb"] + [gamma_column("V", p.gamma) for p in family]
    # H_{l-1} reference: -2/r + l(l-1)/r²
    reference = create_potential(PotentialKind.COULOMB_EFFECTIVE.value, l=l - 1)
    values = [r, np.asarray(reference(r))] + map_in_order(column, family)
    return columns, values


def cmd_potential(config: RunConfig) -> Table:
    """Ṽ_{l-1} on the grid for every γ, next to the Coulomb reference."""
    family = _family(config, allow_singular=config.allow_singular)
    r = _grid(config.grid).points()
    columns, values = _potential_table(config.l, family, r, config.allow_singular)
    return Table(
        columns=columns,
        values=np.column_stack(values),
        params=_params_summary(config),
        diagnostics={"modes": {format_gamma(p.gamma): p.mode.value for p in family}},
    )


# =====================================================================
# states
# =====================================================================

def _state_norm(params: FactorizationParams) -> float | None:
    if not missing_state_is_normalizable(params):
        return None

    def state(x: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(missing_state(params, x))

    return radial_inner_product(state, state)


def _state_columns(
    params: FactorizationParams, r: NDArray[np.float64], highest_n: int
) -> tuple[list[str], list[NDArray[np.float64]]]:
    label = gamma_column("R", params.gamma)
    if not missing_state_is_normalizable(params):
        label += "[non-normalizable]"
    columns, values = [label], [np.asarray(missing_state(params, r))]
    for n in range(params.l + 1, highest_n + 1):
        qn = QuantumNumbers(n=n, l=params.l)
        columns.append(gamma_column(f"R{n}", params.gamma))
        values.append(np.asarray(transformed_state(params, qn, r)))
    return columns, values


def cmd_states(config: RunConfig) -> Table:
    """Missing state R̃_{l,l-1} per γ, plus transformed states n = l+1..k."""
    family = _family(config, allow_singular=False)
    r = _grid(config.grid).points()

    def per_gamma(params: FactorizationParams) -> tuple[list[str], list[NDArray[np.float64]], Any]:
        columns, values = _state_columns(params, r, config.k)
        return columns, values, _state_norm(params)

    columns, values = ["r"], [r]
    norms: dict[str, float | None] = {}
    for params, (cols, vals, norm) in zip(family, map_in_order(per_gamma, family)):
        columns.extend(cols)
        values.extend(vals)
        norms[format_gamma(params.gamma)] = norm
    return Table(
        columns=columns,
        values=np.column_stack(values),
        params=_params_summary(config),
        diagnostics={
            "norms": norms,
            "normalizable": {
                format_gamma(p.gamma): missing_state_is_normalizable(p) for p in family
            },
        },
    )


# =====================================================================
# spectrum
# =====================================================================

def cmd_spectrum(config: RunConfig) -> Table:
    """The k lowest raw oracle eigenvalues of Ṽ_{l-1} per γ on the given grid."""
    family = _family(config, allow_singular=False)
    grid = _grid(config.grid)

    def per_gamma(params: FactorizationParams) -> list[float]:
        potential = create_potential(PotentialKind.DEFORMED_FAMILY.value, params=params)
        return lowest_eigenvalues(discretize(potential, grid), config.k)

    spectra = map_in_order(per_gamma, family)
    columns = ["index"] + [gamma_column("E", p.gamma) for p in family]
    values = [np.arange(1, config.k + 1, dtype=np.float64)] + [np.asarray(s) for s in spectra]
    return Table(
        columns=columns,
        values=np.column_stack(values),
        params=_params_summary(config),
        diagnostics={"step": grid.step, "certified": True},
    )


# =====================================================================
# verify
# =====================================================================

_VERIFY_COLUMNS = ["gamma", "n", "eigenvalue", "target", "residual", "coarse", "fine"]


def cmd_verify(config: RunConfig) -> TableDocument:
    """Per-γ isospectrality reports with identity-check violations attached."""
    family = _family(config, allow_singular=False)
    grid = _grid(config.grid)

    def per_gamma(params: FactorizationParams) -> tuple[SpectrumReport, list[dict[str, Any]]]:
        report = verify_isospectral(params, grid, config.k, config.tolerance)
        violations = [v.to_dict() for v in run_identity_checks(params, report)]
        return report, violations

    results = map_in_order(per_gamma, family)
    data: list[list[float | None]] = []
    for report, _ in results:
        for row in zip(
            report.principal_numbers, report.eigenvalues, report.targets,
            report.residuals, report.coarse_eigenvalues, report.fine_eigenvalues,
        ):
            data.append([report.gamma, *(float(v) for v in row)])

    return TableDocument(
        params=_params_summary(config) | {"tolerance": config.tolerance},
        columns=list(_VERIFY_COLUMNS),
        data=data,
        diagnostics={
            "passed": all(report.passed for report, _ in results),
            "reports": [report.model_dump(mode="json") for report, _ in results],
            "violations": {
                format_gamma(report.gamma): violations for report, violations in results
            },
        },
    )


# =====================================================================
# figures
# =====================================================================

def _figure_gammas(figures: FigureConfig) -> list[float]:
    return [critical_gamma(1) if g is None else g for g in figures.gammas]


def cmd_figures(config: RunConfig, figures: FigureConfig = DEFAULT_FIGURES) -> FigureManifest:
    """Write fig1.csv (potentials), fig2.csv (ground states) and manifest.json.

    ``config.output_path`` is the target directory.
    """
    out_dir = config.output_path or Path(".")
    if out_dir.exists() and not out_dir.is_dir():
        raise InvalidParameterError(f"figures needs a directory, got file {out_dir}.")
    out_dir.mkdir(parents=True, exist_ok=True)

    r = np.linspace(figures.r_min, figures.r_max, figures.n_points)
    family = [FactorizationParams(l=1, gamma=g) for g in _figure_gammas(figures)]
    regular = [p for p in family if p.mode is GammaMode.REGULAR]

    columns, values = _potential_table(1, family, r, allow_singular=False)
    fig1 = Table(columns=columns, values=np.column_stack(values))

    def ground_state(params: FactorizationParams) -> NDArray[np.float64]:
        return np.asarray(missing_state(params, r))

    fig2 = Table(
        columns=["r"] + [gamma_column("R", p.gamma) for p in regular],
        values=np.column_stack([r] + map_in_order(ground_state, regular)),
    )
    norms = dict(zip(
        (gamma_column("R", p.gamma) for p in regular),
        map_in_order(_state_norm, regular),
    ))

    files: dict[str, str] = {}
    for name, table in (("fig1.csv", fig1), ("fig2.csv", fig2)):
        path = out_dir / name
        write_table(table, OutputFormat.CSV, path)
        files[name] = sha256_file(path)

    manifest = FigureManifest(
        params={
            "l": 1,
            "gammas": [p.gamma for p in family],
            "r_min": figures.r_min,
            "r_max": figures.r_max,
            "n_points": figures.n_points,
        },
        files=files,
        norms=norms,
    )
    write_document(manifest, out_dir / "manifest.json")
    return manifest
