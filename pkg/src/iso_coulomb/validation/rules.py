"""Identity checks — the construction's algebra expressed as Python predicates.

Each rule samples the analytic functions and returns a list of
``Violation`` objects; an empty list means the identity holds to its
tolerance.  ``run_identity_checks`` is what ``verify`` attaches to its
report diagnostics.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from iso_coulomb.factorization.core import (
    apply_A_plus,
    beta,
    critical_potential_l1,
    missing_state,
    missing_state_is_normalizable,
    potential_tilde,
    superpotential_deriv,
)
from iso_coulomb.models.base import FactorizationParams, GammaMode
from iso_coulomb.models.report import SpectrumReport

logger = logging.getLogger(__name__)

_RICCATI_TOL = 1e-9
_ANNIHILATION_TOL = 1e-9
_CRITICAL_LIMIT_TOL = 1e-10


@dataclass
class Violation:
    """A single failed identity."""

    rule_name: str
    severity: str  # "error" | "warning"
    message: str
    context: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _sample_radii(r_min: float = 1e-2, r_max: float = 30.0, count: int = 50) -> np.ndarray:
    return np.geomspace(r_min, r_max, count)


def check_riccati(params: FactorizationParams, radii: np.ndarray | None = None) -> list[Violation]:
    """-β' + β² = l(l+1)/r² - 2/r + 1/l², scaled by 1 + β²."""
    r = _sample_radii() if radii is None else radii
    l = params.l
    b = np.asarray(beta(params, r))
    db = np.asarray(superpotential_deriv(params, r))
    rhs = l * (l + 1) / r**2 - 2.0 / r + 1.0 / l**2
    scaled = np.abs(-db + b**2 - rhs) / (1.0 + b**2)
    worst = int(np.argmax(scaled))
    if scaled[worst] > _RICCATI_TOL:
        return [Violation(
            rule_name="riccati",
            severity="error",
            message=(
                f"Riccati residual {scaled[worst]:.3e} exceeds {_RICCATI_TOL:.0e} "
                f"at r={r[worst]:.6g}."
            ),
            context={"radius": float(r[worst]), "residual": float(scaled[worst])},
        )]
    return []


def check_missing_state_annihilation(
    params: FactorizationParams,
    radii: np.ndarray | None = None,
) -> list[Violation]:
    """A_l⁺ R̃ = 0, with dR̃/dr from a five-point stencil (independent of β)."""
    if not missing_state_is_normalizable(params):
        return []
    r = np.linspace(0.2, 15.0, 40) if radii is None else radii
    h = 1e-3
    f = np.asarray(missing_state(params, r))
    df = (
        -np.asarray(missing_state(params, r + 2 * h)) + 8 * np.asarray(missing_state(params, r + h))
        - 8 * np.asarray(missing_state(params, r - h)) + np.asarray(missing_state(params, r - 2 * h))
    ) / (12 * h)
    residual = np.abs(np.asarray(apply_A_plus(params, f, df, r)))
    scale = float(np.max(np.abs(df) + np.abs(f) / r))
    worst = int(np.argmax(residual))
    if residual[worst] > _ANNIHILATION_TOL * scale:
        return [Violation(
            rule_name="missing_state_annihilation",
            severity="error",
            message=f"A+ R~ = {residual[worst]:.3e} at r={r[worst]:.6g} (scale {scale:.3e}).",
            context={"radius": float(r[worst]), "residual": float(residual[worst])},
        )]
    return []


def check_critical_limit(
    params: FactorizationParams,
    radii: np.ndarray | None = None,
) -> list[Violation]:
    """The l = 1 critical member equals its closed form."""
    if params.l != 1 or params.mode is not GammaMode.CRITICAL:
        return []
    r = np.linspace(1e-2, 20.0, 2000) if radii is None else radii
    diff = np.abs(np.asarray(potential_tilde(params, r)) - np.asarray(critical_potential_l1(r)))
    worst = int(np.argmax(diff))
    if diff[worst] > _CRITICAL_LIMIT_TOL:
        return [Violation(
            rule_name="critical_limit",
            severity="error",
            message=f"Critical potential deviates by {diff[worst]:.3e} at r={r[worst]:.6g}.",
            context={"radius": float(r[worst]), "deviation": float(diff[worst])},
        )]
    return []


def check_spectrum_residuals(report: SpectrumReport) -> list[Violation]:
    """Flag every level whose extrapolated residual exceeds the tolerance."""
    violations = []
    for n, value, target, residual in zip(
        report.principal_numbers, report.eigenvalues, report.targets, report.residuals
    ):
        if residual > report.tolerance:
            violations.append(Violation(
                rule_name="isospectral_level",
                severity="error",
                message=(
                    f"Level n={n}: {value:.12g} vs target {target:.12g} "
                    f"(residual {residual:.3e} > {report.tolerance:.0e})."
                ),
                context={"n": n, "residual": residual},
            ))
    return violations


# ── Master runner ───────────────────────────────────────────────────

def run_identity_checks(
    params: FactorizationParams,
    report: SpectrumReport | None = None,
) -> list[Violation]:
    """Run every applicable identity check for one family member.

    Returns:
        Flat list of all violations found.
    """
    violations: list[Violation] = []
    violations.extend(check_riccati(params))
    violations.extend(check_missing_state_annihilation(params))
    violations.extend(check_critical_limit(params))
    if report is not None:
        violations.extend(check_spectrum_residuals(report))

    if violations:
        errors = sum(1 for v in violations if v.severity == "error")
        warnings = sum(1 for v in violations if v.severity == "warning")
        logger.info(
            "Identity checks l=%d gamma=%r: %d errors, %d warnings.",
            params.l, params.gamma, errors, warnings,
        )
    return violations
