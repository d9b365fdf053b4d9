"""Modified factorization of the hydrogen radial Hamiltonian.

With A_l = (1/r)[d/dr + β_l] r and A_l⁺ = (1/r)[-d/dr + β_l] r the demand
A_l⁺A_l = H_l + 1/l² is the Riccati equation

    -β_l' + β_l² = l(l+1)/r² - 2/r + 1/l²,

whose general solution is the particular one plus a correction

    β_l = l/r - 1/l + φ_l,    φ_l = r^{2l} e^{-2r/l} / (γ_l - I_l(r)).

The reversed product A_l A_l⁺ = H̃_{l-1} + 1/l² defines the deformed
Hamiltonian with potential Ṽ_{l-1} = -2/r + l(l-1)/r² + 2φ_l'.

Denominators are always evaluated as (γ - γ_c) + (γ_c - I_l(r)) with the
gap taken from the upper incomplete gamma function.  At the critical
value the exponentials cancel algebraically and

    φ_l = r^{2l} / (γ_c S_l(r)),    S_l(r) = Σ_{k≤2l} (2r/l)^k / k!,

which tends to 2/l as r → ∞.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from iso_coulomb.config import CRITICAL_RTOL, DENOMINATOR_TOL
from iso_coulomb.errors import (
    DenominatorVanishingError,
    InvalidParameterError,
    SingularParameterError,
)
from iso_coulomb.models.base import FactorizationParams, GammaMode, QuantumNumbers
from iso_coulomb.special.functions import (
    critical_gamma,
    exponential_partial_sum,
    hydrogen_radial,
    hydrogen_radial_deriv,
    truncated_integral_gap,
)

logger = logging.getLogger(__name__)

Radius = float | NDArray[np.float64]


def _positive_radius(r: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise InvalidParameterError("Radii must be finite and strictly positive.")
    return arr


def _shaped(value: NDArray[np.float64], like: ArrayLike) -> Radius:
    return float(value) if np.ndim(like) == 0 else value


# =====================================================================
# Classification
# =====================================================================

def classify_gamma(l: int, gamma: float) -> GammaMode:
    """Regular if γ > γ_c or γ < 0, Critical at γ_c (relative 1e-12), else Singular."""
    if math.isinf(gamma):
        return GammaMode.REGULAR
    gc = critical_gamma(l)
    if abs(gamma - gc) <= CRITICAL_RTOL * gc:
        return GammaMode.CRITICAL
    if gamma > gc or gamma < 0:
        return GammaMode.REGULAR
    return GammaMode.SINGULAR


def singular_pole(params: FactorizationParams) -> float | None:
    """Radius where γ - I_l(r) = 0, or ``None`` outside the singular band.

    Found by bisection on the monotone gap γ_c - I_l(r) = γ_c - γ.
    """
    if params.mode is not GammaMode.SINGULAR:
        return None
    target = critical_gamma(params.l) - params.gamma
    lo, hi = 0.0, 1.0
    while float(truncated_integral_gap(params.l, hi)) > target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(truncated_integral_gap(params.l, mid)) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)


# =====================================================================
# Correction term φ_l and superpotential β_l
# =====================================================================

def _denominator(params: FactorizationParams, r: NDArray[np.float64]) -> NDArray[np.float64]:
    """γ - I_l(r) for non-critical finite γ, with the vanishing check."""
    gap = np.asarray(truncated_integral_gap(params.l, r), dtype=np.float64)
    denom = (params.gamma - critical_gamma(params.l)) + gap
    bad = np.abs(denom) < DENOMINATOR_TOL * max(1.0, abs(params.gamma))
    if np.any(bad):
        radius = float(np.atleast_1d(r)[np.argmax(np.atleast_1d(bad))])
        raise DenominatorVanishingError(
            f"gamma - I_{params.l}(r) vanishes at r={radius!r} (gamma={params.gamma!r}).",
            radius=radius,
        )
    return denom


def _correction(
    params: FactorizationParams, r: NDArray[np.float64], power: int
) -> NDArray[np.float64]:
    """r^power e^{-2r/l} / (γ - I_l(r)), cancelled at the critical value."""
    l = params.l
    if params.is_classical:
        return np.zeros_like(r)
    if params.mode is GammaMode.CRITICAL:
        return r**power / (critical_gamma(l) * exponential_partial_sum(2 * l, 2.0 * r / l))
    return r**power * np.exp(-2.0 * r / l) / _denominator(params, r)


def phi_correction(params: FactorizationParams, r: ArrayLike) -> Radius:
    """φ_l(r) = β_l(r) - (l/r - 1/l)."""
    radius = _positive_radius(r)
    return _shaped(_correction(params, radius, 2 * params.l), r)


def phi_correction_deriv(params: FactorizationParams, r: ArrayLike) -> Radius:
    """φ_l' = (2l/r - 2/l) φ_l + φ_l², using I_l' = r^{2l} e^{-2r/l}."""
    radius = _positive_radius(r)
    l = params.l
    phi = _correction(params, radius, 2 * l)
    phi_over_r = _correction(params, radius, 2 * l - 1)
    return _shaped(2.0 * l * phi_over_r - (2.0 / l) * phi + phi * phi, r)


def beta(params: FactorizationParams, r: ArrayLike) -> Radius:
    """General solution β_l(r) = l/r - 1/l + φ_l(r) of the Riccati equation."""
    radius = _positive_radius(r)
    l = params.l
    return _shaped(l / radius - 1.0 / l + _correction(params, radius, 2 * l), r)


def superpotential_deriv(params: FactorizationParams, r: ArrayLike) -> Radius:
    """β_l' = -l/r² + φ_l'."""
    radius = _positive_radius(r)
    return _shaped(-params.l / radius**2 + np.asarray(phi_correction_deriv(params, radius)), r)


# =====================================================================
# Potentials
# =====================================================================

def coulomb_effective(l: int, r: ArrayLike) -> Radius:
    """l(l+1)/r² - 2/r, the potential of H_l acting on u = rR."""
    radius = _positive_radius(r)
    return _shaped(l * (l + 1) / radius**2 - 2.0 / radius, r)


def potential_tilde(params: FactorizationParams, r: ArrayLike) -> Radius:
    """Ṽ_{l-1}(r) = -2/r + l(l-1)/r² + 2 φ_l'(r)."""
    radius = _positive_radius(r)
    l = params.l
    deriv = np.asarray(phi_correction_deriv(params, radius))
    return _shaped(-2.0 / radius + l * (l - 1) / radius**2 + 2.0 * deriv, r)


def critical_potential_l1(r: ArrayLike) -> Radius:
    """Closed critical member for l = 1: -2/r + 16r(r+1)/(2r²+2r+1)²."""
    radius = _positive_radius(r)
    q = 2.0 * radius**2 + 2.0 * radius + 1.0
    return _shaped(-2.0 / radius + 16.0 * radius * (radius + 1.0) / q**2, r)


# =====================================================================
# First-order operators A_l and A_l⁺
# =====================================================================

def apply_A_to(
    params: FactorizationParams, f: ArrayLike, df: ArrayLike, r: ArrayLike
) -> Radius:
    """(1/r)[d/dr + β_l](r f) = f' + f/r + β_l f for samples of f and f'."""
    radius = _positive_radius(r)
    f_arr, df_arr = np.asarray(f, dtype=np.float64), np.asarray(df, dtype=np.float64)
    b = np.asarray(beta(params, radius))
    return _shaped(df_arr + f_arr / radius + b * f_arr, r)


def apply_A_plus(
    params: FactorizationParams, f: ArrayLike, df: ArrayLike, r: ArrayLike
) -> Radius:
    """(1/r)[-d/dr + β_l](r f) = -f' - f/r + β_l f for samples of f and f'."""
    radius = _positive_radius(r)
    f_arr, df_arr = np.asarray(f, dtype=np.float64), np.asarray(df, dtype=np.float64)
    b = np.asarray(beta(params, radius))
    return _shaped(-df_arr - f_arr / radius + b * f_arr, r)


def _check_channel(params: FactorizationParams, qn: QuantumNumbers) -> None:
    if qn.l != params.l:
        raise InvalidParameterError(
            f"A_{params.l} acts on the l={params.l} channel, got R_{qn.n}{qn.l}."
        )


def apply_A(params: FactorizationParams, qn: QuantumNumbers, r: ArrayLike) -> Radius:
    """A_l R_nl = R_nl' + R_nl/r + β_l R_nl, with the analytic R_nl'."""
    _check_channel(params, qn)
    radius = _positive_radius(r)
    return _shaped(
        np.asarray(
            apply_A_to(params, hydrogen_radial(qn, radius), hydrogen_radial_deriv(qn, radius), radius)
        ),
        r,
    )


def transformed_norm_squared(params: FactorizationParams, qn: QuantumNumbers) -> float:
    """(A_l R_nl, A_l R_nl) = λ_n + 1/l²."""
    _check_channel(params, qn)
    value = qn.eigenvalue + 1.0 / params.l**2
    assert value > 0.0, "n >= l + 1 keeps λ_n + 1/l² positive"
    return value


def transformed_state(params: FactorizationParams, qn: QuantumNumbers, r: ArrayLike) -> Radius:
    """Unit-norm eigenfunction A_l R_nl / sqrt(λ_n + 1/l²) of H̃_{l-1} at λ_n."""
    _require_spectral_mode(params)
    scale = 1.0 / math.sqrt(transformed_norm_squared(params, qn))
    return _shaped(scale * np.asarray(apply_A(params, qn, r)), r)


# =====================================================================
# Missing state  R̃_{l,l-1} = c_l r^{l-1} e^{-r/l} / (γ_l - I_l(r))
# =====================================================================

def _require_spectral_mode(params: FactorizationParams) -> None:
    if params.mode is GammaMode.SINGULAR:
        raise SingularParameterError(
            f"gamma={params.gamma!r} is singular for l={params.l} "
            f"(0 <= gamma < {critical_gamma(params.l)!r})."
        )


def missing_state_profile(params: FactorizationParams, r: ArrayLike) -> Radius:
    """Unnormalised r^{l-1} e^{-r/l} / (γ_l - I_l(r)) (c_l = 1)."""
    _require_spectral_mode(params)
    if params.is_classical:
        raise InvalidParameterError("The classical limit gamma = inf has no missing state.")
    radius = _positive_radius(r)
    l = params.l
    if params.mode is GammaMode.CRITICAL:
        # e^{-r/l} / (γ_c e^{-2r/l} S_l) = e^{r/l} / (γ_c S_l)
        gc = critical_gamma(l)
        values = radius ** (l - 1) * np.exp(radius / l) / (
            gc * exponential_partial_sum(2 * l, 2.0 * radius / l)
        )
    else:
        values = radius ** (l - 1) * np.exp(-radius / l) / _denominator(params, radius)
    return _shaped(values, r)


def missing_state_is_normalizable(params: FactorizationParams) -> bool:
    """Only Regular parameters give a square-integrable missing state."""
    return params.mode is GammaMode.REGULAR and not params.is_classical


@lru_cache(maxsize=256)
def _missing_state_constant(l: int, gamma: float) -> float:
    from iso_coulomb.spectral.quadrature import radial_inner_product

    params = FactorizationParams(l=l, gamma=gamma)
    # The profile scales like 1/γ; |γ| times it stays O(1) as |γ| grows.
    scale = abs(gamma)

    def profile(x: NDArray[np.float64]) -> NDArray[np.float64]:
        return scale * np.asarray(missing_state_profile(params, x))

    norm_sq = radial_inner_product(profile, profile)
    # Phase: positive near the origin, where the profile has the sign of γ.
    constant = math.copysign(scale / math.sqrt(norm_sq), gamma)
    logger.info("Missing state l=%d gamma=%r: c_l = %.17g", l, gamma, constant)
    return constant


def missing_state_constant(params: FactorizationParams) -> float:
    """c_l with unit norm and positive phase at the origin; 1 in Critical mode."""
    _require_spectral_mode(params)
    if params.mode is GammaMode.CRITICAL:
        return 1.0
    if params.is_classical:
        raise InvalidParameterError("The classical limit gamma = inf has no missing state.")
    return _missing_state_constant(params.l, params.gamma)


def missing_state(params: FactorizationParams, r: ArrayLike) -> Radius:
    """The state annihilated by A_l⁺, eigenvalue -1/l² of H̃_{l-1}.

    Regular mode: unit norm.  Critical mode: the raw, non-normalisable
    profile (c_l = 1); check ``missing_state_is_normalizable``.
    """
    if params.mode is GammaMode.CRITICAL:
        logger.warning(
            "Missing state at critical gamma (l=%d) is not square-integrable; "
            "returning the raw profile.", params.l,
        )
    constant = missing_state_constant(params)
    return _shaped(constant * np.asarray(missing_state_profile(params, r)), r)


def missing_state_deriv(params: FactorizationParams, r: ArrayLike) -> Radius:
    """dR̃/dr = (β_l - 1/r) R̃, from A_l⁺ R̃ = 0."""
    radius = _positive_radius(r)
    state = np.asarray(missing_state(params, radius))
    return _shaped((np.asarray(beta(params, radius)) - 1.0 / radius) * state, r)
