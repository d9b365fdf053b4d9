"""Closed-form special functions of the hydrogen factorization.

Everything here is a pure, vectorised function of its arguments:
radii may be floats or ``numpy`` arrays and the result has the same
shape.  Units are the dimensionless ones of the radial problem

    (1/r) [-d²/dr² + l(l+1)/r² - 2/r] (r R) = λ R,    λ_n = -1/n²,

with the scalar product (R, R') = 4π ∫ R R' r² dr.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammainc, gammaincc, gammaln

from iso_coulomb.errors import CriticalGammaOverflowError, InvalidParameterError
from iso_coulomb.models.base import QuantumNumbers

logger = logging.getLogger(__name__)

Radius = float | NDArray[np.float64]

# Exact rational evaluation below this l, log-domain above.
_EXACT_L_LIMIT = 12
_LOG_FLOAT_MAX = math.log(np.finfo(np.float64).max)


def _require_factorizable_l(l: int) -> None:
    if isinstance(l, bool) or int(l) != l or l < 1:
        raise InvalidParameterError(
            f"The factorization needs an integer l >= 1 (beta_l contains 1/l), got {l!r}."
        )


def _as_radius(r: ArrayLike) -> Radius:
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidParameterError("Radii must be finite and non-negative.")
    return float(arr) if arr.ndim == 0 else arr


def _shape_like(value: NDArray[np.float64] | float, r: Radius) -> Radius:
    return float(value) if np.ndim(r) == 0 else np.asarray(value, dtype=np.float64)


# =====================================================================
# Truncated integral  I_l(r) = ∫_0^r y^{2l} e^{-2y/l} dy
# =====================================================================

def critical_gamma(l: int) -> float:
    """The limit I_l(∞) = (2l)! (l/2)^(2l+1).

    Exact rational arithmetic for small l, log-gamma above.

    Raises:
        InvalidParameterError: ``l < 1``.
        CriticalGammaOverflowError: The value exceeds the float range.
    """
    _require_factorizable_l(l)
    l = int(l)
    log_value = gammaln(2 * l + 1) + (2 * l + 1) * math.log(l / 2)
    if log_value >= _LOG_FLOAT_MAX:
        raise CriticalGammaOverflowError(
            f"critical_gamma({l}) = exp({log_value:.1f}) overflows float64."
        )
    if l < _EXACT_L_LIMIT:
        return float(math.factorial(2 * l) * Fraction(l, 2) ** (2 * l + 1))
    return math.exp(log_value)


def truncated_integral(l: int, r: ArrayLike) -> Radius:
    """I_l(r) in closed form.

    With a = 2/l and m = 2l the integral of y^m e^{-a y} is
    m!/a^(m+1) · [1 - e^{-a r} Σ_{k≤m} (a r)^k / k!], i.e. critical_gamma(l)
    times the regularised lower incomplete gamma function P(m+1, a r).
    """
    _require_factorizable_l(l)
    radius = _as_radius(r)
    return _shape_like(critical_gamma(l) * gammainc(2 * l + 1, 2.0 * np.asarray(radius) / l), radius)


def truncated_integral_gap(l: int, r: ArrayLike) -> Radius:
    """critical_gamma(l) - I_l(r), without cancellation.

    Uses the regularised upper incomplete gamma Q(2l+1, 2r/l), which stays
    accurate where 1 - e^{-ar} Σ(...) would round to zero.  Strictly positive
    for every finite r.
    """
    _require_factorizable_l(l)
    radius = _as_radius(r)
    return _shape_like(
        critical_gamma(l) * gammaincc(2 * l + 1, 2.0 * np.asarray(radius) / l), radius
    )


def exponential_partial_sum(m: int, x: ArrayLike) -> NDArray[np.float64] | float:
    """Σ_{k=0}^{m} x^k / k!  (Horner form)."""
    xs = np.asarray(x, dtype=np.float64)
    total = np.ones_like(xs)
    for k in range(m, 0, -1):
        total = 1.0 + total * xs / k
    return float(total) if xs.ndim == 0 else total


# =====================================================================
# Associated Laguerre polynomials
# =====================================================================

def laguerre(k: int, alpha: float, x: ArrayLike) -> NDArray[np.float64] | float:
    """L_k^α(x) by the three-term recurrence.

    L_0 = 1, L_1 = 1 + α - x,
    j L_j = (2j - 1 + α - x) L_{j-1} - (j - 1 + α) L_{j-2}.
    """
    if k < 0:
        raise InvalidParameterError(f"Laguerre degree must be >= 0, got {k}.")
    xs = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(xs)
    if k == 0:
        return float(prev) if xs.ndim == 0 else prev
    curr = 1.0 + alpha - xs
    for j in range(2, k + 1):
        prev, curr = curr, ((2 * j - 1 + alpha - xs) * curr - (j - 1 + alpha) * prev) / j
    return float(curr) if xs.ndim == 0 else curr


# =====================================================================
# Hydrogen radial eigenfunctions
# =====================================================================

def hydrogen_eigenvalue(n: int) -> float:
    """λ_n = -1/n²."""
    if n < 1:
        raise InvalidParameterError(f"Principal quantum number must be >= 1, got {n}.")
    return -1.0 / (n * n)


def _normalization(qn: QuantumNumbers) -> float:
    # ∫ R² r² dr = 1 for the textbook constant; the 4π of the scalar product is folded in.
    n, l = qn.n, qn.l
    log_sq = 3 * math.log(2.0 / n) + gammaln(n - l) - math.log(2.0 * n) - gammaln(n + l + 1)
    return math.exp(0.5 * log_sq) / math.sqrt(4.0 * math.pi)


def _profile_derivatives(
    qn: QuantumNumbers, x: NDArray[np.float64], order: int
) -> list[NDArray[np.float64]]:
    """f(x) = x^l e^{-x/2} L_{n-l-1}^{2l+1}(x) and its first ``order`` derivatives in x."""
    n, l = qn.n, qn.l
    k, alpha = n - l - 1, 2 * l + 1

    def lag(shift: int) -> NDArray[np.float64]:
        # d^s/dx^s L_k^α = (-1)^s L_{k-s}^{α+s}
        if k - shift < 0:
            return np.zeros_like(x)
        return (-1) ** shift * np.asarray(laguerre(k - shift, alpha + shift, x))

    def power(deriv: int) -> NDArray[np.float64]:
        if deriv > l:
            return np.zeros_like(x)
        coeff = math.perm(l, deriv)
        return coeff * x ** (l - deriv)

    expo = np.exp(-x / 2.0)
    g = [power(0), power(1), power(2)]
    e = [expo, -expo / 2.0, expo / 4.0]
    p = [lag(0), lag(1), lag(2)]

    out = [g[0] * e[0] * p[0]]
    if order >= 1:
        out.append(g[1] * e[0] * p[0] + g[0] * e[1] * p[0] + g[0] * e[0] * p[1])
    if order >= 2:
        out.append(
            g[2] * e[0] * p[0] + g[0] * e[2] * p[0] + g[0] * e[0] * p[2]
            + 2.0 * (g[1] * e[1] * p[0] + g[1] * e[0] * p[1] + g[0] * e[1] * p[1])
        )
    return out


def hydrogen_radial(qn: QuantumNumbers, r: ArrayLike) -> Radius:
    """Normalised R_nl(r) = N_nl (2r/n)^l e^{-r/n} L_{n-l-1}^{2l+1}(2r/n).

    Positive near the origin; (R_nl, R_nl) = 1 under 4π ∫ ... r² dr.
    """
    radius = _as_radius(r)
    x = 2.0 * np.asarray(radius, dtype=np.float64) / qn.n
    (f,) = _profile_derivatives(qn, x, order=0)
    return _shape_like(_normalization(qn) * f, radius)


def hydrogen_radial_deriv(qn: QuantumNumbers, r: ArrayLike) -> Radius:
    """Analytic dR_nl/dr (chain rule with dx/dr = 2/n)."""
    radius = _as_radius(r)
    x = 2.0 * np.asarray(radius, dtype=np.float64) / qn.n
    _, df = _profile_derivatives(qn, x, order=1)
    return _shape_like(_normalization(qn) * (2.0 / qn.n) * df, radius)


def hydrogen_radial_second_deriv(qn: QuantumNumbers, r: ArrayLike) -> Radius:
    """Analytic d²R_nl/dr²."""
    radius = _as_radius(r)
    x = 2.0 * np.asarray(radius, dtype=np.float64) / qn.n
    _, _, d2f = _profile_derivatives(qn, x, order=2)
    return _shape_like(_normalization(qn) * (2.0 / qn.n) ** 2 * d2f, radius)
