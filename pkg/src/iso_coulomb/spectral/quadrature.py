"""Adaptive Simpson quadrature with error control.

The classic recursive scheme (Simpson on a panel, compare with the two
half panels, accept with the Richardson correction (S2 - S1)/15 once the
difference is below the panel's share of the tolerance) run breadth-first:
every pass evaluates the integrand once on the quarter points of *all*
unresolved panels, so vectorised integrands cost one ``numpy`` call per
refinement level.

Integrands receive a 1-D float array and must return values of the same
shape (scalars are broadcast).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

import numpy as np
from numpy.typing import NDArray

from iso_coulomb.config import (
    QUADRATURE_ABS_TOL,
    QUADRATURE_REL_TOL,
    QUADRATURE_TAIL_FRACTION,
)
from iso_coulomb.errors import QuadratureError

logger = logging.getLogger(__name__)

Integrand = Callable[[NDArray[np.float64]], NDArray[np.float64] | float]

# ── Constants ───────────────────────────────────────────────────────
_INITIAL_PANELS = 16
_MAX_DEPTH = 40
_MAX_SUBDIVISIONS = 400_000
_TAIL_PANEL_WIDTH = 10.0
_MAX_TAIL_PANELS = 2_000


def _evaluate(integrand: Integrand, x: NDArray[np.float64]) -> NDArray[np.float64]:
    values = np.broadcast_to(np.asarray(integrand(x), dtype=np.float64), x.shape)
    if not np.all(np.isfinite(values)):
        where = float(x[~np.isfinite(values)][0])
        raise QuadratureError(f"Integrand is not finite at x={where!r}.")
    return values


def quadrature(
    integrand: Integrand,
    a: float,
    b: float,
    *,
    abs_tol: float = QUADRATURE_ABS_TOL,
    rel_tol: float = QUADRATURE_REL_TOL,
    max_subdivisions: int = _MAX_SUBDIVISIONS,
) -> float:
    """Integrate ``integrand`` over [a, b] by adaptive Simpson.

    ``b = inf`` delegates to :func:`integrate_to_infinity`.

    Args:
        integrand: Vectorised function of x.
        a: Lower limit.
        b: Upper limit (may be ``math.inf``).
        abs_tol: Absolute error target.
        rel_tol: Relative error target, against a first coarse estimate.
        max_subdivisions: Budget of panel splits.

    Raises:
        QuadratureError: Budget exhausted or non-finite integrand values.
    """
    if math.isinf(b):
        return integrate_to_infinity(integrand, a, abs_tol=abs_tol, rel_tol=rel_tol)
    if a == b:
        return 0.0
    if b < a:
        return -quadrature(
            integrand, b, a, abs_tol=abs_tol, rel_tol=rel_tol, max_subdivisions=max_subdivisions
        )

    edges = np.linspace(a, b, _INITIAL_PANELS + 1)
    left, right = edges[:-1], edges[1:]
    mid = 0.5 * (left + right)
    f_left, f_mid, f_right = (_evaluate(integrand, x) for x in (left, mid, right))
    whole = (right - left) / 6.0 * (f_left + 4.0 * f_mid + f_right)

    target = max(abs_tol, rel_tol * abs(math.fsum(whole)))
    tol = np.full(left.shape, target / left.size)

    accepted: list[float] = []
    subdivisions = 0
    depth = 0
    while left.size:
        width = right - left
        q_left, q_right = 0.5 * (left + mid), 0.5 * (mid + right)
        f_ql, f_qr = _evaluate(integrand, q_left), _evaluate(integrand, q_right)
        s_left = width / 12.0 * (f_left + 4.0 * f_ql + f_mid)
        s_right = width / 12.0 * (f_mid + 4.0 * f_qr + f_right)
        correction = (s_left + s_right - whole) / 15.0

        done = np.abs(correction) <= tol
        if depth >= _MAX_DEPTH:
            logger.warning(
                "Quadrature depth limit reached on %d panels in [%g, %g].",
                int(np.count_nonzero(~done)), a, b,
            )
            done[:] = True
        accepted.extend((s_left + s_right + correction)[done].tolist())

        keep = ~done
        subdivisions += 2 * int(np.count_nonzero(keep))
        if subdivisions > max_subdivisions:
            raise QuadratureError(
                f"Adaptive Simpson exhausted {max_subdivisions} subdivisions on [{a}, {b}]."
            )
        left, mid, right = (
            np.concatenate((left[keep], mid[keep])),
            np.concatenate((q_left[keep], q_right[keep])),
            np.concatenate((mid[keep], right[keep])),
        )
        f_left, f_mid, f_right = (
            np.concatenate((f_left[keep], f_mid[keep])),
            np.concatenate((f_ql[keep], f_qr[keep])),
            np.concatenate((f_mid[keep], f_right[keep])),
        )
        whole = np.concatenate((s_left[keep], s_right[keep]))
        tol = np.concatenate((tol[keep], tol[keep])) / 2.0
        depth += 1

    return math.fsum(accepted)


def integrate_to_infinity(
    integrand: Integrand,
    a: float,
    *,
    abs_tol: float = QUADRATURE_ABS_TOL,
    rel_tol: float = QUADRATURE_REL_TOL,
    tail_fraction: float = QUADRATURE_TAIL_FRACTION,
) -> float:
    """∫_a^∞ by consecutive panels, stopped once the tail is negligible.

    Two consecutive panels below ``tail_fraction`` of the accumulated
    integral end the sweep.
    """
    contributions: list[float] = []
    quiet = 0
    start = a
    for _ in range(_MAX_TAIL_PANELS):
        piece = quadrature(
            integrand, start, start + _TAIL_PANEL_WIDTH, abs_tol=abs_tol, rel_tol=rel_tol
        )
        contributions.append(piece)
        start += _TAIL_PANEL_WIDTH
        total = math.fsum(contributions)
        if abs(piece) <= tail_fraction * abs(total):
            quiet += 1
            if quiet == 2:
                logger.debug("Semi-infinite quadrature truncated at r=%g.", start)
                return total
        else:
            quiet = 0
    raise QuadratureError(f"Integrand tail did not decay within r < {start}.")


def radial_inner_product(
    f: Integrand,
    g: Integrand,
    r_max: float = math.inf,
    **kwargs: float,
) -> float:
    """(f, g) = 4π ∫_0^{r_max} f g r² dr.

    f and g are only called at r > 0; the r² weight makes the origin
    contribute nothing.
    """

    def weighted(r: NDArray[np.float64]) -> NDArray[np.float64]:
        out = np.zeros_like(r)
        inside = r > 0.0
        x = r[inside]
        if x.size:
            out[inside] = 4.0 * np.pi * x**2 * np.asarray(f(x)) * np.asarray(g(x))
        return out

    return quadrature(weighted, 0.0, r_max, **kwargs)
