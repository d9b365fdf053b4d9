"""Finite-difference eigen-oracle for radial Schrödinger problems.

-u'' + V u = λ u on u = r R is discretised with the three-point
Laplacian on a uniform grid r_i = r_min + i h, Dirichlet just outside
both ends.  The resulting symmetric tridiagonal matrix

    T_ii = 2/h² + V(r_i),    T_i,i±1 = -1/h²

is solved by Sturm-count bisection (eigenvalues) and inverse iteration
(eigenvectors).  The oracle only *evaluates* potentials: nothing of the
factorization machinery is reused, so agreement with -1/n² is an
independent check.
"""

from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import solve_banded

from iso_coulomb.config import (
    CERTIFICATION_OFFSET,
    DEFAULT_VERIFICATION,
    INVERSE_ITERATION_STEPS,
    LEVEL_RADIUS_FACTOR,
    STURM_TOL,
)
from iso_coulomb.errors import (
    CertificationError,
    ConvergenceError,
    DenominatorVanishingError,
    InvalidParameterError,
    NumericalError,
    SingularParameterError,
)
from iso_coulomb.models.base import FactorizationParams, GammaMode, RadialFunction, RadialGrid
from iso_coulomb.models.potentials import DeformedFamily, PotentialSpec
from iso_coulomb.models.report import GridDiagnostics, SpectrumReport

logger = logging.getLogger(__name__)

_PIVOT_FLOOR = sys.float_info.min / sys.float_info.epsilon


# =====================================================================
# Problem
# =====================================================================

@dataclass(frozen=True)
class SpectralProblem:
    """Symmetric tridiagonal discretisation of -d²/dr² + V on u = rR."""

    grid: RadialGrid
    diagonal: NDArray[np.float64]
    off_diagonal: float
    label: str = ""

    @property
    def dimension(self) -> int:
        return int(self.diagonal.size)

    def matrix(self) -> NDArray[np.float64]:
        """Dense form (small problems and tests only)."""
        off = np.full(self.dimension - 1, self.off_diagonal)
        return np.diag(self.diagonal) + np.diag(off, 1) + np.diag(off, -1)

    def gershgorin_bounds(self) -> tuple[float, float]:
        radius = 2.0 * abs(self.off_diagonal)
        return float(self.diagonal.min()) - radius, float(self.diagonal.max()) + radius


def discretize(potential: PotentialSpec, grid: RadialGrid) -> SpectralProblem:
    """Build T with diagonal 2/h² + V(r_i) and off-diagonal -1/h².

    Raises:
        DenominatorVanishingError: The potential hits its pole on the grid.
        NumericalError: The potential is not finite at some grid radius.
    """
    r = grid.points()
    h = grid.step
    if not grid.anchored_at_origin:
        logger.debug("Grid r_min=%g differs from h=%g; Dirichlet node is not the origin.",
                     grid.r_min, h)
    try:
        v = np.asarray(potential(r), dtype=np.float64)
    except DenominatorVanishingError as exc:
        logger.error("Potential %s vanishing denominator at r=%r.", potential.label, exc.radius)
        raise
    if not np.all(np.isfinite(v)):
        radius = float(r[~np.isfinite(v)][0])
        raise NumericalError(f"Potential {potential.label} is not finite at r={radius!r}.")
    return SpectralProblem(
        grid=grid,
        diagonal=2.0 / h**2 + v,
        off_diagonal=-1.0 / h**2,
        label=potential.label,
    )


# =====================================================================
# Sturm sequences and bisection
# =====================================================================

def sturm_count(problem: SpectralProblem, lam: float) -> int:
    """Number of eigenvalues of T strictly below ``lam``.

    Counts negative pivots of the LDLᵀ factorisation of T - lam·I.
    """
    e2 = problem.off_diagonal**2
    floor = _PIVOT_FLOOR * max(1.0, e2)
    count = 0
    q = 1.0
    first = True
    for d in problem.diagonal.tolist():
        q = d - lam if first else d - lam - e2 / q
        first = False
        if abs(q) < floor:
            q = -floor
        if q < 0.0:
            count += 1
    return count


def _bisect(problem: SpectralProblem, index: int, lo: float, hi: float) -> float:
    """Shrink [lo, hi] with count(lo) <= index < count(hi) to width STURM_TOL."""
    steps = 0
    while hi - lo > STURM_TOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if sturm_count(problem, mid) > index:
            hi = mid
        else:
            lo = mid
        steps += 1
    logger.debug("Eigenvalue #%d bracketed in %d bisection steps.", index, steps)
    return 0.5 * (lo + hi)


def certify(problem: SpectralProblem, eigenvalues: list[float]) -> bool:
    """Check that exactly j eigenvalues lie below λ_j - δ and j+1 below λ_j + δ."""
    for j, lam in enumerate(eigenvalues):
        below = sturm_count(problem, lam - CERTIFICATION_OFFSET)
        above = sturm_count(problem, lam + CERTIFICATION_OFFSET)
        if below != j or above != j + 1:
            logger.warning(
                "Sturm certification failed for #%d (lambda=%.12g): %d below, %d above.",
                j, lam, below, above,
            )
            return False
    return True


def lowest_eigenvalues(problem: SpectralProblem, k: int) -> list[float]:
    """The k smallest eigenvalues, ascending, by Sturm-count bisection.

    Each bracket holds exactly one eigenvalue when it is closed, and
    every result is certified by recounting at ±1e-9.

    Raises:
        InvalidParameterError: ``k`` outside ``1..dimension``.
        CertificationError: A Sturm recount disagrees with the index.
    """
    if not 1 <= k <= problem.dimension:
        raise InvalidParameterError(
            f"k must lie in 1..{problem.dimension}, got {k}."
        )
    lower, upper = problem.gershgorin_bounds()
    eigenvalues: list[float] = []
    for j in range(k):
        eigenvalues.append(_bisect(problem, j, lower, upper))
        lower = eigenvalues[-1] - STURM_TOL
    if not certify(problem, eigenvalues):
        raise CertificationError(
            f"Sturm counts do not certify the {k} lowest eigenvalues of {problem.label}."
        )
    if any(b <= a for a, b in zip(eigenvalues, eigenvalues[1:])):
        raise CertificationError(f"Eigenvalues of {problem.label} are not simple.")
    return eigenvalues


# =====================================================================
# Inverse iteration
# =====================================================================

def _first_interior_peak(u: NDArray[np.float64]) -> int:
    mag = np.abs(u)
    floor = 1e-3 * mag.max()
    for i in range(1, mag.size - 1):
        if mag[i] >= floor and mag[i] >= mag[i - 1] and mag[i] >= mag[i + 1]:
            return i
    return int(np.argmax(mag))


def eigenvector(problem: SpectralProblem, eigenvalue: float) -> RadialFunction:
    """Grid eigenfunction R = u/r for an (approximate) eigenvalue.

    Inverse iteration with shifted tridiagonal solves; the result has
    unit norm under 4π Σ R² r² h and is positive at the first interior
    maximum of |u|.

    Raises:
        ConvergenceError: No convergence within 50 steps.
    """
    n = problem.dimension
    shift = eigenvalue - STURM_TOL * max(1.0, abs(eigenvalue))
    banded = np.empty((3, n))
    banded[0, 1:] = problem.off_diagonal
    banded[1, :] = problem.diagonal - shift
    banded[2, :-1] = problem.off_diagonal

    x = np.ones(n) / math.sqrt(n)
    for step in range(1, INVERSE_ITERATION_STEPS + 1):
        y = solve_banded((1, 1), banded, x, check_finite=False)
        y /= np.linalg.norm(y)
        if np.dot(y, x) < 0:
            y = -y
        converged = np.linalg.norm(y - x, ord=np.inf) <= 1e-10
        x = y
        if converged:
            logger.debug("Inverse iteration converged in %d steps.", step)
            break
    else:
        raise ConvergenceError(
            f"Inverse iteration for lambda={eigenvalue!r} did not converge "
            f"in {INVERSE_ITERATION_STEPS} steps."
        )

    if x[_first_interior_peak(x)] < 0:
        x = -x
    h = problem.grid.step
    u = x / math.sqrt(4.0 * np.pi * h * float(np.dot(x, x)))
    r = problem.grid.points()
    return RadialFunction(grid=r, values=u / r)


# =====================================================================
# Extrapolation
# =====================================================================

def richardson(coarse: float, fine: float, order: int = 2) -> float:
    """Cancel the leading h^order error of a value computed at h and h/2."""
    return fine + (fine - coarse) / (2**order - 1)


def _order_against_target(coarse: float, fine: float, target: float) -> float | None:
    err_c, err_f = abs(coarse - target), abs(fine - target)
    if err_c == 0.0 or err_f == 0.0:
        return None
    return math.log2(err_c / err_f)


# =====================================================================
# Isospectrality verification
# =====================================================================

def covering_grid(grid: RadialGrid, levels: list[int]) -> RadialGrid:
    """``grid`` extended outward at the same spacing until it holds level max(n).

    The bound state of level n needs r_max >= LEVEL_RADIUS_FACTOR * n²; a
    wider grid is returned unchanged.
    """
    needed = LEVEL_RADIUS_FACTOR * max(levels) ** 2
    if grid.r_max >= needed:
        return grid
    step = grid.step
    extra = math.ceil((needed - grid.r_max) / step)
    while grid.r_max + extra * step < needed:
        extra += 1
    wider = RadialGrid(
        r_min=grid.r_min, r_max=grid.r_max + extra * step, n_points=grid.n_points + extra
    )
    logger.info("Outer radius %g too small for n=%d; extended to %g.",
                grid.r_max, max(levels), wider.r_max)
    return wider


def expected_levels(params: FactorizationParams, k: int) -> list[int]:
    """Principal numbers of the k lowest levels of H̃_{l-1}.

    Regular: n = l, l+1, ...; Critical: the n = l level is missing.
    """
    first = params.l if params.mode is GammaMode.REGULAR else params.l + 1
    return list(range(first, first + k))


def verify_isospectral(
    params: FactorizationParams,
    grid: RadialGrid,
    k: int = DEFAULT_VERIFICATION.k,
    tolerance: float = DEFAULT_VERIFICATION.tolerance,
) -> SpectrumReport:
    """Compare the k lowest oracle levels of Ṽ_{l-1} with -1/n².

    Eigenvalues are computed on ``grid`` and on its halving and combined
    by Richardson extrapolation.  ``grid`` is first widened, at its own
    spacing, when its outer radius cannot hold the highest target level.

    Raises:
        SingularParameterError: ``params`` is Singular.
    """
    if params.mode is GammaMode.SINGULAR:
        raise SingularParameterError(
            f"Cannot verify singular gamma={params.gamma!r} for l={params.l}."
        )
    potential = DeformedFamily(params)
    levels = expected_levels(params, k)
    targets = [-1.0 / (n * n) for n in levels]
    grid = covering_grid(grid, levels)

    fine_grid = grid.refined()
    coarse_problem = discretize(potential, grid)
    fine_problem = discretize(potential, fine_grid)
    coarse = lowest_eigenvalues(coarse_problem, k)
    fine = lowest_eigenvalues(fine_problem, k)

    extrapolated = [richardson(c, f) for c, f in zip(coarse, fine)]
    residuals = [abs(e - t) for e, t in zip(extrapolated, targets)]
    passed = all(res <= tolerance for res in residuals)

    logger.info(
        "Verify l=%d gamma=%r (%s): max residual %.3e -> %s",
        params.l, params.gamma, params.mode.value, max(residuals),
        "pass" if passed else "FAIL",
    )
    return SpectrumReport(
        l=params.l,
        gamma=params.gamma,
        mode=params.mode.value,
        eigenvalues=extrapolated,
        coarse_eigenvalues=coarse,
        fine_eigenvalues=fine,
        targets=targets,
        principal_numbers=levels,
        residuals=residuals,
        tolerance=tolerance,
        passed=passed,
        certified=True,
        diagnostics=GridDiagnostics(
            step=grid.step,
            refined_step=fine_grid.step,
            r_max=grid.r_max,
            n_points=grid.n_points,
            convergence_order=[
                _order_against_target(c, f, t) for c, f, t in zip(coarse, fine, targets)
            ],
        ),
    )
