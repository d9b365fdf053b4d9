"""Tests for the finite-difference eigen-oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.linalg import eigh_tridiagonal

from iso_coulomb.errors import (
    ConvergenceError,
    InvalidParameterError,
    NumericalError,
    SingularParameterError,
)
from iso_coulomb.factorization import core
from iso_coulomb.models.base import FactorizationParams, RadialFunction, RadialGrid
from iso_coulomb.models.potentials import CoulombEffective, DeformedFamily, PotentialSpec
from iso_coulomb.models.report import GridDiagnostics, SpectrumReport
from iso_coulomb.spectral import oracle
from iso_coulomb.spectral.oracle import (
    SpectralProblem,
    certify,
    covering_grid,
    discretize,
    eigenvector,
    expected_levels,
    lowest_eigenvalues,
    richardson,
    sturm_count,
    verify_isospectral,
)


class _Zero(PotentialSpec):
    def evaluate(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    @property
    def label(self):
        return "zero"


class _Broken(PotentialSpec):
    def evaluate(self, r):
        values = np.zeros_like(np.asarray(r, dtype=float))
        values[3] = np.nan
        return values

    @property
    def label(self):
        return "broken"


def _coulomb(l, step, r_max=60.0):
    return discretize(CoulombEffective(l), RadialGrid.uniform(step, r_max))


# ── Grids ───────────────────────────────────────────────────────────

def test_uniform_grid_is_anchored_at_origin():
    grid = RadialGrid.uniform(0.02, 60.0)
    assert grid.n_points == 3000
    assert grid.step == pytest.approx(0.02)
    assert grid.r_min == pytest.approx(0.02)
    assert grid.anchored_at_origin
    fine = grid.refined()
    assert fine.n_points == 6000 and fine.step == pytest.approx(0.01)


def test_unanchored_grid_refines_in_place():
    grid = RadialGrid(r_min=0.5, r_max=10.5, n_points=11)
    fine = grid.refined()
    assert (fine.r_min, fine.r_max, fine.n_points) == (0.5, 10.5, 21)


def test_grid_validation():
    with pytest.raises(ValidationError):
        RadialGrid(r_min=2.0, r_max=1.0, n_points=10)
    with pytest.raises(ValidationError):
        RadialGrid(r_min=0.0, r_max=1.0, n_points=10)


# ── Matrix and Sturm counts ─────────────────────────────────────────

def test_three_point_laplacian():
    grid = RadialGrid(r_min=1.0, r_max=3.0, n_points=3)
    problem = discretize(_Zero(), grid)
    expected = [2 - 2 * math.cos(k * math.pi / 4) for k in (1, 2, 3)]
    assert lowest_eigenvalues(problem, 3) == pytest.approx(expected, abs=1e-9)
    assert np.array_equal(problem.matrix(), problem.matrix().T)


def test_two_by_two_matrix():
    problem = SpectralProblem(
        grid=RadialGrid(r_min=1.0, r_max=2.0, n_points=3),
        diagonal=np.array([2.0, 2.0]),
        off_diagonal=-1.0,
    )
    assert lowest_eigenvalues(problem, 2) == pytest.approx([1.0, 3.0], abs=1e-9)
    assert sturm_count(problem, 0.0) == 0
    assert sturm_count(problem, 2.0) == 1
    assert sturm_count(problem, 10.0) == 2


def test_free_laplacian_closed_form():
    grid = RadialGrid(r_min=0.2, r_max=10.0, n_points=50)
    problem = discretize(_Zero(), grid)
    h = grid.step
    expected = [(2 - 2 * math.cos(j * math.pi / 51)) / h**2 for j in range(1, 6)]
    assert lowest_eigenvalues(problem, 5) == pytest.approx(expected, abs=1e-9)


def test_agrees_with_dense_tridiagonal_solver():
    params = FactorizationParams(l=1, gamma=0.5)
    problem = discretize(DeformedFamily(params), RadialGrid.uniform(0.05, 30.0))
    reference = eigh_tridiagonal(
        problem.diagonal,
        np.full(problem.dimension - 1, problem.off_diagonal),
        eigvals_only=True,
        select="i",
        select_range=(0, 3),
    )
    assert lowest_eigenvalues(problem, 4) == pytest.approx(reference.tolist(), abs=1e-8)


def test_eigenvalue_count_is_validated():
    problem = _coulomb(0, 0.5, r_max=5.0)
    with pytest.raises(InvalidParameterError):
        lowest_eigenvalues(problem, 0)
    with pytest.raises(InvalidParameterError):
        lowest_eigenvalues(problem, problem.dimension + 1)


def test_certification_detects_wrong_values():
    problem = _coulomb(0, 0.05, r_max=40.0)
    values = lowest_eigenvalues(problem, 2)
    assert certify(problem, values)
    assert not certify(problem, [values[0] + 1e-3, values[1]])


def test_non_finite_potential_is_rejected():
    with pytest.raises(NumericalError):
        discretize(_Broken(), RadialGrid.uniform(0.1, 5.0))


# ── Hydrogen reference ──────────────────────────────────────────────

def test_coulomb_levels():
    values = lowest_eigenvalues(_coulomb(0, 0.01), 2)
    assert values[0] == pytest.approx(-1.0, abs=1e-3)
    assert values[1] == pytest.approx(-0.25, abs=1e-3)
    p_wave = lowest_eigenvalues(_coulomb(1, 0.01), 1)
    assert p_wave[0] == pytest.approx(-0.25, abs=1e-3)


def test_second_order_convergence():
    coarse = lowest_eigenvalues(_coulomb(0, 0.04), 1)[0]
    fine = lowest_eigenvalues(_coulomb(0, 0.02), 1)[0]
    ratio = abs(coarse + 1.0) / abs(fine + 1.0)
    assert 3.6 <= ratio <= 4.4


def test_eigenvector_nodes():
    problem = _coulomb(0, 0.02)
    for index, value in enumerate(lowest_eigenvalues(problem, 3)):
        vector = eigenvector(problem, value)
        assert vector.sign_changes() == index
        assert vector.norm() == pytest.approx(1.0, abs=1e-12)


def test_ground_state_overlap_with_exact_state():
    problem = _coulomb(0, 0.01)
    vector = eigenvector(problem, lowest_eigenvalues(problem, 1)[0])
    exact = RadialFunction(grid=vector.grid, values=np.exp(-vector.grid) / math.sqrt(math.pi))
    assert vector.inner(exact) >= 1 - 1e-4
    assert vector.values[0] > 0


def test_inverse_iteration_budget(monkeypatch):
    problem = _coulomb(0, 0.05, r_max=40.0)
    value = lowest_eigenvalues(problem, 1)[0]
    monkeypatch.setattr(oracle, "INVERSE_ITERATION_STEPS", 1)
    with pytest.raises(ConvergenceError):
        eigenvector(problem, value)


def test_sign_changes_ignore_noise():
    grid = np.linspace(0.1, 10.0, 100)
    values = np.sin(grid)
    values[-1] = -1e-14
    assert RadialFunction(grid=grid, values=values).sign_changes() == 3


# ── Extrapolation ───────────────────────────────────────────────────

def test_richardson_cancels_quadratic_error():
    assert richardson(-1.0 + 4e-4, -1.0 + 1e-4) == pytest.approx(-1.0, abs=1e-15)


def test_covering_grid_keeps_spacing():
    grid = RadialGrid.uniform(0.02, 60.0)
    assert covering_grid(grid, [1, 2, 3]) is grid
    wider = covering_grid(grid, [2, 3, 4, 5])
    assert wider.r_max >= 100.0
    assert wider.r_min == grid.r_min
    assert wider.step == pytest.approx(grid.step)
    assert wider.anchored_at_origin
    assert wider.refined().step == pytest.approx(0.01)


# ── Isospectrality ──────────────────────────────────────────────────

def test_expected_levels():
    assert expected_levels(FactorizationParams(l=1, gamma=1.0), 3) == [1, 2, 3]
    assert expected_levels(FactorizationParams(l=1, gamma=0.25), 3) == [2, 3, 4]
    assert expected_levels(FactorizationParams(l=2, gamma=-1.0), 2) == [2, 3]


@pytest.mark.parametrize(("gamma", "targets"), [
    (1.0, [-1.0, -0.25]),
    (-2.0, [-1.0, -0.25]),
    (0.25, [-0.25, -1 / 9]),
])
def test_verify_report_on_small_grid(gamma, targets):
    report = verify_isospectral(
        FactorizationParams(l=1, gamma=gamma), RadialGrid.uniform(0.05, 30.0), k=2
    )
    assert report.targets == pytest.approx(targets)
    assert report.certified
    assert report.diagnostics.refined_step == pytest.approx(0.025)
    assert max(report.residuals) < 1e-3
    assert report.mode == FactorizationParams(l=1, gamma=gamma).mode.value


def test_verify_widens_grid_for_shifted_critical_levels():
    report = verify_isospectral(
        FactorizationParams(l=1, gamma=0.25), RadialGrid.uniform(0.05, 30.0), k=3
    )
    assert report.principal_numbers == [2, 3, 4]
    assert report.diagnostics.r_max >= 64.0
    assert report.diagnostics.step == pytest.approx(0.05)
    assert max(report.residuals) < 1e-3


def test_verify_refuses_singular_gamma():
    with pytest.raises(SingularParameterError):
        verify_isospectral(FactorizationParams(l=1, gamma=0.1), RadialGrid.uniform(0.05, 30.0))


def test_oracle_does_not_use_factorization_operators(monkeypatch):
    def boom(*args, **kwargs):
        raise AssertionError("oracle must only evaluate the potential")

    for name in ("beta", "apply_A", "apply_A_to", "apply_A_plus", "missing_state",
                 "transformed_state"):
        monkeypatch.setattr(core, name, boom)
    report = verify_isospectral(
        FactorizationParams(l=1, gamma=1.0), RadialGrid.uniform(0.1, 25.0), k=1
    )
    assert report.principal_numbers == [1]


def test_report_rejects_unsorted_eigenvalues():
    diagnostics = GridDiagnostics(step=0.1, refined_step=0.05, r_max=10.0, n_points=100)
    with pytest.raises(ValidationError):
        SpectrumReport(
            l=1, gamma=1.0, mode="regular", eigenvalues=[-0.25, -1.0],
            coarse_eigenvalues=[-0.25, -1.0], fine_eigenvalues=[-0.25, -1.0],
            targets=[-1.0, -0.25], principal_numbers=[1, 2], residuals=[0.75, 0.75],
            tolerance=1e-5, passed=False, certified=True, diagnostics=diagnostics,
        )
