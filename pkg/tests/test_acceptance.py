"""Isospectrality sweeps on the production grid (h = 0.02 and 0.01, r_max = 60)."""

from __future__ import annotations

import pytest

from iso_coulomb.config import DEFAULT_VERIFICATION
from iso_coulomb.models.base import FactorizationParams, RadialGrid
from iso_coulomb.models.potentials import CoulombEffective, DeformedFamily
from iso_coulomb.spectral.oracle import (
    discretize,
    lowest_eigenvalues,
    richardson,
    sturm_count,
    verify_isospectral,
)

pytestmark = pytest.mark.slow

GRID = RadialGrid.uniform(DEFAULT_VERIFICATION.step, DEFAULT_VERIFICATION.r_max)


@pytest.mark.parametrize("gamma", [0.3, 0.5, 1.0, 10.0, -1.0, -10.0])
def test_regular_family_is_isospectral(gamma):
    report = verify_isospectral(FactorizationParams(l=1, gamma=gamma), GRID)
    assert report.principal_numbers == [1, 2, 3, 4]
    assert report.passed, report.residuals
    assert max(report.residuals) <= 1e-5


def test_critical_member_loses_the_ground_level():
    params = FactorizationParams(l=1, gamma=0.25)
    report = verify_isospectral(params, GRID, k=3)
    assert report.principal_numbers == [2, 3, 4]
    assert report.passed, report.residuals
    assert sturm_count(discretize(DeformedFamily(params), GRID), -0.3) == 0


@pytest.mark.parametrize(("l", "gamma", "highest"), [(1, 0.25, 5), (2, 24.0, 5)])
def test_critical_levels_are_held_by_a_wider_grid(l, gamma, highest):
    k = highest - l
    report = verify_isospectral(FactorizationParams(l=l, gamma=gamma), GRID, k=k)
    assert report.principal_numbers[-1] == highest
    assert report.diagnostics.r_max >= 4.0 * highest**2
    assert report.diagnostics.step == pytest.approx(GRID.step)
    assert report.passed, report.residuals


@pytest.mark.parametrize(("gamma", "k"), [(30.0, 3), (-3.0, 3), (24.0, 2)])
def test_higher_channel(gamma, k):
    report = verify_isospectral(FactorizationParams(l=2, gamma=gamma), GRID, k=k)
    assert report.passed, report.residuals


def test_coulomb_extrapolation():
    coarse = lowest_eigenvalues(discretize(CoulombEffective(0), GRID), 3)
    fine = lowest_eigenvalues(discretize(CoulombEffective(0), GRID.refined()), 3)
    for n, (c, f) in enumerate(zip(coarse, fine), start=1):
        assert richardson(c, f) == pytest.approx(-1 / n**2, abs=1e-5)


def test_outer_radius_is_converged():
    problem = DeformedFamily(FactorizationParams(l=1, gamma=1.0))
    near = lowest_eigenvalues(discretize(problem, GRID), 3)
    far = lowest_eigenvalues(discretize(problem, RadialGrid.uniform(0.02, 120.0)), 3)
    assert far == pytest.approx(near, abs=1e-8)
