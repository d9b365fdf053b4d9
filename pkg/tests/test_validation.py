"""Tests for identity-check rules."""

from __future__ import annotations

import numpy as np
import pytest

from iso_coulomb.models.base import FactorizationParams
from iso_coulomb.models.report import GridDiagnostics, SpectrumReport
from iso_coulomb.validation import rules
from iso_coulomb.validation.rules import (
    Violation,
    check_critical_limit,
    check_missing_state_annihilation,
    check_riccati,
    check_spectrum_residuals,
    run_identity_checks,
)


def _report(residuals, tolerance=1e-5):
    targets = [-1.0, -0.25]
    return SpectrumReport(
        l=1, gamma=1.0, mode="regular",
        eigenvalues=[t + r for t, r in zip(targets, residuals)],
        coarse_eigenvalues=targets, fine_eigenvalues=targets,
        targets=targets, principal_numbers=[1, 2], residuals=residuals,
        tolerance=tolerance, passed=max(residuals) <= tolerance, certified=True,
        diagnostics=GridDiagnostics(step=0.02, refined_step=0.01, r_max=60.0, n_points=3000),
    )


@pytest.mark.parametrize(("l", "gamma"), [(1, 1.0), (1, 0.25), (1, -1.0), (2, 30.0), (3, -5.0)])
def test_identities_hold(l, gamma):
    assert run_identity_checks(FactorizationParams(l=l, gamma=gamma)) == []


def test_critical_limit_only_applies_to_l1_critical():
    assert check_critical_limit(FactorizationParams(l=2, gamma=24.0)) == []
    assert check_critical_limit(FactorizationParams(l=1, gamma=1.0)) == []
    assert check_critical_limit(FactorizationParams(l=1, gamma=0.25)) == []


def test_annihilation_skips_non_normalizable_states():
    assert check_missing_state_annihilation(FactorizationParams(l=1, gamma=0.25)) == []


def test_riccati_violation_is_reported(monkeypatch):
    params = FactorizationParams(l=1, gamma=1.0)
    original = rules.beta
    monkeypatch.setattr(rules, "beta", lambda p, r: np.asarray(original(p, r)) + 1e-3)
    violations = check_riccati(params)
    assert len(violations) == 1
    assert violations[0].rule_name == "riccati"
    assert violations[0].severity == "error"
    assert violations[0].context["residual"] > 1e-9


def test_spectrum_residuals():
    assert check_spectrum_residuals(_report([1e-7, 2e-6])) == []
    violations = check_spectrum_residuals(_report([1e-7, 1e-3]))
    assert [v.context["n"] for v in violations] == [2]
    assert "n=2" in violations[0].message


def test_report_violations_are_merged():
    params = FactorizationParams(l=1, gamma=1.0)
    violations = run_identity_checks(params, _report([1e-2, 1e-2]))
    assert {v.rule_name for v in violations} == {"isospectral_level"}
    assert len(violations) == 2


def test_violation_to_dict():
    v = Violation(rule_name="riccati", severity="error", message="m", context={"radius": 1.0})
    assert v.to_dict() == {
        "rule_name": "riccati", "severity": "error", "message": "m", "context": {"radius": 1.0},
    }
