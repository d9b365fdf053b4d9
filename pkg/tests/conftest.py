"""Shared fixtures: family members and finite-difference oracles."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest

from iso_coulomb.models.base import FactorizationParams

Fn = Callable[[np.ndarray], np.ndarray]


def _first(f: Fn, r: np.ndarray, h: float) -> np.ndarray:
    return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h)


def _second(f: Fn, r: np.ndarray, h: float) -> np.ndarray:
    return (
        -f(r + 2 * h) + 16 * f(r + h) - 30 * f(r) + 16 * f(r - h) - f(r - 2 * h)
    ) / (12 * h * h)


@pytest.fixture
def d1() -> Callable[..., np.ndarray]:
    """Five-point first derivative."""

    def derivative(f: Fn, r: np.ndarray, h: float = 1e-3) -> np.ndarray:
        return _first(lambda x: np.asarray(f(x), dtype=float), np.asarray(r, dtype=float), h)

    return derivative


@pytest.fixture
def d2() -> Callable[..., np.ndarray]:
    """Five-point second derivative."""

    def derivative(f: Fn, r: np.ndarray, h: float = 1e-3) -> np.ndarray:
        return _second(lambda x: np.asarray(f(x), dtype=float), np.asarray(r, dtype=float), h)

    return derivative


@pytest.fixture
def regular_l1() -> FactorizationParams:
    return FactorizationParams(l=1, gamma=1.0)


@pytest.fixture
def critical_l1() -> FactorizationParams:
    return FactorizationParams(l=1, gamma=0.25)
