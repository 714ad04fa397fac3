"""Spectral quadrature on the torus.

Periodic analytic integrands are integrated with the uniform-grid rule
(trapezoid = rectangle on the torus), which converges geometrically in the
number of nodes.  All adaptive routines double the grid until successive
values stagnate below a tolerance, capped by ``SZEGO_LAB_GRID_MAX``.
"""

from __future__ import annotations

import os
from typing import Callable

import numpy as np

from .errors import QuadratureError

GRID_CAP_ENV = "SZEGO_LAB_GRID_MAX"
DEFAULT_GRID_CAP = 2**20

#: stagnation threshold for grid doubling
STAGNATION_TOL = 1e-14
#: largest acceptable change when the doubling cap is hit
FAILURE_TOL = 1e-10


def grid_cap() -> int:
    """Upper bound on quadrature grid sizes, overridable via the environment."""
    raw = os.environ.get(GRID_CAP_ENV)
    if raw is None:
        return DEFAULT_GRID_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise QuadratureError(f"{GRID_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise QuadratureError(f"{GRID_CAP_ENV} must be positive, got {cap}")
    return cap


def angles(m: int) -> np.ndarray:
    """Uniform grid θ_j = 2πj/m, j = 0..m-1."""
    return 2.0 * np.pi * np.arange(m) / m


def circle_mean(values: np.ndarray) -> complex:
    """(1/m) Σ_j f(θ_j), the torus quadrature of ∫ f dθ/2π."""
    return np.mean(values)


def adaptive_circle_mean(
    f: Callable[[np.ndarray], np.ndarray],
    start: int = 64,
    tol: float = STAGNATION_TOL,
    fail_tol: float = FAILURE_TOL,
) -> tuple[complex, int]:
    """Doubling uniform-grid quadrature of ∫ f(θ) dθ/2π.

    Returns the stagnated value and the grid size that produced it.  Raises
    :class:`QuadratureError` if the cap is reached while successive values
    still differ by more than ``fail_tol``.
    """
    cap = grid_cap()
    m = min(max(int(start), 1), cap)
    value = circle_mean(f(angles(m)))
    change = np.inf
    while 2 * m <= cap:
        m *= 2
        new = circle_mean(f(angles(m)))
        change = abs(new - value)
        value = new
        if change < tol:
            return value, m
    if change > fail_tol:
        raise QuadratureError(
            f"circle quadrature did not stagnate below {fail_tol:g} "
            f"within the grid cap {cap} (last change {change:g})"
        )
    return value, m


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights transplanted to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w
