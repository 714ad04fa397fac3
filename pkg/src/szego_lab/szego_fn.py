"""The Szegő function D(z) and the diagnostics built on it.

For an analytic log-weight L with coefficients l_k, the outer function
D(z) = exp(l_0/2) · exp(Σ_{k≥1} l_k z^k) satisfies |D(e^{iθ})|² = w(θ) and
D(0) = κ_∞^{-1}.  This module holds the series, its reciprocal, the
D-function route to the Verblunsky coefficients, the exponential-decay fit,
and the disk-integral form of Σ k|l_k|².
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quadrature
from .errors import InsufficientDataError
from .opuc import RecursionState, orthonormal_star
from .symbol import LaurentSymbol

#: |α_n| below this is double-precision noise, unusable for fits
DECAY_FLOOR = 1e-13


@dataclass(frozen=True)
class SzegoSeries:
    """D(z) = d0 · exp(Σ_{k≥1} log_series[k-1] z^k), with d0 = exp(l_0/2)."""

    d0: float
    log_series: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "log_series", np.asarray(self.log_series, dtype=complex)
        )

    @property
    def truncation(self) -> int:
        return len(self.log_series)


def build_szego(s: LaurentSymbol) -> SzegoSeries:
    """Szegő function of an analytic symbol: entire for finite bandwidth."""
    tail = np.asarray(s.coeffs[1:], dtype=complex)
    return SzegoSeries(d0=float(np.exp(0.5 * s.mean)), log_series=tail)


def eval_D(d: SzegoSeries, z) -> np.ndarray | complex:
    """D(z); exact up to rounding for finite truncation."""
    z_arr = np.asarray(z, dtype=complex)
    series = np.concatenate([np.zeros(1, dtype=complex), d.log_series])
    values = d.d0 * np.exp(np.polynomial.polynomial.polyval(z_arr, series))
    return complex(values) if np.isscalar(z) or z_arr.ndim == 0 else values


def _series_exp(g: np.ndarray, j_max: int) -> np.ndarray:
    """Taylor coefficients of exp(Σ g_k z^k), g indexed from k=1.

    The first-derivative recurrence m e_m = Σ_{k=1}^{m} k g_k e_{m-k} is
    numerically stable for the coefficient sizes in scope.
    """
    out = np.zeros(j_max + 1, dtype=complex)
    out[0] = 1.0
    for m in range(1, j_max + 1):
        acc = 0.0 + 0.0j
        for k in range(1, min(m, len(g)) + 1):
            acc += k * g[k - 1] * out[m - k]
        out[m] = acc / m
    return out


def series_coeffs(d: SzegoSeries, j_max: int) -> np.ndarray:
    """Taylor coefficients of D itself."""
    return d.d0 * _series_exp(d.log_series, j_max)


def inverse_coeffs(d: SzegoSeries, j_max: int) -> np.ndarray:
    """Taylor coefficients of 1/D(z), via exp of the negated log-series."""
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    return _series_exp(-d.log_series, j_max) / d.d0


def alpha_from_D(
    states: Sequence[RecursionState], d: SzegoSeries, n: int, start: int = 512
) -> complex:
    """α_n from the D-function integral, independent of the recursion route.

    α_n = -κ_∞ ∫ conj(Φ_{n+1}(e^{iθ})) D(e^{iθ})^{-1} dμ(θ) with
    κ_∞ = D(0)^{-1}; the boundary measure dμ = |D|² dθ/2π requires no
    separate weight evaluation.
    """
    if len(states) <= n + 1:
        raise ValueError(f"alpha_{n} needs the degree-{n + 1} state")
    phi_next = states[n + 1].phi

    def integrand(theta: np.ndarray) -> np.ndarray:
        z = np.exp(1j * theta)
        # D^{-1} dμ = (|D|²/D) dθ/2π = conj(D) dθ/2π on the boundary
        return np.conj(phi_next(z)) * np.conj(eval_D(d, z))

    kappa_inf = 1.0 / d.d0
    value, _ = quadrature.adaptive_circle_mean(integrand, start=start)
    return complex(-kappa_inf * value)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares line through (n, log|α_n|) over the usable window."""

    a_half: float  # magnitude of the slope: |α_n| ≈ C e^{-a_half · n}
    c: float       # exp(intercept)
    r2: float
    window: tuple[int, ...]


def decay_fit(alphas: Sequence[complex], floor: float = DECAY_FLOOR) -> DecayFit:
    """Fit the exponential decay rate of the Verblunsky coefficients.

    Requires at least 8 points above the double-precision floor.
    """
    mags = np.abs(np.asarray(alphas, dtype=complex))
    usable = np.flatnonzero(mags > floor)
    if len(usable) < 8:
        raise InsufficientDataError(
            f"decay fit needs >= 8 usable points, found {len(usable)}"
        )
    x = usable.astype(float)
    y = np.log(mags[usable])
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayFit(
        a_half=float(-slope),
        c=float(np.exp(intercept)),
        r2=float(r2),
        window=tuple(int(i) for i in usable),
    )


def disk_integral_check(
    d: SzegoSeries, r: float, n_radial: int = 64, n_angular: int = 256
) -> float:
    """(1/π) ∫_{|z|≤r} |∂_z log D|² d²z by Gauss–Legendre × uniform tensor rule.

    For an analytic symbol this equals Σ_{k≥1} k |l_k|² r^{2k}; the integrand
    |Σ k l_k z^{k-1}|² is a polynomial in z and z̄ of modest degree, so the
    fixed rule is effectively exact.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if d.truncation == 0:
        return 0.0
    deriv = np.arange(1, d.truncation + 1) * d.log_series  # ∂_z log D coefficients
    radii, weights = quadrature.gauss_legendre(n_radial, 0.0, r)
    theta = quadrature.angles(n_angular)
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    values = np.abs(np.polynomial.polynomial.polyval(z, deriv)) ** 2
    angular_mean = values.mean(axis=1)  # (1/2π) ∫ dθ
    return float(2.0 * np.sum(weights * radii * angular_mean))


def phi_star_convergence(
    states: Sequence[RecursionState],
    d: SzegoSeries,
    grid: np.ndarray | None = None,
) -> np.ndarray:
    """max_z |φ_n*(z) - D(z)^{-1}| per degree n, on a grid reaching past the circle.

    The default grid is 16 radii × 64 angles inside |z| ≤ 1.05, probing the
    analytic continuation of the convergence beyond the boundary.
    """
    if grid is None:
        radii = 1.05 * (np.arange(1, 17) / 16.0)
        angles = quadrature.angles(64)
        grid = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    target = 1.0 / eval_D(d, grid)
    out = np.empty(len(states))
    for i, state in enumerate(states):
        values = np.polynomial.polynomial.polyval(grid, orthonormal_star(state))
        out[i] = float(np.max(np.abs(values - target)))
    return out


def boundary_l2_error(
    states: Sequence[RecursionState], d: SzegoSeries, grid_m: int = 512
) -> np.ndarray:
    """∫ |D φ_n* - 1|² dθ/2π per degree n, on a fixed uniform boundary grid."""
    theta = quadrature.angles(grid_m)
    z = np.exp(1j * theta)
    dv = eval_D(d, z)
    out = np.empty(len(states))
    for i, state in enumerate(states):
        values = np.polynomial.polynomial.polyval(z, orthonormal_star(state))
        out[i] = float(np.mean(np.abs(dv * values - 1.0) ** 2))
    return out
