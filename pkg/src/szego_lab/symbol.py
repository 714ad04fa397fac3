"""Analytic log-weights L(θ) on the unit circle and their Fourier moments.

A log-weight is a real Laurent polynomial L(θ) = Σ_{|k|≤K} l_k e^{ikθ} with
l_{-k} = conj(l_k); the associated weight is w = e^L and the moments are
c_n = ∫ e^{-inθ} w(θ) dθ/2π.  Moments are computed by FFT on a uniform grid
with adaptive doubling, which is spectrally accurate for these integrands.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import quadrature
from .errors import (
    ConjugateSymmetryError,
    PositivityError,
    QuadratureError,
    SymbolParseError,
)

SYMMETRY_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-13


@dataclass(frozen=True)
class LaurentSymbol:
    """Finitely many Fourier coefficients of a real-valued log-weight.

    Only k ≥ 0 is stored, as ``coeffs[k] = l_k``; the negative-index
    coefficients are implied by the Hermitian symmetry l_{-k} = conj(l_k).
    ``coeffs[0]`` is real.
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        if not self.coeffs:
            object.__setattr__(self, "coeffs", (0.0 + 0.0j,))
        if abs(complex(self.coeffs[0]).imag) > IMAG_RESIDUE_TOL:
            raise ConjugateSymmetryError(
                f"constant coefficient must be real, got {self.coeffs[0]}"
            )

    @property
    def bandwidth(self) -> int:
        """Largest |k| with a stored coefficient (K)."""
        return len(self.coeffs) - 1

    @property
    def mean(self) -> float:
        """l_0, the mean of L over the circle."""
        return complex(self.coeffs[0]).real

    def coeff(self, k: int) -> complex:
        """l_k for any integer k, zero beyond the bandwidth."""
        if abs(k) > self.bandwidth:
            return 0.0 + 0.0j
        value = complex(self.coeffs[abs(k)])
        return value if k >= 0 else value.conjugate()

    def as_map(self) -> dict[int, complex]:
        """Full coefficient map including negative indices."""
        out = {0: complex(self.mean)}
        for k in range(1, self.bandwidth + 1):
            out[k] = complex(self.coeffs[k])
            out[-k] = complex(self.coeffs[k]).conjugate()
        return out


def make_symbol(coeffs: Mapping[int, complex]) -> LaurentSymbol:
    """Build a symbol from a finite k → l_k map, enforcing Hermitian symmetry.

    Coefficients are symmetrized as l_k ← (l_k + conj(l_{-k}))/2.  Input whose
    symmetrized form differs from the original by more than 1e-12 in any
    coefficient is rejected: it would describe a non-real log-weight.
    """
    if not coeffs:
        return LaurentSymbol((0.0 + 0.0j,))
    bandwidth = max(abs(int(k)) for k in coeffs)
    full = {int(k): complex(v) for k, v in coeffs.items()}
    stored = []
    for k in range(bandwidth + 1):
        plus = full.get(k, 0.0 + 0.0j)
        minus = full.get(-k, 0.0 + 0.0j)
        sym = 0.5 * (plus + minus.conjugate())
        for provided, symmetrized in ((k, sym), (-k, sym.conjugate())):
            if provided in full and abs(full[provided] - symmetrized) > SYMMETRY_TOL:
                raise ConjugateSymmetryError(
                    f"coefficient {provided} violates l_-k = conj(l_k): "
                    f"{full[provided]} vs symmetrized {symmetrized}"
                )
        stored.append(sym)
    stored[0] = complex(stored[0].real)
    return LaurentSymbol(tuple(stored))


def eval_log_weight(s: LaurentSymbol, theta) -> np.ndarray | float:
    """L(θ) = Σ_{|k|≤K} l_k e^{ikθ}, returned as a real value.

    The conjugate pairs cancel the imaginary part exactly; the residue is
    asserted below 1e-13 before being discarded.
    """
    theta_arr = np.asarray(theta, dtype=float)
    z = np.exp(1j * theta_arr)
    positive = np.zeros(1, dtype=complex) if s.bandwidth == 0 else np.asarray(
        [0.0] + [s.coeffs[k] for k in range(1, s.bandwidth + 1)], dtype=complex
    )
    partial = np.polynomial.polynomial.polyval(z, positive)
    total = s.mean + partial + np.conj(partial)
    residue = np.max(np.abs(total.imag)) if total.size else 0.0
    if residue > IMAG_RESIDUE_TOL:
        raise ConjugateSymmetryError(f"imaginary residue {residue:g} in log-weight")
    real = total.real
    return float(real) if np.isscalar(theta) or theta_arr.ndim == 0 else real


def eval_weight(s: LaurentSymbol, theta) -> np.ndarray | float:
    """w(θ) = exp(L(θ)); strictly positive."""
    return np.exp(eval_log_weight(s, theta))


@dataclass(frozen=True)
class MomentSequence:
    """Toeplitz moments c_0..c_N of a positive weight; c_{-n} = conj(c_n).

    Only n ≥ 0 is stored, so Hermitian symmetry holds exactly by construction.
    ``quadrature_points`` records the grid that produced the values (0 for
    moments given in closed form).
    """

    values: tuple[complex, ...]
    quadrature_points: int = 0

    def __post_init__(self):
        if not self.values:
            raise ValueError("a moment sequence needs at least c_0")
        c0 = complex(self.values[0])
        if abs(c0.imag) > IMAG_RESIDUE_TOL * max(1.0, abs(c0)):
            raise PositivityError(f"c_0 must be real, got {c0}")
        if c0.real <= 0.0:
            raise PositivityError(f"c_0 must be strictly positive, got {c0.real}")

    @property
    def order(self) -> int:
        return len(self.values) - 1

    @property
    def c0(self) -> float:
        return complex(self.values[0]).real

    def moment(self, n: int) -> complex:
        """c_n for |n| ≤ order."""
        if abs(n) > self.order:
            raise IndexError(f"moment index {n} beyond order {self.order}")
        value = complex(self.values[abs(n)])
        return value if n >= 0 else value.conjugate()

    def nonnegative(self) -> np.ndarray:
        """c_0..c_N as a complex array."""
        return np.asarray(self.values, dtype=complex)

    def normalized(self) -> "MomentSequence":
        """Moments of the probability-normalized measure dμ/c_0."""
        scaled = tuple(complex(v) / self.c0 for v in self.values)
        return MomentSequence(scaled, self.quadrature_points)


def _grid_moments(w: Callable[[np.ndarray], np.ndarray], n_max: int, m: int) -> np.ndarray:
    values = np.asarray(w(quadrature.angles(m)), dtype=float)
    spectrum = np.fft.rfft(values) / m
    if n_max >= spectrum.size:
        raise QuadratureError(f"grid of {m} points cannot resolve moment order {n_max}")
    return spectrum[: n_max + 1]


def moments_from_function(
    w: Callable[[np.ndarray], np.ndarray],
    n_max: int,
    start: int = 64,
    tol: float = quadrature.STAGNATION_TOL,
    fail_tol: float = quadrature.FAILURE_TOL,
) -> MomentSequence:
    """Moments c_0..c_{n_max} of a positive weight given as a grid-evaluable function.

    The m-point uniform rule (1/m) Σ_j e^{-inθ_j} w(θ_j) is applied via the FFT,
    doubling m until no coefficient moves by more than ``tol`` or the grid cap
    is exceeded; only n ≥ 0 is computed, so symmetry is exact.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    cap = quadrature.grid_cap()
    m = min(max(int(start), 2 * (n_max + 1)), cap)
    current = _grid_moments(w, n_max, m)
    change = np.inf
    while 2 * m <= cap:
        m *= 2
        doubled = _grid_moments(w, n_max, m)
        change = float(np.max(np.abs(doubled - current)))
        current = doubled
        if change < tol:
            break
    else:
        if change > fail_tol:
            raise QuadratureError(
                f"moment quadrature did not stagnate below {fail_tol:g} "
                f"within the grid cap {cap} (last change {change:g})"
            )
    values = list(current)
    values[0] = complex(values[0].real)
    return MomentSequence(tuple(values), m)


def moments(s: LaurentSymbol, n_max: int) -> MomentSequence:
    """Moments of w = e^L for a symbol, starting from m = max(64, 8(n_max+K))."""
    start = max(64, 8 * (n_max + s.bandwidth))
    return moments_from_function(lambda th: eval_weight(s, th), n_max, start=start)


def gi_truncate(s: LaurentSymbol, n: int) -> LaurentSymbol:
    """Drop all coefficients with |k| > n (Fourier truncation of L)."""
    if n < 0:
        raise ValueError("truncation order must be nonnegative")
    kept = s.coeffs[: n + 1]
    return LaurentSymbol(tuple(kept))


def target_sum(s: LaurentSymbol) -> tuple[float, float]:
    """(l_0, Σ_{k≥1} k |l_k|²) — the two terms of the determinant asymptotics."""
    tail = sum(k * abs(complex(s.coeffs[k])) ** 2 for k in range(1, s.bandwidth + 1))
    return s.mean, float(tail)


# --------------------------------------------------------------------------
# symbol files: one `k re im` line per stored coefficient, k ≥ 0, `#` comments
# --------------------------------------------------------------------------


def parse_symbol(text: str) -> LaurentSymbol:
    """Parse the plain-text symbol format (negative k implied by symmetry)."""
    seen: dict[int, complex] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise SymbolParseError(
                f"expected `k re im`, got {len(parts)} fields", lineno=lineno
            )
        try:
            k = int(parts[0])
            re, im = float(parts[1]), float(parts[2])
        except ValueError:
            raise SymbolParseError(f"could not parse {line!r}", lineno=lineno) from None
        if k < 0:
            raise SymbolParseError(
                "only k >= 0 may be stored; negative k is implied", lineno=lineno
            )
        if k in seen:
            raise SymbolParseError(f"duplicate coefficient k={k}", lineno=lineno)
        if k == 0 and im != 0.0:
            raise SymbolParseError("coefficient 0 must be real", lineno=lineno)
        seen[k] = complex(re, im)
    full = dict(seen)
    for k, v in seen.items():
        if k > 0:
            full[-k] = v.conjugate()
    return make_symbol(full)


def load_symbol(path) -> LaurentSymbol:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_symbol(handle.read())


def format_symbol(s: LaurentSymbol) -> str:
    lines = ["# k re im"]
    for k in range(s.bandwidth + 1):
        v = complex(s.coeffs[k])
        if k > 0 and v == 0:
            continue
        lines.append(f"{k} {v.real:.17g} {v.imag:.17g}")
    return "\n".join(lines) + "\n"


def save_symbol(s: LaurentSymbol, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_symbol(s))
