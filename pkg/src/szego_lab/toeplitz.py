"""Direct Toeplitz linear algebra and the determinant functionals F and G.

Two independent determinant routes live here: Cholesky factorization of the
assembled Hermitian Toeplitz matrix, and the product of squared norms
D_n = Π_{j≤n} ‖Φ_j‖² accumulated from the Verblunsky coefficients.  The
ledger tracks log D_n, the ratio D_{n+1}/D_n, the running product
F = c_0 Π (1-|α_j|²), and G_n = Π_j (1-|α_j|²)^{-min(n,j)-1}, all carried in
log space internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PositivityError
from .opuc import RecursionState
from .symbol import MomentSequence

CSV_SCHEMA = "# schema=1"


def assemble(m: MomentSequence, n: int) -> np.ndarray:
    """(n+1)×(n+1) Toeplitz matrix with entry (i, j) = c_{j-i}."""
    if m.order < n:
        raise ValueError(f"moments up to order {n} required, have {m.order}")
    pos = m.nonnegative()[: n + 1]
    strip = np.concatenate([np.conj(pos[::-1]), pos[1:]])  # c_{-n}..c_n
    idx = np.arange(n + 1)
    return strip[idx[None, :] - idx[:, None] + n]


def log_det_direct(t: np.ndarray) -> float:
    """log det via Cholesky: 2 Σ log diag(L).  Never forms the determinant itself.

    A factorization failure is diagnostic (the matrix is not positive
    definite) and surfaces as :class:`PositivityError`.
    """
    try:
        chol = np.linalg.cholesky(t)
    except np.linalg.LinAlgError as exc:
        raise PositivityError(f"Toeplitz matrix is not positive definite: {exc}") from exc
    return float(2.0 * np.sum(np.log(np.real(np.diag(chol)))))


def log_det_product(state: RecursionState) -> float:
    """log D_n = Σ_{j=0}^{n} log ‖Φ_j‖² from c_0 and the Verblunsky coefficients.

    Equals (n+1) log c_0 + Σ_{j<n} (n-j) log(1-|α_j|²).
    """
    n = state.n
    total = (n + 1) * np.log(state.c0)
    for j, alpha in enumerate(state.alphas[:n]):
        total += (n - j) * np.log1p(-abs(alpha) ** 2)
    return float(total)


@dataclass(frozen=True)
class LedgerRow:
    n: int
    log_dn: float
    ratio: float  # D_{n+1}/D_n
    g_n: float
    f_running: float


@dataclass(frozen=True)
class DeterminantLedger:
    """Per-degree record of the determinant functionals for one measure."""

    rows: tuple[LedgerRow, ...]
    log_c0: float

    def to_csv(self) -> str:
        lines = [
            CSV_SCHEMA,
            f"# log_c0={self.log_c0:.17g}",
            "n,log_dn,ratio,g_n,f_running",
        ]
        for row in self.rows:
            lines.append(
                f"{row.n},{row.log_dn:.17g},{row.ratio:.17g},"
                f"{row.g_n:.17g},{row.f_running:.17g}"
            )
        return "\n".join(lines) + "\n"


def ledger(state: RecursionState, n_max: int | None = None) -> DeterminantLedger:
    """Ledger rows for n = 0..n_max from a recursion state holding the α's.

    G_n uses the probability-normalized convention G_n(dμ) = G_n(dμ/c_0),
    which depends on the α's alone; log c_0 is recorded separately.  The
    state must carry at least n_max + 1 Verblunsky coefficients so the ratio
    column D_{n+1}/D_n = c_0 Π_{j≤n}(1-|α_j|²) is available on every row.
    """
    if n_max is None:
        n_max = state.n - 1
    if n_max < 0:
        raise ValueError("ledger needs n_max >= 0")
    if len(state.alphas) < n_max + 1:
        raise ValueError(
            f"ledger to n={n_max} needs {n_max + 1} alphas, state holds {len(state.alphas)}"
        )
    log_c0 = float(np.log(state.c0))
    log_rho_sq = np.array([np.log1p(-abs(a) ** 2) for a in state.alphas])
    rows = []
    log_dn = 0.0
    for n in range(n_max + 1):
        log_dn = (n + 1) * log_c0 + float(
            np.sum((n - np.arange(n)) * log_rho_sq[:n])
        )
        log_ratio = log_c0 + float(np.sum(log_rho_sq[: n + 1]))
        exponents = np.minimum(n, np.arange(len(log_rho_sq))) + 1
        log_g = -float(np.sum(exponents * log_rho_sq))
        rows.append(
            LedgerRow(
                n=n,
                log_dn=log_dn,
                ratio=float(np.exp(log_ratio)),
                g_n=float(np.exp(log_g)),
                f_running=float(np.exp(log_ratio)),
            )
        )
    return DeterminantLedger(rows=tuple(rows), log_c0=log_c0)
