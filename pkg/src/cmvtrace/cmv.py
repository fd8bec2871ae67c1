"""CMV and Floquet CMV matrix assembly from coefficient words.

Both constructions factor as L * M with L = diag(Theta_0, Theta_2, ...) and
M collecting the odd-indexed blocks.  The finite matrix terminates M with
the scalars 1 and conj(alpha_{n-1}); the Floquet matrix instead wraps the
terminating block around the corners with quasimomentum beta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BetaNotUnimodular,
    NotNormalized,
    OddDimension,
    UnsupportedPower,
)
from .opuc import CIRCLE_TOL, FinalizedWord, VerblunskyWord, rho_of

# A ThetaBlock is just a 2x2 complex ndarray; no wrapper type needed.
ThetaBlock = np.ndarray

_NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class UnitaryMatrix:
    """Dense unitary matrix tagged with how it was assembled.

    kind is one of "finite_cmv", "floquet", "other"; beta records the
    quasimomentum for Floquet matrices.  Entries are frozen read-only.
    """

    entries: np.ndarray
    kind: str = "other"
    beta: complex | None = None

    def __post_init__(self):
        e = np.array(self.entries, dtype=complex)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _entries(U) -> np.ndarray:
    if isinstance(U, UnitaryMatrix):
        return U.entries
    return np.asarray(U, dtype=complex)


def theta_block(alpha: complex, rho: float) -> ThetaBlock:
    """2x2 unitary [[conj(alpha), rho], [rho, -alpha]].

    Requires |alpha|^2 + rho^2 = 1 within 1e-12.
    """
    alpha = complex(alpha)
    rho = float(rho)
    if abs(abs(alpha) ** 2 + rho**2 - 1.0) > _NORMALIZATION_TOL:
        raise NotNormalized(
            f"|alpha|^2 + rho^2 = {abs(alpha) ** 2 + rho ** 2!r}, expected 1"
        )
    return np.array([[alpha.conjugate(), rho], [rho, -alpha]], dtype=complex)


def build_finite_cmv(fin: FinalizedWord) -> UnitaryMatrix:
    """Finite n x n CMV matrix C = L M for a finalized word.

    L carries Theta blocks at even offsets 0, 2, ..., n-2; M starts with
    the scalar 1, carries Theta blocks at odd offsets, and terminates with
    the scalar conj(alpha_{n-1}).  For n = 2, M = diag(1, conj(alpha_1)).
    """
    n = fin.n
    if n % 2:
        raise OddDimension(f"finite CMV needs even dimension, got {n}")
    alpha = fin.alpha
    rho = rho_of(fin).rho
    L = np.zeros((n, n), dtype=complex)
    for j in range(0, n - 1, 2):
        L[j : j + 2, j : j + 2] = theta_block(alpha[j], rho[j])
    M = np.zeros((n, n), dtype=complex)
    M[0, 0] = 1.0
    for j in range(1, n - 2, 2):
        M[j : j + 2, j : j + 2] = theta_block(alpha[j], rho[j])
    M[n - 1, n - 1] = alpha[n - 1].conjugate()
    return UnitaryMatrix(L @ M, kind="finite_cmv")


def build_floquet(
    word: VerblunskyWord, beta: complex, circle_tol: float = CIRCLE_TOL
) -> UnitaryMatrix:
    """Floquet CMV matrix E(beta) = L M(beta) on one period.

    M(beta) wraps the terminating coefficient around the corners:
    M[0,0] = -alpha_{p-1}, M[0,p-1] = rho_{p-1}/beta,
    M[p-1,0] = rho_{p-1} beta, M[p-1,p-1] = conj(alpha_{p-1}),
    with the usual Theta blocks at odd offsets in between.  For p = 2
    there are no interior blocks and M is exactly that 2x2 corner matrix.
    """
    beta = complex(beta)
    if abs(abs(beta) - 1.0) > circle_tol:
        raise BetaNotUnimodular(f"|beta| = {abs(beta)!r} is not unimodular")
    p = word.p
    alpha = word.alpha
    rho = rho_of(word).rho
    L = np.zeros((p, p), dtype=complex)
    for j in range(0, p - 1, 2):
        L[j : j + 2, j : j + 2] = theta_block(alpha[j], rho[j])
    M = np.zeros((p, p), dtype=complex)
    M[0, 0] = -alpha[p - 1]
    M[0, p - 1] = rho[p - 1] / beta
    M[p - 1, 0] = rho[p - 1] * beta
    M[p - 1, p - 1] = alpha[p - 1].conjugate()
    for j in range(1, p - 2, 2):
        M[j : j + 2, j : j + 2] = theta_block(alpha[j], rho[j])
    return UnitaryMatrix(L @ M, kind="floquet", beta=beta)


def trace_power(U, k: int) -> complex:
    """Tr(U^k) for k in {1, 2} without forming U^k.

    Tr(U^2) = sum_ij U_ij U_ji, one elementwise product with the transpose.
    """
    e = _entries(U)
    if k == 1:
        return complex(np.trace(e))
    if k == 2:
        return complex(np.sum(e * e.T))
    raise UnsupportedPower(f"only powers 1 and 2 are supported, got {k}")


def determinant(U) -> complex:
    """det(U) by Gaussian elimination with partial pivoting.

    Deliberately not an eigenvalue product, so determinant identities can
    be cross-checked against spectral products computed elsewhere.
    """
    a = _entries(U).astype(complex, copy=True)
    n = a.shape[0]
    det = 1.0 + 0j
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            return 0j
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            det = -det
        det *= a[col, col]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :, col:] -= np.outer(factors, a[col, col:])
    return det


def unitarity_defect(U) -> float:
    """max |(U U^H - I)_ij|, zero for exactly unitary input."""
    e = _entries(U)
    n = e.shape[0]
    return float(np.max(np.abs(e @ e.conj().T - np.eye(n))))


def structure_mask(n: int, kind: str = "finite_cmv") -> np.ndarray:
    """Boolean mask of positions allowed to be nonzero.

    CMV-type matrices have bandwidth 2; the Floquet variant additionally
    owns the 2x2 wrap-around corners.
    """
    i, j = np.indices((n, n))
    mask = np.abs(i - j) <= 2
    if kind == "floquet":
        mask |= ((i <= 1) & (j >= n - 2)) | ((i >= n - 2) & (j <= 1))
    return mask
