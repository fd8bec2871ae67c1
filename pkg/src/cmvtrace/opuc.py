"""Szego recurrence machinery for orthogonal polynomials on the unit circle.

A coefficient word is a finite sequence alpha_0, ..., alpha_{p-1} strictly
inside the open unit disk, with p even.  The monic recurrence

    Phi_{k+1}(z) = z Phi_k(z) - conj(alpha_k) Phi*_k(z)

together with the dual update Phi*_{k+1}(z) = Phi*_k(z) - alpha_k z Phi_k(z)
generates the degree-p polynomial pair everything downstream is built from.
A finalized word instead ends with a unimodular coefficient and describes a
measure supported on finitely many circle points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoefficientOutsideDisk,
    DegreeExceedsK,
    EmptyWord,
    IndexOutOfRange,
    NotOnCircle,
    OddDimension,
    OddPeriod,
    ValidationError,
)

CIRCLE_TOL = 1e-9


def _as_complex(value) -> complex:
    """Accept complex scalars, reals, or (re, im) pairs."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(
                f"coefficient pair must have two entries, got {len(value)}"
            )
        return complex(float(value[0]), float(value[1]))
    try:
        return complex(value)
    except TypeError as exc:
        raise ValidationError(f"cannot interpret {value!r} as a complex number") from exc


@dataclass(frozen=True)
class VerblunskyWord:
    """Immutable p-periodic coefficient word, |alpha_j| < 1, p even >= 2."""

    alpha: tuple[complex, ...]

    @property
    def p(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class FinalizedWord:
    """Length-n word whose terminating coefficient sits exactly on S^1."""

    alpha: tuple[complex, ...]

    @property
    def n(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class ComplexPolynomial:
    """Dense coefficients c_0, ..., c_k in ascending degree order."""

    coeffs: tuple[complex, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        value = 0j
        for c in reversed(self.coeffs):
            value = value * z + c
        return value

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)


@dataclass(frozen=True)
class RhoSequence:
    """Complementary parameters rho_j = sqrt(1 - |alpha_j|^2)."""

    rho: tuple[float, ...]

    def product(self) -> float:
        return math.prod(self.rho)


def validate_word(raw) -> VerblunskyWord:
    """Validate and freeze a periodic coefficient word.

    Entries may be complex scalars or (re, im) pairs.  Raises EmptyWord,
    OddPeriod, or CoefficientOutsideDisk (with index and modulus).
    """
    entries = [_as_complex(v) for v in raw]
    if not entries:
        raise EmptyWord("a coefficient word needs at least two entries")
    if len(entries) % 2:
        raise OddPeriod(f"period must be even, got {len(entries)}")
    for j, a in enumerate(entries):
        if abs(a) >= 1.0:
            raise CoefficientOutsideDisk(
                f"|alpha_{j}| = {abs(a)!r} but coefficients must lie strictly inside the disk"
            )
    return VerblunskyWord(tuple(entries))


def finalize_word(raw) -> FinalizedWord:
    """Freeze a finalized word, renormalizing the last entry onto S^1.

    All entries but the last must lie strictly inside the disk; the last
    must be nonzero and is divided by its modulus so the terminating
    coefficient is unimodular to the last bit.
    """
    entries = [_as_complex(v) for v in raw]
    if not entries:
        raise EmptyWord("a finalized word needs at least two entries")
    if len(entries) % 2:
        raise OddDimension(f"finalized words need even length, got {len(entries)}")
    for j, a in enumerate(entries[:-1]):
        if abs(a) >= 1.0:
            raise CoefficientOutsideDisk(
                f"|alpha_{j}| = {abs(a)!r} but interior coefficients must lie inside the disk"
            )
    last = entries[-1]
    modulus = abs(last)
    if modulus == 0.0:
        raise ValidationError("terminating coefficient must be nonzero")
    entries[-1] = last / modulus
    return FinalizedWord(tuple(entries))


def rho_of(word) -> RhoSequence:
    """rho_j for a periodic or finalized word.

    Uses (1 - |a|)(1 + |a|) instead of 1 - |a|^2 to keep precision near the
    circle.  For a finalized word the terminating rho is exactly 0.
    """
    rho = []
    for a in word.alpha:
        m = abs(a)
        rho.append(math.sqrt(max(0.0, (1.0 - m) * (1.0 + m))))
    if isinstance(word, FinalizedWord):
        rho[-1] = 0.0
    return RhoSequence(tuple(rho))


def szego_iterate(word, k: int) -> tuple[ComplexPolynomial, ComplexPolynomial]:
    """Run the monic recurrence through index k-1, returning (Phi_k, Phi*_k).

    The dual line Phi*_{j+1} = Phi*_j - alpha_j z Phi_j keeps Phi*_j equal
    to the conjugate-reversal of Phi_j without re-reversing every step, so
    both members stay consistent to machine precision.
    """
    alpha = word.alpha
    if not 0 <= k <= len(alpha):
        raise IndexOutOfRange(f"k = {k} outside 0..{len(alpha)}")
    phi = np.array([1.0 + 0j])
    star = np.array([1.0 + 0j])
    for j in range(k):
        a = alpha[j]
        shifted = np.concatenate(([0j], phi))  # z * Phi_j
        padded = np.concatenate((star, [0j]))  # Phi*_j at the new length
        phi, star = shifted - np.conj(a) * padded, padded - a * shifted
    return (
        ComplexPolynomial(tuple(complex(c) for c in phi)),
        ComplexPolynomial(tuple(complex(c) for c in star)),
    )


def reverse_poly(poly: ComplexPolynomial, k: int) -> ComplexPolynomial:
    """Conjugate-reversal at reference degree k: out_l = conj(c_{k-l})."""
    if poly.degree > k:
        raise DegreeExceedsK(f"degree {poly.degree} exceeds reference degree {k}")
    padded = list(poly.coeffs) + [0j] * (k - poly.degree)
    return ComplexPolynomial(tuple(complex(c).conjugate() for c in reversed(padded)))


def orthonormal_pth(word: VerblunskyWord) -> ComplexPolynomial:
    """Orthonormal polynomial phi_p = Phi_p / prod(rho_j)."""
    phi, _ = szego_iterate(word, word.p)
    norm = rho_of(word).product()
    return ComplexPolynomial(tuple(c / norm for c in phi.coeffs))


def eval_with_derivative(poly: ComplexPolynomial, z: complex) -> tuple[complex, complex]:
    """Single-pass Horner evaluation of (poly(z), poly'(z))."""
    value = 0j
    deriv = 0j
    for c in reversed(poly.coeffs):
        deriv = deriv * z + value
        value = value * z + c
    return value, deriv


def radial_modulus_derivative(
    poly: ComplexPolynomial, z: complex, circle_tol: float = CIRCLE_TOL
) -> float:
    """d/dr at r = 1 of |poly(r z)|^2 for z on the unit circle.

    Exact form 2 Re(z poly'(z) conj(poly(z))); no finite differencing.
    """
    z = complex(z)
    if abs(abs(z) - 1.0) > circle_tol:
        raise NotOnCircle(f"|z| = {abs(z)!r} is not on the unit circle")
    value, deriv = eval_with_derivative(poly, z)
    return 2.0 * (z * deriv * value.conjugate()).real
