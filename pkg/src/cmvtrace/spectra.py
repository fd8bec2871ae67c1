"""Spectra, Dirichlet data, and band/gap layout for periodic words.

Every quantity here has two computation routes: a LAPACK eigensolve on the
assembled matrices, and a matrix-free route through the Szego recurrence
(characteristic polynomial recursion, Aberth root iteration, theta-grid
bisection).  The routes share no linear algebra, which is what makes the
cross-checks in the test suite meaningful.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cmv import UnitaryMatrix, _entries, build_finite_cmv, build_floquet, unitarity_defect
from .errors import (
    IllConditioned,
    NoConvergence,
    NonpositiveDenominator,
    NotUnitary,
    PairingFailure,
    PatternMismatch,
    RootCountMismatch,
    ValidationError,
)
from .opuc import (
    ComplexPolynomial,
    FinalizedWord,
    VerblunskyWord,
    finalize_word,
    orthonormal_pth,
    radial_modulus_derivative,
    rho_of,
    szego_iterate,
)

TWO_PI = 2.0 * math.pi

# |1 + alpha_{p-1}| below this is reported as ill-conditioned.  The relative
# slack absorbs decimal-to-binary rounding of boundary inputs such as
# alpha = -0.999999, whose twist denominator is 1e-6 only up to rounding.
ILL_CONDITION_LIMIT = 1e-6 * (1.0 + 1e-6)

_UNITARITY_PRE = 1e-8


@dataclass(frozen=True)
class UnitarySpectrum:
    """Clustered unit-circle spectrum, sorted by argument in [0, 2pi)."""

    eigenvalues: tuple[complex, ...]
    multiplicities: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> tuple[complex, ...]:
        out: list[complex] = []
        for z, m in zip(self.eigenvalues, self.multiplicities):
            out.extend([z] * m)
        return tuple(out)


@dataclass(frozen=True)
class DirichletData:
    """Dirichlet points with their spectral weights, argument-sorted."""

    points: tuple[complex, ...]
    weights: tuple[float, ...]


@dataclass(frozen=True)
class BandStructure:
    """Bands, gaps, and the gap-to-Dirichlet-point pairing.

    bands[i] and gaps[i] are (start, end) circle points traversed
    counterclockwise; pairing[i] indexes the Dirichlet point living in the
    closure of gaps[i]; degenerate[i] flags a collapsed gaps[i].
    """

    bands: tuple[tuple[complex, complex], ...]
    gaps: tuple[tuple[complex, complex], ...]
    pairing: tuple[int, ...]
    degenerate: tuple[bool, ...]


def _principal_angle(z: complex) -> float:
    return math.atan2(z.imag, z.real) % TWO_PI


def unitary_eigenvalues(
    U, *, eig_tol: float = 1e-8, cluster_tol: float = 1e-7
) -> UnitarySpectrum:
    """Eigenvalues of a unitary matrix, projected to S^1 and clustered.

    Values are sorted by principal argument; neighbours (cyclically) within
    chordal distance cluster_tol merge into one representative, the complex
    mean re-projected to the circle, carrying the cluster multiplicity.
    """
    e = _entries(U)
    defect = unitarity_defect(e)
    if defect >= _UNITARITY_PRE:
        raise NotUnitary(f"unitarity defect {defect!r} exceeds {_UNITARITY_PRE}")
    try:
        vals = np.linalg.eigvals(e)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - QR always converges here
        raise NoConvergence(f"eigensolver failed: {exc}") from exc
    mods = np.abs(vals)
    worst = float(np.max(np.abs(mods - 1.0)))
    if worst > eig_tol:
        raise NoConvergence(f"eigenvalue modulus off the circle by {worst!r}")
    vals = vals / mods
    order = np.argsort([_principal_angle(complex(v)) for v in vals], kind="stable")
    vals = [complex(v) for v in vals[order]]

    groups: list[list[complex]] = [[vals[0]]]
    for v in vals[1:]:
        if abs(v - groups[-1][-1]) < cluster_tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    if len(groups) > 1 and abs(groups[0][0] - groups[-1][-1]) < cluster_tol:
        groups[0] = groups.pop() + groups[0]

    reps = []
    for g in groups:
        m = sum(g) / len(g)
        reps.append((m / abs(m), len(g)))
    reps.sort(key=lambda rm: _principal_angle(rm[0]))
    return UnitarySpectrum(
        eigenvalues=tuple(r for r, _ in reps),
        multiplicities=tuple(m for _, m in reps),
    )


def char_poly_oracle(U) -> ComplexPolynomial:
    """Characteristic polynomial det(zI - U) by the trace recursion.

    Coefficients come from repeated multiply-and-trace steps with no
    eigenvalue computation involved, so this is an eigensolver-independent
    route.  Dense and O(n^4); restricted to n <= 64.
    """
    a = _entries(U)
    n = a.shape[0]
    if n > 64:
        raise ValidationError(f"characteristic-polynomial recursion capped at n = 64, got {n}")
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    m = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        m = a @ m
        c = -np.trace(m) / k
        coeffs[n - k] = c
        m = m + c * np.eye(n)
    return ComplexPolynomial(tuple(complex(x) for x in coeffs))


def polynomial_roots(
    poly: ComplexPolynomial, *, max_iter: int = 400, tol: float = 1e-14
) -> tuple[complex, ...]:
    """All roots by Aberth-Ehrlich simultaneous iteration.

    Initial guesses sit on the circle |z| = |c_0|^(1/n) (the geometric mean
    of the root moduli), phase-offset so symmetric examples do not start on
    their own roots.  Converges when steps stall below tol or every residual
    reaches backward-error level; otherwise raises NoConvergence.
    """
    c = np.asarray(poly.coeffs, dtype=complex)
    if abs(c[-1]) == 0.0:
        raise ValidationError("leading coefficient must be nonzero")
    c = c / c[-1]
    n = len(c) - 1
    if n == 0:
        return ()
    dc = c[1:] * np.arange(1, n + 1)

    radius = abs(c[0]) ** (1.0 / n) if c[0] != 0 else 1.0
    radius = max(radius, 1e-3)
    z = radius * np.exp(1j * (TWO_PI * np.arange(n) / n + 0.4))

    c_desc = c[::-1]
    dc_desc = dc[::-1]
    cabs_desc = np.abs(c_desc)

    for _ in range(max_iter):
        pv = np.polyval(c_desc, z)
        dv = np.polyval(dc_desc, z)
        dv = np.where(np.abs(dv) < 1e-300, 1e-300, dv)
        newton = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * s
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        step = newton / denom
        z = z - step
        scale = max(1.0, float(np.max(np.abs(z))))
        if float(np.max(np.abs(step))) < tol * scale:
            break
        # Backward-error exit: |p(z)| at rounding level of the evaluation
        # itself, which is as good as roots get for multiple zeros.
        bound = np.polyval(cabs_desc, np.abs(z)) * (4 * n) * np.finfo(float).eps
        if np.all(np.abs(pv) <= bound):
            break
    else:
        raise NoConvergence(f"root iteration did not settle in {max_iter} steps")
    return tuple(complex(v) for v in z)


def eigenvalue_oracle(U) -> tuple[complex, ...]:
    """Eigensolver-free spectrum: char poly recursion + Aberth + projection."""
    roots = polynomial_roots(char_poly_oracle(U))
    projected = [r / abs(r) for r in roots]
    return tuple(sorted(projected, key=_principal_angle))


def tilde_word(word: VerblunskyWord) -> FinalizedWord:
    """Finalize a periodic word by twisting the last coefficient onto S^1.

    alpha~_{p-1} = (1 + alpha_{p-1}) / (1 + conj(alpha_{p-1})) is unimodular
    for alpha_{p-1} in the disk; construction renormalizes it to exact unit
    modulus.  Warns IllConditioned when |1 + alpha_{p-1}| is below 1e-6.
    """
    a = word.alpha[-1]
    denom = 1.0 + a.conjugate()
    if abs(denom) < ILL_CONDITION_LIMIT:
        warnings.warn(
            IllConditioned(
                f"|1 + alpha_{{p-1}}| = {abs(denom)!r}; tilde twist is ill-conditioned"
            )
        )
    twisted = (1.0 + a) / denom
    return finalize_word(word.alpha[:-1] + (twisted,))


def dirichlet_points(
    word: VerblunskyWord, *, eig_tol: float = 1e-8, cluster_tol: float = 1e-7
) -> tuple[complex, ...]:
    """The p Dirichlet points: spectrum of the finalized-word CMV matrix."""
    spectrum = unitary_eigenvalues(
        build_finite_cmv(tilde_word(word)), eig_tol=eig_tol, cluster_tol=cluster_tol
    )
    return spectrum.expanded()


def dirichlet_points_oracle(word: VerblunskyWord) -> tuple[complex, ...]:
    """Locate Dirichlet points by sign bracketing on the circle.

    e^(-ip theta/2) (Phi_p - Phi_p*)(e^(i theta)) / (1 + alpha_{p-1}) traces
    a fixed line through the origin as theta varies, so its imaginary part
    is a real function with exactly the Dirichlet zeros.  An offset grid of
    16 p nodes brackets sign changes for bisection; one 4x refinement is
    attempted before giving up.
    """
    p = word.p
    phi, star = szego_iterate(word, p)
    diff = [complex(a - b) for a, b in zip(phi.coeffs, star.coeffs)]
    scale = 1.0 + word.alpha[-1]

    def g(theta: float) -> float:
        z = cmath.exp(1j * theta)
        value = 0j
        for c in reversed(diff):
            value = value * z + c
        return (cmath.exp(-0.5j * p * theta) * value / scale).imag

    def sweep(nodes: int) -> list[float]:
        thetas = [(i + 0.5) * TWO_PI / nodes for i in range(nodes)]
        fvals = [g(t) for t in thetas]
        roots: list[float] = []
        for i in range(nodes):
            t0, f0 = thetas[i], fvals[i]
            t1 = thetas[(i + 1) % nodes] + (TWO_PI if i + 1 == nodes else 0.0)
            f1 = fvals[(i + 1) % nodes]
            if f0 == 0.0:
                roots.append(t0)
                continue
            if f1 == 0.0 or (f0 < 0.0) == (f1 < 0.0):
                continue
            lo, hi, flo = t0, t1, f0
            for _ in range(80):
                if hi - lo <= 1e-15:
                    break
                mid = 0.5 * (lo + hi)
                fm = g(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm < 0.0) == (flo < 0.0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
        return roots

    roots = sweep(16 * p)
    if len(roots) != p:
        roots = sweep(64 * p)
    if len(roots) != p:
        raise RootCountMismatch(f"found {len(roots)} circle zeros, expected {p}")
    points = [cmath.exp(1j * (t % TWO_PI)) for t in roots]
    return tuple(sorted(points, key=_principal_angle))


def dirichlet_weights(word: VerblunskyWord, points) -> tuple[float, ...]:
    """Spectral weights w_j = 1 / (d/dr|phi_p(r z_j)|^2 - p |phi_p(z_j)|^2).

    Uses the closed-form radial derivative of the orthonormal polynomial.
    The denominator is provably >= 1 for genuine Dirichlet points; a
    nonpositive value signals an upstream error and raises.
    """
    phi = orthonormal_pth(word)
    p = word.p
    out = []
    for z in points:
        z = complex(z)
        denom = radial_modulus_derivative(phi, z) - p * abs(phi(z)) ** 2
        if denom <= 0.0:
            raise NonpositiveDenominator(
                f"weight denominator {denom!r} at z = {z!r}; not a Dirichlet point?"
            )
        out.append(1.0 / denom)
    return tuple(out)


def weights_oracle(word: VerblunskyWord) -> DirichletData:
    """Eigenvector route to the weights: w_j = |<e_1, v_j>|^2.

    Independent of the polynomial-derivative formula; shares only the
    matrix assembly with the main path.
    """
    C = build_finite_cmv(tilde_word(word))
    try:
        vals, vecs = np.linalg.eig(C.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(f"eigensolver failed: {exc}") from exc
    weights = np.abs(vecs[0, :]) ** 2 / np.sum(np.abs(vecs) ** 2, axis=0)
    vals = vals / np.abs(vals)
    order = sorted(range(len(vals)), key=lambda i: _principal_angle(complex(vals[i])))
    return DirichletData(
        points=tuple(complex(vals[i]) for i in order),
        weights=tuple(float(weights[i]) for i in order),
    )


def band_edges(
    word: VerblunskyWord, *, eig_tol: float = 1e-8, cluster_tol: float = 1e-7
) -> tuple[UnitarySpectrum, UnitarySpectrum]:
    """Spectra of E(+1) and E(-1): the band edge sets."""
    plus = unitary_eigenvalues(
        build_floquet(word, 1.0), eig_tol=eig_tol, cluster_tol=cluster_tol
    )
    minus = unitary_eigenvalues(
        build_floquet(word, -1.0), eig_tol=eig_tol, cluster_tol=cluster_tol
    )
    return plus, minus


def _arc_length(a: float, b: float) -> float:
    """Counterclockwise arc length from angle a to angle b.

    A span within rounding of the full circle is wrap-around noise from a
    collapsed gap, never a genuine arc, and reads as zero.
    """
    span = (b - a) % TWO_PI
    if span > TWO_PI - 1e-3:
        return 0.0
    return span


def _in_closed_arc(t: float, a: float, b: float, tol: float) -> bool:
    span = _arc_length(a, b)
    rel = (t - a) % TWO_PI
    if rel > TWO_PI - tol:
        rel -= TWO_PI
    return -tol <= rel <= span + tol


_EDGE_PATTERN = ("+", "-", "-", "+")


def band_layout(
    plus: UnitarySpectrum,
    minus: UnitarySpectrum,
    dirichlet,
    *,
    gap_tol: float = 1e-7,
    pairing_tol: float = 1e-6,
) -> BandStructure:
    """Assemble bands, gaps, and the Dirichlet pairing from labeled edges.

    The 2p edges, sorted by argument, must realize the cyclic label pattern
    (+,-,-,+) repeated p/2 times for some rotation; consecutive edge pairs
    then alternate band, gap, band, gap.  Each gap closure must contain
    exactly one Dirichlet point (bijectively), found here as a zero-cost
    assignment.  Rotations are tried until one admits a pairing.
    """
    dirichlet = tuple(complex(z) for z in dirichlet)
    p = len(dirichlet)
    if plus.size != p or minus.size != p:
        raise ValidationError(
            f"edge multisets must each have size {p}, got {plus.size} and {minus.size}"
        )
    edges = [(z, "+") for z in plus.expanded()] + [(z, "-") for z in minus.expanded()]
    edges.sort(key=lambda e: (_principal_angle(e[0]), e[1]))
    values = [e[0] for e in edges]
    labels = [e[1] for e in edges]
    m = 2 * p
    target = [_EDGE_PATTERN[k % 4] for k in range(m)]
    offsets = [
        r for r in range(m) if all(labels[(r + k) % m] == target[k] for k in range(m))
    ]
    if not offsets:
        raise PatternMismatch(f"edge labels {''.join(labels)} never match the +--+ pattern")

    d_angles = [_principal_angle(z) for z in dirichlet]
    for r in offsets:
        q = [values[(r + k) % m] for k in range(m)]
        bands = tuple((q[2 * i], q[2 * i + 1]) for i in range(p))
        gaps = tuple((q[2 * i + 1], q[(2 * i + 2) % m]) for i in range(p))
        cost = np.ones((p, p))
        for i, (ga, gb) in enumerate(gaps):
            a = _principal_angle(ga)
            b = _principal_angle(gb)
            for jj, t in enumerate(d_angles):
                if _in_closed_arc(t, a, b, pairing_tol):
                    cost[i, jj] = 0.0
        rows, cols = linear_sum_assignment(cost)
        if cost[rows, cols].sum() == 0.0:
            pairing = tuple(int(cols[list(rows).index(i)]) for i in range(p))
            degenerate = tuple(
                _arc_length(_principal_angle(ga), _principal_angle(gb)) < gap_tol
                for ga, gb in gaps
            )
            return BandStructure(bands=bands, gaps=gaps, pairing=pairing, degenerate=degenerate)
    raise PairingFailure(
        "no rotation of the edge pattern admits a gap/Dirichlet-point bijection"
    )


def multiset_distance(a, b) -> float:
    """Optimal-matching sup distance between equal-size complex multisets."""
    a = [complex(x) for x in a]
    b = [complex(x) for x in b]
    if len(a) != len(b):
        raise ValidationError(f"multisets differ in size: {len(a)} vs {len(b)}")
    if not a:
        return 0.0
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
