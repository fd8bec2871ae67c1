"""Tolerance knobs shared by the spectral routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances, all absolute unless noted.

    circle: slack for |z| - 1 on points that must sit on the unit circle.
    unitarity: per-matrix bound on max|U U^H - I| entries (scaled by n
        in the structural tests, not here).
    eig: eigenvalue modulus slack accepted before radial projection.
    cluster: chordal distance below which adjacent eigenvalues merge into
        one cluster with a multiplicity.
    gap: arc length below which a spectral gap counts as collapsed.
    pairing: slack for Dirichlet-point-in-closed-gap membership tests.
    residual_pass: pass/fail threshold for trace identity residuals.
    """

    circle: float = 1e-9
    unitarity: float = 1e-12
    eig: float = 1e-8
    cluster: float = 1e-7
    gap: float = 1e-7
    pairing: float = 1e-6
    residual_pass: float = 1e-8


DEFAULT_TOLERANCES = Tolerances()
