import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings

import cmvtrace.spectra as spectra_mod
from cmvtrace import (
    ComplexPolynomial,
    IllConditioned,
    NoConvergence,
    NonpositiveDenominator,
    NotUnitary,
    PairingFailure,
    PatternMismatch,
    UnitarySpectrum,
    ValidationError,
    band_edges,
    band_layout,
    build_finite_cmv,
    char_poly_oracle,
    dirichlet_points,
    dirichlet_points_oracle,
    dirichlet_weights,
    eigenvalue_oracle,
    finalize_word,
    multiset_distance,
    orthonormal_pth,
    polynomial_roots,
    radial_modulus_derivative,
    szego_iterate,
    tilde_word,
    unitary_eigenvalues,
    validate_word,
    weights_oracle,
)
from conftest import seeded_words, words

TWO_PI = 2.0 * math.pi


def roots_of_unity(p, offset=0.0):
    return [cmath.exp(1j * (TWO_PI * k / p + offset)) for k in range(p)]


class TestUnitaryEigenvalues:
    def test_fixture_spectrum(self):
        C = build_finite_cmv(finalize_word([0.5, 1.0]))
        s = unitary_eigenvalues(C)
        assert s.multiplicities == (1, 1)
        assert multiset_distance(s.expanded(), [1.0, -1.0]) < 1e-14

    def test_identity_clusters(self):
        s = unitary_eigenvalues(np.eye(4))
        assert s.multiplicities == (4,)
        assert s.eigenvalues[0] == pytest.approx(1.0, abs=1e-14)
        assert s.size == 4
        assert s.expanded() == (s.eigenvalues[0],) * 4

    def test_near_degenerate_merge(self):
        U = np.diag([1.0, cmath.exp(5e-8j)])
        assert unitary_eigenvalues(U).multiplicities == (2,)

    def test_wraparound_merge(self):
        U = np.diag([cmath.exp(1j * (TWO_PI - 2.5e-8)), cmath.exp(2.5e-8j)])
        s = unitary_eigenvalues(U)
        assert s.multiplicities == (2,)
        assert abs(s.eigenvalues[0] - 1.0) < 1e-7

    def test_separate_clusters_kept(self):
        U = np.diag([1.0, cmath.exp(1e-3j)])
        assert unitary_eigenvalues(U).multiplicities == (1, 1)

    def test_not_unitary(self):
        with pytest.raises(NotUnitary):
            unitary_eigenvalues(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_sorted_by_argument(self):
        for w in seeded_words(6, 5):
            s = unitary_eigenvalues(build_finite_cmv(tilde_word(w)))
            angles = [math.atan2(z.imag, z.real) % TWO_PI for z in s.eigenvalues]
            assert angles == sorted(angles)


class TestCharPolyOracle:
    def test_fixture(self):
        C = build_finite_cmv(finalize_word([0.5, 1.0]))
        cp = char_poly_oracle(C)
        assert cp.coeffs == pytest.approx((-1.0, 0.0, 1.0), abs=1e-15)

    def test_identity_cube(self):
        cp = char_poly_oracle(np.eye(3))
        assert cp.coeffs == pytest.approx((-1.0, 3.0, -3.0, 1.0), abs=1e-14)

    def test_size_cap(self):
        with pytest.raises(ValidationError):
            char_poly_oracle(np.eye(65))

    @given(words())
    @settings(max_examples=30, deadline=None)
    def test_matches_tilde_polynomial(self, w):
        fin = tilde_word(w)
        cp = char_poly_oracle(build_finite_cmv(fin)).as_array()
        tphi = szego_iterate(fin, fin.n)[0].as_array()
        assert np.max(np.abs(cp - tphi)) < 1e-12


class TestPolynomialRoots:
    def test_quadratic(self):
        roots = polynomial_roots(ComplexPolynomial((2.0, -3.0, 1.0)))  # (z-1)(z-2)
        assert multiset_distance(roots, [1.0, 2.0]) < 1e-12

    def test_quartic_roots_of_unity(self):
        roots = polynomial_roots(ComplexPolynomial((-1.0, 0.0, 0.0, 0.0, 1.0)))
        assert multiset_distance(roots, roots_of_unity(4)) < 1e-12

    def test_double_root(self):
        roots = polynomial_roots(ComplexPolynomial((1.0, -2.0, 1.0)))  # (z-1)^2
        assert multiset_distance(roots, [1.0, 1.0]) < 1e-6

    def test_zero_leading_coefficient(self):
        with pytest.raises(ValidationError):
            polynomial_roots(ComplexPolynomial((1.0, 2.0, 0.0)))

    def test_no_convergence(self):
        with pytest.raises(NoConvergence):
            polynomial_roots(ComplexPolynomial((1.0, 0.0, 1.0)), max_iter=0)

    def test_constant(self):
        assert polynomial_roots(ComplexPolynomial((5.0,))) == ()


class TestEigenvalueOracle:
    @given(words())
    @settings(max_examples=25, deadline=None)
    def test_agrees_with_eigensolver(self, w):
        C = build_finite_cmv(tilde_word(w))
        lap = unitary_eigenvalues(C).expanded()
        orc = eigenvalue_oracle(C)
        assert multiset_distance(lap, orc) < 1e-8


class TestTildeWord:
    def test_fixture(self, fixture_word):
        fin = tilde_word(fixture_word)
        assert fin.alpha == (0.5 + 0j, 1.0 + 0j)

    def test_complex_twist(self, quad_word):
        fin = tilde_word(quad_word)
        assert fin.alpha[-1] == pytest.approx(
            0.8348623853211009 + 0.5504587155963302j, abs=1e-12
        )
        assert abs(abs(fin.alpha[-1]) - 1.0) <= 1e-15

    def test_free_word(self):
        fin = tilde_word(validate_word([0.0] * 4))
        assert fin.alpha == (0j, 0j, 0j, 1.0 + 0j)

    def test_ill_conditioned_warns(self):
        w = validate_word([0.0, -0.999999])
        with pytest.warns(IllConditioned):
            tilde_word(w)

    def test_moderate_word_does_not_warn(self, quad_word):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            tilde_word(quad_word)


class TestDirichletPoints:
    def test_fixture(self, fixture_word):
        pts = dirichlet_points(fixture_word)
        assert multiset_distance(pts, [1.0, -1.0]) < 1e-12

    def test_free_word_roots_of_unity(self):
        for p in (2, 4, 6):
            pts = dirichlet_points(validate_word([0.0] * p))
            assert multiset_distance(pts, roots_of_unity(p)) < 1e-10

    def test_oracle_fixture(self, fixture_word):
        pts = dirichlet_points_oracle(fixture_word)
        assert multiset_distance(pts, [1.0, -1.0]) < 1e-12

    def test_oracle_agrees_on_ensemble(self):
        worst = 0.0
        for p in (2, 4, 6, 8):
            for w in seeded_words(p, 15):
                a = dirichlet_points(w)
                b = dirichlet_points_oracle(w)
                worst = max(worst, multiset_distance(a, b))
        assert worst < 1e-9

    @given(words())
    @settings(max_examples=25, deadline=None)
    def test_points_on_circle_and_counted(self, w):
        pts = dirichlet_points(w)
        assert len(pts) == w.p
        assert all(abs(abs(z) - 1.0) < 1e-12 for z in pts)


class TestDirichletWeights:
    @staticmethod
    def _weight_near(points, weights, target):
        return min(zip(points, weights), key=lambda pw: abs(pw[0] - target))[1]

    def test_fixture_both_routes(self, fixture_word):
        pts = dirichlet_points(fixture_word)
        formula = dirichlet_weights(fixture_word, pts)
        assert self._weight_near(pts, formula, 1.0) == pytest.approx(0.75, abs=1e-12)
        assert self._weight_near(pts, formula, -1.0) == pytest.approx(0.25, abs=1e-12)
        oracle = weights_oracle(fixture_word)
        assert self._weight_near(oracle.points, oracle.weights, 1.0) == pytest.approx(
            0.75, abs=1e-12
        )
        assert self._weight_near(oracle.points, oracle.weights, -1.0) == pytest.approx(
            0.25, abs=1e-12
        )

    def test_routes_agree_on_ensemble(self):
        worst = 0.0
        for p in (2, 4, 6, 8):
            for w in seeded_words(p, 15):
                pts = dirichlet_points(w)
                formula = dirichlet_weights(w, pts)
                oracle = weights_oracle(w)
                assert multiset_distance(pts, oracle.points) < 1e-10
                # both outputs are argument-sorted, so zip aligns them
                worst = max(
                    worst, max(abs(a - b) for a, b in zip(formula, oracle.weights))
                )
        assert worst < 1e-9

    @given(words())
    @settings(max_examples=25, deadline=None)
    def test_positive_and_normalized(self, w):
        weights = dirichlet_weights(w, dirichlet_points(w))
        assert all(x > 0.0 for x in weights)
        assert sum(weights) == pytest.approx(1.0, abs=1e-9)

    @given(words())
    @settings(max_examples=20, deadline=None)
    def test_denominator_at_least_one_on_circle(self, w):
        # the weight denominator is >= 1 everywhere on the circle, which is
        # why NonpositiveDenominator is unreachable for genuine words
        phi = orthonormal_pth(w)
        for k in range(32):
            z = cmath.exp(2j * math.pi * (k + 0.31) / 32)
            denom = radial_modulus_derivative(phi, z) - w.p * abs(phi(z)) ** 2
            assert denom >= 1.0 - 1e-9

    def test_nonpositive_denominator_guard(self, fixture_word, monkeypatch):
        monkeypatch.setattr(
            spectra_mod, "orthonormal_pth", lambda w: ComplexPolynomial((1.0 + 0j,))
        )
        with pytest.raises(NonpositiveDenominator):
            dirichlet_weights(fixture_word, (1.0 + 0j,))


class TestBandEdges:
    def test_fixture(self, fixture_word):
        plus, minus = band_edges(fixture_word)
        expected_plus = [cmath.exp(1j * math.pi / 6), cmath.exp(-1j * math.pi / 6)]
        expected_minus = [cmath.exp(5j * math.pi / 6), cmath.exp(-5j * math.pi / 6)]
        assert multiset_distance(plus.expanded(), expected_plus) < 1e-10
        assert multiset_distance(minus.expanded(), expected_minus) < 1e-10

    def test_free_word_multiplicity_two(self):
        for p in (2, 4, 6):
            plus, minus = band_edges(validate_word([0.0] * p))
            assert plus.multiplicities == (2,) * (p // 2)
            assert minus.multiplicities == (2,) * (p // 2)
            assert multiset_distance(
                plus.eigenvalues, roots_of_unity(p // 2)
            ) < 1e-10
            assert multiset_distance(
                minus.eigenvalues, roots_of_unity(p // 2, offset=TWO_PI / p)
            ) < 1e-10


class TestBandLayout:
    def test_fixture_layout(self, fixture_word):
        pts = dirichlet_points(fixture_word)
        plus, minus = band_edges(fixture_word)
        layout = band_layout(plus, minus, pts)
        assert len(layout.bands) == 2
        assert layout.degenerate == (False, False)
        # gap closures hold -1 and +1 respectively; pairing says which
        assert layout.pairing == (1, 0)
        starts = [layout.bands[0][0], layout.bands[1][0]]
        assert multiset_distance(
            starts, [cmath.exp(1j * math.pi / 6), cmath.exp(-5j * math.pi / 6)]
        ) < 1e-10

    def test_free_word_all_degenerate(self):
        w = validate_word([0.0] * 4)
        pts = dirichlet_points(w)
        plus, minus = band_edges(w)
        layout = band_layout(plus, minus, pts)
        assert all(layout.degenerate)
        assert sorted(layout.pairing) == [0, 1, 2, 3]

    def test_pattern_mismatch(self):
        plus = UnitarySpectrum((1.0 + 0j, -1.0 + 0j), (1, 1))
        minus = UnitarySpectrum((1.0 + 0j, -1.0 + 0j), (1, 1))
        with pytest.raises(PatternMismatch):
            band_layout(plus, minus, (1j, -1j))

    def test_pairing_failure(self):
        plus = UnitarySpectrum((1.0 + 0j,), (2,))
        minus = UnitarySpectrum((-1.0 + 0j,), (2,))
        with pytest.raises(PairingFailure):
            band_layout(plus, minus, (1j, -1j))

    def test_size_mismatch(self):
        plus = UnitarySpectrum((1.0 + 0j,), (2,))
        minus = UnitarySpectrum((-1.0 + 0j,), (2,))
        with pytest.raises(ValidationError):
            band_layout(plus, minus, (1j, -1j, 1.0 + 0j))

    @given(words())
    @settings(max_examples=25, deadline=None)
    def test_points_inside_their_gaps(self, w):
        pts = dirichlet_points(w)
        plus, minus = band_edges(w)
        layout = band_layout(plus, minus, pts)
        assert sorted(layout.pairing) == list(range(w.p))
        for i, (ga, gb) in enumerate(layout.gaps):
            t = math.atan2(pts[layout.pairing[i]].imag, pts[layout.pairing[i]].real)
            a = math.atan2(ga.imag, ga.real)
            span = (math.atan2(gb.imag, gb.real) - a) % TWO_PI
            if span > TWO_PI - 1e-3:
                span = 0.0
            rel = (t - a) % TWO_PI
            if rel > TWO_PI - 1e-6:
                rel -= TWO_PI
            assert -1e-6 <= rel <= span + 1e-6


class TestMultisetDistance:
    def test_permutation_invariant(self):
        assert multiset_distance([1.0, 2.0], [2.0, 1.0]) == 0.0

    def test_reports_worst_pair(self):
        assert multiset_distance([0.0, 1.0], [0.0, 1.5]) == pytest.approx(0.5)

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            multiset_distance([1.0], [1.0, 2.0])

    def test_empty(self):
        assert multiset_distance([], []) == 0.0
