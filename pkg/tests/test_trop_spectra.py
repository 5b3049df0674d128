"""Tropical traces, characteristic polynomial, eigenvalues, powers."""

from math import inf

import numpy as np
import pytest

from helpers import tropical_trace_brute
from tropeig import dense_eig as de
from tropeig import trop_poly as tp
from tropeig import trop_spectra as ts
from tropeig.assignment import max_cycle_mean

NEG_INF = -inf


def random_nonneg(rng, n, density=1.0, span=2.0):
    M = 10.0 ** rng.uniform(-span, span, (n, n))
    M[rng.random((n, n)) >= density] = 0.0
    return M


class TestTropicalTrace:
    def test_two_by_two(self):
        M = np.array([[2.0, 5.0], [3.0, 4.0]])
        assert ts.tropical_trace(M, 1) == pytest.approx(4.0)
        assert ts.tropical_trace(M, 2) == pytest.approx(15.0)

    def test_identity(self):
        for k in range(0, 5):
            assert ts.tropical_trace(np.eye(4), k) == pytest.approx(1.0)

    def test_zeroth_is_one(self):
        assert ts.tropical_trace(np.zeros((3, 3)), 0) == 1.0

    def test_companion_traces_are_coefficient_moduli(self):
        cs = np.array([0.5, -4.0, 3.0j, 1.0])
        C = np.abs(de.companion_matrix(cs))
        n = 3
        for k in range(1, n + 1):
            assert ts.tropical_trace(C, k) == pytest.approx(
                abs(cs[n - k]), rel=1e-12)

    def test_matches_brute(self):
        rng = np.random.default_rng(31)
        for trial in range(40):
            n = int(rng.integers(1, 7))
            M = random_nonneg(rng, n, density=0.7)
            for k in range(0, n + 1):
                got = ts.tropical_trace(M, k)
                want = tropical_trace_brute(M, k)
                assert got == pytest.approx(want, rel=1e-11, abs=1e-300)

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            ts.tropical_trace(np.eye(2), 3)


class TestTropicalCharPoly:
    def test_two_by_two_formula(self):
        a, b, c, d = 2.0, 5.0, 3.0, 4.0
        q = ts.tropical_char_poly(np.array([[a, b], [c, d]]))
        want = (np.log(max(a * d, b * c)), np.log(max(a, d)), 0.0)
        assert q.coeffs == pytest.approx(want, abs=1e-12)

    def test_zero_matrix_is_pure_power(self):
        q = ts.tropical_char_poly(np.zeros((4, 4)))
        assert q.degree == 4
        assert all(c == NEG_INF for c in q.coeffs[:-1])
        assert q.coeffs[-1] == 0.0


class TestTropicalEigenvalues:
    def test_all_ones(self):
        spec = ts.tropical_eigenvalues(np.ones((4, 4)))
        assert spec.gammas.entries == ((1.0, 4),)
        assert spec.traces == pytest.approx((1.0,) * 5)

    def test_monomial_single_cycle(self):
        d = np.array([2.0, 0.5, 4.0])
        M = np.zeros((3, 3))
        M[0, 1], M[1, 2], M[2, 0] = d
        spec = ts.tropical_eigenvalues(M)
        want = float(np.prod(d)) ** (1.0 / 3.0)
        assert len(spec.gammas.entries) == 1
        assert spec.gammas.entries[0][0] == pytest.approx(want, rel=1e-12)
        assert spec.gammas.entries[0][1] == 3

    def test_companion_matches_tropical_roots(self):
        cs = np.array([0.25, -8.0, 2.0j, 1.0])
        C = np.abs(de.companion_matrix(cs))
        spec = ts.tropical_eigenvalues(C)
        roots = tp.tropical_roots(tp.max_times_relative(cs)).exp()
        assert len(spec.gammas.entries) == len(roots.entries)
        for (gv, gm), (rv, rm) in zip(spec.gammas.entries, roots.entries):
            assert gm == rm
            assert gv == pytest.approx(rv, rel=1e-12)

    def test_diagonal(self):
        spec = ts.tropical_eigenvalues(np.diag([3.0, 2.0, 1.0]))
        assert spec.gammas.flat() == pytest.approx([3.0, 2.0, 1.0])
        assert spec.saturated == frozenset({0, 1, 2, 3})

    def test_route_agreement_random(self):
        rng = np.random.default_rng(32)
        for trial in range(150):
            n = int(rng.integers(1, 8))
            density = (0.3, 0.7, 1.0)[trial % 3]
            M = random_nonneg(rng, n, density=density, span=6.0)
            ts.tropical_eigenvalues(M, method="both")  # raises on mismatch

    def test_rho_equals_max_cycle_mean(self):
        rng = np.random.default_rng(33)
        for trial in range(60):
            n = int(rng.integers(1, 7))
            M = random_nonneg(rng, n, density=0.6, span=3.0)
            spec = ts.tropical_eigenvalues(M)
            top = spec.gammas.entries[0][0] if spec.gammas.entries else 0.0
            assert top == pytest.approx(
                max_cycle_mean(M), rel=1e-12, abs=1e-300)
            assert ts.tropical_spectral_radius(M) == pytest.approx(
                max_cycle_mean(M), rel=1e-15, abs=0.0)

    def test_saturated_consistency(self):
        rng = np.random.default_rng(34)
        for trial in range(40):
            n = int(rng.integers(1, 7))
            M = random_nonneg(rng, n, density=0.7)
            spec = ts.tropical_eigenvalues(M)
            prefix = spec.prefix_products()
            for k in range(1, n + 1):
                trace = spec.traces[k]
                if k in spec.saturated:
                    assert trace == pytest.approx(
                        prefix[k - 1], rel=1e-9, abs=1e-300)
                elif trace > 0 and prefix[k - 1] > 0:
                    assert trace < prefix[k - 1] * (1 + 1e-9)

    def test_structurally_singular_roots_at_zero(self):
        M = np.array([[0.0, 1.0], [0.0, 0.0]])
        spec = ts.tropical_eigenvalues(M)
        assert spec.gammas.entries == ((0.0, 2),)


class TestTropicalExteriorPower:
    def test_k1_is_matrix(self):
        M = np.abs(np.random.default_rng(35).normal(size=(4, 4)))
        assert np.allclose(ts.tropical_exterior_power(M, 1), M)

    def test_kn_is_tropical_permanent(self):
        M = np.array([[2.0, 5.0], [3.0, 4.0]])
        assert ts.tropical_exterior_power(M, 2) == pytest.approx(
            np.array([[15.0]]))

    def test_all_ones(self):
        P = ts.tropical_exterior_power(np.ones((3, 3)), 2)
        assert np.allclose(P, 1.0)

    def test_brute_force_entries(self):
        from itertools import combinations
        rng = np.random.default_rng(36)
        M = random_nonneg(rng, 5, density=0.8)
        subsets = list(combinations(range(5), 2))
        P = ts.tropical_exterior_power(M, 2)
        for a, I in enumerate(subsets):
            for b, J in enumerate(subsets):
                want = max(
                    M[I[0], J[0]] * M[I[1], J[1]],
                    M[I[0], J[1]] * M[I[1], J[0]],
                )
                assert P[a, b] == pytest.approx(want, rel=1e-12, abs=0.0)

    def test_radius_bounded_by_gamma_prefix(self):
        rng = np.random.default_rng(37)
        for trial in range(40):
            n = int(rng.integers(2, 7))
            M = random_nonneg(rng, n, density=(0.4, 1.0)[trial % 2], span=3.0)
            spec = ts.tropical_eigenvalues(M)
            prefix = spec.prefix_products()
            logs = np.log(np.maximum(spec.traces, 1e-300))
            poly = tp.TropicalPolynomial(
                tuple(
                    logs[n - j] if spec.traces[n - j] > 0 else NEG_INF
                    for j in range(n + 1)
                )
            )
            concav = tp.newton_polygon(poly).concavified
            for k in range(1, n + 1):
                rho = max_cycle_mean(ts.tropical_exterior_power(M, k))
                # intermediate step: radius below the log-concavified trace
                hat = np.exp(concav[n - k]) if concav[n - k] > NEG_INF else 0.0
                assert rho <= hat * (1 + 1e-9)
                assert rho <= prefix[k - 1] * (1 + 1e-9)


def test_eval_route_has_no_saturation_data():
    spec = ts.tropical_eigenvalues(np.ones((3, 3)), method="eval")
    assert spec.saturated is None
    assert spec.traces is None
    assert spec.gammas.entries == ((1.0, 3),)
