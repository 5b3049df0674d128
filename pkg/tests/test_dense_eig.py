"""Characteristic polynomial, root finder, and full spectra."""

import numpy as np
import pytest

from helpers import expand_roots_to_coeffs, principal_minor_sum_brute
from tropeig import compounds as cp
from tropeig import dense_eig as de


class TestCharPoly:
    def test_diag_2_1(self):
        coeffs = de.char_poly(np.diag([2.0, 1.0]))
        assert np.allclose(coeffs, [2.0, -3.0, 1.0])

    def test_companion_recovers_polynomial(self):
        cs = np.array([2.0, -3.0, 0.5, 1.0], dtype=complex)
        C = de.companion_matrix(cs)
        assert np.allclose(de.char_poly(C), cs, atol=1e-12)

    def test_minor_sum_oracle(self):
        rng = np.random.default_rng(9)
        for n in (2, 3, 4, 5):
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            for k in range(1, n + 1):
                got = de.principal_minor_sum(A, k)
                want = principal_minor_sum_brute(A, k)
                assert got == pytest.approx(want, rel=1e-9, abs=1e-10)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            de.char_poly(np.eye(31))


class TestPolyRoots:
    def test_factorable_quadratic(self):
        roots = sorted(de.poly_roots([2, -3, 1]), key=abs)
        assert roots[0] == pytest.approx(1.0, abs=1e-12)
        assert roots[1] == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("n,c", [(3, 8.0), (5, 1j), (7, -2.0)])
    def test_nth_roots(self, n, c):
        cs = np.zeros(n + 1, dtype=complex)
        cs[0] = -c
        cs[n] = 1.0
        roots = de.poly_roots(cs)
        assert np.allclose(sorted(np.abs(roots)), abs(c) ** (1.0 / n))
        assert np.allclose(sorted(roots**n), c, atol=1e-9 * max(1, abs(c)))

    def test_integer_roots_recovered(self):
        rng = np.random.default_rng(17)
        for trial in range(10):
            roots = rng.choice(np.arange(-6, 7), size=10, replace=False)
            cs = expand_roots_to_coeffs(roots.astype(complex))
            got = np.sort_complex(np.round(de.poly_roots(cs), 6))
            want = np.sort_complex(roots.astype(complex))
            assert np.allclose(got, want, atol=1e-8)

    def test_exact_zero_deflation(self):
        roots = de.poly_roots([0, 0, -6, 1])
        zeros = [r for r in roots if r == 0]
        assert len(zeros) == 2
        others = [r for r in roots if r != 0]
        assert others[0] == pytest.approx(6.0, abs=1e-10)

    def test_rejects_zero_leading(self):
        with pytest.raises(ValueError):
            de.poly_roots([1.0, 2.0, 0.0])

    def test_residual_contract(self):
        rng = np.random.default_rng(18)
        for trial in range(20):
            d = int(rng.integers(2, 16))
            cs = (10.0 ** rng.uniform(-3, 3, d + 1)) * np.exp(
                2j * np.pi * rng.random(d + 1))
            roots = de.poly_roots(cs)
            scale = np.polyval(np.abs(cs)[::-1], np.abs(roots))
            residual = np.abs(np.polyval(cs[::-1], roots))
            assert (residual <= de.RESIDUAL_ACCEPT * scale).all()


class TestEigenvalues:
    def test_diag_moduli_sorted(self):
        spec = de.eigenvalues(np.diag([3.0, 2.0j, 1.0]))
        assert spec.moduli == pytest.approx((3.0, 2.0, 1.0))
        assert spec.prefix_moduli == pytest.approx((3.0, 6.0, 6.0))

    def test_monomial_matrix_nth_roots(self):
        d = np.array([2.0, -0.5, 4.0j])
        A = np.zeros((3, 3), dtype=complex)
        A[0, 1], A[1, 2], A[2, 0] = d
        spec = de.eigenvalues(A)
        want = abs(np.prod(d)) ** (1.0 / 3.0)
        assert spec.moduli == pytest.approx((want,) * 3, rel=1e-10)

    def test_companion_of_quadratic(self):
        spec = de.eigenvalues(de.companion_matrix([2, -3, 1]))
        assert spec.moduli == pytest.approx((2.0, 1.0), rel=1e-10)

    def test_trace_det_consistency_random(self):
        rng = np.random.default_rng(19)
        for trial in range(60):
            n = int(rng.integers(2, 9))
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            spec = de.eigenvalues(A)
            assert sum(spec.lambdas) == pytest.approx(
                np.trace(A), rel=1e-8, abs=1e-8)
            assert np.prod(np.array(spec.lambdas)) == pytest.approx(
                np.linalg.det(A), rel=1e-7, abs=1e-8)

    def test_structural_zeros_are_exact(self):
        A = np.array([[0, 0, 0], [1.0, 0, 2.0], [0, 0, 3.0]])
        spec = de.eigenvalues(A)
        assert spec.moduli[-1] == 0.0
        assert spec.moduli[-2] == 0.0

    def test_modulus_tie_broken_by_argument(self):
        spec = de.eigenvalues(np.diag([-1.0 + 0j, 1.0 + 0j]))
        args = [np.angle(z) for z in spec.lambdas]
        assert args == sorted(args)

    def test_compound_consistency(self):
        rng = np.random.default_rng(20)
        for trial in range(25):
            n = int(rng.integers(2, 6))
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            spec = de.eigenvalues(A)
            for k in range(1, n + 1):
                rho = cp.spectral_radius(cp.compound(A, k))
                assert rho == pytest.approx(
                    float(spec.prefix_moduli[k - 1]), rel=1e-7, abs=1e-9)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            de.eigenvalues(np.eye(31))


def test_exterior_power_eigenvalue_products():
    """Eigenvalues of the k-compound are the k-fold eigenvalue products."""
    from itertools import combinations

    rng = np.random.default_rng(27)
    for trial in range(15):
        n = int(rng.integers(2, 6))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        lams = np.linalg.eigvals(A)
        for k in range(1, n + 1):
            want = sorted(
                (abs(np.prod([lams[i] for i in I]))
                 for I in combinations(range(n), k)),
            )
            got = sorted(np.abs(np.linalg.eigvals(cp.compound(A, k))))
            assert np.allclose(got, want, rtol=1e-7, atol=1e-9)
