"""Assignment solver, maximal cycle mean, circulation decomposition."""

from math import inf, log

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import assignment_brute, max_cycle_mean_brute, max_perm_mean_brute
from tropeig import assignment as asg

NEG_INF = -inf


class TestOptimalAssignment:
    def test_two_by_two_formula(self):
        a, b, c, d = 2.0, 5.0, 7.0, 3.0
        W = np.log([[a, b], [c, d]])
        value, _ = asg.optimal_assignment(W)
        assert value == pytest.approx(max(log(a * d), log(b * c)), abs=1e-12)

    def test_diagonal_only(self):
        W = np.full((3, 3), NEG_INF)
        np.fill_diagonal(W, 0.0)
        value, perm = asg.optimal_assignment(W)
        assert value == 0.0
        assert perm.pairs == ((0, 0), (1, 1), (2, 2))

    def test_three_by_three(self):
        W = np.log(np.arange(1, 10, dtype=float).reshape(3, 3))
        value, perm = asg.optimal_assignment(W)
        assert value == pytest.approx(log(105.0), abs=1e-12)
        assert perm.pairs == ((0, 2), (1, 1), (2, 0))

    def test_infeasible(self):
        W = np.full((2, 2), NEG_INF)
        W[0, 0] = 1.0  # column 1 unreachable
        assert asg.optimal_assignment(W) == (NEG_INF, None)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        for trial in range(120):
            n = int(rng.integers(1, 8))
            W = rng.normal(size=(n, n)) * 10
            W[rng.random((n, n)) < 0.3] = NEG_INF
            value, perm = asg.optimal_assignment(W)
            expected, _ = assignment_brute(W)
            if expected == NEG_INF:
                assert value == NEG_INF and perm is None
            else:
                assert value == pytest.approx(expected, abs=1e-12 * (1 + abs(expected)))
                assert sum(W[i, j] for i, j in perm.pairs) == pytest.approx(
                    value, abs=1e-9 * (1 + abs(value)))

    def test_lexicographically_smallest_witness(self):
        # all permutations optimal: identity is the lexicographic minimum
        W = np.zeros((4, 4))
        _, perm = asg.optimal_assignment(W)
        assert perm.pairs == tuple((i, i) for i in range(4))

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            asg.optimal_assignment(np.zeros((2, 3)))


class TestMaxCycleMean:
    def test_two_cycle_dominates(self):
        assert asg.max_cycle_mean([[1.0, 2.0], [8.0, 1.0]]) == pytest.approx(4.0)

    def test_identity(self):
        assert asg.max_cycle_mean(np.eye(4)) == 1.0

    def test_acyclic(self):
        M = np.triu(np.ones((4, 4)), 1)
        assert asg.max_cycle_mean(M) == 0.0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        for trial in range(100):
            n = int(rng.integers(1, 8))
            M = 10.0 ** rng.uniform(-2, 2, (n, n))
            M[rng.random((n, n)) < 0.4] = 0.0
            got = asg.max_cycle_mean(M)
            expected = max_cycle_mean_brute(M)
            assert got == pytest.approx(expected, rel=1e-11, abs=1e-300)

    def test_permutation_formulation_equivalent(self):
        rng = np.random.default_rng(12)
        for trial in range(60):
            n = int(rng.integers(1, 7))
            M = 10.0 ** rng.uniform(-1, 1, (n, n))
            M[rng.random((n, n)) < 0.5] = 0.0
            assert asg.max_cycle_mean(M) == pytest.approx(
                max_perm_mean_brute(M), rel=1e-11, abs=1e-300)


class TestCirculationDecomposition:
    def test_permutation_matrix_is_single_part(self):
        P = np.eye(3, dtype=int)[[2, 0, 1]]
        parts = asg.decompose_circulation(P)
        assert len(parts) == 1
        assert np.array_equal(parts[0].as_matrix(3), P)

    def test_all_ones_two_by_two(self):
        parts = asg.decompose_circulation(np.ones((2, 2), dtype=int))
        assert len(parts) == 2
        mats = {tuple(p.as_matrix(2).ravel()) for p in parts}
        assert mats == {(1, 0, 0, 1), (0, 1, 1, 0)}

    def test_zero_matrix(self):
        assert asg.decompose_circulation(np.zeros((3, 3), dtype=int)) == []

    def test_rejects_non_circulation(self):
        B = np.array([[0, 1], [0, 0]])
        with pytest.raises(ValueError, match="index 0"):
            asg.decompose_circulation(B)

    def test_rejects_negative_and_fractional(self):
        with pytest.raises(ValueError):
            asg.decompose_circulation(np.array([[-1, 1], [1, -1]]))
        with pytest.raises(ValueError):
            asg.decompose_circulation(np.array([[0.5]]))

    @given(st.data())
    @settings(max_examples=120, deadline=None)
    def test_reconstruction_exact(self, data):
        n = data.draw(st.integers(min_value=1, max_value=6))
        cycles = data.draw(
            st.lists(
                st.permutations(range(n)).map(tuple),
                min_size=0,
                max_size=8,
            )
        )
        B = np.zeros((n, n), dtype=np.int64)
        for sigma in cycles:
            for i, j in enumerate(sigma):
                B[i, j] += 1
        weight = asg.validate_circulation(B)
        parts = asg.decompose_circulation(B)
        assert len(parts) <= weight
        total = np.zeros_like(B)
        for part in parts:
            assert part.is_principal
            assert len(part) > 0
            total += part.as_matrix(n)
        assert np.array_equal(total, B)


def test_partial_permutation_validation():
    with pytest.raises(ValueError):
        asg.PartialPermutation(((0, 1), (1, 1)))  # not injective
    with pytest.raises(ValueError):
        asg.PartialPermutation(((1, 0), (0, 1)))  # sources out of order
    p = asg.PartialPermutation(((0, 2), (2, 0)))
    assert p.support == (0, 2)
    assert p.image == (0, 2)
    assert p.is_principal
