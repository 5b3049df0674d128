"""Brute-force oracles used across the test suite.

Each oracle is written as the most direct possible enumeration of the
definition it checks, independent of the library's computation paths.
"""

from itertools import combinations, permutations
from math import inf

import numpy as np


def permanent_brute(M):
    M = np.asarray(M)
    n = M.shape[0]
    total = 0.0 if not np.iscomplexobj(M) else 0.0 + 0.0j
    for sigma in permutations(range(n)):
        prod = 1.0
        for i, j in enumerate(sigma):
            prod = prod * M[i, j]
        total += prod
    return total


def assignment_brute(W):
    """Max over all n! permutations of the log-weight sum."""
    W = np.asarray(W, dtype=float)
    n = W.shape[0]
    best = -inf
    best_perm = None
    for sigma in permutations(range(n)):
        s = 0.0
        feasible = True
        for i, j in enumerate(sigma):
            if W[i, j] == -inf:
                feasible = False
                break
            s += W[i, j]
        if feasible and s > best:
            best = s
            best_perm = sigma
    return best, best_perm


def max_cycle_mean_brute(M):
    """Max geometric mean over all simple cycles (distinct vertices)."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    best = 0.0
    for length in range(1, n + 1):
        for vertices in permutations(range(n), length):
            if vertices[0] != min(vertices):
                continue  # one rotation per cycle is enough
            w = 1.0
            ok = True
            for a, b in zip(vertices, vertices[1:] + vertices[:1]):
                if M[a, b] == 0:
                    ok = False
                    break
                w *= M[a, b]
            if ok:
                best = max(best, w ** (1.0 / length))
    return best


def max_perm_mean_brute(M):
    """Max mean weight over permutations of all subsets (the cycle-free
    formulation of the maximal cycle mean)."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    best = 0.0
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            for sigma in permutations(subset):
                w = 1.0
                ok = True
                for i, j in zip(subset, sigma):
                    if M[i, j] == 0:
                        ok = False
                        break
                    w *= M[i, j]
                if ok:
                    best = max(best, w ** (1.0 / size))
    return best


def tropical_trace_brute(M, k):
    """Max over k-subsets and permutations of the entry product."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if k == 0:
        return 1.0
    best = 0.0
    for subset in combinations(range(n), k):
        for sigma in permutations(subset):
            w = 1.0
            for i, j in zip(subset, sigma):
                w *= M[i, j]
            best = max(best, w)
    return best


def principal_minor_sum_brute(A, k):
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    total = 0.0 + 0.0j
    for subset in combinations(range(n), k):
        sub = A[np.ix_(subset, subset)]
        total += np.linalg.det(sub)
    return total


def expand_roots_to_coeffs(roots):
    """Monic expansion of prod (x - r), coefficients ascending."""
    coeffs = np.array([1.0 + 0.0j])  # descending while building
    for r in roots:
        coeffs = np.concatenate([coeffs, [0.0]]) + np.concatenate(
            [[0.0], -r * coeffs]
        )
    return coeffs[::-1]
