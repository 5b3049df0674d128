"""Tropical characteristic polynomial, eigenvalues, and exterior powers.

The tropical eigenvalues of a nonnegative matrix are the roots of its
tropical characteristic polynomial, whose coefficient at x^(n-k) is the
k-th tropical trace: the best assignment value over all k x k principal
submatrices.  Two independent computation routes are provided:

* the coefficient route enumerates principal subsets and solves one
  optimal assignment per subset (it also yields the saturated trace
  indices and the trace values themselves);
* the evaluation route treats the characteristic polynomial as the
  value function of a parametric assignment problem (the matrix with its
  diagonal maxed against a scalar) and recovers the breakpoints of that
  convex piecewise-linear function by recursive subdivision, one
  assignment solve per probe.

Everything is expressed internally in the log domain and converted back
to max-times values at the interface.
"""

from dataclasses import dataclass
from itertools import permutations
from math import factorial, inf

import numpy as np

from .assignment import _solve_assignment, assignment_value, max_cycle_mean
from .compounds import as_nonneg_matrix
from .subsets import ksubsets, warn_if_over_cap
from .trop_poly import (
    NEG_INF,
    RootMultiset,
    TropicalPolynomial,
    newton_polygon,
    root_multiset,
    tropical_roots,
)

DEFAULT_MERGE_TOL = 1e-9

# Vectorized brute force over permutations beats per-subset assignment
# solves while the permutation count stays small.
_PERM_BRUTE_LIMIT = 720


@dataclass(frozen=True)
class TropicalSpectrum:
    """Tropical eigenvalues of a matrix with the data that produced them.

    gammas holds max-times root values (nonincreasing, total multiplicity
    n); charpoly is the concavified (function-determining) characteristic
    polynomial in log-domain coefficients; saturated lists the trace
    indices k whose tropical trace lies on the Newton polygon, and traces
    the max-times trace values for k = 0..n.  The evaluation route cannot
    observe individual coefficients, so it leaves saturated and traces as
    None.
    """

    gammas: RootMultiset
    charpoly: TropicalPolynomial
    saturated: frozenset | None
    traces: tuple | None

    @property
    def n(self):
        return self.gammas.total_multiplicity

    def gamma_values(self):
        """Tropical eigenvalues repeated by multiplicity, largest first."""
        return self.gammas.flat()

    def prefix_products(self):
        """Products gamma_1 * ... * gamma_k for k = 1..n (log-domain sums)."""
        logs = [np.log(g) if g > 0 else NEG_INF for g in self.gammas.flat()]
        out = []
        acc = 0.0
        for value in logs:
            acc = acc + value if value > NEG_INF and acc > NEG_INF else NEG_INF
            out.append(np.exp(acc) if acc > NEG_INF else 0.0)
        return out


def _log_matrix(M):
    M = as_nonneg_matrix(M)
    with np.errstate(divide="ignore"):
        return np.log(M)


def _log_subset_traces(L, n, k):
    """Log of the k-th tropical trace: max assignment over k-subsets."""
    if k == 0:
        return 0.0
    subsets = np.array(ksubsets(n, k), dtype=np.intp)
    count = subsets.shape[0]
    nperm = factorial(k)
    if nperm <= _PERM_BRUTE_LIMIT and count * nperm * k <= 1 << 25:
        blocks = L[subsets[:, :, None], subsets[:, None, :]]
        perms = np.array(list(permutations(range(k))), dtype=np.intp)
        gathered = blocks[:, np.arange(k)[None, :], perms]  # (count, k!, k)
        best = gathered.sum(axis=2).max()
        return float(best)
    best = NEG_INF
    for subset in subsets:
        value = assignment_value(L[np.ix_(subset, subset)])
        if value > best:
            best = value
    return float(best)


def _log_traces(L, n):
    """Log-domain tropical traces for k = 0..n."""
    return [_log_subset_traces(L, n, k) for k in range(n + 1)]


def tropical_trace(M, k):
    """k-th tropical trace: best assignment value over k x k principal
    submatrices, as a max-times number (k = 0 gives 1 by convention)."""
    M = as_nonneg_matrix(M)
    n = M.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    value = _log_subset_traces(_log_matrix(M), n, k)
    return float(np.exp(value)) if value > NEG_INF else 0.0


def tropical_char_poly(M):
    """Tropical characteristic polynomial (log-domain coefficients).

    Monic of degree n; the coefficient at index n-k is the log of the
    k-th tropical trace.
    """
    M = as_nonneg_matrix(M)
    n = M.shape[0]
    logs = _log_traces(_log_matrix(M), n)
    coeffs = [logs[n - j] for j in range(n + 1)]
    return TropicalPolynomial(tuple(coeffs))


def _eval_route_root_pairs(L, n, merge_tol):
    """Roots of the characteristic polynomial from its value function.

    f(t) = best assignment value of L with diagonal entries maxed
    against t is convex piecewise linear with integer slopes; each probe
    returns the value and the slope (count of diagonal entries where t
    won).  Breakpoints are located by intersecting supporting lines and
    subdividing while a probe value rises above the current chord.
    """
    finite = L[np.isfinite(L)]
    if finite.size == 0:
        return [(NEG_INF, n)]

    def probe(t):
        W = L.copy()
        diag = W.diagonal().copy()
        np.fill_diagonal(W, np.maximum(diag, t))
        value, matching = _solve_assignment(W)
        slope = sum(
            1 for i in range(n) if matching[i] == i and t >= diag[i]
        )
        return value, slope

    # Lowest achievable slope: maximize the number of vertices covered by
    # disjoint cycles (diagonal skips allowed at zero reward).
    V = np.where(np.isfinite(L), 1.0, NEG_INF)
    np.fill_diagonal(V, np.maximum(V.diagonal(), 0.0))
    covered, _ = _solve_assignment(V)
    j_min = n - int(round(covered))

    pairs = []
    if j_min < n:
        span = float(np.abs(finite).max())
        t_left = -(2 * n * span + 1.0)
        value_left, _ = probe(t_left)
        c_min = value_left - j_min * t_left
        chord_tol = 1e-9

        stack = [(j_min, c_min, n, 0.0)]
        while stack:
            j1, c1, j2, c2 = stack.pop()
            t = (c1 - c2) / (j2 - j1)
            value, slope = probe(t)
            chord = c1 + j1 * t
            if value <= chord + chord_tol or not j1 < slope < j2:
                pairs.append((t, j2 - j1))
                continue
            c_mid = value - slope * t
            stack.append((j1, c1, slope, c_mid))
            stack.append((slope, c_mid, j2, c2))
    if j_min > 0:
        pairs.append((NEG_INF, j_min))
    return pairs


def tropical_eigenvalues(M, method="coeff", merge_tol=DEFAULT_MERGE_TOL):
    """Tropical eigenvalues (roots of the tropical characteristic
    polynomial) with multiplicities.

    Parameters
    ----------
    M : array_like
        Square nonnegative matrix.
    method : {"coeff", "eval", "both"}
        Coefficient route (traces by subset enumeration), evaluation
        route (parametric assignment breakpoints), or both with an
        agreement check.
    merge_tol : float
        Relative log-domain tolerance for merging nearby roots.

    Returns
    -------
    TropicalSpectrum
    """
    M = as_nonneg_matrix(M)
    n = M.shape[0]
    if n == 0:
        return TropicalSpectrum(RootMultiset(()), TropicalPolynomial((0.0,)),
                                frozenset(), (1.0,))
    L = _log_matrix(M)
    if method == "both":
        coeff = tropical_eigenvalues(M, "coeff", merge_tol)
        ev = tropical_eigenvalues(M, "eval", merge_tol)
        _check_route_agreement(coeff.gammas, ev.gammas, merge_tol)
        return coeff
    if method == "coeff":
        logs = _log_traces(L, n)
        poly = TropicalPolynomial(tuple(logs[n - j] for j in range(n + 1)))
        polygon = newton_polygon(poly)
        roots = tropical_roots(poly, merge_tol=merge_tol)
        gammas = roots.exp()
        charpoly = TropicalPolynomial(polygon.concavified)
        saturated = frozenset(n - j for j in polygon.saturated)
        traces = tuple(
            float(np.exp(v)) if v > NEG_INF else 0.0 for v in logs
        )
        return TropicalSpectrum(gammas, charpoly, saturated, traces)
    if method == "eval":
        pairs = _eval_route_root_pairs(L, n, merge_tol)
        roots = root_multiset(pairs, merge_tol=merge_tol)
        gammas = roots.exp()
        # Vieta: concavified coefficient n-k is the sum of the k largest
        # log roots (the polynomial is monic).
        logroots = [np.log(g) if g > 0 else NEG_INF for g in gammas.flat()]
        coeffs = [0.0] * (n + 1)
        acc = 0.0
        for k, value in enumerate(logroots, start=1):
            acc = acc + value if acc > NEG_INF and value > NEG_INF else NEG_INF
            coeffs[n - k] = acc
        charpoly = TropicalPolynomial(tuple(coeffs))
        return TropicalSpectrum(gammas, charpoly, None, None)
    raise ValueError(f"unknown method {method!r}")


class RouteDisagreement(RuntimeError):
    """Coefficient and evaluation routes produced different spectra."""


def _check_route_agreement(a, b, merge_tol):
    if len(a.entries) != len(b.entries):
        raise RouteDisagreement(f"root counts differ: {a} vs {b}")
    for (va, ma), (vb, mb) in zip(a.entries, b.entries):
        if ma != mb:
            raise RouteDisagreement(f"multiplicities differ: {a} vs {b}")
        if va == 0 and vb == 0:
            continue
        la = np.log(va) if va > 0 else NEG_INF
        lb = np.log(vb) if vb > 0 else NEG_INF
        if la == NEG_INF or lb == NEG_INF:
            if la != lb:
                raise RouteDisagreement(f"values differ: {a} vs {b}")
            continue
        if abs(la - lb) > merge_tol * max(1.0, abs(la), abs(lb)):
            raise RouteDisagreement(f"values differ: {a} vs {b}")


def tropical_spectral_radius(M):
    """Largest tropical eigenvalue; equals the maximal cycle mean."""
    return max_cycle_mean(as_nonneg_matrix(M))


def tropical_exterior_power(M, k):
    """k-th tropical exterior power: per-subset-pair best assignments.

    Entry (I, J) is the max-times tropical permanent of M[I, J], with
    subsets in lexicographic order (shared with the classical compounds).
    """
    M = as_nonneg_matrix(M)
    n = M.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    count = warn_if_over_cap(n, k, "tropical_exterior_power")
    L = _log_matrix(M)
    subsets = np.array(ksubsets(n, k), dtype=np.intp)
    nperm = factorial(k)
    out = np.full((count, count), NEG_INF)
    if nperm <= _PERM_BRUTE_LIMIT and count * count * k <= 1 << 24:
        blocks = L[subsets[:, None, :, None], subsets[None, :, None, :]]
        rows = np.arange(k)
        for perm in permutations(range(k)):
            vals = blocks[:, :, rows, perm].sum(axis=-1)
            np.maximum(out, vals, out=out)
    else:
        for a in range(count):
            ra = subsets[a]
            for b in range(count):
                out[a, b] = assignment_value(L[np.ix_(ra, subsets[b])])
    return np.exp(out)
