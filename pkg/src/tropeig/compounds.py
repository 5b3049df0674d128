"""Classical matrix machinery: patterns, permanents, compounds, radii.

Determinantal and permanental compound matrices, Ryser permanents,
Hadamard products, entrywise powers, and the spectral radius of
nonnegative/complex matrices at desk scale.  Compound rows/columns are
indexed by lexicographic k-subsets (see subsets.py); the same order is
used by the tropical exterior powers so entrywise identities line up.
"""

from math import factorial

import numpy as np

from . import dense_eig
from .subsets import ksubsets, warn_if_over_cap

MAX_PERMANENT_SIZE = 20

# np.linalg.det and eigvals on stacked blocks chew memory; keep block
# tensors under ~32M scalars.
_BLOCK_BUDGET = 1 << 25


def as_complex_matrix(A):
    """Validate and return a square complex matrix with finite entries."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise ValueError("matrix entries must be finite")
    return A


def as_nonneg_matrix(M):
    """Validate and return a square matrix of finite nonnegative reals."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise ValueError("matrix entries must be finite")
    if (M < 0).any():
        raise ValueError("matrix entries must be nonnegative")
    return M


def pattern(A):
    """0/1 matrix marking the exactly-nonzero entries of A."""
    A = np.asarray(A)
    return (A != 0).astype(float)


def permanent(M):
    """Permanent by Ryser's inclusion-exclusion formula.

    Cost is O(2^n n); inputs beyond n = 20 are rejected.  Complex input
    gives a complex permanent, real input a float.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    n = M.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise ValueError(f"permanent limited to n <= {MAX_PERMANENT_SIZE}, got {n}")
    if n == 0:
        return 1.0
    is_complex = np.iscomplexobj(M)
    M = M.astype(complex if is_complex else float)
    total = 0j if is_complex else 0.0
    chunk = 1 << 16
    shifts = np.arange(n)
    for start in range(1, 1 << n, chunk):
        stop = min(start + chunk, 1 << n)
        idx = np.arange(start, stop, dtype=np.int64)
        cols = ((idx[:, None] >> shifts) & 1).astype(float)
        row_sums = cols @ M.T
        sizes = cols.sum(axis=1)
        signs = np.where((n - sizes) % 2 == 0, 1.0, -1.0)
        total += (signs * row_sums.prod(axis=1)).sum()
    return complex(total) if is_complex else float(total)


def _ryser_blocks(blocks):
    """Permanents of a stack of k x k blocks, vectorized over the stack."""
    k = blocks.shape[-1]
    if k == 0:
        return np.ones(blocks.shape[:-2], dtype=blocks.dtype)
    out = np.zeros(blocks.shape[:-2], dtype=blocks.dtype)
    for mask in range(1, 1 << k):
        cols = [j for j in range(k) if (mask >> j) & 1]
        sign = 1.0 if (k - len(cols)) % 2 == 0 else -1.0
        out += sign * blocks[..., cols].sum(axis=-1).prod(axis=-1)
    return out


def _iter_block_tensor(A, k):
    """Yield (row_slice, blocks) with blocks[r, c, :, :] = A[I_r, J_c]."""
    n = A.shape[0]
    S = np.array(ksubsets(n, k), dtype=np.intp)
    count = S.shape[0]
    rows_per_chunk = max(1, _BLOCK_BUDGET // max(1, count * k * k))
    for start in range(0, count, rows_per_chunk):
        stop = min(start + rows_per_chunk, count)
        blocks = A[S[start:stop, None, :, None], S[None, :, None, :]]
        yield slice(start, stop), blocks


def compound(A, k):
    """k-th (determinantal) compound: minors det A[I, J], lexicographic.

    Minors are evaluated by LU with partial pivoting, one factorization
    per block.
    """
    A = as_complex_matrix(A)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    count = warn_if_over_cap(n, k, "compound")
    out = np.empty((count, count), dtype=complex)
    for rows, blocks in _iter_block_tensor(A, k):
        out[rows] = np.linalg.det(blocks)
    return out


def permanental_compound(A, k):
    """k-th permanental compound: per A[I, J] per block, lexicographic."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    count = warn_if_over_cap(n, k, "permanental_compound")
    work = A.astype(complex if np.iscomplexobj(A) else float)
    out = np.empty((count, count), dtype=work.dtype)
    for rows, blocks in _iter_block_tensor(work, k):
        out[rows] = _ryser_blocks(blocks)
    return out


def hadamard(A, B):
    """Entrywise product; shapes must match."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A * B


def entrywise_power(A, r):
    """Entrywise r-th power."""
    return np.asarray(A) ** r


def _pattern_acyclic(M):
    """True when the digraph of nonzero entries has no cycle.

    An acyclic pattern makes the matrix nilpotent whatever the values, so
    its spectral radius is exactly zero; eigensolvers would instead
    return round-off noise.
    """
    n = M.shape[0]
    adj = M != 0
    indeg = adj.sum(axis=0)
    queue = [j for j in range(n) if indeg[j] == 0]
    removed = 0
    while queue:
        j = queue.pop()
        removed += 1
        for t in np.flatnonzero(adj[j]):
            indeg[t] -= 1
            if indeg[t] == 0:
                queue.append(t)
    return removed == n


def _dense_radius(M):
    """Spectral radius via a dense LAPACK eigensolve.

    This is the workhorse fallback for power-iteration stagnation inside
    hot loops; the characteristic-polynomial eigensolver stays the public
    spectrum API but is far too slow to sit behind every compound radius.
    """
    M = np.asarray(M)
    if M.shape[0] == 0:
        return 0.0
    return float(np.abs(np.linalg.eigvals(M)).max())


def spectral_radius(M, rtol=1e-12, max_iter=100_000):
    """Spectral radius of a square matrix.

    Nonnegative matrices go through power iteration on ``M + eps*I``
    (a machine-scale shift keeps the Perron root strictly dominant for
    most inputs) with a Rayleigh-quotient convergence test: relative
    change below ``rtol`` over three consecutive iterations.  Periodic or
    reducible matrices that cycle instead of converging fall back to a
    dense solve, as do complex matrices.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    n = M.shape[0]
    if n == 0:
        return 0.0
    if _pattern_acyclic(M):
        return 0.0
    if np.iscomplexobj(M) or (M < 0).any():
        return _dense_radius(M)
    M = as_nonneg_matrix(M)
    scale = M.max()
    if scale == 0:
        return 0.0
    A = M / scale
    eps = np.finfo(float).eps
    x = np.full(n, 1.0 / np.sqrt(n))
    lam = 0.0
    steady = 0
    # Cycling inputs (e.g. permutation-like patterns) never meet the test;
    # cut over to the dense solve early when the matrix is small enough
    # that a dense solve is cheap anyway.
    cutoff = 150 if n <= 200 else max_iter
    for _ in range(min(max_iter, cutoff)):
        y = A @ x + eps * x
        norm = np.linalg.norm(y)
        if norm == 0:
            return 0.0  # nilpotent-by-now iterate: radius 0
        lam_new = float(x @ y)
        if abs(lam_new - lam) <= rtol * max(1.0, abs(lam_new)):
            steady += 1
            if steady >= 3:
                # A cycling iterate can hold the Rayleigh quotient steady
                # at a wrong value, and residuals certify nothing on
                # ill-conditioned graded matrices.  The Collatz-Wielandt
                # quotients bracket the Perron root rigorously for any
                # positive iterate (the shift keeps x positive).
                if lam_new - eps <= 1000 * eps:
                    break
                if (x <= 0).any():
                    break  # iterate underflowed out of the positive cone
                ratios = y / x
                cw_lo = float(ratios.min())
                cw_hi = float(ratios.max())
                if cw_hi - cw_lo <= 1e-11 * cw_hi:
                    value = 0.5 * (cw_lo + cw_hi) - eps
                    return float(max(0.0, scale * value))
                steady = 0
        else:
            steady = 0
        lam = lam_new
        x = y / norm
    return float(scale) * _dense_radius(A)


def powered_radius_root(M, r, max_iter=3000):
    """rho(M^[r])^(1/r) via log-domain power iteration.

    Entrywise powers underflow long before r reaches useful sizes, so the
    iteration runs on log entries with log-sum-exp matvecs, and stops
    when the log Collatz-Wielandt quotients pinch the radius.  Returns
    None when that certificate is not reached (e.g. periodic zero
    patterns); callers should then fall back to a direct computation.
    """
    M = as_nonneg_matrix(M)
    n = M.shape[0]
    r = float(r)
    if n == 0 or _pattern_acyclic(M):
        return 0.0
    with np.errstate(divide="ignore"):
        L = r * np.log(M)
    # round-off in the log domain scales with the log magnitudes involved
    log_span = float(np.abs(L[np.isfinite(L)]).max(initial=0.0))
    res_tol = 1e-12 * max(1.0, log_span)
    x = np.zeros(n)
    for _ in range(max_iter):
        Y = L + x[None, :]
        row_max = Y.max(axis=1)
        if (row_max == -np.inf).any():
            return None  # a starved row: no positive eigenvector
        y = row_max + np.log(np.exp(Y - row_max[:, None]).sum(axis=1))
        # log Collatz-Wielandt quotients bracket log rho rigorously
        quotients = y - x
        lo = float(quotients.min())
        hi = float(quotients.max())
        if hi - lo <= res_tol:
            return float(np.exp(0.5 * (lo + hi) / r))
        x = y - y.max()
    return None


def limit_eigenvalue_curve(M, rs):
    """Sampled values of ``rho(M^[r])^(1/r)``, one pair (r, value) per r.

    The sequence decreases toward the maximal cycle mean as r grows.
    Entries are normalized by the largest one before powering so that
    large exponents cannot overflow.
    """
    M = as_nonneg_matrix(M)
    scale = M.max()
    points = []
    for r in rs:
        r = float(r)
        if r <= 0:
            raise ValueError(f"exponents must be positive, got {r}")
        if scale == 0:
            points.append((r, 0.0))
            continue
        value = powered_radius_root(M, r)
        if value is None:
            value = scale * spectral_radius((M / scale) ** r) ** (1.0 / r)
        points.append((r, float(value)))
    return points


def global_pattern_bound(n, k):
    """Upper limit n!/(n-k)! valid for the patterned permanental compound
    radius of any n x n matrix."""
    return factorial(n) // factorial(n - k)
