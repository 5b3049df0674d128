"""Desk-scale complex eigenvalues via the characteristic polynomial.

The characteristic polynomial comes from the Faddeev-LeVerrier recursion
and its roots from Aberth-Ehrlich simultaneous iteration, seeded on the
circles given by the tropical roots of the coefficient moduli (the Newton
polygon of the polynomial).  One polynomial root finder thus serves both
the eigenvalue path and the standalone polynomial bounds.

The conditioning limits of the characteristic-polynomial route are the
reason for the hard size cap; every spectrum is cross-checked against the
trace and an independently computed determinant before it is returned.
"""

from dataclasses import dataclass
from math import comb, inf

import numpy as np

from . import trop_poly

MAX_SIZE = 30

# Residual target: |p(z)| / (sum_k |a_k| |z|^k) at every returned root.
RESIDUAL_ACCEPT = 1e-10
_RESIDUAL_GOAL = 1e-13


class NonConvergenceError(RuntimeError):
    """Root iteration failed; carries the best iterate found."""

    def __init__(self, message, best_roots=None, residual=None):
        super().__init__(message)
        self.best_roots = best_roots
        self.residual = residual


class ConsistencyError(RuntimeError):
    """Computed spectrum failed the trace/determinant cross-check."""


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues sorted by nonincreasing modulus (ties: by argument)."""

    lambdas: tuple
    prefix_moduli: tuple  # |l_1 ... l_k| for k = 1..n

    @property
    def n(self):
        return len(self.lambdas)

    @property
    def moduli(self):
        return tuple(abs(z) for z in self.lambdas)


# 80-bit extended precision where the platform has it: the recursion
# below can cancel catastrophically on badly scaled matrices.
_WIDE_COMPLEX = getattr(np, "complex256", np.complex128)


def _balance(A):
    """Exact power-of-two diagonal similarity equalizing row/col norms.

    Scaling by radix powers is exact in floating point, so the balanced
    matrix has exactly the same eigenvalues; it just conditions the
    characteristic-polynomial recursion far better when entry magnitudes
    span many orders.
    """
    B = A.copy()
    n = B.shape[0]
    radix = 2.0
    for _ in range(100):
        done = True
        for i in range(n):
            # off-diagonal sums via masking, not subtraction: a subtraction
            # can cancel to a tiny negative and send the loops below off to
            # infinity
            col = np.abs(B[:, i])
            col[i] = 0.0
            row = np.abs(B[i, :])
            row[i] = 0.0
            c = float(col.sum())
            r = float(row.sum())
            if c <= 0.0 or r <= 0.0:
                continue
            f = 1.0
            s = c + r
            steps = 0
            while c < r / radix and steps < 2048:
                c *= radix
                r /= radix
                f *= radix
                steps += 1
            while c > r * radix and steps < 2048:
                c /= radix
                r *= radix
                f /= radix
                steps += 1
            if np.isfinite(f) and f > 0.0 and c + r < 0.95 * s:
                done = False
                B[i, :] /= f
                B[:, i] *= f
        if done:
            break
    return B


def char_poly(A):
    """Monic characteristic polynomial coefficients, index 0 first.

    Faddeev-LeVerrier recursion on the balanced matrix (balancing is a
    similarity, so the polynomial is unchanged), carried out in extended
    precision; the coefficient of x^(n-k) is (-1)^k times the sum of the
    principal k x k minors.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if n > MAX_SIZE:
        raise ValueError(f"char_poly limited to n <= {MAX_SIZE}, got {n}")
    return _fl_recursion(_balance(A))


def _fl_recursion(B):
    n = B.shape[0]
    B = B.astype(_WIDE_COMPLEX)
    desc = np.empty(n + 1, dtype=_WIDE_COMPLEX)
    desc[0] = 1.0
    eye = np.eye(n, dtype=_WIDE_COMPLEX)
    M = eye.copy()
    for k in range(1, n + 1):
        M = B @ M
        ck = -np.trace(M) / k
        desc[k] = ck
        M += ck * eye
    return desc[::-1].astype(complex)


def principal_minor_sum(A, k):
    """Sum of the k x k principal minors, read off the char poly."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    coeffs = char_poly(A)
    return (-1) ** k * coeffs[n - k]


def companion_matrix(coeffs):
    """Companion matrix of a polynomial (normalized to monic).

    Superdiagonal of ones; last row holds the negated low-order
    coefficients.
    """
    cs = np.asarray(coeffs, dtype=complex)
    if cs.ndim != 1 or cs.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if cs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    cs = cs / cs[-1]
    n = cs.size - 1
    C = np.zeros((n, n), dtype=complex)
    C[np.arange(n - 1), np.arange(1, n)] = 1.0
    C[-1, :] = -cs[:-1]
    return C


def _initial_guesses(coeffs):
    """Starting points on circles of tropical-root radius.

    Each Newton polygon segment of the coefficient moduli contributes its
    multiplicity worth of points, equally spaced in angle with a
    per-segment phase offset so that no two points coincide.
    """
    trop = trop_poly.tropical_roots(trop_poly.max_times_relative(coeffs))
    points = []
    for seg, (logradius, mult) in enumerate(trop.entries):
        radius = np.exp(logradius)
        angles = 2 * np.pi * (np.arange(mult) + 0.37) / mult + 0.61 * (seg + 1)
        points.extend(radius * np.exp(1j * angles))
    return np.asarray(points, dtype=complex)


def _horner(coeffs, z):
    out = np.full_like(z, coeffs[-1])
    for c in coeffs[-2::-1]:
        out = out * z + c
    return out


def _coalesce_root_clusters(coeffs, abs_coeffs, roots):
    """Replace each genuine multiple root's cluster by its centroid.

    Simultaneous iteration leaves an m-fold root as a ring of m points of
    radius ~eps^(1/m); the ring is nearly symmetric, so its centroid is
    accurate to residual level.  A cluster is only collapsed when the
    polynomial actually vanishes to order m there: the normalized value
    at the centroid must sit far below spread^m, which genuinely distinct
    nearby roots cannot achieve.
    """
    n = roots.size
    if n < 2:
        return roots
    out = roots.copy()
    # Ascending windows: tight clusters first so that higher
    # multiplicities (whose rings are wider) can absorb them later.
    for window in (1e-3, 1e-2, 3e-2):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(n):
            for j in range(i + 1, n):
                scale = max(abs(out[i]), abs(out[j]), 1e-300)
                if abs(out[i] - out[j]) <= window * scale:
                    parent[find(i)] = find(j)
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        for members in groups.values():
            m = len(members)
            if m < 2:
                continue
            cluster = out[members]
            center = cluster.mean()
            spread = float(np.abs(cluster - center).max())
            scale = max(abs(center), 1e-300)
            denom = float(_horner(abs_coeffs, np.abs(np.array([center])))[0])
            q = abs(complex(_horner(coeffs, np.array([center]))[0]))
            q /= max(denom, 1e-300)
            # the Horner evaluation itself has an eps-level noise floor
            floor = 4.0 * coeffs.size * np.finfo(float).eps
            if spread == 0.0 or q <= max((0.01 * spread / scale) ** m, floor):
                out[members] = _refine_multiple_root(coeffs, center, m, spread)
    return out


def _refine_multiple_root(coeffs, center, m, spread):
    """Newton on the (m-1)-th derivative, where an m-fold root is simple.

    The cluster centroid is only as accurate as the ring is symmetric;
    a couple of Newton steps on the deflated derivative recover the root
    to residual level.
    """
    dm = np.asarray(coeffs, dtype=complex)
    for _ in range(m - 1):
        dm = dm[1:] * np.arange(1, dm.size)
    ddm = dm[1:] * np.arange(1, dm.size)
    z = complex(center)
    for _ in range(10):
        dp = complex(_horner(ddm, np.array([z]))[0])
        if dp == 0:
            break
        step = complex(_horner(dm, np.array([z]))[0]) / dp
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    if abs(z - center) <= 4.0 * spread + 1e-12 * max(1.0, abs(center)):
        return z
    return center


def poly_roots(coeffs, max_iter=200, restarts=4):
    """All roots of a complex polynomial by Aberth-Ehrlich iteration.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficients ``a_0, ..., a_n``; the leading one must be nonzero.
    max_iter, restarts : int
        Iteration budget per attempt and number of randomly perturbed
        restarts before giving up.

    Returns
    -------
    numpy.ndarray of complex
        The n roots (unordered).  Exact zero trailing coefficients are
        deflated into exact zero roots.  Every root satisfies
        ``|p(z)| <= 1e-10 * sum_k |a_k| |z|^k``.

    Raises
    ------
    NonConvergenceError
        If the residual target cannot be met; carries the best iterate.
    """
    cs = np.asarray(coeffs, dtype=complex)
    if cs.ndim != 1 or cs.size == 0:
        raise ValueError("expected a nonempty coefficient vector")
    if cs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    zero_mult = 0
    while cs[zero_mult] == 0:
        zero_mult += 1
    zeros = np.zeros(zero_mult, dtype=complex)
    work = cs[zero_mult:]
    d = work.size - 1
    if d == 0:
        return zeros
    work = work / work[-1]
    if d == 1:
        return np.concatenate([zeros, [-work[0]]])
    if d == 2:
        c, b, _ = work
        disc = np.sqrt(b * b - 4 * c + 0j)
        # pick the sign that avoids cancellation in -b -/+ disc
        q = -(b + disc) / 2 if abs(b + disc) >= abs(b - disc) else -(b - disc) / 2
        r1 = q
        r2 = c / q if q != 0 else 0.0
        return np.concatenate([zeros, [r1, r2]])

    abs_work = np.abs(work)
    deriv = work[1:] * np.arange(1, d + 1)
    rng = np.random.default_rng(0)
    init = _initial_guesses(work)
    z = init.copy()
    best_roots = z
    best_res = inf
    for attempt in range(restarts + 1):
        if attempt:
            z = init * (1 + 0.05 * attempt * rng.standard_normal(d)) + (
                0.01 * attempt * rng.standard_normal(d) * 1j
            )
        stale = 0
        prev_res = inf
        for _ in range(max_iter):
            p = _horner(work, z)
            scale = _horner(abs_work, np.abs(z))
            res = float(np.max(np.abs(p) / np.maximum(scale, 1e-300)))
            if res < best_res:
                best_res = res
                best_roots = z.copy()
            if res <= _RESIDUAL_GOAL:
                z = _coalesce_root_clusters(work, abs_work, z)
                return np.concatenate([zeros, z])
            stale = stale + 1 if res >= 0.5 * prev_res else 0
            prev_res = min(prev_res, res)
            if stale > 30:
                break
            dp = _horner(deriv, z)
            dp = np.where(dp == 0, 1e-300, dp)
            newton = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            recip = 1.0 / diff
            np.fill_diagonal(recip, 0.0)
            denom = 1.0 - newton * recip.sum(axis=1)
            denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
            step = newton / denom
            z = z - step
            bad = ~np.isfinite(z)
            if bad.any():
                z[bad] = init[bad] * (1 + 0.1 * rng.standard_normal(bad.sum()))
    if best_res <= RESIDUAL_ACCEPT:
        best_roots = _coalesce_root_clusters(work, abs_work, best_roots)
        return np.concatenate([zeros, best_roots])
    raise NonConvergenceError(
        f"root iteration stalled at residual {best_res:.3e}",
        best_roots=np.concatenate([zeros, best_roots]),
        residual=best_res,
    )


# Below this size the characteristic coefficients are computed one by one
# as sums of principal minors (batched LU): unlike any recursion, that
# keeps per-coefficient RELATIVE accuracy even when the eigenvalues are
# graded over many orders of magnitude.
_DIRECT_COEFF_LIMIT = 14


def _matching_counts(pat_blocks):
    """Permanents of a stack of 0/1 blocks (Ryser): exact matching counts."""
    k = pat_blocks.shape[-1]
    out = np.zeros(pat_blocks.shape[:-2])
    for mask in range(1, 1 << k):
        cols = [j for j in range(k) if (mask >> j) & 1]
        sign = 1.0 if (k - len(cols)) % 2 == 0 else -1.0
        out += sign * pat_blocks[..., cols].sum(axis=-1).prod(axis=-1)
    return out


def _direct_char_coeffs(B):
    """Characteristic coefficients as signed principal-minor sums.

    A block whose zero pattern admits no perfect matching has determinant
    exactly zero; LU would instead return cancellation garbage at
    eps-times-scale, so those blocks are certified combinatorially and
    forced to zero.  ``floors[j]`` estimates the attainable round-off in
    ``coeffs[j]`` from the mass actually summed: a coefficient below
    ``eps * sum_I |det B[I,I]|`` is cancellation noise, not data.
    """
    n = B.shape[0]
    eps = np.finfo(float).eps
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    floors = np.zeros(n + 1)
    pat = (B != 0).astype(float)
    from .subsets import ksubsets  # local import: avoid a module cycle

    for k in range(1, n + 1):
        S = np.array(ksubsets(n, k), dtype=np.intp)
        blocks = B[S[:, :, None], S[:, None, :]]
        dets = np.linalg.det(blocks)
        feasible = _matching_counts(pat[S[:, :, None], S[:, None, :]]) > 0.5
        dets = np.where(feasible, dets, 0.0)
        coeffs[n - k] = (-1) ** k * complex(dets.sum())
        floors[n - k] = 20.0 * k * eps * float(np.abs(dets).sum())
    return coeffs, floors


def _fl_char_coeffs(B, norm):
    """Recursion coefficients with conservative absolute error floors."""
    coeffs = _fl_recursion(B)
    n = B.shape[0]
    eps_wide = float(np.finfo(np.longdouble).eps)
    base = max(norm, 1e-300)
    floors = np.zeros(n + 1)
    for k in range(1, n + 1):
        floors[n - k] = n * n * eps_wide * comb(n, k) * base**k
    return coeffs, floors


def eigenvalues(A):
    """Full spectrum of a square complex matrix, modulus-sorted.

    Characteristic polynomial then simultaneous root iteration.  At desk
    sizes the coefficients come from direct principal-minor sums on the
    balanced matrix (per-coefficient relative accuracy for graded
    spectra); beyond that, from the recursion.  Trailing coefficients
    below their attainable round-off are treated as exact zeros, so
    structurally singular matrices get exact zero eigenvalues.  The
    result is verified against the trace and an LU determinant before
    being returned.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if n > MAX_SIZE:
        raise ValueError(f"eigenvalues limited to n <= {MAX_SIZE}, got {n}")
    if n == 0:
        return EigenSpectrum((), ())
    balanced = _balance(A)
    norm = float(min(np.linalg.norm(A), np.linalg.norm(balanced)))
    if n <= _DIRECT_COEFF_LIMIT:
        coeffs, floors = _direct_char_coeffs(balanced)
    else:
        coeffs, floors = _fl_char_coeffs(balanced, norm)
    m = 0
    while m < n and abs(coeffs[m]) <= floors[m]:
        m += 1
    trimmed = coeffs.copy()
    trimmed[:m] = 0.0
    roots = poly_roots(trimmed)
    order = sorted(range(n), key=lambda i: (-abs(roots[i]), np.angle(roots[i])))
    lams = tuple(complex(roots[i]) for i in order)
    prefix = tuple(np.cumprod([abs(z) for z in lams]))

    tr = complex(np.trace(A))
    sum_l = sum(lams)
    tr_scale = max(1.0, abs(tr), float(sum(abs(z) for z in lams)))
    if abs(sum_l - tr) > 1e-8 * tr_scale:
        raise ConsistencyError(
            f"eigenvalue sum {sum_l} disagrees with trace {tr}"
        )
    det = complex(np.linalg.det(A))
    prod_l = complex(np.prod(np.asarray(lams)))
    det_floor = n * (1.0 + norm) ** n * 1e-13
    if abs(prod_l - det) > 1e-8 * max(abs(det), abs(prod_l)) + det_floor:
        raise ConsistencyError(
            f"eigenvalue product {prod_l} disagrees with determinant {det}"
        )
    return EigenSpectrum(lams, prefix)
