"""Log-majorization bounds between eigenvalue and tropical-eigenvalue
products, plus the classical polynomial-root bounds they generalize.

The central inequality bounds |l_1 ... l_k| (product of the k largest
eigenvalue moduli) by U_k * g_1 ... g_k, where the g_i are the tropical
eigenvalues of the entrywise absolute value and U_k is the spectral
radius of the k-th permanental compound of the zero pattern.  Conditional
lower bounds of the same shape hold under uniqueness/gap hypotheses on
the optimal assignment structure, which are checked here by exhaustive
enumeration (correctness over speed: second-best weights are not exposed
by assignment solvers).

Reports record verdicts instead of raising on inequality failure: a
failed proven inequality indicates an implementation bug and is surfaced
by the test suite and the CLI's verification exit code, not by the
library.
"""

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from itertools import permutations
from math import comb, exp, factorial, inf, log
from typing import Optional

import numpy as np

from . import dense_eig, trop_spectra
from .assignment import max_cycle_mean
from .compounds import (
    as_complex_matrix,
    as_nonneg_matrix,
    hadamard,
    pattern,
    permanental_compound,
    spectral_radius,
)
from .subsets import ksubsets
from .trop_poly import max_times_relative, tropical_roots

REL_TOL = 1e-9

MAX_REPORT_SIZE = 12
MAX_LOWER_SIZE = 8
_MAX_LOWER_WORK = 1_000_000

_pattern_radius_cache = {}


def upper_constant(A, k):
    """Spectral radius of the k-th permanental compound of the pattern.

    Depends only on the zero pattern, so results are memoized per
    (n, k, pattern).
    """
    A = np.asarray(A)
    pat = pattern(A)
    key = (pat.shape[0], k, pat.astype(np.uint8).tobytes())
    hit = _pattern_radius_cache.get(key)
    if hit is not None:
        return hit
    value = float(spectral_radius(permanental_compound(pat, k)))
    if len(_pattern_radius_cache) > 512:
        _pattern_radius_cache.clear()
    _pattern_radius_cache[key] = value
    return value


def polya_constant(k):
    """sqrt((k+1)^(k+1) / k^k); equals 1 at k = 0."""
    if k == 0:
        return 1.0
    return exp(0.5 * ((k + 1) * log(k + 1) - k * log(k)))


def _rel_le(lhs, rhs, tol):
    """lhs <= rhs up to relative slack on both sides."""
    return bool(lhs <= rhs * (1 + tol) + tol * lhs)


@dataclass
class KRecord:
    """One row of a bound report."""

    k: int
    eig_prefix: float
    trop_prefix: float
    upper_constant: float
    ratio: Optional[float]
    upper_holds: bool
    lower_constant: Optional[float] = None
    lower_holds: Optional[bool] = None
    diagnostics: str = ""


@dataclass
class BoundReport:
    n: int
    records: list
    metadata: dict = field(default_factory=dict)

    @property
    def all_upper_hold(self):
        return all(r.upper_holds for r in self.records)

    @property
    def all_lower_hold(self):
        return all(r.lower_holds is not False for r in self.records)

    def to_json_dict(self):
        return {
            "n": self.n,
            "metadata": self.metadata,
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, data):
        records = [KRecord(**entry) for entry in data["records"]]
        return cls(n=data["n"], records=records, metadata=dict(data["metadata"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["k", "eig_prefix", "trop_prefix", "upper_constant", "ratio",
             "upper_holds", "lower_constant", "lower_holds", "diagnostics"]
        )
        for r in self.records:
            writer.writerow(
                [
                    r.k,
                    _fmt(r.eig_prefix),
                    _fmt(r.trop_prefix),
                    _fmt(r.upper_constant),
                    _fmt(r.ratio),
                    str(r.upper_holds).lower(),
                    _fmt(r.lower_constant),
                    "" if r.lower_holds is None else str(r.lower_holds).lower(),
                    r.diagnostics,
                ]
            )
        return buf.getvalue()


def _fmt(x):
    return "" if x is None else format(float(x), ".17g")


def _input_hash(A):
    A = np.ascontiguousarray(np.asarray(A, dtype=complex))
    digest = hashlib.sha256()
    digest.update(str(A.shape).encode())
    digest.update(A.tobytes())
    return digest.hexdigest()


def upper_bound_report(A, rel_tol=REL_TOL, with_lower=False, k_values=None,
                       method="coeff"):
    """Per-k comparison of eigenvalue products against their tropical
    upper bounds (and, optionally, conditional lower bounds).

    Parameters
    ----------
    A : array_like
        Square complex matrix, n <= 12 (compound sizes).
    rel_tol : float
        Relative tolerance for the verdicts.
    with_lower : bool
        Also run the conditional lower-bound hypothesis checks per k.
    k_values : iterable of int, optional
        Restrict the report to these k (default: 1..n).
    method : str
        Route for the tropical eigenvalues ("coeff", "eval", "both").
    """
    A = as_complex_matrix(A)
    n = A.shape[0]
    if n == 0:
        raise ValueError("matrix must be nonempty")
    if n > MAX_REPORT_SIZE:
        raise ValueError(f"report limited to n <= {MAX_REPORT_SIZE}, got {n}")
    espec = dense_eig.eigenvalues(A)
    tspec = trop_spectra.tropical_eigenvalues(np.abs(A), method=method)
    trop_prefix = tspec.prefix_products()
    ks = list(k_values) if k_values is not None else list(range(1, n + 1))
    records = []
    for k in ks:
        if not 1 <= k <= n:
            raise ValueError(f"k must be in [1, {n}], got {k}")
        U = upper_constant(A, k)
        eig = float(espec.prefix_moduli[k - 1])
        trop = float(trop_prefix[k - 1])
        denom = U * trop
        ratio = eig / denom if denom > 0 else None
        record = KRecord(
            k=k,
            eig_prefix=eig,
            trop_prefix=trop,
            upper_constant=U,
            ratio=ratio,
            upper_holds=_rel_le(eig, denom, rel_tol),
        )
        if with_lower:
            try:
                low = lower_bound(A, k, rel_tol=rel_tol)
            except ValueError as err:
                low = LowerBoundResult(
                    applicable=False, value=None, route=None, delta=None,
                    eta=None, subset=None, trace=None,
                    diagnostics=f"hypothesis check unavailable: {err}",
                )
            if low.applicable:
                record.lower_constant = low.value
                record.lower_holds = _rel_le(low.value * trop, eig, rel_tol)
            record.diagnostics = low.diagnostics
        records.append(record)
    metadata = {
        "input_sha256": _input_hash(A),
        "rel_tol": rel_tol,
        "method": method,
        "with_lower": with_lower,
    }
    return BoundReport(n=n, records=records, metadata=metadata)


@dataclass(frozen=True)
class FriedlandCheck:
    """Sandwich rho_max <= rho <= rho(pattern) * rho_max for one matrix."""

    rho_max: float
    rho: float
    rho_pattern: float
    lower_holds: bool
    upper_holds: bool

    @property
    def verdict(self):
        return self.lower_holds and self.upper_holds


def friedland_check(M, rel_tol=REL_TOL):
    """Evaluate both halves of the cycle-mean/spectral-radius sandwich."""
    M = as_nonneg_matrix(M)
    rho_max = max_cycle_mean(M)
    rho = spectral_radius(M)
    rho_pat = spectral_radius(pattern(M))
    return FriedlandCheck(
        rho_max=rho_max,
        rho=rho,
        rho_pattern=rho_pat,
        lower_holds=_rel_le(rho_max, rho, rel_tol),
        upper_holds=_rel_le(rho, rho_pat * rho_max, rel_tol),
    )


@dataclass(frozen=True)
class LowerBoundResult:
    """Outcome of the conditional lower-bound hypothesis checks.

    Inapplicability is a value, not an error: ``applicable`` is False and
    ``diagnostics`` names the failed hypothesis.
    """

    applicable: bool
    value: Optional[float]
    route: Optional[str]
    delta: Optional[float]
    eta: Optional[float]
    subset: Optional[tuple]
    trace: Optional[float]
    diagnostics: str = ""


def lower_bound(A, k, rel_gap_tol=REL_TOL, rel_tol=REL_TOL):
    """Conditional lower-bound constant for |l_1 ... l_k|.

    Checks, in order: the trace index k is saturated; a unique subset
    carries the best assignment weight; that subset's principal minor is
    nonzero; and the weight gap to the rest is strict enough.  Also
    attempts the sharper unique-permutation variant and reports the
    larger applicable constant.  Uniqueness is decided with a relative
    gap of ``rel_gap_tol``; exact ties fail the hypotheses.

    All hypotheses are verified by exhaustive subset/permutation
    enumeration, which is guarded to small sizes.
    """
    A = as_complex_matrix(A)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if n > MAX_LOWER_SIZE or comb(n, k) * factorial(k) > _MAX_LOWER_WORK:
        raise ValueError(
            f"exhaustive hypothesis checks limited to n <= {MAX_LOWER_SIZE} "
            f"and C(n,k)*k! <= {_MAX_LOWER_WORK}"
        )
    absA = np.abs(A)

    best_per_subset = []
    overall = []  # (weight, subset_index) for every permutation
    subsets = ksubsets(n, k)
    for si, subset in enumerate(subsets):
        best = 0.0
        for perm in permutations(subset):
            w = 1.0
            for i, j in zip(subset, perm):
                w *= absA[i, j]
            overall.append((w, si))
            if w > best:
                best = w
        best_per_subset.append(best)

    m1 = max(best_per_subset)
    trace = m1
    count_binom = comb(n, k)
    diag = []

    tspec = trop_spectra.tropical_eigenvalues(absA, method="coeff")
    if k not in tspec.saturated:
        return LowerBoundResult(
            False, None, None, None, None, None, trace,
            f"index {k} not saturated in the tropical characteristic polynomial",
        )
    if m1 == 0:
        return LowerBoundResult(
            False, None, None, None, None, None, trace,
            "all assignment weights vanish",
        )

    star = int(np.argmax(best_per_subset))
    others = [w for si, w in enumerate(best_per_subset) if si != star]
    m2_sub = max(others) if others else 0.0
    if m2_sub >= m1 * (1 - rel_gap_tol):
        return LowerBoundResult(
            False, None, None, None, None, None, trace,
            "maximizing subset not unique",
        )
    subset_star = subsets[star]
    det_star = complex(np.linalg.det(A[np.ix_(subset_star, subset_star)]))
    if det_star == 0:
        return LowerBoundResult(
            False, None, None, None, None, subset_star, trace,
            "principal minor of the maximizing subset vanishes",
        )

    candidates = []

    # Subset-gap route: every permutation outside the best subset must sit
    # below a strict fraction of the best weight.
    delta = m2_sub / m1
    if count_binom == 1:
        threshold_delta = inf
    else:
        threshold_delta = abs(det_star) / (m1 * (count_binom - 1) * factorial(k))
    if delta < threshold_delta:
        value = (abs(det_star) / m1 - delta * (count_binom - 1) * factorial(k))
        value /= count_binom
        candidates.append(("subset-gap", value, delta, None))
    else:
        diag.append(
            f"weight gap too small: delta={delta:.6g} >= {threshold_delta:.6g}"
        )

    # Unique-permutation variant: the best weight must be attained once,
    # globally, with every other permutation below a strict fraction.
    near_best = [w for w, _ in overall if w >= m1 * (1 - rel_gap_tol)]
    if len(near_best) > 1:
        diag.append("maximizing permutation not unique")
    else:
        eta = max((w for w, _ in overall if w < m1 * (1 - rel_gap_tol)),
                  default=0.0) / m1
        denom = count_binom * factorial(k) - 1
        if denom == 0 or eta < 1.0 / denom:
            value = (1.0 - eta * denom) / count_binom
            candidates.append(("unique-permutation", value, None, eta))
        else:
            diag.append(
                f"permutation gap too small: eta={eta:.6g} >= {1.0 / denom:.6g}"
            )

    if not candidates:
        return LowerBoundResult(
            False, None, None, None, None, subset_star, trace, "; ".join(diag)
        )
    route, value, delta_out, eta_out = max(candidates, key=lambda c: c[1])
    return LowerBoundResult(
        applicable=True,
        value=float(value),
        route=route,
        delta=delta_out,
        eta=eta_out,
        subset=subset_star,
        trace=trace,
        diagnostics=f"route {route}" + ("; " + "; ".join(diag) if diag else ""),
    )


@dataclass(frozen=True)
class CkBoundResult:
    bound: float
    eig_prefix: float
    holds: bool


def lower_bound_via_Ck(A, k, C_k, rel_tol=REL_TOL):
    """Lower bound from a caller-supplied trace-domination constant.

    Requires the trace index k to be saturated, a nonzero alternating
    k-minor sum, and ``0 < C_k`` with ``C_k * (tropical trace) <= |sum of
    principal k-minors|`` (validated numerically).  Returns the bound
    ``(C_k / C(n,k)) * g_1 ... g_k`` together with the verified
    comparison against |l_1 ... l_k|.
    """
    A = as_complex_matrix(A)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if C_k <= 0:
        raise ValueError(f"C_k must be positive, got {C_k}")
    tspec = trop_spectra.tropical_eigenvalues(np.abs(A), method="coeff")
    if k not in tspec.saturated:
        raise ValueError(f"index {k} is not saturated")
    trace_trop = tspec.traces[k]
    trace_alt = dense_eig.principal_minor_sum(A, k)
    if trace_alt == 0:
        raise ValueError("alternating minor sum vanishes at this index")
    if C_k * trace_trop > abs(trace_alt) * (1 + 1e-12):
        raise ValueError(
            f"C_k={C_k} violates C_k * {trace_trop} <= |{trace_alt}|"
        )
    bound = C_k / comb(n, k) * tspec.prefix_products()[k - 1]
    eig = float(dense_eig.eigenvalues(A).prefix_moduli[k - 1])
    return CkBoundResult(bound=float(bound), eig_prefix=eig,
                         holds=_rel_le(bound, eig, rel_tol))


@dataclass
class HopRecord:
    """One k of the polynomial root/tropical-root comparison."""

    k: int
    root_prefix: float
    trop_prefix: float
    lower_factor: float          # 1 / C(n,k)
    upper_constant: float        # min over the symmetric pair of constants
    upper_constant_weaker: float  # sqrt(e (k+1))
    upper_constant_hadamard: float  # k + 1
    lower_holds: bool
    upper_holds: bool


@dataclass
class HopReport:
    degree: int
    records: list
    roots: tuple
    tropical: tuple

    @property
    def all_hold(self):
        return all(r.lower_holds and r.upper_holds for r in self.records)


def hop_check(coeffs, rel_tol=REL_TOL):
    """Two-sided bounds between root moduli and tropical root products.

    For each k: ``(1/C(n,k)) a_1...a_k <= |z_1...z_k| <=
    min(f(k), f(n-k)) a_1...a_k`` with ``f(k) = sqrt((k+1)^(k+1)/k^k)``,
    where the a_i are the tropical roots of the coefficient moduli.  The
    weaker constants sqrt(e(k+1)) and k+1 are recorded alongside.
    """
    cs = np.asarray(coeffs, dtype=complex)
    if cs.ndim != 1 or cs.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if cs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    n = cs.size - 1
    zeta = sorted(np.abs(dense_eig.poly_roots(cs)), reverse=True)
    alpha = tropical_roots(max_times_relative(cs)).exp().flat()
    records = []
    zp = 1.0
    lap = 0.0
    for k in range(1, n + 1):
        zp = zp * zeta[k - 1]
        lap = lap + (log(alpha[k - 1]) if alpha[k - 1] > 0 else -inf)
        ap = exp(lap) if lap > -inf else 0.0
        lower_factor = 1.0 / comb(n, k)
        upper_const = min(polya_constant(k), polya_constant(n - k))
        records.append(
            HopRecord(
                k=k,
                root_prefix=float(zp),
                trop_prefix=float(ap),
                lower_factor=lower_factor,
                upper_constant=upper_const,
                upper_constant_weaker=float(np.sqrt(np.e * (k + 1))),
                upper_constant_hadamard=float(k + 1),
                lower_holds=_rel_le(lower_factor * ap, zp, rel_tol),
                upper_holds=_rel_le(zp, upper_const * ap, rel_tol),
            )
        )
    return HopReport(degree=n, records=records, roots=tuple(zeta),
                     tropical=tuple(alpha))


@dataclass
class CompanionRecord:
    k: int
    ratio: Optional[float]       # |z_1...z_k| / a_1...a_k
    exact_constant: float        # compound radius of the companion pattern
    norm_constant: int           # min(k+1, n-k+1)
    polya_constant: float        # min(f(k), f(n-k))
    ratio_within_exact: bool
    ratio_within_norm: bool
    ratio_within_polya: bool
    exact_within_norm: bool


@dataclass
class CompanionReport:
    degree: int
    records: list

    @property
    def all_hold(self):
        return all(
            r.ratio_within_exact and r.ratio_within_norm
            and r.ratio_within_polya and r.exact_within_norm
            for r in self.records
        )


def companion_comparison(coeffs, rel_tol=REL_TOL):
    """Companion-matrix bound constants against the polynomial-root ones.

    Builds the companion matrix of the (monic-normalized) polynomial and
    tabulates, per k: the actual root-product ratio, the exact compound
    radius of the companion pattern, the norm bound min(k+1, n-k+1), and
    the symmetric polynomial constant min(f(k), f(n-k)).
    """
    cs = np.asarray(coeffs, dtype=complex)
    if cs.ndim != 1 or cs.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if cs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    n = cs.size - 1
    A = dense_eig.companion_matrix(cs)
    zeta = sorted(np.abs(dense_eig.poly_roots(cs)), reverse=True)
    alpha = tropical_roots(max_times_relative(cs)).exp().flat()
    records = []
    zp = 1.0
    lap = 0.0
    for k in range(1, n + 1):
        zp = zp * zeta[k - 1]
        lap = lap + (log(alpha[k - 1]) if alpha[k - 1] > 0 else -inf)
        ap = exp(lap) if lap > -inf else 0.0
        ratio = zp / ap if ap > 0 else None
        exact = upper_constant(A, k)
        norm_bound = min(k + 1, n - k + 1)
        polya = min(polya_constant(k), polya_constant(n - k))
        records.append(
            CompanionRecord(
                k=k,
                ratio=ratio,
                exact_constant=exact,
                norm_constant=norm_bound,
                polya_constant=polya,
                ratio_within_exact=_rel_le(zp, exact * ap, rel_tol),
                ratio_within_norm=_rel_le(zp, norm_bound * ap, rel_tol),
                ratio_within_polya=_rel_le(zp, polya * ap, rel_tol),
                exact_within_norm=exact <= norm_bound * (1 + rel_tol),
            )
        )
    return CompanionReport(degree=n, records=records)


@dataclass(frozen=True)
class ChainCheck:
    """The three separate links of the upper-bound proof chain."""

    k: int
    eig_prefix: float
    rho_hadamard: float
    constant: float
    rho_trop_compound: float
    trop_prefix: float
    link1_holds: bool  # eig_prefix <= rho(perm-compound o trop-compound)
    link2_holds: bool  # rho(hadamard) <= U_k * rho_T(trop-compound)
    link3_holds: bool  # U_k * rho_T <= U_k * trop_prefix

    @property
    def verdict(self):
        return self.link1_holds and self.link2_holds and self.link3_holds


def proof_chain_check(A, k, rel_tol=REL_TOL):
    """Check each inequality of the upper-bound derivation separately."""
    A = as_complex_matrix(A)
    absA = np.abs(A)
    perm_comp = permanental_compound(pattern(A), k)
    trop_comp = trop_spectra.tropical_exterior_power(absA, k)
    rho_had = spectral_radius(hadamard(perm_comp, trop_comp))
    U = upper_constant(A, k)
    rho_trop = max_cycle_mean(trop_comp)
    eig = float(dense_eig.eigenvalues(A).prefix_moduli[k - 1])
    trop_prefix = trop_spectra.tropical_eigenvalues(absA).prefix_products()[k - 1]
    return ChainCheck(
        k=k,
        eig_prefix=eig,
        rho_hadamard=rho_had,
        constant=U,
        rho_trop_compound=rho_trop,
        trop_prefix=trop_prefix,
        link1_holds=_rel_le(eig, rho_had, rel_tol),
        link2_holds=_rel_le(rho_had, U * rho_trop, rel_tol),
        link3_holds=_rel_le(U * rho_trop, U * trop_prefix, rel_tol),
    )
