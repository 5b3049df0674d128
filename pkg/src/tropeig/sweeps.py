"""Randomized verification sweeps, shared by the CLI and the test suite.

Every sweep draws each instance from its own generator seeded by
(seed, instance index), so instances are reproducible individually and
the sweeps could be fanned out across workers without changing results.
A sweep returns a SweepResult with pass/fail counts, the worst observed
ratio where that makes sense, and a capped list of failure descriptions.
"""

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np

from . import bounds, dense_eig, trop_spectra
from .assignment import decompose_circulation, max_cycle_mean
from .compounds import pattern, powered_radius_root, spectral_radius

_MAX_FAILURES_KEPT = 20


@dataclass
class SweepResult:
    suite: str
    total: int
    passed: int
    seed: int
    worst: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def failed(self):
        return self.total - self.passed

    @property
    def ok(self):
        return self.failed == 0

    def summary(self):
        lines = [
            f"suite {self.suite}: {self.passed}/{self.total} passed "
            f"(seed {self.seed}, worst ratio {self.worst:.12g})"
        ]
        for failure in self.failures:
            lines.append(f"  FAIL {failure}")
        if self.failed > len(self.failures):
            lines.append(f"  ... and {self.failed - len(self.failures)} more")
        return "\n".join(lines)


def instance_rng(seed, idx):
    return np.random.default_rng([int(seed), int(idx)])


# ---------------------------------------------------------------------------
# instance generators

def random_complex_matrix(rng, n, density=1.0, log_range=(-4.0, 4.0)):
    """Entry moduli log-uniform over 10^log_range, phases uniform."""
    moduli = 10.0 ** rng.uniform(*log_range, size=(n, n))
    phases = np.exp(2j * np.pi * rng.random((n, n)))
    mask = rng.random((n, n)) < density
    return moduli * phases * mask


def random_nonneg_matrix(rng, n, density=1.0, log_range=(-2.0, 2.0)):
    moduli = 10.0 ** rng.uniform(*log_range, size=(n, n))
    mask = rng.random((n, n)) < density
    return moduli * mask


def random_positive_matrix(rng, n, log_range=(-2.0, 2.0)):
    return 10.0 ** rng.uniform(*log_range, size=(n, n))


def random_monomial_matrix(rng, n, log_range=(-3.0, 3.0)):
    """Diagonal (nonzero moduli, random phases) times a permutation."""
    perm = rng.permutation(n)
    moduli = 10.0 ** rng.uniform(*log_range, size=n)
    phases = np.exp(2j * np.pi * rng.random(n))
    A = np.zeros((n, n), dtype=complex)
    A[np.arange(n), perm] = moduli * phases
    return A


def random_circulation(rng, n, max_weight=10):
    """Sum of unit cycle matrices: always a valid integer circulation."""
    B = np.zeros((n, n), dtype=np.int64)
    target = int(rng.integers(0, max_weight + 1))
    for _ in range(target):
        length = int(rng.integers(1, n + 1))
        vertices = rng.choice(n, size=length, replace=False)
        for a, b in zip(vertices, np.roll(vertices, -1)):
            B[a, b] += 1
    return B


def random_polynomial(rng, degree, sparse=False, log_range=(-3.0, 3.0)):
    """Random complex coefficients; sparse mode zeroes a random subset
    (never the leading coefficient, sometimes the constant term)."""
    moduli = 10.0 ** rng.uniform(*log_range, size=degree + 1)
    phases = np.exp(2j * np.pi * rng.random(degree + 1))
    cs = moduli * phases
    if sparse:
        keep = rng.random(degree + 1) < 0.6
        keep[degree] = True
        if not keep[:degree].any():
            keep[int(rng.integers(0, degree))] = True
        cs = np.where(keep, cs, 0.0)
    return cs


def random_dominant_matrix(rng, n, tie=False):
    """Diagonally dominant family on which the lower-bound hypotheses
    verifiably hold (or, with tie=True, verifiably fail by symmetry).

    Consecutive diagonal moduli are separated by a factor beating every
    hypothesis threshold, and off-diagonal noise is far below the
    smallest diagonal entry.
    """
    margin = 4 * max(
        max((comb(n, k) - 1) * factorial(k), 1) for k in range(1, n + 1)
    )
    margin = max(margin, 4 * (comb(n, n // 2 or 1) * factorial(n // 2 or 1)))
    base = 10.0 ** rng.uniform(-1.0, 1.0)
    diag = base * (float(margin) ** np.arange(n - 1, -1, -1))
    if tie:
        diag[1] = diag[0]
    phases = np.exp(2j * np.pi * rng.random(n))
    A = np.diag(diag * phases).astype(complex)
    noise = diag.min() * 1e-4
    off = noise * rng.random((n, n)) * np.exp(2j * np.pi * rng.random((n, n)))
    off[np.arange(n), np.arange(n)] = 0.0
    return A + off


# ---------------------------------------------------------------------------
# suites

def sweep_upper(instances=1000, nmax=7, seed=1, rel_tol=1e-9,
                densities=(0.3, 0.7, 1.0)):
    """Upper-bound inequality on random complex matrices, every k."""
    failures = []
    passed = 0
    worst = 0.0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        n = int(rng.integers(2, nmax + 1))
        density = densities[idx % len(densities)]
        A = random_complex_matrix(rng, n, density)
        report = bounds.upper_bound_report(A, rel_tol=rel_tol)
        ok = True
        for rec in report.records:
            if rec.ratio is not None:
                worst = max(worst, rec.ratio)
            if not rec.upper_holds:
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(
                        f"instance {idx} (n={n}, density={density}): k={rec.k} "
                        f"ratio={rec.ratio}"
                    )
        passed += ok
    return SweepResult("upper", instances, passed, seed, worst, failures)


def sweep_monomial(instances=200, nmax=8, seed=1, rel_tol=1e-9):
    """Tightness on monomial matrices: every ratio within rel_tol of 1."""
    failures = []
    passed = 0
    worst = 0.0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        n = int(rng.integers(2, nmax + 1))
        A = random_monomial_matrix(rng, n)
        report = bounds.upper_bound_report(A, rel_tol=rel_tol)
        ok = True
        for rec in report.records:
            ratio = rec.ratio
            if ratio is None or abs(ratio - 1.0) > rel_tol:
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(f"instance {idx} (n={n}): k={rec.k} ratio={ratio}")
            else:
                worst = max(worst, abs(ratio - 1.0))
        passed += ok
    return SweepResult("monomial", instances, passed, seed, worst, failures)


def sweep_lower(instances=200, seed=1, rel_tol=1e-9):
    """Conditional lower bounds on the dominant family; every third
    instance is a deliberate tie that must report inapplicability."""
    failures = []
    passed = 0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        n = int(rng.integers(2, 6))
        tie = idx % 3 == 2
        A = random_dominant_matrix(rng, n, tie=tie)
        ok = True
        if tie:
            result = bounds.lower_bound(A, 1)
            if result.applicable or "not unique" not in result.diagnostics:
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(
                        f"instance {idx} (n={n}): tie not detected: "
                        f"{result.diagnostics}"
                    )
        else:
            espec = dense_eig.eigenvalues(A)
            tspec = trop_spectra.tropical_eigenvalues(np.abs(A))
            prefix = tspec.prefix_products()
            applicable_seen = False
            for k in range(1, n + 1):
                result = bounds.lower_bound(A, k)
                if not result.applicable:
                    continue
                applicable_seen = True
                lhs = result.value * prefix[k - 1]
                rhs = float(espec.prefix_moduli[k - 1])
                if lhs > rhs * (1 + rel_tol) + rel_tol * lhs:
                    ok = False
                    if len(failures) < _MAX_FAILURES_KEPT:
                        failures.append(
                            f"instance {idx} (n={n}): k={k} lower bound "
                            f"{lhs} > {rhs}"
                        )
            if not applicable_seen:
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(
                        f"instance {idx} (n={n}): no applicable k on the "
                        "dominant family"
                    )
        passed += ok
    return SweepResult("lower", instances, passed, seed, 0.0, failures)


def sweep_hop(instances=1000, seed=1, rel_tol=1e-9, degrees=(2, 15)):
    """Polynomial-root bounds, dense and sparse coefficient supports."""
    failures = []
    passed = 0
    worst = 0.0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        degree = int(rng.integers(degrees[0], degrees[1] + 1))
        cs = random_polynomial(rng, degree, sparse=idx % 2 == 1)
        report = bounds.hop_check(cs, rel_tol=rel_tol)
        ok = True
        for rec in report.records:
            if rec.trop_prefix > 0:
                worst = max(worst, rec.root_prefix /
                            (rec.upper_constant * rec.trop_prefix))
            if not (rec.lower_holds and rec.upper_holds):
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(
                        f"instance {idx} (degree={degree}): k={rec.k} "
                        f"lower={rec.lower_holds} upper={rec.upper_holds}"
                    )
        passed += ok
    return SweepResult("hop", instances, passed, seed, worst, failures)


def sweep_proof_chain(instances=200, nmax=5, seed=1, rel_tol=1e-9):
    """The three separate links of the upper-bound derivation."""
    failures = []
    passed = 0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        n = int(rng.integers(2, nmax + 1))
        density = (0.5, 1.0)[idx % 2]
        A = random_complex_matrix(rng, n, density, log_range=(-2, 2))
        ok = True
        for k in range(1, n + 1):
            check = bounds.proof_chain_check(A, k, rel_tol=rel_tol)
            if not check.verdict:
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(
                        f"instance {idx} (n={n}): k={k} links="
                        f"{check.link1_holds, check.link2_holds, check.link3_holds}"
                    )
        passed += ok
    return SweepResult("proof-chain", instances, passed, seed, 0.0, failures)


def sweep_friedland(instances=200, nmax=6, seed=1, rel_tol=1e-9,
                    exponents=(1, 2, 4, 8, 16, 32, 64)):
    """Sandwich rho_max <= rho(M^[r])^(1/r) <= rho(pat)^(1/r) rho_max."""
    failures = []
    passed = 0
    worst = 0.0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        n = int(rng.integers(2, nmax + 1))
        M = random_positive_matrix(rng, n)
        rho_max = max_cycle_mean(M)
        rho_pat = spectral_radius(pattern(M))
        scale = M.max()
        ok = True
        for r in exponents:
            value = powered_radius_root(M, r)
            if value is None:
                value = scale * spectral_radius((M / scale) ** r) ** (1.0 / r)
            hi = rho_pat ** (1.0 / r) * rho_max
            lo_ok = rho_max <= value * (1 + rel_tol) + rel_tol * rho_max
            hi_ok = value <= hi * (1 + rel_tol) + rel_tol * value
            if rho_max > 0:
                worst = max(worst, value / rho_max)
            if not (lo_ok and hi_ok):
                ok = False
                if len(failures) < _MAX_FAILURES_KEPT:
                    failures.append(
                        f"instance {idx} (n={n}): r={r} "
                        f"{rho_max} <= {value} <= {hi} fails"
                    )
        passed += ok
    return SweepResult("friedland", instances, passed, seed, worst, failures)


def sweep_circulation(instances=500, nmax=8, seed=1, max_weight=10):
    """Decomposition of random circulations reconstructs exactly."""
    failures = []
    passed = 0
    worst = 0.0
    for idx in range(instances):
        rng = instance_rng(seed, idx)
        n = int(rng.integers(1, nmax + 1))
        B = random_circulation(rng, n, max_weight=max_weight)
        weight = int(B.sum(axis=1).max(initial=0))
        parts = decompose_circulation(B)
        total = np.zeros_like(B)
        ok = len(parts) <= max(weight, 0)
        for part in parts:
            if not part.is_principal or len(part) == 0:
                ok = False
            total += part.as_matrix(n)
        if not np.array_equal(total, B):
            ok = False
        if weight:
            worst = max(worst, len(parts) / weight)
        if not ok and len(failures) < _MAX_FAILURES_KEPT:
            failures.append(f"instance {idx} (n={n}, weight={weight})")
        passed += ok
    return SweepResult("circulation", instances, passed, seed, worst, failures)


SUITES = {
    "upper": sweep_upper,
    "monomial": sweep_monomial,
    "lower": sweep_lower,
    "hop": sweep_hop,
    "proof-chain": sweep_proof_chain,
    "friedland": sweep_friedland,
    "circulation": sweep_circulation,
}


def run_suite(name, instances=None, nmax=None, seed=1, rel_tol=1e-9):
    """Dispatch a named suite with the subset of options it supports."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    kwargs = {"seed": seed}
    if instances is not None:
        kwargs["instances"] = instances
    if nmax is not None and name in ("upper", "monomial", "proof-chain",
                                     "friedland", "circulation"):
        kwargs["nmax"] = nmax
    if name not in ("circulation",):
        kwargs["rel_tol"] = rel_tol
    return fn(**kwargs)
