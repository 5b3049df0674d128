"""Formal tropical polynomials, Newton polygons, and tropical roots.

The canonical internal domain is max-plus: a polynomial is a coefficient
vector ``a_0, ..., a_n`` of extended reals (``-inf`` allowed) and its
polynomial function is ``x -> max_k (a_k + k*x)``.  Max-times data
(nonnegative reals, e.g. absolute values of complex coefficients) enters
and leaves through log/exp at the API boundary: additions of logs are
better conditioned than long products of magnitudes.

Convention for a vanishing constant term: when the lowest finite
coefficient index ``k0`` is positive, the polynomial has a root at
``-inf`` (max-times root 0) with multiplicity ``k0``.  This keeps the
total number of roots equal to the degree, which the unique max-plus
factorization and the Vieta relation for concavified coefficients both
require.
"""

from dataclasses import dataclass
from math import inf, log

import numpy as np

NEG_INF = -inf

# Absolute tolerance on log values used to decide whether a coefficient
# lies on its Newton polygon (exact reals would need none).
DEFAULT_SAT_TOL = 1e-9

# Relative tolerance (log domain) under which two root values merge into
# one root of higher multiplicity.
DEFAULT_ROOT_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class TropicalPolynomial:
    """Max-plus polynomial as an immutable coefficient tuple, index 0 first.

    Trailing ``-inf`` coefficients are stripped on construction so that
    ``degree`` is always the highest finite index.
    """

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(float(c) for c in self.coeffs)
        if any(c != c or c == inf for c in cs):  # NaN or +inf
            raise ValueError("coefficients must be finite or -inf")
        while cs and cs[-1] == NEG_INF:
            cs = cs[:-1]
        if not cs:
            raise ValueError("polynomial needs at least one finite coefficient")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lowest_finite_index(self):
        return next(k for k, c in enumerate(self.coeffs) if c > NEG_INF)

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class NewtonPolygon:
    """Upper concave hull of the finite coefficient points of a polynomial.

    ``vertices`` are the hull corners ``(index, value)`` with strictly
    decreasing slopes; collinear interior points are not vertices but do
    count as saturated.  ``concavified[k]`` is the hull value at integer
    index k (``-inf`` below the lowest finite index).  ``saturated`` holds
    the indices whose coefficient lies on the hull.
    """

    vertices: tuple
    concavified: tuple
    saturated: frozenset

    def segments(self):
        """Consecutive vertex pairs, left to right."""
        return list(zip(self.vertices[:-1], self.vertices[1:]))


@dataclass(frozen=True)
class RootMultiset:
    """Roots as ``(value, multiplicity)`` pairs, values strictly decreasing."""

    entries: tuple

    def __post_init__(self):
        for value, mult in self.entries:
            if mult < 1 or mult != int(mult):
                raise ValueError(f"multiplicity must be a positive integer: {mult}")
        values = [v for v, _ in self.entries]
        if any(a <= b for a, b in zip(values, values[1:])):
            raise ValueError("root values must be strictly decreasing")

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.entries)

    def flat(self):
        """Roots repeated by multiplicity, largest first."""
        return [v for v, m in self.entries for _ in range(m)]

    def exp(self):
        """Map log-domain roots to max-times (exp; -inf becomes 0)."""
        return RootMultiset(
            tuple((np.exp(v) if v > NEG_INF else 0.0, m) for v, m in self.entries)
        )

    def log(self):
        """Map max-times roots to log domain (0 becomes -inf)."""
        return RootMultiset(
            tuple((log(v) if v > 0 else NEG_INF, m) for v, m in self.entries)
        )


def root_multiset(pairs, merge_tol=DEFAULT_ROOT_MERGE_TOL):
    """Build a RootMultiset from raw (value, multiplicity) pairs.

    Values closer than ``merge_tol`` (relative, with an absolute floor of
    ``merge_tol`` near zero) are merged into a single root whose value is
    the multiplicity-weighted mean.
    """
    pairs = sorted(((float(v), int(m)) for v, m in pairs), reverse=True)
    merged = []
    for value, mult in pairs:
        if merged:
            prev, pm = merged[-1]
            if prev == NEG_INF or value == NEG_INF:
                close = prev == value
            else:
                close = abs(prev - value) <= merge_tol * max(
                    1.0, abs(prev), abs(value)
                )
            if close:
                if prev == NEG_INF:
                    merged[-1] = (NEG_INF, pm + mult)
                else:
                    merged[-1] = ((prev * pm + value * mult) / (pm + mult), pm + mult)
                continue
        merged.append((value, mult))
    return RootMultiset(tuple(merged))


def newton_polygon(p, sat_tol=DEFAULT_SAT_TOL):
    """Newton polygon of a max-plus polynomial.

    Parameters
    ----------
    p : TropicalPolynomial
    sat_tol : float
        Absolute tolerance on log values for deciding that a coefficient
        lies on the hull.

    Returns
    -------
    NewtonPolygon
        Upper hull vertices, concavified coefficients, saturated indices.
    """
    points = [(k, c) for k, c in enumerate(p.coeffs) if c > NEG_INF]
    hull = []
    for x, y in points:
        # Monotone chain for the upper hull; drop middle points that are on
        # or below the chord (within sat_tol of it counts as on).
        while len(hull) >= 2:
            x0, y0 = hull[-2]
            x1, y1 = hull[-1]
            above = (y1 - y0) * (x - x0) - (y - y0) * (x1 - x0)
            if above > sat_tol * (x - x0):
                break
            hull.pop()
        hull.append((x, y))

    k0 = points[0][0]
    concavified = [NEG_INF] * len(p.coeffs)
    saturated = set()
    vi = 0
    for k in range(k0, p.degree + 1):
        while vi + 1 < len(hull) and hull[vi + 1][0] <= k:
            vi += 1
        if hull[vi][0] == k:
            interp = hull[vi][1]
        else:
            x0, y0 = hull[vi]
            x1, y1 = hull[vi + 1]
            interp = y0 + (y1 - y0) * (k - x0) / (x1 - x0)
        a_k = p.coeffs[k]
        if a_k > NEG_INF and a_k >= interp - sat_tol:
            saturated.add(k)
            concavified[k] = a_k  # exact equality on saturated indices
        else:
            concavified[k] = interp
    return NewtonPolygon(tuple(hull), tuple(concavified), frozenset(saturated))


def tropical_roots(p, merge_tol=DEFAULT_ROOT_MERGE_TOL, sat_tol=DEFAULT_SAT_TOL):
    """Tropical roots of a max-plus polynomial, with multiplicities.

    One root per Newton polygon segment: value is the negated slope,
    multiplicity the segment's horizontal length.  A positive lowest
    finite coefficient index k0 contributes a root ``-inf`` of
    multiplicity k0.

    Returns
    -------
    RootMultiset
        Log-domain roots, nonincreasing; total multiplicity equals degree.
    """
    polygon = newton_polygon(p, sat_tol=sat_tol)
    pairs = []
    for (x0, y0), (x1, y1) in polygon.segments():
        pairs.append(((y0 - y1) / (x1 - x0), x1 - x0))
    k0 = p.lowest_finite_index
    if k0 > 0:
        pairs.append((NEG_INF, k0))
    if not pairs:
        return RootMultiset(())
    return root_multiset(pairs, merge_tol=merge_tol)


def evaluate(p, x):
    """Value of the max-plus polynomial function max_k (a_k + k*x)."""
    x = float(x)
    if x == NEG_INF:
        return p.coeffs[0]
    best = NEG_INF
    for k, c in enumerate(p.coeffs):
        if c > NEG_INF:
            best = max(best, c + k * x)
    return best


def max_times_relative(coeffs):
    """Log-domain tropical relative of a complex polynomial.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficients ``a_0, ..., a_n`` with nonzero leading coefficient.

    Returns
    -------
    TropicalPolynomial
        Coefficients ``log|a_k|`` (``-inf`` where ``a_k = 0``).
    """
    cs = np.asarray(coeffs, dtype=complex)
    if cs.ndim != 1 or cs.size == 0:
        raise ValueError("expected a nonempty coefficient vector")
    if cs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(cs))
    return TropicalPolynomial(tuple(logs))


def concavified_polynomial(p, sat_tol=DEFAULT_SAT_TOL):
    """Polynomial with coefficients replaced by their hull values."""
    return TropicalPolynomial(newton_polygon(p, sat_tol=sat_tol).concavified)


# ---------------------------------------------------------------------------
# JSON coefficient encoding: arrays index-0-first, -inf as the string "-inf",
# complex entries as [re, im] pairs.

def coeffs_to_json(p):
    """JSON-ready list for a max-plus coefficient vector."""
    return ["-inf" if c == NEG_INF else c for c in p.coeffs]


def coeffs_from_json(data):
    """TropicalPolynomial from a JSON array of numbers / "-inf" strings."""
    cs = []
    for entry in data:
        if isinstance(entry, str):
            if entry.strip().lower() in ("-inf", "-infinity"):
                cs.append(NEG_INF)
            else:
                raise ValueError(f"unrecognized coefficient string: {entry!r}")
        elif isinstance(entry, (int, float)):
            cs.append(float(entry))
        else:
            raise ValueError(f"unrecognized coefficient entry: {entry!r}")
    return TropicalPolynomial(tuple(cs))


def complex_coeffs_from_json(data):
    """Complex coefficient vector from JSON numbers / [re, im] pairs."""
    cs = []
    for entry in data:
        if isinstance(entry, (int, float)):
            cs.append(complex(entry))
        elif isinstance(entry, (list, tuple)) and len(entry) == 2:
            cs.append(complex(float(entry[0]), float(entry[1])))
        else:
            raise ValueError(f"unrecognized complex coefficient: {entry!r}")
    return np.asarray(cs, dtype=complex)


def complex_coeffs_to_json(coeffs):
    """JSON-ready list of [re, im] pairs."""
    return [[z.real, z.imag] for z in np.asarray(coeffs, dtype=complex)]
