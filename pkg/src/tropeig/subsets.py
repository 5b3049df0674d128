"""Lexicographic k-subset enumeration shared by all compound-matrix code.

Row/column index ``r`` of every compound (determinantal, permanental,
tropical) refers to the subset ``ksubsets(n, k)[r]``.  Keeping a single
enumeration order makes entrywise identities between the different
compounds hold index-by-index.
"""

from functools import lru_cache
from itertools import combinations
from math import comb
import os
import warnings

DEFAULT_SIZE_CAP = 3000


@lru_cache(maxsize=128)
def ksubsets(n, k):
    """All k-element subsets of range(n) in lexicographic order, as tuples."""
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, {n}], got {k}")
    return tuple(combinations(range(n), k))


def subset_rank(n, subset):
    """Position of ``subset`` (a sorted tuple) in ksubsets(n, len(subset))."""
    k = len(subset)
    rank = 0
    prev = -1
    for pos, element in enumerate(subset):
        for skipped in range(prev + 1, element):
            rank += comb(n - skipped - 1, k - pos - 1)
        prev = element
    return rank


def size_cap():
    """Active compound-size cap (rows); TROPSPEC_SIZE_CAP overrides."""
    raw = os.environ.get("TROPSPEC_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    return int(raw)


def warn_if_over_cap(n, k, what):
    """Emit a diagnostic (not a failure) when C(n,k) exceeds the size cap."""
    rows = comb(n, k)
    cap = size_cap()
    if rows > cap:
        warnings.warn(
            f"{what}: C({n},{k}) = {rows} rows exceeds the size cap {cap}; "
            "proceeding anyway (set TROPSPEC_SIZE_CAP to change the cap)",
            stacklevel=3,
        )
    return rows
