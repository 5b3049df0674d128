"""Combinatorial solvers behind tropical spectra.

Max-weight assignment (log-domain Hungarian with potentials), maximal
cycle mean (Karp's algorithm per strongly connected component), and the
decomposition of integer circulation matrices into partial permutation
matrices (pad to constant line sums, peel perfect matchings, subtract the
padding).

Weights live in the log domain: ``-inf`` marks a forbidden edge.
"""

from dataclasses import dataclass
from math import inf

import numpy as np

NEG_INF = -inf


@dataclass(frozen=True)
class PartialPermutation:
    """Bijection between two index subsets, stored as sorted (src, dst) pairs."""

    pairs: tuple

    def __post_init__(self):
        srcs = [i for i, _ in self.pairs]
        dsts = [j for _, j in self.pairs]
        if sorted(set(srcs)) != srcs:
            raise ValueError("sources must be strictly increasing")
        if len(set(dsts)) != len(dsts):
            raise ValueError("mapping must be injective")

    @property
    def support(self):
        return tuple(i for i, _ in self.pairs)

    @property
    def image(self):
        return tuple(sorted(j for _, j in self.pairs))

    @property
    def is_principal(self):
        """True when support equals image (cycle-structured submatrix)."""
        return self.support == self.image

    def __len__(self):
        return len(self.pairs)

    def as_matrix(self, n):
        """Dense n x n 0/1 matrix with ones at the mapped positions."""
        out = np.zeros((n, n), dtype=int)
        for i, j in self.pairs:
            out[i, j] = 1
        return out

    def as_dict(self):
        return dict(self.pairs)


def _as_weight_matrix(W):
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {W.shape}")
    if np.isnan(W).any() or (W == inf).any():
        raise ValueError("weights must be finite or -inf")
    return W


def assignment_value(W):
    """Optimal value only; see optimal_assignment."""
    value, _ = _solve_assignment(_as_weight_matrix(W))
    return value


def _solve_assignment(W):
    """Max-weight perfect matching via shortest augmenting paths.

    Returns ``(value, col_of_row)``; ``(-inf, None)`` when every full
    permutation crosses a forbidden entry.  Dual potentials are kept on the
    negated (min-cost) matrix; forbidden edges are +inf costs and simply
    never become reachable.
    """
    n = W.shape[0]
    if n == 0:
        return 0.0, []
    cost = -W  # minimize; forbidden edges are +inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    matched_row = [0] * (n + 1)  # 1-based: row matched to column j, 0 = free
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        matched_row[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = matched_row[j0]
            delta = inf
            j1 = -1
            row = cost[i0 - 1]
            ui0 = u[i0]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            if delta == inf:
                return NEG_INF, None
            for j in range(n + 1):
                if used[j]:
                    u[matched_row[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if matched_row[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            matched_row[j0] = matched_row[j1]
            j0 = j1
    col_of_row = [0] * n
    for j in range(1, n + 1):
        col_of_row[matched_row[j] - 1] = j - 1
    value = float(sum(W[i, col_of_row[i]] for i in range(n)))
    return value, col_of_row


def optimal_assignment(W, tie_tol=1e-9):
    """Max-weight full assignment with a deterministic witness.

    Parameters
    ----------
    W : array_like
        Square matrix of log-domain weights; ``-inf`` forbids an edge.
    tie_tol : float
        Relative tolerance under which alternative optima count as ties
        when selecting the witness.

    Returns
    -------
    (value, perm)
        ``value`` is the maximum of ``sum_i W[i, sigma(i)]`` over full
        permutations; ``perm`` is the lexicographically smallest optimal
        permutation as a PartialPermutation over all rows.  ``(-inf, None)``
        when no feasible permutation exists.
    """
    W = _as_weight_matrix(W)
    n = W.shape[0]
    value, matching = _solve_assignment(W)
    if matching is None:
        return NEG_INF, None
    tol = tie_tol * max(1.0, abs(value))
    # Fix rows one by one to the smallest column that still completes to an
    # optimal assignment; each feasibility probe is one solve on the rest.
    cols_left = list(range(n))
    chosen = []
    prefix = 0.0
    for i in range(n):
        fixed = None
        for idx, j in enumerate(cols_left):
            if W[i, j] == NEG_INF:
                continue
            rest_cols = cols_left[:idx] + cols_left[idx + 1:]
            rest, _ = _solve_assignment(W[np.ix_(range(i + 1, n), rest_cols)])
            if rest == NEG_INF:
                continue
            if prefix + W[i, j] + rest >= value - tol:
                fixed = j
                break
        if fixed is None:
            # Float pathologies only; fall back to the solver's witness.
            chosen = [(i, matching[i]) for i in range(n)]
            return value, PartialPermutation(tuple(chosen))
        chosen.append((i, fixed))
        prefix += W[i, fixed]
        cols_left.remove(fixed)
    return value, PartialPermutation(tuple(chosen))


def _strongly_connected_components(n, adj):
    """Kosaraju's algorithm; components as lists of vertex indices."""
    order = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        stack = [(start, iter(adj[start]))]
        seen[start] = True
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    radj = [[] for _ in range(n)]
    for i in range(n):
        for j in adj[i]:
            radj[j].append(i)
    comp = [-1] * n
    ncomp = 0
    for start in reversed(order):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = ncomp
        while stack:
            node = stack.pop()
            for nxt in radj[node]:
                if comp[nxt] == -1:
                    comp[nxt] = ncomp
                    stack.append(nxt)
        ncomp += 1
    components = [[] for _ in range(ncomp)]
    for vertex, c in enumerate(comp):
        components[c].append(vertex)
    return components


def max_cycle_mean(M):
    """Maximal geometric-mean cycle weight of a nonnegative matrix.

    Karp's algorithm on log weights, run per strongly connected component
    so that every walk in the recursion stays inside a component.  Returns
    0.0 when the digraph of nonzero entries is acyclic.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    if (M < 0).any():
        raise ValueError("matrix must be nonnegative")
    n = M.shape[0]
    if n == 0:
        return 0.0
    with np.errstate(divide="ignore"):
        L = np.log(M)
    adj = [[j for j in range(n) if M[i, j] > 0] for i in range(n)]
    best = NEG_INF
    for component in _strongly_connected_components(n, adj):
        m = len(component)
        if m == 1:
            vtx = component[0]
            if M[vtx, vtx] > 0:
                best = max(best, L[vtx, vtx])
            continue
        index = {vtx: t for t, vtx in enumerate(component)}
        edges = [
            (index[i], index[j], L[i, j])
            for i in component
            for j in adj[i]
            if j in index
        ]
        # D[s][t]: best weight of an s-edge walk from component[0] to t.
        D = [[NEG_INF] * m for _ in range(m + 1)]
        D[0][0] = 0.0
        for step in range(1, m + 1):
            prev = D[step - 1]
            cur = D[step]
            for a, b, w in edges:
                if prev[a] > NEG_INF and prev[a] + w > cur[b]:
                    cur[b] = prev[a] + w
        for t in range(m):
            if D[m][t] == NEG_INF:
                continue
            ratio = min(
                (D[m][t] - D[k][t]) / (m - k)
                for k in range(m)
                if D[k][t] > NEG_INF
            )
            best = max(best, ratio)
    return float(np.exp(best)) if best > NEG_INF else 0.0


def validate_circulation(B):
    """Check circulation invariants; returns the weight (max line sum).

    Raises ValueError naming the first index whose row and column sums
    differ, or on negative / non-integer entries.
    """
    B = np.asarray(B)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"circulation matrix must be square, got shape {B.shape}")
    if not np.issubdtype(B.dtype, np.integer):
        if not np.all(B == np.round(B)):
            raise ValueError("circulation matrix entries must be integers")
        B = B.astype(np.int64)
    if (B < 0).any():
        raise ValueError("circulation matrix entries must be nonnegative")
    row_sums = B.sum(axis=1)
    col_sums = B.sum(axis=0)
    for i in range(B.shape[0]):
        if row_sums[i] != col_sums[i]:
            raise ValueError(
                f"not a circulation: row sum {row_sums[i]} != column sum "
                f"{col_sums[i]} at index {i}"
            )
    return int(row_sums.max(initial=0))


def _peel_matching(avail_row, avail_pad, n):
    """Perfect matching on usable entries, deterministic: rows in increasing
    order, augmenting paths try columns in increasing order."""

    def usable(i, j):
        if avail_row[i][j] > 0:
            return True
        return i == j and avail_pad[i] > 0

    match_col = [-1] * n  # column -> row

    def try_row(i, visited):
        for j in range(n):
            if usable(i, j) and not visited[j]:
                visited[j] = True
                if match_col[j] == -1 or try_row(match_col[j], visited):
                    match_col[j] = i
                    return True
        return False

    for i in range(n):
        if not try_row(i, [False] * n):
            raise RuntimeError("no perfect matching; circulation invariant broken")
    col_of_row = [0] * n
    for j, i in enumerate(match_col):
        col_of_row[i] = j
    return col_of_row


def decompose_circulation(B):
    """Write an integer circulation as a sum of partial permutation matrices.

    Pads the matrix with a diagonal to reach constant line sums equal to
    the weight, peels one perfect matching per unit of weight (smallest
    free row first), and attributes diagonal matches to the padding first.
    Zero parts (matchings fully absorbed by the padding) are dropped; the
    part count is therefore at most the weight.

    Returns
    -------
    list of PartialPermutation
        Entrywise sum of the parts reconstructs the input exactly.
    """
    weight = validate_circulation(B)
    B = np.asarray(B).astype(np.int64)
    n = B.shape[0]
    if weight == 0:
        return []
    work = [list(map(int, row)) for row in B]
    pad = [weight - int(s) for s in B.sum(axis=1)]
    parts = []
    for _ in range(weight):
        col_of_row = _peel_matching(work, pad, n)
        pairs = []
        for i, j in enumerate(col_of_row):
            if i == j and pad[i] > 0:
                pad[i] -= 1
            else:
                work[i][j] -= 1
                pairs.append((i, j))
        if pairs:
            parts.append(PartialPermutation(tuple(pairs)))
    return parts
