"""
Exact linear assignment with a deterministic tie break.

:func:`scipy.optimize.linear_sum_assignment` finds one optimal permutation.
Dual potentials recovered from it identify every edge that can take part in
an optimal assignment, and the lexicographically smallest perfect matching
on those edges is returned.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment

TIGHT_RTOL = 1e-12


def _potentials(cost, sigma):
    """
    Column potentials v with C[i, j] - C[i, sigma(i)] + v[sigma(i)] >= v[j]
    by Bellman-Ford relaxation, or None if relaxation does not settle
    """
    m = cost.shape[0]
    reduced = cost - cost[np.arange(m), sigma][:, None]
    v = np.zeros(m)
    for _ in range(m + 1):
        relaxed = np.minimum(v, np.min(v[sigma][:, None] + reduced, axis=0))
        if np.array_equal(relaxed, v):
            return v
        v = relaxed
    return None


def _augment(row, target, col_of, row_of, tight, fixed, visited):
    """
    Re-match ``row`` over tight edges so that column ``target`` becomes its
    eventual destination, moving only rows that are not fixed
    """
    for c in np.flatnonzero(tight[row]):
        if c in visited:
            continue
        visited.add(c)
        if c == target:
            col_of[row] = c
            row_of[c] = row
            return True
        r = row_of[c]
        if r in fixed:
            continue
        if _augment(r, target, col_of, row_of, tight, fixed, visited):
            col_of[row] = c
            row_of[c] = row
            return True
    return False


def solve_assignment(cost_matrix):
    """
    Minimum cost permutation of a square cost matrix

    Args:
        cost_matrix: (m, m) finite reals

    Returns:
        integer array ``sigma`` pairing row ``i`` with column ``sigma[i]``;
        among optimal permutations the lexicographically smallest one
    """
    cost = np.asarray(cost_matrix, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1] or cost.shape[0] < 1:
        raise ValueError(
            'Assignment needs a non-empty square cost matrix, got shape '
            '{}'.format(cost.shape))
    if not np.all(np.isfinite(cost)):
        raise ValueError('Assignment cost matrix has non-finite entries')

    m = cost.shape[0]
    _, sigma = linear_sum_assignment(cost)
    if m == 1:
        return sigma

    v = _potentials(cost, sigma)
    if v is None:
        return sigma
    u = cost[np.arange(m), sigma] - v[sigma]
    slack = cost - u[:, None] - v[None, :]
    tight = slack <= TIGHT_RTOL * max(1.0, np.max(np.abs(cost)))
    tight[np.arange(m), sigma] = True

    col_of = sigma.copy()
    row_of = np.empty(m, dtype=int)
    row_of[sigma] = np.arange(m)

    fixed = set()
    for i in range(m):
        for j in np.flatnonzero(tight[i]):
            if j == col_of[i]:
                break
            # give column j to row i and push its current owner onto the
            # column row i leaves behind
            owner = row_of[j]
            if owner in fixed:
                continue
            trial_col, trial_row = col_of.copy(), row_of.copy()
            freed = trial_col[i]
            trial_col[i] = j
            trial_row[j] = i
            if _augment(owner, freed, trial_col, trial_row, tight,
                        fixed | {i}, {j}):
                col_of, row_of = trial_col, trial_row
                break
        fixed.add(i)

    return col_of
