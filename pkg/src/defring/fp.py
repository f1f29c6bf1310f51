"""Exact dense linear algebra over the prime field F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  The
modulus p is threaded through every call; there is no global field state.
All routines are deterministic: pivoting always picks the leftmost nonzero
column and the topmost row, so downstream basis choices are reproducible.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "is_prime",
    "fpmat",
    "inv_mod",
    "matmul",
    "rref",
    "rank",
    "kernel_basis",
    "solve_affine",
    "split_complement",
    "column_span_contains",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def fpmat(data, p: int) -> np.ndarray:
    """Coerce nested-list/array data to a reduced F_p matrix."""
    a = np.asarray(data, dtype=np.int64)
    return np.mod(a, p)


def inv_mod(x: int, p: int) -> int:
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError("inverse of 0 in F_%d" % p)
    return pow(x, p - 2, p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.mod(a @ b, p)


def rref(m: np.ndarray, p: int):
    """Reduced row-echelon form.

    Returns (reduced, pivot_columns, rank).  Zero-sized matrices are fine.
    Elimination is one vectorized outer-product update per pivot, touching
    only the rows with a nonzero entry in the pivot column.
    """
    a = np.mod(np.array(m, dtype=np.int64, copy=True), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        if a[r, c] != 1:
            a[r] = a[r] * inv_mod(a[r, c], p) % p
        col = a[:, c]
        hit = np.nonzero(col)[0]
        hit = hit[hit != r]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots, r


def rank(m: np.ndarray, p: int) -> int:
    return rref(m, p)[2]


def kernel_basis(a: np.ndarray, p: int):
    """Basis of ker(a), as a list of 1-d vectors.

    Free variables are set to 1 one at a time, in increasing column order;
    the result is the canonical RREF parametrization of the nullspace.
    """
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    red, pivots, rk = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = (-red[r, fc]) % p
        basis.append(v)
    return basis


def solve_affine(a: np.ndarray, b: np.ndarray, p: int):
    """Solve a x = b over F_p.

    Returns (particular, nullspace_basis) or None when inconsistent.
    Raises ValueError on a row-count mismatch (usage error, not data).
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1), p)
    if a.shape[0] != b.shape[0]:
        raise ValueError(
            "solve_affine: a has %d rows but b has %d entries" % (a.shape[0], b.shape[0])
        )
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    red, pivots, rk = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = red[r, cols]
    return x, kernel_basis(a, p)


def greedy_pivot_extend(base_cols: np.ndarray, candidate_cols: np.ndarray, p: int):
    """Columns of `candidate_cols` that greedily extend span(base_cols).

    Equivalent to adding candidates left to right whenever the rank grows;
    computed as the pivot columns of one row reduction of [base | candidates].
    Returns (chosen candidate indices, whether base itself was independent).
    """
    k = base_cols.shape[1]
    stacked = np.concatenate([base_cols, candidate_cols], axis=1)
    _, pivots, _ = rref(stacked, p)
    base_ok = pivots[:k] == list(range(k)) if k else True
    chosen = [c - k for c in pivots if c >= k]
    return chosen, base_ok


def split_complement(ambient_dim: int, subspace, priority, p: int):
    """Greedily extend `subspace` to a basis of F_p^ambient_dim.

    Candidate columns are taken from `priority` in order; a candidate is kept
    exactly when it enlarges the span.  Returns the kept columns.  Raises
    ValueError if the subspace columns are dependent.
    """
    cols = [np.mod(np.asarray(v, dtype=np.int64).reshape(-1), p) for v in subspace]
    for v in cols:
        if v.shape[0] != ambient_dim:
            raise ValueError("split_complement: subspace vector of wrong length")
    base = (np.stack(cols, axis=1) if cols
            else np.zeros((ambient_dim, 0), dtype=np.int64))
    cand = [np.mod(np.asarray(v, dtype=np.int64).reshape(-1), p) for v in priority]
    cand_m = (np.stack(cand, axis=1) if cand
              else np.zeros((ambient_dim, 0), dtype=np.int64))
    chosen_idx, base_ok = greedy_pivot_extend(base, cand_m, p)
    if not base_ok:
        raise ValueError("split_complement: subspace columns are dependent")
    if len(cols) + len(chosen_idx) != ambient_dim:
        raise ValueError("split_complement: priority columns do not complete a basis")
    return [cand_m[:, i] for i in chosen_idx]


def column_span_contains(basis_cols, vectors, p: int) -> bool:
    """True when every vector in `vectors` lies in the span of `basis_cols`.

    Both arguments are matrices whose *rows* are vectors.
    """
    basis_cols = np.asarray(basis_cols, dtype=np.int64)
    vectors = np.asarray(vectors, dtype=np.int64)
    if vectors.size == 0:
        return True
    if basis_cols.size == 0:
        return not np.mod(vectors, p).any()
    r0 = rank(basis_cols, p)
    stacked = np.concatenate([basis_cols, vectors.reshape(-1, basis_cols.shape[1])])
    return rank(stacked, p) == r0
