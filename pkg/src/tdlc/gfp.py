"""Dense linear algebra over the prime field GF(p) on numpy integer arrays."""

from __future__ import annotations

import numpy as np

__all__ = ["as_matrix", "rref", "rank", "left_kernel", "span_below", "in_span", "solve"]


def as_matrix(rows, ncols: int, p: int) -> np.ndarray:
    """Stack ``rows`` into a (len(rows), ncols) int64 array reduced mod p."""
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), ncols) % p


def _inv(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref(mat: np.ndarray, p: int, reverse: bool = False) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    With ``reverse=True`` pivots are chosen from the last column backwards, so
    every returned row has its pivot at its highest nonzero column.
    """
    m = np.array(mat, dtype=np.int64, copy=True) % p
    nrows, ncols = m.shape
    cols = range(ncols - 1, -1, -1) if reverse else range(ncols)
    pivots: list[int] = []
    r = 0
    for c in cols:
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * _inv(m[r, c], p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(mat: np.ndarray, p: int) -> int:
    return len(rref(mat, p)[1])


def left_kernel(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : x @ mat == 0 mod p}."""
    nrows, ncols = mat.shape
    aug = np.concatenate([np.asarray(mat, dtype=np.int64) % p,
                          np.eye(nrows, dtype=np.int64)], axis=1)
    red, piv = rref(aug, p)
    # rows whose pivot lies in the identity block have a zero left part
    keep = [i for i, c in enumerate(piv) if c >= ncols]
    return red[keep, ncols:] if keep else np.zeros((0, nrows), dtype=np.int64)


def span_below(mat: np.ndarray, p: int, limit: int) -> np.ndarray:
    """Basis of the part of the row space supported in columns [0, limit)."""
    if mat.shape[0] == 0:
        return np.zeros((0, mat.shape[1]), dtype=np.int64)
    red, piv = rref(mat, p, reverse=True)
    keep = [i for i, c in enumerate(piv) if c < limit]
    return red[keep]


def in_span(vec: np.ndarray, mat: np.ndarray, p: int) -> bool:
    if mat.shape[0] == 0:
        return not (np.asarray(vec) % p).any()
    return rank(np.vstack([mat, vec]), p) == rank(mat, p)


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of mat @ x == rhs (free variables zero), or None."""
    nrows, ncols = mat.shape
    aug = np.concatenate([np.asarray(mat, dtype=np.int64) % p,
                          np.asarray(rhs, dtype=np.int64).reshape(nrows, 1) % p], axis=1)
    red, piv = rref(aug, p)
    if piv and piv[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = red[r, ncols]
    return x
