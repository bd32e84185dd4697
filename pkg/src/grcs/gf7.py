"""Gaussian elimination over the field with seven elements."""

import numpy as np

P = 7
#: multiplicative inverses mod 7 (index 0 unused)
INVERSES = np.array([0, 1, 4, 5, 2, 3, 6], dtype=np.int16)


class SingularMatrixError(ValueError):
    """Raised when a matrix over GF(7) has no inverse."""


def _eliminate(a: np.ndarray, ncols: int):
    """Reduce ``a`` in place to reduced row echelon form on its first ``ncols`` columns.

    ``a`` must hold residues in an integer dtype of at least 16 bits.  Returns
    the list of pivot columns.
    """
    rows = a.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        row = a[r]
        row *= INVERSES[row[c]]
        row %= P
        factors = a[:, c].copy()
        factors[r] = 0
        touched = np.flatnonzero(factors)
        if touched.size:
            # columns left of c are already zero in the pivot row
            sub = a[touched, c:]
            sub -= factors[touched, None] * row[None, c:]
            sub %= P
            a[touched, c:] = sub
        pivots.append(c)
        r += 1
    return pivots


def rank(m) -> int:
    a = (np.array(m, dtype=np.int64) % P).astype(np.int16)
    return len(_eliminate(a, a.shape[1]))


def solve(m, b) -> np.ndarray:
    """Solve ``m @ x = b`` (mod 7) for square invertible ``m``; ``b`` may be a vector or matrix."""
    m = np.asarray(m, dtype=np.int64) % P
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    b = np.asarray(b, dtype=np.int64) % P
    vec = b.ndim == 1
    aug = np.concatenate([m, b.reshape(n, -1)], axis=1).astype(np.int16)
    if len(_eliminate(aug, n)) < n:
        raise SingularMatrixError("matrix is singular over GF(7)")
    x = aug[:, n:].astype(np.int64)
    return x[:, 0] if vec else x


def inverse(m) -> np.ndarray:
    n = np.shape(m)[0]
    return solve(m, np.eye(n, dtype=np.int64))
