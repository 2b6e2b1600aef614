"""Small dense linear algebra by Gaussian elimination with partial pivoting.

Matrices here are at most a few dozen rows (correlation blocks of
clusters), so plain row operations on numpy arrays are fast enough.
"""
from __future__ import annotations

import numpy as np

from .exceptions import SingularMatrixError

PIVOT_TOL = 1e-12


def lu_factor(a):
    """LU factorization ``P A = L U`` packed into one array.

    Returns ``(lu, perm, sign)`` where ``perm`` is the row permutation and
    ``sign`` its parity. Raises :class:`SingularMatrixError` when a pivot is
    below ``PIVOT_TOL`` in absolute value.
    """
    lu = np.array(a, dtype=float, copy=True)
    n = lu.shape[0]
    if lu.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {lu.shape}")
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < PIVOT_TOL:
            raise SingularMatrixError(f"pivot {lu[p, k]:.3e} in column {k} is below {PIVOT_TOL:g}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def lu_solve(factors, b):
    """Solve ``A x = b`` for one or several right-hand sides (columns of ``b``)."""
    lu, perm, _ = factors
    x = np.array(b, dtype=float)[perm]
    n = lu.shape[0]
    for i in range(n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def inv(a) -> np.ndarray:
    factors = lu_factor(a)
    return lu_solve(factors, np.eye(factors[0].shape[0]))


def slogdet(a) -> tuple[float, float]:
    lu, _, sign = lu_factor(a)
    diag = np.diag(lu)
    sign = sign * float(np.prod(np.sign(diag)))
    return sign, float(np.sum(np.log(np.abs(diag))))


def elimination_pivots(a) -> np.ndarray:
    """Pivots of symmetric elimination without row exchanges (LDL^T diagonal).

    All pivots are positive iff a symmetric matrix is positive definite.
    """
    m = np.array(a, dtype=float, copy=True)
    n = m.shape[0]
    piv = np.empty(n)
    for k in range(n):
        piv[k] = m[k, k]
        if piv[k] <= PIVOT_TOL:
            piv[k + 1:] = np.nan
            return piv
        m[k + 1:, k + 1:] -= np.outer(m[k + 1:, k], m[k, k + 1:]) / piv[k]
    return piv
