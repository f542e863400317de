"""Dense exact linear algebra over F_p.

Matrices are numpy int64 arrays with entries in ``[0, p)``.  Elimination
pivots on the first nonzero row of each column, so results (and golden
files built from them) are reproducible.
"""
from __future__ import annotations

import numpy as np


class SingularMatrix(ArithmeticError):
    pass


def as_matrix(rows, p: int, ncols: int | None = None) -> np.ndarray:
    a = np.array(rows, dtype=np.int64)
    if a.size == 0:
        return np.zeros((len(rows) if hasattr(rows, "__len__") else 0, ncols or 0), dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        factors = a[:, c].copy()
        factors[r] = 0
        if factors.any():
            a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def row_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Nonzero rows of the reduced echelon form."""
    if m.size == 0:
        return np.zeros((0, m.shape[1] if m.ndim == 2 else 0), dtype=np.int64)
    r, piv = rref(m, p)
    return r[: len(piv)]


def nullspace(m: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning ``{x : m @ x = 0}``."""
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in piv]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-r[i, f]) % p
    return out


def solve(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """One solution ``x`` of ``m @ x = b``; raises SingularMatrix if none exists."""
    rows, cols = m.shape
    aug = np.concatenate([np.array(m, dtype=np.int64).reshape(rows, cols),
                          np.array(b, dtype=np.int64).reshape(rows, 1)], axis=1) % p
    r, piv = rref(aug, p)
    if cols in piv:
        raise SingularMatrix("inconsistent system")
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, cols]
    return x


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n, k = m.shape
    if n != k:
        raise SingularMatrix(f"non-square matrix {m.shape}")
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    r, piv = rref(np.concatenate([m % p, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is not invertible")
    return r[:, n:]


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def in_row_space(m: np.ndarray, v: np.ndarray, p: int) -> bool:
    if not np.any(v % p):
        return True
    if m.size == 0:
        return False
    return rank(np.vstack([m, v]), p) == rank(m, p)


def same_row_space(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    ra, rb = rank(a, p), rank(b, p)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(np.vstack([a, b]), p) == ra


class Reducer:
    """Quotient coordinates for ``V / W`` where ``W`` is a row space.

    Reducing a vector by the echelon rows of ``W`` kills its pivot
    entries; the surviving non-pivot entries are the coordinates of the
    class in ``V / W``.  The standard basis vectors at non-pivot positions
    lift the quotient basis.
    """

    def __init__(self, span: np.ndarray, dim: int, p: int):
        self.p = p
        self.dim = dim
        span = np.asarray(span, dtype=np.int64).reshape(-1, dim)
        if span.shape[0]:
            self.rows, self.pivots = rref(span, p)
            self.rows = self.rows[: len(self.pivots)]
        else:
            self.rows, self.pivots = np.zeros((0, dim), dtype=np.int64), []
        pivset = set(self.pivots)
        self.free = [c for c in range(dim) if c not in pivset]

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.array(v, dtype=np.int64) % self.p
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return v

    def coords(self, v: np.ndarray) -> np.ndarray:
        return self.reduce(v)[self.free]

    def lift(self, k: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.free[k]] = 1
        return v
