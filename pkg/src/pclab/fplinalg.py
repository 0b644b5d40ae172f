"""Dense linear algebra over the prime field F_p.

Matrices are int64 numpy arrays with entries in [0, p).  Gaussian
elimination is written out by hand since numpy only works over the reals.
"""
from __future__ import annotations

import numpy as np


def as_fp(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int):
    """Reduced row echelon form and pivot columns."""
    m = as_fp(a, p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if not len(nz):
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        others = np.flatnonzero(m[:, c])
        others = others[others != r]
        if len(others):
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of {v : a v = 0}, one vector per row."""
    a = as_fp(a, p)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    m, pivots = rref(a, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(pivots):
            basis[i, c] = (-m[r, f]) % p
    return basis


def matmul(a, b, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def matpow(a, e: int, p: int) -> np.ndarray:
    a = as_fp(a, p)
    out = np.eye(a.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            out = matmul(out, a, p)
        e >>= 1
        if e:
            a = matmul(a, a, p)
    return out


def inverse(a, p: int) -> np.ndarray:
    a = as_fp(a, p)
    n = a.shape[0]
    m, pivots = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return m[:, n:]


def is_identity(a) -> bool:
    a = np.asarray(a)
    return bool(np.array_equal(a, np.eye(a.shape[0], dtype=a.dtype)))
