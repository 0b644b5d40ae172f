"""Element encodings.

A backend turns a row of small non-negative integers (a *code*) into a group
element and multiplies codes in bulk.  Every method works on 2-d arrays of
shape ``(m, width)`` so whole frontiers are multiplied in one numpy call.
"""
from __future__ import annotations

import numpy as np


class Backend:
    kind = "abstract"
    width: int
    radix: tuple[int, ...]

    def identity(self) -> np.ndarray:
        raise NotImplementedError

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": self.kind}


class AbelianBackend(Backend):
    """Z/m_1 x ... x Z/m_r written additively."""

    kind = "abelian"

    def __init__(self, moduli):
        self.moduli = np.asarray(moduli, dtype=np.int64)
        if self.moduli.ndim != 1 or len(self.moduli) == 0 or (self.moduli < 1).any():
            raise ValueError(f"bad moduli {moduli!r}")
        self.width = len(self.moduli)
        self.radix = tuple(int(m) for m in self.moduli)

    def identity(self):
        return np.zeros(self.width, dtype=np.int64)

    def mul(self, a, b):
        return (a + b) % self.moduli

    def describe(self):
        return {"kind": self.kind, "moduli": list(self.radix)}


class MatrixBackend(Backend):
    """Square integer matrices with row ``i`` reduced modulo ``moduli[i]``.

    With all moduli equal this is plain matrix arithmetic over Z/N.  Mixed
    moduli model endomorphisms of a finite abelian p-group
    Z/p^e_1 + ... + Z/p^e_r: column j holds the image of the j-th basis vector.
    """

    kind = "matrix"

    def __init__(self, dim, moduli):
        if isinstance(moduli, int):
            moduli = [moduli] * dim
        self.dim = int(dim)
        self.moduli = np.asarray(moduli, dtype=np.int64)
        assert len(self.moduli) == self.dim
        self.width = self.dim * self.dim
        self.radix = tuple(int(m) for m in np.repeat(self.moduli, self.dim))
        self._rowmod = self.moduli.reshape(1, self.dim, 1)

    def identity(self):
        return np.eye(self.dim, dtype=np.int64).ravel() % np.repeat(self.moduli, self.dim)

    def reduce(self, mats):
        return np.asarray(mats, dtype=np.int64) % self._rowmod[0]

    def mul(self, a, b):
        d = self.dim
        A = a.reshape(-1, d, d)
        B = b.reshape(-1, d, d)
        return (np.matmul(A, B) % self._rowmod).reshape(-1, self.width)

    def describe(self):
        return {"kind": self.kind, "dim": self.dim, "moduli": [int(m) for m in self.moduli]}


class PermBackend(Backend):
    """Permutations of {0..n-1} as image arrays; ``a*b`` applies ``b`` first."""

    kind = "permutation"

    def __init__(self, degree):
        self.degree = int(degree)
        self.width = self.degree
        self.radix = (self.degree,) * self.degree

    def identity(self):
        return np.arange(self.degree, dtype=np.int64)

    def mul(self, a, b):
        return np.take_along_axis(a, b, axis=1)

    def describe(self):
        return {"kind": self.kind, "degree": self.degree}


class DirectProductBackend(Backend):
    """Tuples of element indices of already enumerated factor groups."""

    kind = "tuple-product"

    def __init__(self, factors):
        self.factors = list(factors)
        self.width = len(self.factors)
        self.radix = tuple(f.order for f in self.factors)

    def identity(self):
        return np.zeros(self.width, dtype=np.int64)

    def mul(self, a, b):
        out = np.empty_like(a)
        for i, f in enumerate(self.factors):
            out[:, i] = f.mul(a[:, i], b[:, i])
        return out

    def describe(self):
        return {"kind": self.kind, "factors": [f.order for f in self.factors]}


class SemidirectBackend(Backend):
    """Pairs (k, h) with (k1, h1)(k2, h2) = (k1 * h1.k2, h1 h2).

    ``act[h]`` is the automorphism of K attached to h, stored as an index
    permutation of K.
    """

    kind = "tuple-product"

    def __init__(self, K, H, act):
        self.K = K
        self.H = H
        self.act = np.asarray(act, dtype=np.int64)
        assert self.act.shape == (H.order, K.order)
        self.width = 2
        self.radix = (K.order, H.order)

    def identity(self):
        return np.zeros(2, dtype=np.int64)

    def mul(self, a, b):
        k = self.K.mul(a[:, 0], self.act[a[:, 1], b[:, 0]])
        h = self.H.mul(a[:, 1], b[:, 1])
        return np.stack([k, h], axis=1)

    def describe(self):
        return {"kind": "semidirect", "K": self.K.order, "H": self.H.order}


class QuotientBackend(Backend):
    """Cosets of a normal subgroup, coded by their minimal parent index."""

    kind = "coset-quotient"

    def __init__(self, parent, labels):
        self.parent = parent
        self.labels = np.asarray(labels, dtype=np.int64)
        self.width = 1
        self.radix = (parent.order,)

    def identity(self):
        return np.zeros(1, dtype=np.int64)

    def mul(self, a, b):
        return self.labels[self.parent.mul(a[:, 0], b[:, 0])][:, None]

    def describe(self):
        return {"kind": self.kind, "parent": self.parent.order}


class SubgroupBackend(Backend):
    """Elements of a subgroup, coded by their index in the parent group."""

    kind = "subgroup"

    def __init__(self, parent):
        self.parent = parent
        self.width = 1
        self.radix = (parent.order,)

    def identity(self):
        return np.zeros(1, dtype=np.int64)

    def mul(self, a, b):
        return self.parent.mul(a[:, 0], b[:, 0])[:, None]

    def describe(self):
        return {"kind": self.kind, "parent": self.parent.order}
