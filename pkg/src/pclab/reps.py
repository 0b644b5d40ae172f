"""F_p-linear representations: conjugation modules, Jordan block sizes of
order-p elements, and the nilpotency-degree criterion for a normal Sylow."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import fplinalg as fp
from .core.group import Group, Subgroup, commutator, join
from .errors import NotAPGroup, NotNormal, NotUnipotentOrderP
from .series import Layer, agemo
from .sylow import op_core, sylow_subgroup


class FpMatrixRep:
    """A homomorphism G -> GL_d(F_p) given on G's generators.

    ``matrices`` extends the generator matrices along the enumeration tree,
    so element i gets M(gen) @ M(parent).
    """

    def __init__(self, group: Group, p: int, gen_matrices):
        self.group = group
        self.p = p
        mats = [fp.as_fp(m, p) for m in gen_matrices]
        if len(mats) != len(group.generators):
            raise ValueError("one matrix per generator required")
        self.dimension = mats[0].shape[0] if mats else 0
        self.gen_matrices = mats

    @cached_property
    def matrices(self) -> np.ndarray:
        G, d, p = self.group, self.dimension, self.p
        out = np.zeros((G.order, d, d), dtype=np.int64)
        out[0] = np.eye(d, dtype=np.int64)
        gens = np.stack(self.gen_matrices) if self.gen_matrices else np.zeros((0, d, d), np.int64)
        for lvl in range(1, int(G.depth.max(initial=0)) + 1):
            idx = np.flatnonzero(G.depth == lvl)
            out[idx] = np.matmul(gens[G.parent_gen[idx]], out[G.parent[idx]]) % p
        return out

    def matrix_of(self, x: int) -> np.ndarray:
        return self.matrices[int(x)]

    def is_homomorphism(self) -> bool:
        """M(s x) = M(s) M(x) for every generator s and every x; this
        already forces multiplicativity on all pairs."""
        G, M, p = self.group, self.matrices, self.p
        allx = G.all_elements
        for s, A in zip(G.generators, self.gen_matrices):
            if not np.array_equal(M[s], A):
                return False
            if not np.array_equal(M[G.mul(s, allx)], np.matmul(A, M) % p):
                return False
        return True

    def sample_check(self, rng, pairs=10 ** 4) -> bool:
        G, M, p = self.group, self.matrices, self.p
        a = rng.integers(0, G.order, pairs)
        b = rng.integers(0, G.order, pairs)
        return bool(np.array_equal(M[G.mul(a, b)], np.matmul(M[a], M[b]) % p))

    def kernel(self) -> Subgroup:
        eye = np.eye(self.dimension, dtype=np.int64)
        hit = (self.matrices == eye).all(axis=(1, 2))
        return Subgroup(self.group, np.flatnonzero(hit))

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "prime": self.p,
                "generators": [m.tolist() for m in self.gen_matrices]}


def _layers_of(G: Group, Omega: Subgroup, p: int) -> list:
    """Lower p-central series of Omega computed inside G, as layers."""
    terms = [Omega]
    while not terms[-1].is_trivial():
        cur = terms[-1]
        nxt = join(G, agemo(G, p, 1, cur), commutator(G, cur, Omega))
        if nxt == cur:
            break
        terms.append(nxt)
    return [Layer(G, p, n + 1, terms[n], terms[n + 1]) for n in range(len(terms) - 1)]


def conjugation_module(G: Group, Omega: Subgroup, p: int) -> FpMatrixRep:
    """G acting by conjugation on the layers of the lower p-central series of
    the normal p-subgroup Omega, as block-diagonal matrices."""
    if not Omega.is_normal():
        raise NotNormal("Omega must be normal in G")
    if _not_p_power(Omega.order, p):
        raise NotAPGroup("Omega must be a p-group")
    layers = _layers_of(G, Omega, p)
    rep = FpMatrixRep(G, p, [_conj_matrix(G, layers, s) for s in G.generators])
    rep.layers = layers
    return rep


def _not_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n != 1


def _conj_matrix(G: Group, layers, g: int) -> np.ndarray:
    d = sum(L.dim for L in layers)
    out = np.zeros((d, d), dtype=np.int64)
    off = 0
    for L in layers:
        if L.dim:
            imgs = G.conj(g, np.asarray(L.reps, dtype=np.int64))
            out[off:off + L.dim, off:off + L.dim] = L.coords(imgs).T
        off += L.dim
    return out


def module_rederive(G: Group, rep: FpMatrixRep, rng) -> bool:
    """Recompute each element's matrix directly from conjugation on shifted
    representatives and compare with the multiplicative extension."""
    layers = rep.layers
    xs = rng.integers(0, G.order, min(G.order, 200))
    for x in xs:
        d = rep.dimension
        direct = np.zeros((d, d), dtype=np.int64)
        off = 0
        for L in layers:
            if L.dim:
                shift = L.bottom.members[rng.integers(0, L.bottom.order, L.dim)]
                reps = G.mul(np.asarray(L.reps, dtype=np.int64), shift)
                direct[off:off + L.dim, off:off + L.dim] = L.coords(G.conj(int(x), reps)).T
            off += L.dim
        if not np.array_equal(direct, rep.matrix_of(x)):
            return False
    return True


# -- Jordan blocks ----------------------------------------------------------


def jordan_block_sizes(A, p: int) -> list:
    """Block sizes (descending) of a unipotent A with A^p = I, from the rank
    sequence r_j of (A - I)^j: #blocks of size s = r_{s-1} - 2 r_s + r_{s+1}."""
    A = fp.as_fp(A, p)
    d = A.shape[0]
    if not fp.is_identity(fp.matpow(A, p, p)):
        raise NotUnipotentOrderP("A^p != I")
    Nm = (A - np.eye(d, dtype=np.int64)) % p
    ranks = [d]
    cur = np.eye(d, dtype=np.int64)
    for _ in range(p + 1):
        cur = fp.matmul(cur, Nm, p)
        ranks.append(fp.rank(cur, p))
    sizes = []
    for s in range(p, 0, -1):
        count = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        sizes.extend([s] * count)
    return sizes


def nilpotency_degree_at_most(A, p: int, e: int) -> bool:
    """(A - I)^e == 0 by direct powering."""
    A = fp.as_fp(A, p)
    d = A.shape[0]
    return not fp.matpow((A - np.eye(d, dtype=np.int64)) % p, e, p).any()


def jordan_block(size: int, p: int) -> np.ndarray:
    J = np.eye(size, dtype=np.int64)
    for i in range(size - 1):
        J[i, i + 1] = 1
    return J % p


def block_diag(*blocks) -> np.ndarray:
    d = sum(b.shape[0] for b in blocks)
    out = np.zeros((d, d), dtype=np.int64)
    off = 0
    for b in blocks:
        n = b.shape[0]
        out[off:off + n, off:off + n] = b
        off += n
    return out


def is_irreducible_by_spin(rep: FpMatrixRep) -> bool:
    """Every nonzero vector spins up to the whole space (tiny modules only)."""
    d, p = rep.dimension, rep.p
    if p ** d > 10 ** 5:
        raise ValueError("spin test is exhaustive; module too large")
    gens = rep.gen_matrices
    for code in range(1, p ** d):
        v = np.array([(code // p ** i) % p for i in range(d)], dtype=np.int64)
        basis = v[None, :]
        frontier = [v]
        while frontier:
            new = []
            for w in frontier:
                for A in gens:
                    u = A @ w % p
                    if fp.rank(np.vstack([basis, u]), p) > len(basis):
                        basis = np.vstack([basis, u])
                        new.append(u)
            frontier = new
        if len(basis) < d:
            return False
    return True


# -- semisimple-by-construction modules ----------------------------------


def natural_rep(G: Group, p: int) -> FpMatrixRep:
    """A matrix group over F_p acting on column vectors."""
    d = int(round(G.backend.width ** 0.5))
    return FpMatrixRep(G, p, [G.codes[s].reshape(d, d) for s in G.generators])


def direct_sum(*reps: FpMatrixRep) -> FpMatrixRep:
    G, p = reps[0].group, reps[0].p
    if any(r.group is not G or r.p != p for r in reps):
        raise ValueError("summands must share group and prime")
    gens = [block_diag(*mats) for mats in zip(*(r.gen_matrices for r in reps))]
    return FpMatrixRep(G, p, gens)


def trivial_rep(G: Group, p: int, dim: int = 1) -> FpMatrixRep:
    return FpMatrixRep(G, p, [np.eye(dim, dtype=np.int64) for _ in G.generators])


def _poly_mod(a: list, f: list, p: int) -> list:
    """a mod f over F_p; coefficient lists, lowest degree first, f monic."""
    a = [c % p for c in a]
    d = len(f) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % p
    return (a + [0] * d)[:d]


def cyclotomic_factor(ell: int, p: int) -> list:
    """A monic irreducible factor of (x^ell - 1)/(x - 1) over F_p, found by
    trying monic polynomials of degree ord_ell(p) in lexicographic order."""
    d = 1
    while pow(p, d, ell) != 1:
        d += 1
    phi = [1] * ell
    for code in range(p ** d):
        f = [(code // p ** i) % p for i in range(d)] + [1]
        if f[0] and not any(_poly_mod(phi, f, p)):
            return f
    raise ValueError("no factor found")


def frobenius_module(ell: int, p: int) -> FpMatrixRep:
    """C_ell x| C_d acting on F_p[x]/(f) = F_{p^d}: x by multiplication, the
    complement by the Frobenius a -> a^p.  Irreducible because C_ell alone
    already acts irreducibly."""
    from .core.products import matrix_group

    f = cyclotomic_factor(ell, p)
    d = len(f) - 1
    X = np.zeros((d, d), dtype=np.int64)
    F = np.zeros((d, d), dtype=np.int64)
    for i in range(d):
        X[:, i] = _poly_mod([0] * (i + 1) + [1], f, p)
        F[:, i] = _poly_mod([0] * (p * i) + [1], f, p)
    G = matrix_group(d, p, [X, F], name=f"C{ell}:C{d} on F{p}^{d}")
    return natural_rep(G, p)


# -- the normal-Sylow criterion -------------------------------------------


@dataclass
class LemmaCritResult:
    status: str                   # "normalSylowPredicted" | "hypothesisFailed"
    failed: str | None = None     # "p odd", "i" or "ii"
    witness: int | None = None
    kernel_order: int = 0
    verified: bool | None = None  # group-theoretic recheck of the prediction

    def to_json(self) -> dict:
        return dict(self.__dict__)


def lemma_crit_check(G: Group, p: int, rep: FpMatrixRep) -> LemmaCritResult:
    """Hypotheses: (i) ker <= O_p(G), (ii) (M(g) - I)^(p-2) = 0 on P.
    When both hold the Sylow subgroup should equal the kernel; that
    prediction is re-verified and recorded in ``verified``."""
    if p == 2:
        return LemmaCritResult("hypothesisFailed", "p odd")
    K = rep.kernel()
    if not K <= op_core(G, p):
        bad = K.members[~op_core(G, p).mask[K.members]]
        return LemmaCritResult("hypothesisFailed", "i", int(bad[0]), K.order)
    P = sylow_subgroup(G, p)
    M = rep.matrices[P.members]
    d = rep.dimension
    Nm = (M - np.eye(d, dtype=np.int64)) % p
    cur = np.broadcast_to(np.eye(d, dtype=np.int64), Nm.shape).copy()
    for _ in range(p - 2):
        cur = np.matmul(cur, Nm) % p
    nonzero = cur.reshape(len(P.members), -1).any(axis=1)
    if nonzero.any():
        return LemmaCritResult("hypothesisFailed", "ii", int(P.members[np.flatnonzero(nonzero)[0]]),
                               K.order)
    verified = K == P and P.is_normal()
    return LemmaCritResult("normalSylowPredicted", None, None, K.order, bool(verified))


# -- matrix fixtures ------------------------------------------------------


def load_matrix_fixture(path) -> tuple:
    """JSON {"dimension": d, "prime": p, "rows": [[...], ...]} -> (matrix, p)."""
    data = json.loads(Path(path).read_text())
    A = np.asarray(data["rows"], dtype=np.int64)
    if A.shape != (data["dimension"], data["dimension"]):
        raise ValueError("rows do not match the declared dimension")
    return A % data["prime"], data["prime"]


def dump_matrix_fixture(A, p: int) -> str:
    A = fp.as_fp(A, p)
    return json.dumps({"dimension": int(A.shape[0]), "prime": p, "rows": A.tolist()})
