"""Subgroup series of finite groups and their graded F_p-linearisations.

Covers Omega and agemo subgroups, p-th roots of normal subgroups, the
ascending central series, the lambda^(k) filtrations (k = 1 is the lower
p-central series) and the M-series used for the agemo index bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fplinalg as fp
from .core.group import (Group, Subgroup, _extend, center, closure, commutator,
                         iterated_commutator, join, normal_closure, power_subgroup,
                         quotient)
from .errors import (HypothesisFailed, InvalidHeight, NotAPGroup, NotNormal,
                     OddPrimeRequired)

EXHAUSTIVE_PAIRS = 10 ** 6
SAMPLED_PAIRS = 10 ** 4


def _memo(G: Group, key, build):
    cache = G.memo
    if key not in cache:
        cache[key] = build()
    return cache[key]


def _require_p_group(G: Group, p: int):
    if not G.is_p_group(p):
        raise NotAPGroup(f"order {G.order} is not a power of {p}")


# -- series container -------------------------------------------------------


@dataclass
class SubgroupSeries:
    """Terms ``terms[0..]`` stand for indices ``start, start+1, ...``.

    Indices below ``start`` read as ``below`` (P for lambda, 1 for M and
    zeta); indices past the end read as the final, stable term.
    """

    kind: str
    parent: Group
    terms: list
    params: dict = field(default_factory=dict)
    start: int = 0
    below: Subgroup | None = None

    def term(self, n: int) -> Subgroup:
        if n < self.start:
            return self.below if self.below is not None else self.terms[0]
        i = n - self.start
        return self.terms[min(i, len(self.terms) - 1)]

    __getitem__ = term

    @property
    def last_index(self) -> int:
        return self.start + len(self.terms) - 1

    def orders(self) -> list:
        return [t.order for t in self.terms]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "start": self.start,
            "terms": [{"index": self.start + i, "order": t.order,
                       "generators": [int(g) for g in t.generators]}
                      for i, t in enumerate(self.terms)],
        }


# -- Omega, agemo, roots ----------------------------------------------------


def _order_divides(G: Group, e: int) -> np.ndarray:
    return (e % G.element_orders) == 0


def omega(G: Group, p: int, i: int) -> Subgroup:
    """Subgroup generated by the elements of order dividing p^i."""
    if i < 0:
        raise ValueError("i must be >= 0")
    if i == 0:
        return G.trivial()
    return _memo(G, ("omega", p, i),
                 lambda: closure(G, np.flatnonzero(_order_divides(G, p ** i))))


def omega_series(G: Group, p: int) -> SubgroupSeries:
    terms = [G.trivial()]
    i = 0
    while True:
        i += 1
        nxt = omega(G, p, i)
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    return SubgroupSeries("omega", G, terms, {"p": p})


@dataclass
class ExactSetResult:
    equal: bool
    witness: int | None = None


def omega_exact_set(G: Group, p: int, j: int) -> ExactSetResult:
    """Compare Omega_j with the raw solution set of x^(p^j) = 1."""
    raw = _order_divides(G, p ** j)
    gen = omega(G, p, j)
    if int(raw.sum()) == gen.order:
        return ExactSetResult(True)
    extra = gen.members[~raw[gen.members]]
    return ExactSetResult(False, int(extra[0]))


def agemo(G: Group, p: int, j: int, H: Subgroup | None = None) -> Subgroup:
    """Subgroup generated by the p^j-th powers of ``H`` (default: G)."""
    if j < 0:
        raise ValueError("j must be >= 0")
    H = G.whole() if H is None else H
    if j == 0:
        return H
    return power_subgroup(G, H, p ** j)


def is_power_surjective(G: Group, p: int) -> bool:
    """True iff {x^p} is already the subgroup G^p."""
    powers = np.unique(G.power_map(p))
    return len(powers) == agemo(G, p, 1).order


def pth_root(G: Group, N: Subgroup, p: int) -> Subgroup:
    """N^(1/p): normal closure of {x : x^p in N}."""
    if not N.is_normal():
        raise NotNormal("p-th root needs a normal subgroup")
    roots = np.flatnonzero(N.mask[G.power_map(p)])
    return normal_closure(G, roots)


# -- ascending central series -----------------------------------------------


def zeta_series(G: Group) -> SubgroupSeries:
    """zeta_0 = 1 < zeta_1 = Z(G) < ... up to the hypercentre.

    Each step takes the centre of G/zeta_k and pulls it back.
    """
    def build():
        terms = [G.trivial()]
        while True:
            cur = terms[-1]
            if cur.is_whole():
                break
            Q, proj = quotient(G, cur)
            nxt = proj.preimage(center(Q))
            if nxt.order == cur.order:
                break
            terms.append(nxt)
        return SubgroupSeries("zeta", G, terms)
    return _memo(G, ("zeta",), build)


def zeta(G: Group, k: int) -> Subgroup:
    return zeta_series(G).term(k)


def is_pi_central_of_height(G: Group, p: int, i: int, k: int) -> bool:
    """Omega_i(G, p) <= zeta_k(G)."""
    if i < 1 or k < 1:
        raise ValueError("i and k must be >= 1")
    return omega(G, p, i) <= zeta(G, k)


def central_height(G: Group, p: int, i: int = 1):
    """Least k with Omega_i <= zeta_k, or None when Omega_i escapes the hypercentre."""
    Om = omega(G, p, i)
    zs = zeta_series(G)
    for k, term in enumerate(zs.terms):
        if Om <= term:
            return max(k, 1)
    return None


# -- lambda^(k) filtration --------------------------------------------------


def _check_k(p: int, k: int, top: int):
    if k < 1 or k > top:
        raise InvalidHeight(f"k = {k} must lie in 1..{top} for p = {p}")


def lambda_series(P: Group, p: int, k: int) -> SubgroupSeries:
    """lambda_n = <lambda_{n-k}^p [lambda_{n-1}, P]>, lambda_n = P for n <= 1.

    Every index is kept (repeats included) until k+1 consecutive terms agree,
    after which the recursion is constant.
    """
    _check_k(p, k, p - 1)

    def build():
        whole = P.whole()
        terms = {1: whole}

        def at(n):
            return whole if n <= 1 else terms[n]

        n = 1
        while True:
            n += 1
            powers = agemo(P, p, 1, at(n - k))
            comm = commutator(P, at(n - 1), whole)
            terms[n] = join(P, powers, comm)
            window = [terms[m] for m in range(max(1, n - k), n + 1)]
            if n > k and all(t == window[0] for t in window):
                break
        ordered = [terms[m] for m in range(1, n + 1)]
        return SubgroupSeries(f"lambda({k})", P, ordered, {"p": p, "k": k},
                              start=1, below=whole)
    return _memo(P, ("lambda", p, k), build)


def lower_p_central_series(P: Group, p: int) -> SubgroupSeries:
    """P_1 = P, P_{n+1} = P_n^p [P_n, P], written independently of lambda."""
    whole = P.whole()
    terms = [whole]
    while True:
        cur = terms[-1]
        nxt = join(P, agemo(P, p, 1, cur), commutator(P, cur, whole))
        if nxt == cur:
            break
        terms.append(nxt)
    return SubgroupSeries("lower-p-central", P, terms, {"p": p}, start=1, below=whole)


def k_elementary_p_length(P: Group, p: int, k: int) -> int:
    """Last n with lambda_n != lambda_{n+1} (0 for the trivial group)."""
    _check_k(p, k, p - 1)
    _require_p_group(P, p)
    ls = lambda_series(P, p, k)
    length = 0
    for n in range(1, ls.last_index + 1):
        if ls.term(n) != ls.term(n + 1):
            length = n
    return length


# -- graded objects ---------------------------------------------------------


class Layer:
    """An elementary abelian section top/bottom with a fixed F_p basis.

    Basis representatives are chosen greedily by minimal element index.
    """

    def __init__(self, G: Group, p: int, index: int, top: Subgroup, bottom: Subgroup):
        self.G, self.p, self.index = G, p, index
        self.top, self.bottom = top, bottom
        mask = bottom.mask.copy()
        members = [bottom.members]
        gens = list(bottom.generators)
        reps = []
        for x in top.members:
            if not mask[x]:
                reps.append(int(x))
                _extend(G, mask, members, gens, int(x))
        self.reps = reps
        self.dim = len(reps)
        if bottom.order * p ** self.dim != top.order:
            raise HypothesisFailed(
                f"layer {index} is not elementary abelian "
                f"(|top:bottom| = {top.order // bottom.order}, rank {self.dim})")
        elems = np.array([0], dtype=np.int64)
        for b in reps:
            elems = G.mul(elems[:, None], _powers(G, b, p)[None, :]).ravel()
        # elems[c] = b_0^c_0 * b_1^c_1 * ... with c read in mixed radix (last digit fastest)
        slot = np.full(G.order, -1, dtype=np.int64)
        cosets = G.mul(elems[:, None], bottom.members[None, :])
        slot[cosets.ravel()] = np.repeat(np.arange(len(elems)), bottom.order)
        if (slot[top.members] < 0).any() or (slot >= 0).sum() != top.order:
            raise HypothesisFailed(f"layer {index} is not elementary abelian")
        self._slot = slot
        digits = np.zeros((len(elems), self.dim), dtype=np.int64)
        idx = np.arange(len(elems))
        for i in range(self.dim - 1, -1, -1):
            digits[:, i] = idx % p
            idx //= p
        self._digits = digits

    def coords(self, xs) -> np.ndarray:
        """Coordinate rows of ``xs`` (elements of top) in the chosen basis."""
        xs = np.atleast_1d(np.asarray(xs, dtype=np.int64))
        s = self._slot[xs]
        if (s < 0).any():
            raise HypothesisFailed(f"element outside layer {self.index}")
        return self._digits[s]

    def contains(self, xs) -> np.ndarray:
        return self._slot[np.atleast_1d(np.asarray(xs, dtype=np.int64))] >= 0

    def to_json(self) -> dict:
        return {"index": self.index, "dim": self.dim, "reps": self.reps,
                "top_order": self.top.order, "bottom_order": self.bottom.order}


def _powers(G: Group, b: int, p: int) -> np.ndarray:
    out = np.zeros(p, dtype=np.int64)
    for c in range(1, p):
        out[c] = G.mul(out[c - 1], b)
    return out


class GradedFpObject:
    """Layers of a filtration with an induced p-power map of fixed degree
    and, optionally, commutator brackets between layers."""

    def __init__(self, G: Group, p: int, layers: dict, degree: int, kind: str,
                 with_brackets: bool = True):
        self.G, self.p, self.kind = G, p, kind
        self.layers = layers
        self.degree = degree
        self.t_maps = self._t_maps({n: L.reps for n, L in layers.items()})
        self.brackets = (self._brackets({n: L.reps for n, L in layers.items()})
                         if with_brackets else {})

    def _target(self, n):
        return self.layers.get(n + self.degree)

    def _t_maps(self, reps) -> dict:
        out = {}
        pw = self.G.power_map(self.p)
        for n, L in self.layers.items():
            T = self._target(n)
            if T is None or T.dim == 0 or L.dim == 0:
                out[n] = np.zeros((0 if T is None else T.dim, L.dim), dtype=np.int64)
                continue
            out[n] = T.coords(pw[np.asarray(reps[n])]).T.copy()
        return out

    def _brackets(self, reps) -> dict:
        out = {}
        G = self.G
        for n, A in self.layers.items():
            for m, B in self.layers.items():
                if m < n:
                    continue
                T = self.layers.get(n + m)
                if T is None or A.dim == 0 or B.dim == 0 or T.dim == 0:
                    continue
                ra = np.asarray(reps[n])
                rb = np.asarray(reps[m])
                c = G.comm(ra[:, None], rb[None, :]).ravel()
                out[(n, m)] = T.coords(c).reshape(A.dim, B.dim, T.dim)
        return out

    # -- queries ------------------------------------------------------------

    def dims(self) -> dict:
        return {n: L.dim for n, L in self.layers.items()}

    def t_rank(self, n: int) -> int:
        return fp.rank(self.t_maps[n], self.p) if self.t_maps[n].size else 0

    def annihilator(self) -> dict:
        """Per-layer basis of ker t (rows are coordinate vectors)."""
        out = {}
        for n, L in self.layers.items():
            M = self.t_maps[n]
            if M.shape[0] == 0:
                out[n] = np.eye(L.dim, dtype=np.int64)
            else:
                out[n] = fp.nullspace(M, self.p)
        return out

    def annihilator_dim(self) -> int:
        return sum(len(v) for v in self.annihilator().values())

    def image_dim(self) -> int:
        return sum(self.t_rank(n) for n in self.layers)

    def total_dim(self) -> int:
        return sum(L.dim for L in self.layers.values())

    def is_t_surjective(self) -> bool:
        """t_n onto layer n + degree for every layer that has a source."""
        for n, L in self.layers.items():
            T = self._target(n)
            if T is not None and T.dim and self.t_rank(n) != T.dim:
                return False
        return True

    def is_t_injective(self, n: int) -> bool:
        L = self.layers[n]
        return L.dim == 0 or (self.t_maps[n].shape[0] > 0 and self.t_rank(n) == L.dim)

    def subgroup_dims(self, Q: Subgroup) -> dict:
        """dim of (Q cap top_n) bottom_n / bottom_n for every layer."""
        out = {}
        for n, L in self.layers.items():
            inter = Q.members[L.top.mask[Q.members]]
            if not len(inter) or L.dim == 0:
                out[n] = 0
                continue
            vecs = np.unique(L.coords(inter), axis=0)
            out[n] = fp.rank(vecs, self.p)
        return out

    def rederive(self, rng: np.random.Generator) -> bool:
        """Recompute t-maps and brackets from representatives shifted by random
        elements of each layer's bottom; True iff every matrix agrees."""
        alt = {}
        for n, L in self.layers.items():
            shifts = L.bottom.members[rng.integers(0, L.bottom.order, L.dim)]
            alt[n] = list(self.G.mul(np.asarray(L.reps, dtype=np.int64), shifts)) if L.dim else []
        t2 = self._t_maps(alt)
        for n in self.t_maps:
            if not np.array_equal(self.t_maps[n], t2[n]):
                return False
        if self.brackets:
            b2 = self._brackets(alt)
            for key, val in self.brackets.items():
                if not np.array_equal(val, b2[key]):
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "degree": self.degree,
            "layers": [self.layers[n].to_json() for n in sorted(self.layers)],
            "t": {str(n): m.tolist() for n, m in sorted(self.t_maps.items())},
            "brackets": [{"source": [n, m], "target": n + m, "tensor": v.tolist()}
                         for (n, m), v in sorted(self.brackets.items())],
        }


def lambda_graded(P: Group, p: int, k: int) -> GradedFpObject:
    """gr^(k): layers lambda_n / lambda_{n+1}, t of degree k, brackets from
    commutators."""
    _check_k(p, k, p - 2)
    _require_p_group(P, p)

    def build():
        ls = lambda_series(P, p, k)
        length = k_elementary_p_length(P, p, k)
        layers = {n: Layer(P, p, n, ls.term(n), ls.term(n + 1)) for n in range(1, length + 1)}
        return GradedFpObject(P, p, layers, k, f"gr({k})")
    return _memo(P, ("gr", p, k), build)


def is_k_powerful(P: Group, p: int, k: int) -> bool:
    """t: gr_n -> gr_{n+k} is onto for every n."""
    return lambda_graded(P, p, k).is_t_surjective()


# -- the M-series -----------------------------------------------------------


def m_series(P: Group, p: int) -> SubgroupSeries:
    """M_n = [Omega_1, P, ..., P] (p-n-1 copies of P) for n <= p-1 and
    M_n = M_{n-p+1}^(1/p) beyond; M_n = 1 for n < 0.

    Terms run from M_0 up to the first index where M_n = P.
    """
    if p == 2:
        raise OddPrimeRequired("the M-series is defined for odd p")
    _require_p_group(P, p)

    def build():
        whole = P.whole()
        om = omega(P, p, 1)
        terms = []
        for n in range(0, p):
            terms.append(iterated_commutator(P, om, p - n - 1))
        n = p - 1
        while not terms[-1].is_whole():
            n += 1
            terms.append(pth_root(P, terms[n - p + 1], p))
        # trim trailing copies of P beyond the first
        while len(terms) > 1 and terms[-2].is_whole():
            terms.pop()
        return SubgroupSeries("M", P, terms, {"p": p}, start=0, below=P.trivial())
    return _memo(P, ("M", p), build)


def m_graded(P: Group, p: int, check_pairs: int = 200, seed: int = 0) -> GradedFpObject:
    """m: layers M_n / M_{n-1} (n >= 0), t of degree 1-p, no brackets.

    Before building, the power congruence (xy)^p = x^p y^p mod M_{n-p} is
    sampled on each layer; failure raises HypothesisFailed.
    """
    ms = m_series(P, p)
    rng = np.random.default_rng(seed)
    for n in range(0, ms.last_index + 1):
        ok, _ = power_congruence(P, p, ms.term(n), ms.term(n), ms.term(n - p),
                                 rng, limit=check_pairs, exhaustive_below=check_pairs)
        if not ok:
            raise HypothesisFailed(f"power congruence fails on M_{n}")

    def build():
        layers = {}
        for n in range(0, ms.last_index + 1):
            layers[n] = Layer(P, p, n, ms.term(n), ms.term(n - 1))
        return GradedFpObject(P, p, layers, 1 - p, "m", with_brackets=False)
    return _memo(P, ("m", p), build)


# -- congruence checks ------------------------------------------------------


def power_congruence(G: Group, p: int, X: Subgroup, Y: Subgroup, N: Subgroup,
                     rng: np.random.Generator, limit: int = SAMPLED_PAIRS,
                     exhaustive_below: int = EXHAUSTIVE_PAIRS):
    """Check (xy)^p = x^p y^p modulo N for x in X, y in Y.

    Exhaustive when |X||Y| <= ``exhaustive_below``, otherwise ``limit``
    seeded random pairs.  Returns (ok, first failing pair or None).
    """
    pw = G.power_map(p)
    if X.order * Y.order <= exhaustive_below:
        pairs = ((X.members[i], Y.members) for i in range(X.order))
    else:
        xs = X.members[rng.integers(0, X.order, limit)]
        ys = Y.members[rng.integers(0, Y.order, limit)]
        pairs = [(xs, ys)]
    for xs, ys in pairs:
        xs, ys = np.broadcast_arrays(np.atleast_1d(xs), ys)
        lhs = pw[G.mul(xs, ys)]
        rhs = G.mul(pw[xs], pw[ys])
        bad = ~N.mask[G.mul(G.inv(rhs), lhs)]
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            return False, (int(xs[i]), int(ys[i]))
    return True, None
