"""Group constructors: basic families and product constructions."""
from __future__ import annotations

import numpy as np

from ..errors import IncompatibleCodomain, InvalidAction, InvalidPrimes, SizeCapExceeded
from .backends import (AbelianBackend, DirectProductBackend, MatrixBackend,
                       PermBackend, SemidirectBackend)
from .group import DEFAULT_MAX_ORDER, Group, Homomorphism, closure


def cyclic(n: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    return abelian([n], max_order=max_order, name=f"C{n}")


def abelian(orders, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    orders = [int(o) for o in orders]
    gens = np.eye(len(orders), dtype=np.int64) % np.asarray(orders)
    return Group(AbelianBackend(orders), gens, max_order=max_order,
                 name=name or "x".join(f"C{o}" for o in orders))


def elementary_abelian(p: int, r: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    return abelian([p] * r, max_order=max_order, name=f"C{p}^{r}")


def matrix_group(dim, moduli, gens, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    be = MatrixBackend(dim, moduli)
    codes = np.stack([be.reduce(np.asarray(g).reshape(dim, dim)).ravel() for g in gens])
    return Group(be, codes, max_order=max_order, name=name)


def perm_group(degree, gens, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, degree)
    for g in gens:
        if sorted(g.tolist()) != list(range(degree)):
            raise ValueError(f"not a permutation: {g.tolist()}")
    return Group(PermBackend(degree), gens, max_order=max_order, name=name)


def cycles_to_perm(degree: int, cycles) -> list:
    perm = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


def heisenberg(p: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    """Upper unitriangular 3x3 matrices over Z/p."""
    x = np.eye(3, dtype=np.int64)
    x[0, 1] = 1
    y = np.eye(3, dtype=np.int64)
    y[1, 2] = 1
    return matrix_group(3, p, [x, y], max_order=max_order, name=f"Heis({p})")


def sl2_mod(p: int, n: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    """SL_2(Z/p^n), generated by the two elementary transvections."""
    N = p ** n
    T = [[1, 1], [0, 1]]
    U = [[1, 0], [1, 1]]
    return matrix_group(2, N, [T, U], max_order=max_order, name=f"SL2(Z/{N})")


def sl2_sylow(p: int, n: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    """The Sylow p-subgroup of SL_2(Z/p^n) lying over the upper unitriangular
    matrices mod p, built directly (order p^(3n-2))."""
    N = p ** n
    if n == 1:
        return matrix_group(2, N, [[[1, 1], [0, 1]]], max_order=max_order,
                            name=f"Syl{p}SL2(Z/{N})")
    a = 1 + p
    a_inv = pow(a, -1, N)
    gens = [[[1, 1], [0, 1]], [[1, 0], [p, 1]], [[a, 0], [0, a_inv]]]
    return matrix_group(2, N, gens, max_order=max_order, name=f"Syl{p}SL2(Z/{N})")


def pl_group(p: int, exponents, max_order=DEFAULT_MAX_ORDER) -> Group:
    """{id + p*alpha : alpha in End(M)} for M = Z/p^e_1 + ... + Z/p^e_r."""
    e = [int(x) for x in exponents]
    r = len(e)
    moduli = [p ** x for x in e]
    gens = []
    for i in range(r):
        for j in range(r):
            entry = p * p ** max(0, e[i] - e[j])
            if entry % moduli[i] == 0:
                continue
            g = np.eye(r, dtype=np.int64)
            g[i, j] = (g[i, j] + entry) % moduli[i]
            gens.append(g)
    name = "PL(" + "+".join(f"Z/{m}" for m in moduli) + ")"
    if not gens:
        return matrix_group(r, moduli, [np.eye(r, dtype=np.int64)], max_order=max_order, name=name)
    return matrix_group(r, moduli, gens, max_order=max_order, name=name)


def pl_expected_order(p: int, exponents) -> int:
    e = list(exponents)
    out = 1
    for a in e:
        for b in e:
            out *= p ** max(0, min(a, b) - 1)
    return out


# -- products ---------------------------------------------------------------


def direct_product(*factors: Group, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    be = DirectProductBackend(factors)
    gens = []
    for i, f in enumerate(factors):
        for g in f.generators:
            row = np.zeros(len(factors), dtype=np.int64)
            row[i] = g
            gens.append(row)
    if not gens:
        gens = [np.zeros(len(factors), dtype=np.int64)]
    G = Group(be, np.stack(gens), max_order=max_order,
              name=name or " x ".join(f.name or "?" for f in factors))
    G.factors = list(factors)
    return G


def automorphism_from_images(K: Group, images) -> np.ndarray:
    """Index permutation of K for the endomorphism sending K's generators to
    ``images``; raises InvalidAction unless it is an automorphism."""
    try:
        hom = Homomorphism.from_generator_images(K, K, images)
    except ValueError as exc:
        raise InvalidAction(str(exc)) from None
    if len(np.unique(hom.images)) != K.order:
        raise InvalidAction("action image is not bijective")
    return hom.images


def action_table(K: Group, H: Group, gen_auts) -> np.ndarray:
    """Extend automorphisms given on H's generators to a table over all of H."""
    gen_auts = [np.asarray(a, dtype=np.int64) for a in gen_auts]
    if len(gen_auts) != len(H.generators):
        raise InvalidAction("need one automorphism per generator of H")
    act = np.empty((H.order, K.order), dtype=np.int64)
    act[0] = np.arange(K.order)
    for lvl in range(1, int(H.depth.max(initial=0)) + 1):
        idx = np.flatnonzero(H.depth == lvl)
        for i in idx:
            act[i] = gen_auts[H.parent_gen[i]][act[H.parent[i]]]
    for s, aut in zip(H.generators, gen_auts):
        if not np.array_equal(act[s], aut):
            raise InvalidAction("action is not a homomorphism H -> Aut(K)")
        sh = H.mul(s, np.arange(H.order))
        if not np.array_equal(act[sh], aut[act]):
            raise InvalidAction("action is not a homomorphism H -> Aut(K)")
    return act


def semidirect(K: Group, H: Group, gen_auts, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    """K x| H where H's i-th generator acts on K by the index permutation
    ``gen_auts[i]``."""
    act = action_table(K, H, gen_auts)
    be = SemidirectBackend(K, H, act)
    gens = [[k, 0] for k in K.generators] + [[0, h] for h in H.generators]
    G = Group(be, np.asarray(gens, dtype=np.int64), max_order=max_order,
              name=name or f"({K.name}):({H.name})")
    G.normal_factor, G.complement_factor = K, H
    return G


def wreath_regular(A: Group, B: Group, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    """A wr B with B permuting |B| copies of A by left multiplication."""
    m = B.order
    if A.order ** m * m > max_order:
        raise SizeCapExceeded(f"wreath product of order {A.order ** m * m} exceeds {max_order}")
    base = direct_product(*([A] * m), max_order=max_order)
    allb = np.arange(m)
    auts = []
    for b in B.generators:
        # (b.f)(x) = f(b^-1 x)
        perm = B.mul(B.inv(b), allb)
        auts.append(base.index_of(base.codes[:, perm]))
    G = semidirect(base, B, auts, max_order=max_order,
                   name=name or f"{A.name} wr {B.name}")
    G.top = B
    return G


def pullback(f: Homomorphism, g: Homomorphism, max_order=DEFAULT_MAX_ORDER, name=None) -> Group:
    """{(x, y) in X x Y : f(x) = g(y)}, materialised as a tuple-product group."""
    if f.target is not g.target:
        raise IncompatibleCodomain("pullback legs must share a codomain")
    X, Y, C = f.source, g.source, f.target
    common = np.zeros(C.order, dtype=bool)
    common[np.unique(f.images)] = True
    common &= np.isin(np.arange(C.order), g.images)
    Xp = closure(X, np.flatnonzero(common[f.images]))
    gens = []
    lift = {}
    for y in range(Y.order):
        lift.setdefault(int(g.images[y]), y)
    for x in Xp.generators:
        gens.append([x, lift[int(f.images[x])]])
    for k in g.kernel().generators:
        gens.append([0, k])
    if not gens:
        gens = [[0, 0]]
    G = Group(DirectProductBackend([X, Y]), np.asarray(gens, dtype=np.int64),
              max_order=max_order, name=name)
    fx = np.bincount(f.images, minlength=C.order)
    gy = np.bincount(g.images, minlength=C.order)
    expected = int((fx * gy).sum())
    if G.order != expected:
        raise AssertionError(f"pullback order {G.order} != fibre count {expected}")
    G.legs = (f, g)
    return G


def canonical_projection(X: Group, C: Group) -> Homomorphism:
    """The map C_m -> C_n (n | m) sending generator to generator."""
    return Homomorphism.from_generator_images(X, C, [C.generators[0]] * len(X.generators))


def wreath_top_projection(W: Group) -> Homomorphism:
    """beta: A wr B -> B with the base group as kernel."""
    B = W.top
    return Homomorphism(W, B, W.codes[:, 1].copy())


def y_group(p: int, m: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    """Y_p(m): pull-back of C_{p^m} -> C_p <- C_p wr C_p."""
    Cp = cyclic(p)
    W = wreath_regular(Cp, cyclic(p), max_order=max_order)
    beta = wreath_top_projection(W)
    # beta lands in W.top, a separate copy of C_p
    Cpm = cyclic(p ** m)
    f = Homomorphism.from_generator_images(Cpm, W.top, [W.top.generators[0]])
    Y = pullback(f, beta, max_order=max_order, name=f"Y_{p}({m})")
    Y.beta = beta
    return Y


def thm_a_fixture(p: int, q: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    """C_q x| C_{p^2}, the C_{p^2} generator acting by an automorphism of order p."""
    if (q - 1) % p or p == q:
        raise InvalidPrimes(f"need q = 1 mod p, got p={p}, q={q}")
    for r in range(2, q):
        if pow(r, p, q) == 1:
            break
    else:
        raise InvalidPrimes("no automorphism of order p")
    K = cyclic(q)
    H = cyclic(p * p)
    aut = automorphism_from_images(K, [K.pow(K.generators[0], r)])
    return semidirect(K, H, [aut], max_order=max_order, name=f"C{q}:C{p * p}")


def truncated_counterexample(p: int, i: int, s: int, max_order=DEFAULT_MAX_ORDER) -> Group:
    """C_{p^(i+1)} acting on (Z/p^s)[A]/(Delta), A the order-p image.

    The module has basis 1, a, ..., a^(p-2) with a^(p-1) = -(1 + ... + a^(p-2)).
    """
    r = p - 1
    K = abelian([p ** s] * r)
    g = K.generators
    images = []
    for j in range(r - 1):
        images.append(g[j + 1])
    last = 0
    for j in range(r):
        last = K.mul(last, K.inv(g[j]))
    images.append(last)
    aut = automorphism_from_images(K, images)
    H = cyclic(p ** (i + 1))
    return semidirect(K, H, [aut], max_order=max_order,
                      name=f"C{p ** (i + 1)}:(Z/{p ** s})[C{p}]/Delta")
