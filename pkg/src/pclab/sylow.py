"""Sylow subgroups, the cores O_p and O_p', and the O_{p',p,p'} tower."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core.group import (Group, Subgroup, closure, coset_labels,
                         normal_closure, normalizer, quotient)


def _memo(G: Group, key, build):
    if key not in G.memo:
        G.memo[key] = build()
    return G.memo[key]


def p_part_of_orders(G: Group, p: int) -> np.ndarray:
    """The p-part of every element order."""
    out = np.ones(G.order, dtype=np.int64)
    rest = G.element_orders.copy()
    while True:
        hit = rest % p == 0
        if not hit.any():
            return out
        out[hit] *= p
        rest[hit] //= p


def is_p_element(G: Group, p: int) -> np.ndarray:
    return p_part_of_orders(G, p) == G.element_orders


def is_p_prime_element(G: Group, p: int) -> np.ndarray:
    return G.element_orders % p != 0


def sylow_subgroup(G: Group, p: int) -> Subgroup:
    """A Sylow p-subgroup by normaliser ascent.

    Start from a p-element of maximal order (lowest index on ties); while the
    current p-subgroup H is too small, adjoin the lowest-index element of
    N_G(H) outside H whose image in N_G(H)/H has p-power order.
    """
    return _memo(G, ("sylow", p), lambda: _sylow(G, p))


def _sylow(G: Group, p: int, start: int | None = None) -> Subgroup:
    target = G.p_part(p)
    if target == 1:
        return G.trivial()
    pel = np.flatnonzero(is_p_element(G, p))
    if start is None:
        orders = G.element_orders[pel]
        start = int(pel[np.flatnonzero(orders == orders.max())[0]])
    H = closure(G, [start])
    ppart = p_part_of_orders(G, p)
    while H.order < target:
        N = normalizer(G, H)
        cand = N.members[~H.mask[N.members]]
        # y has p-power order modulo H iff y^(p-part of |y|) lies in H
        ok = np.zeros(len(cand), dtype=bool)
        for e in np.unique(ppart[cand]):
            sel = ppart[cand] == e
            ok[sel] = H.mask[G.power_map(int(e))[cand[sel]]]
        y = int(cand[np.flatnonzero(ok)[0]])
        H = closure(G, list(H.generators) + [y])
    assert H.order == target
    return H


def sylow_from(G: Group, p: int, start: int) -> Subgroup:
    """Sylow subgroup grown from a chosen p-element (for conjugacy tests)."""
    return _sylow(G, p, start)


def left_transversal(G: Group, H: Subgroup) -> np.ndarray:
    """Minimal representatives of the left cosets gH."""
    labels = coset_labels(G, H, side="left")
    return np.unique(labels)


def op_core(G: Group, p: int) -> Subgroup:
    """O_p(G): intersection of the Sylow p-subgroups g P g^-1, g running
    over a transversal of N_G(P)."""
    def build():
        P = sylow_subgroup(G, p)
        if P.is_trivial() or P.is_normal():
            return P
        N = normalizer(G, P)
        mask = P.mask.copy()
        for g in left_transversal(G, N):
            conj_mask = np.zeros(G.order, dtype=bool)
            conj_mask[G.conj(int(g), P.members)] = True
            mask &= conj_mask
        return closure(G, np.flatnonzero(mask))
    return _memo(G, ("Op", p), build)


def conjugacy_class(G: Group, x: int) -> np.ndarray:
    """All conjugates of x, by closing {x} under conjugation by generators."""
    seen = np.zeros(G.order, dtype=bool)
    seen[x] = True
    frontier = np.array([x])
    gens = np.asarray(G.generators, dtype=np.int64)
    while len(frontier):
        c = np.unique(G.conj(gens[:, None], frontier[None, :]).ravel())
        frontier = c[~seen[c]]
        seen[frontier] = True
    return np.flatnonzero(seen)


def op_prime_core(G: Group, p: int) -> Subgroup:
    """O_p'(G): the largest normal subgroup of order prime to p.

    Walk the p'-elements in index order; x lies in O_p' exactly when the
    normal closure of O together with x still has p'-order.  A rejected x
    rejects its whole conjugacy class.
    """
    def build():
        cand = is_p_prime_element(G, p)
        cand[0] = False
        O = G.trivial()
        skip = np.zeros(G.order, dtype=bool)
        for x in np.flatnonzero(cand):
            if O.mask[x] or skip[x]:
                continue
            N = normal_closure(G, list(O.generators) + [int(x)])
            if N.order % p:
                O = N
            else:
                skip[conjugacy_class(G, int(x))] = True
        return O
    return _memo(G, ("Op'", p), build)


@dataclass
class PNilpotency:
    yes: bool
    complement: Subgroup | None = None

    def __bool__(self):
        return self.yes


def is_p_nilpotent(G: Group, p: int) -> PNilpotency:
    """G is p-nilpotent iff the p'-elements generate a subgroup of order |G|_p'."""
    def build():
        H = closure(G, np.flatnonzero(is_p_prime_element(G, p)))
        if H.order == G.order // G.p_part(p):
            return PNilpotency(True, H)
        return PNilpotency(False)
    return _memo(G, ("pnil", p), build)


def p_prime_elements_closed(G: Group, p: int) -> bool:
    """Second route to p-nilpotency: the p'-elements form a subgroup."""
    S = np.flatnonzero(is_p_prime_element(G, p))
    count = len(S)
    if count != G.order // G.p_part(p):
        return False
    mask = np.zeros(G.order, dtype=bool)
    mask[S] = True
    for x in S:
        if not mask[G.mul(int(x), S)].all():
            return False
    return True


@dataclass
class CoreProfile:
    p: int
    sylow: Subgroup
    o_p: Subgroup
    o_p_prime: Subgroup
    o_p_prime_p: Subgroup
    o_p_prime_p_p_prime: Subgroup
    is_p_nilpotent: bool
    is_sandwich: bool

    def to_json(self) -> dict:
        def sub(S):
            return {"order": S.order, "generators": [int(g) for g in S.generators]}
        return {
            "p": self.p,
            "sylow": sub(self.sylow),
            "O_p": sub(self.o_p),
            "O_p'": sub(self.o_p_prime),
            "O_p',p": sub(self.o_p_prime_p),
            "O_p',p,p'": sub(self.o_p_prime_p_p_prime),
            "p_nilpotent": self.is_p_nilpotent,
            "sandwich": self.is_sandwich,
        }


def opp_tower(G: Group, p: int) -> CoreProfile:
    """O_p' <= O_{p',p} <= O_{p',p,p'} through explicit quotients."""
    def build():
        o1 = op_prime_core(G, p)
        Q1, pr1 = quotient(G, o1)
        o2 = pr1.preimage(op_core(Q1, p))
        Q2, pr2 = quotient(G, o2)
        o3 = pr2.preimage(op_prime_core(Q2, p))
        return CoreProfile(p, sylow_subgroup(G, p), op_core(G, p), o1, o2, o3,
                           bool(is_p_nilpotent(G, p)), o3.is_whole())
    return _memo(G, ("tower", p), build)


def upper_p_series(G: Group, p: int) -> list:
    """1 = P_0 <= N_0 <= P_1 <= N_1 <= ... with N_i/P_i = O_p'(G/P_i) and
    P_{i+1}/N_i = O_p(G/N_i).  G is p-soluble iff the last term is G."""
    def build():
        terms = [G.trivial()]
        want_prime = True
        stalls = 0
        while not terms[-1].is_whole() and stalls < 2:
            Q, pr = quotient(G, terms[-1])
            core = op_prime_core(Q, p) if want_prime else op_core(Q, p)
            nxt = pr.preimage(core)
            stalls = stalls + 1 if nxt == terms[-1] else 0
            terms.append(nxt)
            want_prime = not want_prime
        return terms
    return _memo(G, ("upper", p), build)


def is_p_soluble(G: Group, p: int) -> bool:
    return upper_p_series(G, p)[-1].is_whole()


def p_prime_normal_product(G: Group, P: Subgroup, O: Subgroup) -> Subgroup:
    """P.O as a subgroup (O normal)."""
    return closure(G, list(P.generators) + list(O.generators))
