"""Isomorphism testing for small groups.

An invariant prescreen rejects most pairs outright.  Otherwise images of a
small generating set of P are chosen by backtracking, each partial choice
being extended along the Cayley graph of the generated subgroup so that
inconsistencies show up as early as possible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group import Group, Homomorphism, center, closure, commutator


@dataclass
class IsoResult:
    verdict: str                       # "yes" | "no" | "inconclusive"
    witness: Homomorphism | None = None
    reason: str = ""
    nodes: int = 0

    def __bool__(self):
        return self.verdict == "yes"


def _class_sizes(G: Group) -> np.ndarray:
    """Centraliser order of every element."""
    if "centraliser_sizes" in G.memo:
        return G.memo["centraliser_sizes"]
    allx = G.all_elements
    out = np.empty(G.order, dtype=np.int64)
    for x in range(G.order):
        out[x] = int((G.mul(x, allx) == G.mul(allx, x)).sum())
    G.memo["centraliser_sizes"] = out
    return out


def invariants(G: Group) -> dict:
    from ..series import agemo, omega, zeta_series

    orders, counts = np.unique(G.element_orders, return_counts=True)
    inv = {
        "order": G.order,
        "element_orders": dict(zip(orders.tolist(), counts.tolist())),
        "derived": commutator(G, G.whole(), G.whole()).order,
        "center": center(G).order,
        "zeta": zeta_series(G).orders(),
    }
    for p in sorted(G.prime_factors):
        inv[f"omega1_{p}"] = omega(G, p, 1).order
        inv[f"agemo1_{p}"] = agemo(G, p, 1).order
    return inv


def small_generating_set(G: Group) -> list:
    """For a p-group, lifts of a basis of G/Phi(G); otherwise greedy."""
    primes = list(G.prime_factors)
    if len(primes) == 1:
        from ..series import agemo
        p = primes[0]
        phi = closure(G, list(agemo(G, p, 1).generators)
                      + list(commutator(G, G.whole(), G.whole()).generators))
        gens = []
        sub = phi
        for x in range(G.order):
            if not sub.mask[x]:
                gens.append(x)
                sub = closure(G, list(sub.generators) + [x])
                if sub.is_whole():
                    break
        # lifts of a Frattini basis generate G
        return gens
    return list(closure(G, G.all_elements).generators)


def _extend_map(P: Group, Q: Group, gens, imgs):
    """Extend x_i -> y_i over <x_i>; None if the assignment is inconsistent
    or not injective."""
    phi = np.full(P.order, -1, dtype=np.int64)
    phi[0] = 0
    frontier = np.array([0])
    gens = np.asarray(gens, dtype=np.int64)
    imgs = np.asarray(imgs, dtype=np.int64)
    while len(frontier):
        nxt = P.mul(gens[:, None], frontier[None, :]).ravel()
        img = Q.mul(imgs[:, None], phi[frontier][None, :]).ravel()
        known = phi[nxt] >= 0
        if (phi[nxt][known] != img[known]).any():
            return None
        fresh = ~known
        phi[nxt[fresh]] = img[fresh]
        if (phi[nxt] != img).any():
            return None
        frontier = np.unique(nxt[fresh])
    assigned = phi[phi >= 0]
    if len(np.unique(assigned)) != len(assigned):
        return None
    return phi


def is_isomorphic(P: Group, Q: Group, budget: int = 200000) -> IsoResult:
    if P.order != Q.order:
        return IsoResult("no", reason="orders differ")
    ip, iq = invariants(P), invariants(Q)
    for key in ip:
        if ip[key] != iq.get(key):
            return IsoResult("no", reason=f"invariant {key} differs")
    gens = small_generating_set(P)
    cp, cq = _class_sizes(P), _class_sizes(Q)
    cands = []
    for x in gens:
        sel = (Q.element_orders == P.element_orders[x]) & (cq == cp[x])
        cands.append(np.flatnonzero(sel))
    order = sorted(range(len(gens)), key=lambda i: len(cands[i]))
    gens = [gens[i] for i in order]
    cands = [cands[i] for i in order]
    nodes = 0

    def search(t, chosen):
        nonlocal nodes
        if t == len(gens):
            return chosen
        for y in cands[t]:
            nodes += 1
            if nodes > budget:
                raise _Budget
            trial = chosen + [int(y)]
            phi = _extend_map(P, Q, gens[:t + 1], trial)
            if phi is None:
                continue
            found = search(t + 1, trial)
            if found is not None:
                return found
        return None

    try:
        images = search(0, [])
    except _Budget:
        return IsoResult("inconclusive", reason="budget exhausted", nodes=nodes)
    if images is None:
        return IsoResult("no", reason="no generator assignment extends", nodes=nodes)
    phi = _extend_map(P, Q, gens, images)
    hom = Homomorphism(P, Q, phi)
    return IsoResult("yes", hom, nodes=nodes)


class _Budget(Exception):
    pass
