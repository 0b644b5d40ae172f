"""Elementary abelian subgroups, the Quillen category and fusion control.

Two notions are kept apart on purpose.  *Elementary abelian control* asks
that H sees every elementary abelian p-subgroup up to conjugacy and every
conjugation map between them.  *p-fusion control* by N asks that whenever
g Q g^-1 <= P for Q <= P, the element g factors as c.n with c in C_G(Q)
and n in N.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core.group import Group, Subgroup, _extend, centralizer, closure, coset_labels
from .errors import CapExceeded, HypothesisFailed
from .series import is_pi_central_of_height
from .sylow import sylow_subgroup

DEFAULT_SUBGROUP_CAP = 20000
LEVELS = ("elements", "cyclic", "allSubgroupsUnderCap")


# -- subgroup enumeration ---------------------------------------------------


def _grow(G: Group, base: Subgroup, x: int) -> Subgroup:
    mask = base.mask.copy()
    members = [base.members]
    gens = list(base.generators)
    _extend(G, mask, members, gens, int(x))
    sub = Subgroup(G, np.flatnonzero(mask), gens=gens)
    sub.__dict__["mask"] = mask
    return sub


def elementary_abelian_subgroups(G: Group, p: int, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    """All elementary abelian p-subgroups (trivial one included), ordered by
    size and then by member list.

    Each subgroup E of rank r+1 arises as <E', x> from a rank-r subgroup E'
    and an order-p element x centralising E'.
    """
    order_p = G.element_orders == p
    level = [G.trivial()]
    found = {level[0].key: level[0]}
    while level:
        nxt = {}
        for E in level:
            cmask = order_p.copy()
            for s in E.generators:
                cmask &= G.mul(s, G.all_elements) == G.mul(G.all_elements, s)
            cmask &= ~E.mask
            done = np.zeros(G.order, dtype=bool)
            for x in np.flatnonzero(cmask):
                if done[x]:
                    continue
                F = _grow(G, E, x)
                done[F.members] = True
                if F.key not in found and F.key not in nxt:
                    nxt[F.key] = F
                    if len(found) + len(nxt) > cap:
                        raise CapExceeded(
                            f"more than {cap} elementary abelian subgroups")
        found.update(nxt)
        level = list(nxt.values())
    return sorted(found.values(), key=lambda E: (E.order, E.members.tolist()))


def p_subgroups(G: Group, P: Subgroup, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    """Every subgroup of the p-group P, by order then member list.

    A subgroup K of order p^(r+1) contains a normal subgroup H of index p, so
    K = <H, x> with x normalising H and x^p in H.
    """
    level = [G.trivial()]
    found = {level[0].key: level[0]}
    if P.order == 1:
        return level
    p = min(d for d in range(2, P.order + 1) if P.order % d == 0)
    pw = G.power_map(p)
    while level:
        nxt = {}
        for H in level:
            norm = P.mask.copy()
            for s in H.generators:
                norm &= H.mask[G.conj(G.all_elements, s)]
            cand = norm & ~H.mask & H.mask[pw]
            done = np.zeros(G.order, dtype=bool)
            for x in np.flatnonzero(cand):
                if done[x]:
                    continue
                K = _grow(G, H, x)
                done[K.members] = True
                if K.key not in found and K.key not in nxt:
                    nxt[K.key] = K
                    if len(found) + len(nxt) > cap:
                        raise CapExceeded(f"more than {cap} subgroups of P")
        found.update(nxt)
        level = list(nxt.values())
    return sorted(found.values(), key=lambda E: (E.order, E.members.tolist()))


def subgroups_of_order(G: Group, P: Subgroup, order: int, cap: int = DEFAULT_SUBGROUP_CAP) -> list:
    return [S for S in p_subgroups(G, P, cap) if S.order == order]


# -- the Quillen category ---------------------------------------------------


def _conj_rows(G: Group, conjugators: np.ndarray, gens) -> np.ndarray:
    gens = np.asarray(gens, dtype=np.int64)
    if not len(gens):
        return np.zeros((len(conjugators), 0), dtype=np.int64)
    return G.conj(conjugators[:, None], gens[None, :])


@dataclass
class QuillenCategory:
    """Objects are elementary abelian p-subgroups; ``morphisms[(i, j)]`` is
    the set of maps E_i -> E_j induced by conjugation, each map recorded as
    the tuple of images of E_i's generators."""

    group: Group
    p: int
    objects: list
    morphisms: dict
    witnesses: dict = field(default_factory=dict)

    def object_index(self, E: Subgroup) -> int:
        return self._index[E.key]

    def __post_init__(self):
        self._index = {E.key: i for i, E in enumerate(self.objects)}

    def count(self) -> int:
        return sum(len(v) for v in self.morphisms.values())

    def check_composition(self) -> bool:
        """Identities exist and composites of stored maps are stored maps."""
        G = self.group
        for i, E in enumerate(self.objects):
            if tuple(E.generators) not in self.morphisms.get((i, i), set()):
                return False
        for (i, j), maps in self.morphisms.items():
            for (j2, k), maps2 in self.morphisms.items():
                if j2 != j:
                    continue
                target = self.morphisms.get((i, k), set())
                for f in maps:
                    for h in maps2:
                        g = self.witnesses[(j, k, h)]
                        comp = tuple(int(y) for y in G.conj(g, np.asarray(f, dtype=np.int64)))
                        if comp not in target:
                            return False
        return True

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "objects": [{"order": E.order, "generators": [int(g) for g in E.generators]}
                        for E in self.objects],
            "morphisms": [{"source": i, "target": j, "maps": sorted(list(m) for m in maps)}
                          for (i, j), maps in sorted(self.morphisms.items())],
            "counts": {"objects": len(self.objects), "morphisms": self.count()},
        }


def quillen_category(G: Group, p: int, cap: int = DEFAULT_SUBGROUP_CAP,
                     conjugators: Subgroup | None = None, objects=None) -> QuillenCategory:
    """The category C_G; with ``conjugators = H`` only h in H induce maps."""
    objs = objects if objects is not None else elementary_abelian_subgroups(G, p, cap)
    C = conjugators.members if conjugators is not None else G.all_elements
    masks = np.stack([E.mask for E in objs]) if objs else np.zeros((0, G.order), bool)
    morphisms: dict = {}
    witnesses: dict = {}
    for i, E in enumerate(objs):
        rows = _conj_rows(G, C, E.generators)
        uniq, first = np.unique(rows, axis=0, return_index=True)
        for row, f in zip(uniq, first):
            g = int(C[f])
            image = G.conj(g, E.members)
            contains = masks[:, image].all(axis=1)
            key = tuple(int(y) for y in row)
            for j in np.flatnonzero(contains):
                morphisms.setdefault((i, int(j)), set()).add(key)
                witnesses.setdefault((i, int(j), key), g)
    return QuillenCategory(G, p, objs, morphisms, witnesses)


def controls_elementary_abelian_fusion(H: Subgroup, G: Group, p: int,
                                       cap: int = DEFAULT_SUBGROUP_CAP) -> bool:
    """True iff the inclusion C_H -> C_G is an equivalence of categories.

    Checks (i) every elementary abelian p-subgroup of G is G-conjugate into H
    and (ii) for E, E' <= H, conjugation by G and by H induce the same maps
    E -> E'.
    """
    if H.order % G.p_part(p):
        raise HypothesisFailed("H must contain a Sylow p-subgroup")
    objs = elementary_abelian_subgroups(G, p, cap)
    allg = G.all_elements
    for E in objs:
        gens = np.asarray(E.generators, dtype=np.int64)
        if not len(gens):
            continue
        inside = H.mask[_conj_rows(G, allg, gens)].all(axis=1)
        if not inside.any():
            return False
    inner = [E for E in objs if E <= H]
    cat_g = quillen_category(G, p, conjugators=None, objects=inner)
    cat_h = quillen_category(G, p, conjugators=H, objects=inner)
    return cat_g.morphisms == cat_h.morphisms


# -- p-fusion ---------------------------------------------------------------


@dataclass
class FusionVerdict:
    controls: bool
    level: str
    witness: dict | None = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"controls": self.controls, "level": self.level,
                "witness": self.witness, "checked": self.checked}


def sylow_inside(G: Group, N: Subgroup, p: int) -> Subgroup:
    """A Sylow p-subgroup of G contained in N (N must contain one)."""
    if N.is_whole():
        return sylow_subgroup(G, p)
    Ng = N.as_group()
    Pn = sylow_subgroup(Ng, p)
    P = Subgroup(G, Ng.embedding[Pn.members])
    if P.order != G.p_part(p):
        raise HypothesisFailed("N does not contain a Sylow p-subgroup of G")
    return P


class _FusionContext:
    def __init__(self, G: Group, N: Subgroup, P: Subgroup):
        self.G, self.N, self.P = G, N, P
        self.labels = coset_labels(G, N, side="left")

    def violations(self, gens) -> np.ndarray:
        """Elements g with g Q g^-1 <= P but g outside C_G(Q) N, Q = <gens>."""
        G = self.G
        gens = np.asarray(gens, dtype=np.int64)
        allg = G.all_elements
        conj = _conj_rows(G, allg, gens)
        transports = self.P.mask[conj].all(axis=1)
        cent = (conj == gens[None, :]).all(axis=1)
        good_labels = np.zeros(G.order, dtype=bool)
        good_labels[self.labels[cent]] = True
        return np.flatnonzero(transports & ~good_labels[self.labels])


def _witness(P, Q_gens, Q_members, g, x=None):
    w = {"Q_generators": [int(q) for q in Q_gens], "Q_order": int(len(Q_members)), "g": int(g)}
    if x is not None:
        w["element"] = int(x)
    return w


def controls_p_fusion(N: Subgroup, G: Group, p: int, level: str = "cyclic",
                      cap: int = DEFAULT_SUBGROUP_CAP) -> FusionVerdict:
    """Does N control p-fusion in G, tested over the requested family of Q <= P?"""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    P = sylow_inside(G, N, p)
    ctx = _FusionContext(G, N, P)
    if level == "elements":
        return _elements_level(ctx)
    verdict = _cyclic_level(ctx)
    if level == "cyclic" or not verdict.controls:
        verdict.level = level
        return verdict
    checked = verdict.checked
    for Q in p_subgroups(G, P, cap):
        if Q.order == 1:
            continue
        bad = ctx.violations(Q.generators)
        checked += 1
        if len(bad):
            return FusionVerdict(False, level, _witness(P, Q.generators, Q.members, bad[0]), checked)
    return FusionVerdict(True, level, None, checked)


def _cyclic_level(ctx: _FusionContext) -> FusionVerdict:
    G, P = ctx.G, ctx.P
    seen = np.zeros(G.order, dtype=bool)
    checked = 0
    for x in P.members[1:]:
        if seen[x]:
            continue
        Q = closure(G, [int(x)])
        # generators of the same cyclic group give the same test
        seen[Q.members[G.element_orders[Q.members] == G.element_orders[x]]] = True
        checked += 1
        bad = ctx.violations([int(x)])
        if len(bad):
            return FusionVerdict(False, "cyclic", _witness(P, [x], Q.members, bad[0]), checked)
    return FusionVerdict(True, "cyclic", None, checked)


def _elements_level(ctx: _FusionContext) -> FusionVerdict:
    """x, y in P conjugate in G must already be conjugate in N."""
    G, N, P = ctx.G, ctx.N, ctx.P
    allg = G.all_elements
    done = np.zeros(G.order, dtype=bool)
    checked = 0
    for x in P.members[1:]:
        if done[x]:
            continue
        g_class = G.conj(allg, int(x))
        n_class = np.unique(G.conj(N.members, int(x)))
        done[n_class[P.mask[n_class]]] = True
        checked += 1
        in_p = P.mask[g_class]
        n_mask = np.zeros(G.order, dtype=bool)
        n_mask[n_class] = True
        bad = np.flatnonzero(in_p & ~n_mask[g_class])
        if len(bad):
            g = int(allg[bad[0]])
            return FusionVerdict(False, "elements", _witness(P, [x], closure(G, [int(x)]).members,
                                                             g, x), checked)
    return FusionVerdict(True, "elements", None, checked)


def verify_fusion_witness(G: Group, N: Subgroup, p: int, witness: dict) -> bool:
    """Independent recheck of a negative verdict: Q <= P, g Q g^-1 <= P and g
    is not a product c.n, scanning every pair (c, n)."""
    P = sylow_inside(G, N, p)
    Q = closure(G, witness["Q_generators"])
    g = witness["g"]
    if not Q <= P:
        return False
    if not P.mask[G.conj(g, Q.members)].all():
        return False
    C = centralizer(G, Q)
    products = G.mul(C.members[:, None], N.members[None, :]).ravel()
    return not bool((products == g).any())


# -- Prop. "G = P.C_G(E)" -----------------------------------------------------


@dataclass
class FactorisationResult:
    holds: bool
    failing: Subgroup | None = None
    checked: int = 0


def prop_fungr_check(G: Group, p: int, k: int, cap: int = DEFAULT_SUBGROUP_CAP) -> FactorisationResult:
    """For a p-central G of height k: G = P.C_G(E) for every elementary
    abelian p-subgroup E, by the order count |P||C|/|P cap C| = |G|."""
    if not is_pi_central_of_height(G, p, 1, k):
        raise HypothesisFailed(f"G is not p-central of height {k}")
    P = sylow_subgroup(G, p)
    objs = elementary_abelian_subgroups(G, p, cap)
    for E in objs:
        C = centralizer(G, E)
        inter = int(P.mask[C.members].sum())
        if P.order * C.order // inter != G.order:
            return FactorisationResult(False, E, len(objs))
    return FactorisationResult(True, None, len(objs))
