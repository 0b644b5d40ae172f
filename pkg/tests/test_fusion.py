import numpy as np
import pytest

from pclab.core.group import Subgroup, centralizer, closure, normalizer
from pclab.errors import CapExceeded, HypothesisFailed
from pclab.fusion import (controls_elementary_abelian_fusion, controls_p_fusion,
                          elementary_abelian_subgroups, p_subgroups, prop_fungr_check,
                          quillen_category, subgroups_of_order, verify_fusion_witness)
from pclab.sylow import sylow_subgroup

import oracles
from conftest import group


def _subsets_closed_under_mul(G, p):
    """All elementary abelian subgroups by brute force over subsets of
    Omega_1-elements of a small abelian or exponent-p group."""
    elts = [x for x in range(G.order) if oracles.orders(G)[x] in (1, p)]
    found = set()
    for x in elts:
        for y in elts:
            S = oracles.bfs_closure(G, [x, y])
            if (oracles.powers(G, p)[S] == 0).all() and all(
                    G.mul(a, b) == G.mul(b, a) for a in S for b in S):
                found.add(S.tobytes())
    return found


@pytest.mark.parametrize("expr,p,count", [("elemab(3,2)", 3, 6), ("cyclic(27)", 3, 2),
                                          ("heis(3)", 3, None)])
def test_elementary_abelian_subgroups(expr, p, count):
    G = group(expr)
    objs = elementary_abelian_subgroups(G, p)
    if count is not None:
        assert len(objs) == count
    keys = {E.members.tobytes() for E in objs}
    assert len(keys) == len(objs)
    assert {k for k in keys if len(np.frombuffer(k, dtype=np.int64)) <= p ** 2} == \
        _subsets_closed_under_mul(G, p)
    for E in objs:
        assert E.as_group().is_abelian() and (G.power_map(p)[E.members] == 0).all()


def test_heisenberg_has_elementary_abelian_of_order_p_squared():
    objs = elementary_abelian_subgroups(group("heis(3)"), 3)
    assert max(E.order for E in objs) == 9


def test_subgroup_counts_in_elementary_abelian():
    G = group("elemab(3,3)")
    P = G.whole()
    # Gaussian binomials [3 choose k]_3 = 1, 13, 13, 1
    assert [len(subgroups_of_order(G, P, 3 ** k)) for k in range(4)] == [1, 13, 13, 1]
    assert len(p_subgroups(G, P)) == 28
    with pytest.raises(CapExceeded):
        p_subgroups(G, P, cap=5)


def test_quillen_category_axioms():
    for expr, p in [("sl2zmod(5,1)", 2), ("heis(3)", 3), ("abelian([9,3])", 3), ("thmafix(3,7)", 3)]:
        G = group(expr)
        Q = quillen_category(G, p)
        assert Q.check_composition()
    A = group("abelian([9,3])")
    Q = quillen_category(A, 3)
    for (i, j), maps in Q.morphisms.items():
        assert maps == {tuple(Q.objects[i].generators)}
    S = group("sl2zmod(5,1)")
    Q = quillen_category(S, 2)
    nontrivial = [E for E in Q.objects if E.order > 1]
    assert len(nontrivial) == 1 and nontrivial[0].order == 2


def test_elementary_abelian_control():
    G = group("thmafix(3,7)")
    P = sylow_subgroup(G, 3)
    assert controls_elementary_abelian_fusion(G.whole(), G, 3)
    assert controls_elementary_abelian_fusion(P, G, 3)
    H = group("semidirect(heis(5),cyclic(4),[[g0^2,g1^3]])")
    N = normalizer(H, sylow_subgroup(H, 5))
    assert controls_elementary_abelian_fusion(N, H, 5)


def _witness_by_exhaustion(G, N, p, w):
    """The witness's g must lie outside C_G(Q) N, checked element by element."""
    Q = closure(G, w["Q_generators"])
    P = sylow_subgroup(G, p)
    g = w["g"]
    conj = G.mul(G.mul(g, Q.members), G.inv(g))
    if not P.mask[conj].all():
        return False
    C = centralizer(G, Q)
    prods = np.unique(G.mul(C.members[:, None], N.members[None, :]).ravel())
    return g not in set(prods.tolist())


def test_sl2_mod_25_fusion_refuted_with_witness():
    G = group("sl2zmod(5,2)")
    N = normalizer(G, sylow_subgroup(G, 5))
    v = controls_p_fusion(N, G, 5, "cyclic")
    assert not v.controls
    assert verify_fusion_witness(G, N, 5, v.witness)
    assert _witness_by_exhaustion(G, N, 5, v.witness)


def test_fusion_ladder():
    for expr, p in [("semidirect(heis(5),cyclic(4),[[g0^2,g1^3]])", 5), ("thmafix(3,7)", 3),
                    ("sl2zmod(5,1)", 2), ("sl2zmod(7,1)", 3)]:
        G = group(expr)
        N = normalizer(G, sylow_subgroup(G, p))
        levels = [controls_p_fusion(N, G, p, lvl).controls
                  for lvl in ("allSubgroupsUnderCap", "cyclic", "elements")]
        assert levels[0] <= levels[1] <= levels[2]
        assert levels[1] == levels[2]  # C_G(x) = C_G(<x>): two routes, one answer
        for lvl, ok in zip(("allSubgroupsUnderCap", "cyclic", "elements"), levels):
            if not ok:
                w = controls_p_fusion(N, G, p, lvl).witness
                assert verify_fusion_witness(G, N, p, w)


def test_p_group_controls_its_own_fusion():
    G = group("heis(3)")
    assert controls_p_fusion(G.whole(), G, 3, "allSubgroupsUnderCap").controls


def test_factorisation():
    assert prop_fungr_check(group("abelian([9,3])"), 3, 1).holds
    G = group("thmafix(3,7)")
    res = prop_fungr_check(G, 3, 1)
    assert res.holds
    assert controls_elementary_abelian_fusion(sylow_subgroup(G, 3), G, 3)
    assert prop_fungr_check(group("sl2zmod(5,1)"), 2, 1).holds
    with pytest.raises(HypothesisFailed):
        prop_fungr_check(group("sl2zmod(5,2)"), 5, 1)
