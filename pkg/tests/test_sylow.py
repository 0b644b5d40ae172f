import numpy as np
import pytest

from pclab.core.group import Subgroup, commutator
from pclab.sylow import (is_p_nilpotent, is_p_soluble, op_core, op_prime_core, opp_tower,
                         p_prime_elements_closed, sylow_from, sylow_subgroup, upper_p_series)
from pclab.series import is_pi_central_of_height

import oracles
from conftest import group

MIXED = ["sl2zmod(5,1)", "sl2zmod(7,1)", "thmafix(3,7)", "thmafix(5,11)",
         "semidirect(cyclic(7),cyclic(9),[[g0^2]])", "dirprod(cyclic(7),heis(3))",
         "semidirect(heis(5),cyclic(4),[[g0^2,g1^3]])", "perm(4,\"(0 1 2 3)\",\"(0 1)\")"]


def test_sylow_examples():
    assert sylow_subgroup(group("heis(3)"), 3).is_whole()
    assert sylow_subgroup(group("sl2zmod(5,1)"), 2).order == 8
    assert sylow_subgroup(group("sl2zmod(5,2)"), 5).order == 625


@pytest.mark.parametrize("expr", MIXED)
def test_sylow_order_and_conjugacy(expr):
    G = group(expr)
    for p in G.prime_factors:
        P = sylow_subgroup(G, p)
        assert P.order == oracles.p_part(G.order, p)
        ref = oracles.sylow_by_ascent(G, p)
        conj = {c.tobytes() for c in oracles.conjugates(G, ref)}
        assert P.members.tobytes() in conj
        # different starting elements land in the same conjugacy class
        pel = np.flatnonzero(oracles.orders(G) == p)
        for start in pel[:: max(1, len(pel) // 5)]:
            Q = sylow_from(G, p, int(start))
            assert start in Q and Q.members.tobytes() in conj


@pytest.mark.parametrize("expr", MIXED)
def test_cores_against_oracles(expr):
    G = group(expr)
    for p in G.prime_factors:
        assert np.array_equal(op_core(G, p).members, oracles.op_core(G, p))
        assert np.array_equal(op_prime_core(G, p).members, oracles.op_prime_core(G, p))


@pytest.mark.parametrize("expr", MIXED[:6])
def test_cores_contain_every_scanned_normal_subgroup(expr):
    G = group(expr)
    normals = oracles.normal_subgroups_from_classes(G)
    for p in G.prime_factors:
        Op, Opp = op_core(G, p), op_prime_core(G, p)
        assert Op.is_normal() and Opp.is_normal()
        for N in normals:
            if oracles.p_part(len(N), p) == len(N):
                assert Op.mask[N].all()
            if len(N) % p:
                assert Opp.mask[N].all()


def test_core_examples():
    S = group("sl2zmod(5,1)")
    assert op_core(S, 5).is_trivial()
    assert op_core(S, 2).order == 2 and op_prime_core(S, 2).is_trivial()
    G = group("semidirect(cyclic(7),cyclic(9),[[g0^2]])")
    assert op_core(G, 3).order == 3
    assert op_prime_core(G, 3).order == 7
    D = group("dirprod(cyclic(7),heis(3))")
    assert op_prime_core(D, 3).order == 7


@pytest.mark.parametrize("expr", MIXED)
def test_p_nilpotency_two_routes(expr):
    G = group(expr)
    for p in G.prime_factors:
        res = is_p_nilpotent(G, p)
        assert res.yes == p_prime_elements_closed(G, p)
        if res.yes:
            C = res.complement
            assert C.is_normal() and C.order * oracles.p_part(G.order, p) == G.order


def test_p_nilpotency_examples():
    assert is_p_nilpotent(group("heis(5)"), 5).yes
    assert not is_p_nilpotent(group("sl2zmod(5,1)"), 2).yes
    res = is_p_nilpotent(group("semidirect(cyclic(7),cyclic(9),[[g0^2]])"), 3)
    assert res.yes and res.complement.order == 7


@pytest.mark.parametrize("expr", MIXED)
def test_odd_p_central_groups_are_p_nilpotent(expr):
    G = group(expr)
    for p in G.prime_factors:
        if p % 2 and any(is_pi_central_of_height(G, p, 1, k) for k in range(1, 7)):
            assert is_p_nilpotent(G, p).yes


def test_tower():
    prof = opp_tower(group("heis(3)"), 3)
    assert prof.is_sandwich and prof.o_p_prime_p.is_whole()
    prof = opp_tower(group("sl2zmod(5,1)"), 2)
    assert prof.o_p_prime.is_trivial() and prof.o_p.order == 2 and not prof.is_sandwich
    G = group("semidirect(heis(5),cyclic(4),[[g0^2,g1^3]])")
    prof = opp_tower(G, 5)
    assert prof.is_sandwich
    assert prof.o_p_prime <= prof.o_p_prime_p <= prof.o_p_prime_p_p_prime
    assert all(S.is_normal() for S in (prof.o_p_prime, prof.o_p_prime_p, prof.o_p_prime_p_p_prime))


def test_p_solubility():
    S = group("sl2zmod(5,1)")
    for p in (2, 3, 5):
        assert not is_p_soluble(S, p)
    assert is_p_soluble(group("perm(4,\"(0 1 2 3)\",\"(0 1)\")"), 3)
    assert is_p_soluble(group("thmafix(5,11)"), 5)
    series = upper_p_series(group("sl2zmod(3,1)"), 3)
    assert series[-1].is_whole()
    for a, b in zip(series, series[1:]):
        assert a <= b and b.is_normal()


def test_soluble_groups_are_p_soluble_for_every_p():
    for expr in MIXED[2:]:
        G = group(expr)
        derived = [G.whole()]
        while not derived[-1].is_trivial():
            nxt = commutator(G, derived[-1], derived[-1])
            if nxt == derived[-1]:
                break
            derived.append(nxt)
        if derived[-1].is_trivial():
            assert all(is_p_soluble(G, p) for p in G.prime_factors)
