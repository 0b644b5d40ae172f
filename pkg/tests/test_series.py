import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pclab.core.group import center, commutator, iterated_commutator, join, quotient
from pclab.errors import InvalidHeight, OddPrimeRequired
from pclab.series import (agemo, central_height, is_k_powerful, is_pi_central_of_height,
                          is_power_surjective, k_elementary_p_length, lambda_graded,
                          lambda_series, lower_p_central_series, m_graded, m_series, omega,
                          omega_exact_set, power_congruence, pth_root, zeta_series)

import oracles
from conftest import group

SMALL_P_GROUPS = ["heis(3)", "modular(3,3)", "wreath(cyclic(3),cyclic(3))", "ypm(3,2)",
                  "heis(5)", "abelian([9,3])", "pl(3,[2,2])", "sl2sylow(5,2)"]


@pytest.mark.parametrize("expr", SMALL_P_GROUPS)
def test_omega_and_agemo_against_power_scans(expr):
    G = group(expr)
    p = min(G.prime_factors)
    for i in (1, 2):
        assert np.array_equal(omega(G, p, i).members, oracles.omega(G, p, i))
        assert np.array_equal(agemo(G, p, i).members, oracles.agemo(G, p, i))


@pytest.mark.parametrize("expr", SMALL_P_GROUPS + ["sl2zmod(5,1)", "thmafix(3,7)"])
def test_zeta_against_definition(expr):
    G = group(expr)
    zs = zeta_series(G)
    ref = oracles.upper_central(G)
    assert [t.order for t in zs.terms] == [len(t) for t in ref]
    for a, b in zip(zs.terms, ref):
        assert np.array_equal(a.members, b)


def test_basic_examples():
    assert omega(group("elemab(3,2)"), 3, 1).is_whole()
    assert omega(group("cyclic(27)"), 3, 1).order == 3
    assert agemo(group("cyclic(9)"), 3, 1).order == 3
    assert agemo(group("elemab(5,3)"), 5, 1).is_trivial()
    assert agemo(group("heis(3)"), 3, 1).is_trivial()
    assert is_power_surjective(group("cyclic(125)"), 5)
    H = group("heis(5)")
    assert [t.order for t in zeta_series(H).terms] == [1, 5, 125]
    S = group("sl2zmod(5,1)")
    assert [t.order for t in zeta_series(S).terms] == [1, 2]


def test_wreath_power_structure_matches_census():
    W = group("wreath(cyclic(3),cyclic(3))")
    ex = omega_exact_set(W, 3, 1)
    raw = int((oracles.powers(W, 3) == 0).sum())
    assert ex.equal == (raw == omega(W, 3, 1).order)
    cubes = np.unique(oracles.powers(W, 3))
    assert is_power_surjective(W, 3) == (len(cubes) == len(oracles.agemo(W, 3, 1)))


def test_pth_root():
    G = group("abelian([9,3])")
    assert pth_root(G, G.whole(), 3).is_whole()
    assert pth_root(G, G.trivial(), 3) == omega(G, 3, 1)


@pytest.mark.parametrize("expr,p,height", [
    ("sl2zmod(5,1)", 2, 1), ("sl2zmod(7,1)", 2, 1), ("sl2sylow(5,2)", 5, 3),
    ("abelian([9,3])", 3, 1), ("heis(5)", 5, 2),
])
def test_central_heights(expr, p, height):
    G = group(expr)
    assert central_height(G, p, 1) == height
    assert is_pi_central_of_height(G, p, 1, height)
    if height > 1:
        assert not is_pi_central_of_height(G, p, 1, height - 1)


def test_height_is_monotone_in_k():
    G = group("sl2sylow(5,2)")
    flags = [is_pi_central_of_height(G, 5, 1, k) for k in range(1, 8)]
    assert flags == sorted(flags)


def test_non_nilpotent_group_has_no_height():
    G = group("sl2zmod(5,1)")
    assert central_height(G, 5, 1) is None


# -- lambda series --------------------------------------------------------


def _lambda_oracle(P, p, k, n_max):
    """Direct recursion from the definition, written without the library's
    stabilisation logic."""
    whole = P.whole()
    terms = {}

    def lam(n):
        if n <= 1:
            return whole
        if n not in terms:
            terms[n] = join(P, agemo(P, p, 1, lam(n - k)), commutator(P, lam(n - 1), whole))
        return terms[n]
    return [lam(n) for n in range(1, n_max + 1)]


@pytest.mark.parametrize("expr,p", [("cyclic(27)", 3), ("heis(5)", 5), ("ypm(3,2)", 3),
                                    ("sl2sylow(5,2)", 5), ("modular(5,3)", 5)])
def test_lambda_series_against_recursion(expr, p):
    P = group(expr)
    for k in range(1, p):
        ls = lambda_series(P, p, k)
        ref = _lambda_oracle(P, p, k, ls.last_index + 3)
        for n, t in enumerate(ref, start=1):
            assert ls[n] == t
        for n in range(1, ls.last_index + 1):
            assert ls[n + 1] <= ls[n] and ls[n].is_normal()


def test_lambda_cyclic_interleaving():
    P = group("cyclic(125)")
    ls = lambda_series(P, 5, 2)
    assert [ls[n].order for n in range(1, 8)] == [125, 25, 25, 5, 5, 1, 1]
    assert k_elementary_p_length(P, 5, 1) == 3


def test_lambda_k1_is_lower_p_central():
    for expr, p in [("ypm(3,2)", 3), ("heis(5)", 5), ("sl2sylow(5,2)", 5)]:
        P = group(expr)
        lp = lower_p_central_series(P, p)
        ls = lambda_series(P, p, 1)
        for n in range(1, max(lp.last_index, ls.last_index) + 2):
            assert lp[n] == ls[n]


@pytest.mark.parametrize("p,r", [(3, 2), (5, 3)])
def test_elementary_abelian_lengths(p, r):
    P = group(f"elemab({p},{r})")
    for k in range(1, p):
        assert k_elementary_p_length(P, p, k) == 1
    gr = lambda_graded(P, p, 1)
    assert list(gr.layers) == [1] and not gr.t_maps[1].any()
    assert is_k_powerful(P, p, 1)


def test_k_powerful():
    assert is_k_powerful(group("cyclic(81)"), 3, 1)
    assert not is_k_powerful(group("wreath(cyclic(3),cyclic(3))"), 3, 1)


def test_invalid_heights():
    P = group("cyclic(9)")
    with pytest.raises(InvalidHeight):
        lambda_series(P, 3, 3)
    with pytest.raises(InvalidHeight):
        lambda_graded(P, 3, 2)
    with pytest.raises(OddPrimeRequired):
        m_series(group("cyclic(8)"), 2)


@pytest.mark.parametrize("expr,p", [("heis(5)", 5), ("sl2sylow(5,2)", 5), ("ypm(3,2)", 3)])
def test_graded_objects_do_not_depend_on_representatives(expr, p):
    P = group(expr)
    rng = np.random.default_rng(7)
    for k in range(1, p - 1):
        gr = lambda_graded(P, p, k)
        assert gr.rederive(rng)
        assert sum(gr.dims().values()) == round(np.log(P.order) / np.log(p))


# -- the M-series -------------------------------------------------------------


def test_m_series_elementary_abelian():
    P = group("elemab(5,2)")
    ms = m_series(P, 5)
    assert ms[4] == omega(P, 5, 1) == P.whole()


def test_m_series_heisenberg_by_hand():
    P = group("heis(5)")
    ms = m_series(P, 5)
    om = omega(P, 5, 1)
    for n in range(0, 5):
        assert ms[n] == iterated_commutator(P, om, 5 - n - 1)
    assert ms[-1].is_trivial()
    for n in range(0, ms.last_index):
        assert ms[n] <= ms[n + 1]


def test_m_graded_bookkeeping():
    P = group("sl2sylow(5,2)")
    mg = m_graded(P, 5)
    assert mg.annihilator_dim() == mg.total_dim() - mg.image_dim()
    om = omega(P, 5, 1)
    assert sum(mg.subgroup_dims(om).values()) == mg.annihilator_dim()
    A = group("elemab(5,3)")
    mg = m_graded(A, 5)
    assert mg.image_dim() == 0 and mg.annihilator_dim() == 3


def test_power_congruence_finds_failures():
    W = group("wreath(cyclic(3),cyclic(3))")
    rng = np.random.default_rng(0)
    ok, pair = power_congruence(W, 3, W.whole(), W.whole(), W.trivial(), rng)
    assert not ok
    x, y = pair
    assert W.pow(W.mul(x, y), 3) != W.mul(W.pow(x, 3), W.pow(y, 3))
    A = group("abelian([9,9])")
    assert power_congruence(A, 3, A.whole(), A.whole(), A.trivial(), rng) == (True, None)


# -- properties on random abelian p-groups ---------------------------------------


abelian_types = st.tuples(st.sampled_from([3, 5]),
                          st.lists(st.integers(1, 3), min_size=1, max_size=3))


@settings(max_examples=30, deadline=None)
@given(abelian_types)
def test_abelian_invariants(data):
    p, exps = data
    if p ** sum(exps) > 20000:
        exps = exps[:1]
    P = group(f"abelian([{','.join(str(p ** e) for e in exps)}])")
    r = len(exps)
    assert omega(P, p, 1).order == p ** r
    assert P.order // agemo(P, p, 1).order == p ** r
    assert omega_exact_set(P, p, 1).equal and is_power_surjective(P, p)
    assert central_height(P, p, 1) == 1
    for k in range(1, p):
        assert k_elementary_p_length(P, p, k) == 1 + k * (max(exps) - 1)
    Q, _ = quotient(P, omega(P, p, 1))
    assert Q.order == P.order // p ** r
