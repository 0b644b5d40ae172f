import json

import numpy as np
import pytest

from pclab.core.group import Subgroup, closure
from pclab.errors import NotAPGroup
from pclab.verify import (Check, verify_all, VerificationReport, complement_witness, verify_lemma_5_6,
                          verify_prop_3_6, verify_prop_5_2, verify_prop_suite, verify_thm_a,
                          verify_thm_b, verify_thm_c, verify_thm_e, verify_y_avoidance)
from pclab import catalog as cat

import oracles
from conftest import group


# -- report plumbing ----------------------------------------------------------


def _report(hyps, concl):
    return VerificationReport("A", "cyclic(3)", {"p": 3}, hyps, concl)


def test_status_rules():
    assert _report([Check("h", True)], Check("c", True)).status == "verified"
    assert _report([Check("h", False)], Check("c", True)).status == "hypothesisNotMet"
    assert _report([Check("h", None)], Check("c", True)).status == "capExceeded"
    assert _report([Check("h", True)], Check("c", None)).status == "capExceeded"
    assert _report([Check("h", True)], Check("c", False, {"x": 1})).status == "REFUTED"
    with pytest.raises(ValueError):
        _report([Check("h", True)], Check("c", False))
    with pytest.raises(ValueError):
        VerificationReport("Z", "", {}, [], Check("c", True))


def test_exit_codes():
    assert _report([Check("h", False)], Check("c", False)).exit_code == 0
    assert _report([Check("h", True)], Check("c", False, 1)).exit_code == 2
    assert _report([Check("h", True)], Check("c", None)).exit_code == 3


def test_canonical_hash_ignores_timing():
    a = verify_thm_a(group("thmafix(3,7)"), 3)
    b = verify_thm_a(group("thmafix(3,7)"), 3)
    b.timing_ms = a.timing_ms + 1234
    assert a.canonical_json() == b.canonical_json()
    assert a.canonical_hash() == b.canonical_hash()
    assert "timingMs" not in json.loads(a.canonical_json())
    assert a.to_json()["schema"] == "pclab-report/1"


# -- Theorem A ----------------------------------------------------------------


def test_thm_a_fixture_verified_with_checked_complement():
    G = group("thmafix(3,7)")
    r = verify_thm_a(G, 3)
    assert r.status == "verified"
    w = r.conclusion.witness
    C = closure(G, w["complement"]["generators"])
    assert C.order == 7 and len(oracles.conjugate_closure(G, C.members)) == 7


def test_thm_a_boundary_at_p_2():
    r = verify_thm_a(group("sl2zmod(5,1)"), 2)
    assert r.status == "hypothesisNotMet"
    assert r.hypotheses[1].holds and not r.conclusion.holds
    assert any("p odd" in n for n in r.notes)


@pytest.mark.parametrize("expr,p", [("heis(3)", 3), ("cyclic(25)", 5), ("ypm(3,2)", 3)])
def test_thm_a_on_p_groups(expr, p):
    r = verify_thm_a(group(expr), p)
    assert r.conclusion.holds


# -- Theorems B and C ------------------------------------------------------


@pytest.mark.parametrize("expr", ["abelian([27,9])", "cyclic(125)", "elemab(5,2)"])
def test_thm_b_abelian(expr):
    G = group(expr)
    p = min(G.prime_factors)
    r = verify_thm_b(G, p, 1, 1, 3)
    assert r.status == "verified"


def test_thm_b_sylow_of_sl2_mod_25():
    r = verify_thm_b(group("sl2sylow(5,2)"), 5, 1, 3, 2)
    assert r.status == "verified"
    assert [row["omega_exact_set"] for row in r.conclusion.witness["rows"]] == ["equal"] * 2


def test_thm_b_truncation_outside_hypotheses():
    P = group("trunc(3,1,2)")
    r = verify_thm_b(P, 3, 1, 2, 1)
    assert r.status == "hypothesisNotMet"
    assert r.hypotheses[0].holds is False
    row = r.conclusion.witness["rows"][0]
    assert row["quotient_height"] == 2 and r.conclusion.holds is not None


@pytest.mark.parametrize("p,r", [(3, 3), (5, 2)])
def test_thm_c_elementary_abelian(p, r):
    rep = verify_thm_c(group(f"elemab({p},{r})"), p, 1, 1)
    w = rep.conclusion.witness
    assert rep.status == "verified" and w["index"] == w["omega1_order"] == p ** r


def test_thm_c_heisenberg_5():
    rep = verify_thm_c(group("heis(5)"), 5, 1, 2)
    assert rep.status == "verified"
    P = group("heis(5)")
    idx = P.order // len(oracles.agemo(P, 5, 1))
    assert rep.conclusion.witness["index"] == idx == 125


def test_thm_c_cyclic_equality():
    w = verify_thm_c(group("cyclic(243)"), 3, 1, 1).conclusion.witness
    assert w["index"] == w["omega1_order"] == 3


def test_thm_c_refuses_non_p_groups():
    with pytest.raises(NotAPGroup):
        verify_thm_c(group("cyclic(6)"), 3, 1, 1)


# -- Y_p(m) avoidance ---------------------------------------------------------


def test_avoidance_vacuous_for_small_groups():
    r = verify_y_avoidance(group("heis(3)"), 3)
    assert r.conclusion.holds


def test_wreath_contains_itself():
    r = verify_y_avoidance(group("wreath(cyclic(3),cyclic(3))"), 3, 1)
    assert r.status == "hypothesisNotMet"
    assert r.conclusion.holds is False and r.conclusion.witness["m"] == 1
    assert r.notes


def test_avoidance_on_height_two_group_of_order_243():
    P = group("dirprod(heis(3),elemab(3,2))")
    r = verify_y_avoidance(P, 3, 2)
    assert r.status == "verified"
    # no subgroup of order 81 has exponent 9, which every copy of Y_3(1) would
    assert (oracles.powers(P, 3) == 0).all()


# -- Theorem E and friends ---------------------------------------------------------


@pytest.mark.parametrize("name", ["Heis5:C4", "ThmA(5,11)"])
def test_thm_e_fixtures(name):
    r = verify_thm_e(group(name), 5)
    assert r.status == "verified"
    assert all(c.holds for c in r.side_checks)


def test_thm_e_on_p_groups():
    assert verify_thm_e(group("cyclic(27)"), 3).status == "verified"
    # heis(3) has height two, one more than the hypothesis allows at p = 3
    assert verify_thm_e(group("heis(3)"), 3).status == "hypothesisNotMet"


def test_thm_e_boundary_fixture_keeps_main_conclusion():
    r = verify_thm_e(group("NSyl5(SL2(Z/25))"), 5)
    assert r.status == "verified"
    pipe = next(c for c in r.side_checks if c.name == "normal Sylow criterion")
    assert pipe.holds is False
    assert pipe.witness["sylow_normal"] and not pipe.witness["kernel_equals_sylow"]
    assert pipe.witness["kernel_order"] == 125


def test_lemma_5_6():
    r = verify_lemma_5_6(group("J5:C2"), 5)
    assert r.status == "verified"
    r = verify_lemma_5_6(group("thmafix(3,7)"), 3)
    assert r.status == "hypothesisNotMet"


def test_prop_5_2_and_3_6():
    assert verify_prop_5_2(group("Heis5:C4"), 5).status == "verified"
    r = verify_prop_3_6(group("thmafix(5,11)"), 5, 1)
    assert r.status == "verified" and r.side_checks[0].holds


def test_complement_witness_recheck():
    G = group("ThmA(3,7;h2)")
    r = verify_thm_a(G, 3)
    assert r.status == "verified"
    C = closure(G, r.conclusion.witness["complement"]["generators"])
    assert complement_witness(G, 3, C) == {k: v for k, v in r.conclusion.witness.items()}


# -- the battery --------------------------------------------------------------


@pytest.mark.parametrize("entry", cat.standard_small_p_groups(3),
                         ids=[e.name for e in cat.standard_small_p_groups(3)])
def test_battery_on_standard_groups(entry):
    r = verify_prop_suite(group(entry.expr), 3)
    assert r.status == "verified", [i.to_json() for i in r.items if i.status != "verified"]
    assert all(i.status in ("verified", "hypothesisNotMet") for i in r.items)


def test_prop_2_2_on_cyclic():
    r = verify_prop_suite(group("cyclic(125)"), 5, k=1)
    item = next(i for i in r.items if i.theorem == "prop2.2")
    assert item.status == "verified"


@pytest.mark.parametrize("expr,p,ell", [("heis(5)", 5, 2), ("elemab(3,3)", 3, 1),
                                        ("dirprod(heis(5),cyclic(5))", 5, 2)])
def test_exponent_p_groups_report_class_as_length(expr, p, ell):
    r = verify_prop_suite(group(expr), p, k=p - 1)
    item = next(i for i in r.items if i.theorem == "length")
    assert item.conclusion.witness["length"] == ell == item.conclusion.witness["class"]


def test_reports_are_deterministic():
    a = verify_prop_suite(group("ypm(3,2)"), 3, seed=5)
    b = verify_prop_suite(group("ypm(3,2)"), 3, seed=5)
    assert a.canonical_hash() == b.canonical_hash()


def test_sweep_hash_does_not_depend_on_jobs(monkeypatch):
    names = ["C9", "Heis3", "ThmA(3,7)", "E5^2"]
    entries = [cat.get(n) for n in names]
    monkeypatch.setattr(cat, "catalog", lambda: entries)
    a = verify_all(seed=7, jobs=1)
    b = verify_all(seed=7, jobs=2)
    assert a.aggregate_hash == b.aggregate_hash
    assert verify_all(seed=8, jobs=1).aggregate_hash != a.aggregate_hash
    assert a.exit_code == 0
