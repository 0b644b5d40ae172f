"""Theorem-level verification drivers.

Each driver evaluates the hypotheses of a statement on a concrete group,
then its conclusion, and folds the outcome into a status:

* ``verified``: every hypothesis and the conclusion hold;
* ``hypothesisNotMet``: some hypothesis fails (the conclusion is still
  evaluated and recorded, since boundary examples are the interesting ones);
* ``REFUTED``: hypotheses hold, conclusion fails; the conclusion carries a
  witness that the public operations can re-check;
* ``capExceeded``: an enumeration cap prevented a decision.
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core.group import (Group, Subgroup, centralizer, closure, commutator, iterated_commutator,
                         join, normalizer, quotient)
from .core.iso import is_isomorphic
from .core.products import y_group
from .errors import CapExceeded, HypothesisFailed, NotAPGroup
from .fusion import (DEFAULT_SUBGROUP_CAP, controls_elementary_abelian_fusion,
                     controls_p_fusion, prop_fungr_check, subgroups_of_order)
from .reps import (FpMatrixRep, conjugation_module, is_irreducible_by_spin,
                   jordan_block_sizes, lemma_crit_check)
from .series import (EXHAUSTIVE_PAIRS, SAMPLED_PAIRS, agemo, central_height,
                     is_pi_central_of_height, is_power_surjective, k_elementary_p_length,
                     lambda_graded, lambda_series, lower_p_central_series, m_graded, m_series,
                     omega, omega_exact_set, power_congruence, zeta_series)
from .sylow import (is_p_nilpotent, is_p_prime_element, is_p_soluble, op_core, op_prime_core,
                    opp_tower, p_prime_normal_product, sylow_subgroup, upper_p_series)

SCHEMA = "pclab-report/1"
THEOREM_IDS = ("A", "B", "C", "D-avoidance", "E", "prop2.1", "prop2.2", "prop4.2", "lemma2.4",
               "lemma5.6", "prop3.6", "prop5.2", "cor5.4", "length", "props")
STATUSES = ("verified", "hypothesisNotMet", "REFUTED", "capExceeded")
EXIT_CODES = {"verified": 0, "hypothesisNotMet": 0, "REFUTED": 2, "capExceeded": 3}


@dataclass
class Check:
    name: str
    holds: bool | None            # None: undecided (cap)
    witness: Any = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "holds": self.holds, "witness": _plain(self.witness)}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    theorem: str
    group_expr: str
    parameters: dict
    hypotheses: list
    conclusion: Check
    side_checks: list = field(default_factory=list)
    items: list = field(default_factory=list)     # sub-reports of a battery
    notes: list = field(default_factory=list)
    status: str = ""
    timing_ms: int = 0

    def __post_init__(self):
        if self.theorem not in THEOREM_IDS:
            raise ValueError(f"unknown theorem id {self.theorem!r}")
        if not self.status:
            self.status = self._derive_status()

    def _derive_status(self) -> str:
        hyp = [h.holds for h in self.hypotheses]
        if False in hyp:
            return "hypothesisNotMet"
        if None in hyp or self.conclusion.holds is None:
            return "capExceeded"
        if self.conclusion.holds:
            return "verified"
        if self.conclusion.witness is None:
            raise ValueError("a refutation needs a witness")
        return "REFUTED"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "theoremId": self.theorem,
            "groupExpr": self.group_expr,
            "parameters": _plain(self.parameters),
            "hypothesisResults": [h.to_json() for h in self.hypotheses],
            "conclusionResult": self.conclusion.to_json(),
            "sideChecks": [c.to_json() for c in self.side_checks],
            "items": [r.to_json(timing) for r in self.items],
            "notes": list(self.notes),
            "status": self.status,
        }
        if timing:
            out["timingMs"] = self.timing_ms
        return out

    def canonical_json(self) -> str:
        return json.dumps(self.to_json(timing=False), sort_keys=True, separators=(",", ":"))

    def canonical_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _plain(x):
    """numpy scalars and arrays to JSON-friendly values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _expr(G: Group) -> str:
    return getattr(G, "expr", None) or G.name or f"<group of order {G.order}>"


def _sub(S: Subgroup) -> dict:
    return {"order": S.order, "generators": [int(g) for g in S.generators]}


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = int((time.perf_counter() - self.t0) * 1000)


def _finish(report: VerificationReport, timer: _Timer) -> VerificationReport:
    report.timing_ms = timer.ms
    return report


def _require_p_group(P: Group, p: int):
    if not P.is_p_group(p):
        raise NotAPGroup(f"order {P.order} is not a power of {p}")


# -- Theorem A --------------------------------------------------------------


def complement_witness(G: Group, p: int, C: Subgroup) -> dict:
    P = sylow_subgroup(G, p)
    return {"complement": _sub(C), "normal": C.is_normal(),
            "p_prime_order": C.order % p != 0,
            "index_equals_sylow": C.order * P.order == G.order,
            "meets_sylow_trivially": int(P.mask[C.members].sum()) == 1}


def verify_thm_a(G: Group, p: int, k_max: int = 6) -> VerificationReport:
    """p odd and G p-central of height <= k_max imply G p-nilpotent."""
    with _Timer() as tm:
        h = central_height(G, p, 1)
        hyps = [Check("p odd", p % 2 == 1),
                Check(f"p-central of height <= {k_max}", h is not None and h <= k_max,
                      {"height": h})]
        pn = is_p_nilpotent(G, p)
        if pn.yes:
            w = complement_witness(G, p, pn.complement)
            concl = Check("p-nilpotent", all(v for k, v in w.items() if k != "complement"), w)
        else:
            H = closure(G, np.flatnonzero(is_p_prime_element(G, p)))
            concl = Check("p-nilpotent", False,
                          {"p_prime_closure": _sub(H), "p_prime_part": G.order // G.p_part(p)})
        notes = []
        if p == 2 and hyps[1].holds and not concl.holds:
            notes.append("2-central but not 2-nilpotent: the statement needs p odd")
        rep = VerificationReport("A", _expr(G), {"p": p, "kMax": k_max}, hyps, concl,
                                 notes=notes)
    return _finish(rep, tm)


# -- Theorems B and C ---------------------------------------------------------


def _bc_hypotheses(P: Group, p: int, i: int, k: int) -> list:
    return [Check("k <= p-2, or k = p-1 and i >= 2", k <= p - 2 or (k == p - 1 and i >= 2)),
            Check(f"p^{i}-central of height {k}", is_pi_central_of_height(P, p, i, k),
                  {"height": central_height(P, p, i)})]


def verify_thm_b(P: Group, p: int, i: int, k: int, j_max: int) -> VerificationReport:
    """P/Omega_j(P) stays p^i-central of height k and Omega_j is the raw
    solution set of x^(p^j) = 1, for j = 1..j_max."""
    _require_p_group(P, p)
    with _Timer() as tm:
        hyps = _bc_hypotheses(P, p, i, k)
        rows = []
        failure = None
        for j in range(1, j_max + 1):
            Om = omega(P, p, j)
            Q, _ = quotient(P, Om)
            qh = is_pi_central_of_height(Q, p, i, k)
            ex = omega_exact_set(P, p, j)
            rows.append({"j": j, "omega_order": Om.order, "quotient_order": Q.order,
                         "quotient_height": central_height(Q, p, i), "quotient_ok": qh,
                         "omega_exact_set": "equal" if ex.equal else "strict"})
            if failure is None and not (qh and ex.equal):
                failure = {"j": j, "quotient_ok": qh, "omega_exact": ex.equal,
                           "element_outside_solution_set": ex.witness}
        concl = Check("quotients and Omega solution sets", failure is None,
                      {"rows": rows, "failure": failure} if failure else {"rows": rows})
        rep = VerificationReport("B", _expr(P), {"p": p, "i": i, "k": k, "jMax": j_max},
                                 hyps, concl)
    return _finish(rep, tm)


def verify_thm_c(P: Group, p: int, i: int, k: int) -> VerificationReport:
    """|P : P^p| <= |Omega_1(P)|, with equality when P is power-surjective."""
    _require_p_group(P, p)
    with _Timer() as tm:
        hyps = _bc_hypotheses(P, p, i, k)
        index = P.order // agemo(P, p, 1).order
        om = omega(P, p, 1).order
        ps = is_power_surjective(P, p)
        holds = index <= om and (not ps or index == om)
        concl = Check("|P:P^p| <= |Omega_1(P)|", holds,
                      {"index": index, "omega1_order": om, "power_surjective": ps})
        side = []
        if p % 2 and is_pi_central_of_height(P, p, 1, p - 2):
            side.append(_m_bookkeeping(P, p))
        rep = VerificationReport("C", _expr(P), {"p": p, "i": i, "k": k}, hyps, concl, side)
    return _finish(rep, tm)


def _m_bookkeeping(P: Group, p: int) -> Check:
    """The linear algebra behind the bound: Ann(t) is m(Omega_1) and has
    the same size as the cokernel of t."""
    try:
        mg = m_graded(P, p)
    except HypothesisFailed as exc:
        return Check("graded bookkeeping", False, {"error": str(exc)})
    ann = mg.annihilator_dim()
    om_dims = sum(mg.subgroup_dims(omega(P, p, 1)).values())
    coker = mg.total_dim() - mg.image_dim()
    w = {"annihilator_dim": ann, "omega1_dim": om_dims, "cokernel_dim": coker,
         "total_dim": mg.total_dim()}
    return Check("graded bookkeeping", ann == om_dims == coker, w)


# -- Y_p(m) avoidance -----------------------------------------------------------


def verify_y_avoidance(P: Group, p: int, m_max: int = 3,
                       cap: int = DEFAULT_SUBGROUP_CAP, budget: int = 200000) -> VerificationReport:
    """A p-central group of height p-1 has no subgroup isomorphic to Y_p(m)."""
    _require_p_group(P, p)
    with _Timer() as tm:
        hyps = [Check("p odd", p % 2 == 1)]
        if p % 2:
            hyps.append(Check(f"p-central of height {p - 1}",
                              is_pi_central_of_height(P, p, 1, p - 1),
                              {"height": central_height(P, p, 1)}))
        found, scanned, undecided = None, [], False
        try:
            for m in range(1, m_max + 1):
                size = p ** (p + m)
                if size > P.order or p % 2 == 0:
                    break
                Y = y_group(p, m)
                subs = subgroups_of_order(P, P.whole(), size, cap)
                scanned.append({"m": m, "candidates": len(subs)})
                for S in subs:
                    res = is_isomorphic(S.as_group(), Y, budget)
                    if res.verdict == "yes":
                        found = {"m": m, "subgroup": _sub(S)}
                        break
                    undecided |= res.verdict == "inconclusive"
                if found:
                    break
            holds = None if (undecided and not found) else found is None
            concl = Check("no subgroup isomorphic to Y_p(m)", holds,
                          found if found else {"scanned": scanned})
        except CapExceeded as exc:
            concl = Check("no subgroup isomorphic to Y_p(m)", None, note=f"capExceeded: {exc}")
        notes = []
        if found and hyps[-1].holds is False:
            notes.append("contains Y_p(m): the converse direction of the avoidance statement")
        rep = VerificationReport("D-avoidance", _expr(P), {"p": p, "mMax": m_max}, hyps, concl,
                                 notes=notes)
    return _finish(rep, tm)


# -- Theorem E and its ingredients -------------------------------------------


def _omega1_of(G: Group, N: Subgroup, p: int) -> Subgroup:
    return closure(G, N.members[G.power_map(p)[N.members] == 0])


def lemma_5_6_check(G: Group, p: int) -> Check:
    """With O_p'(G) = 1, O_p(G) != 1 and Omega_1(O_p) of exponent p, the
    centraliser of Omega_1(O_p) lies in O_p."""
    O = op_prime_core(G, p)
    Op = op_core(G, p)
    Om = _omega1_of(G, Op, p)
    exp_p = bool((G.power_map(p)[Om.members] == 0).all())
    applicable = O.is_trivial() and not Op.is_trivial() and exp_p
    C = centralizer(G, Om)
    w = {"applicable": applicable, "o_p_order": Op.order, "omega_order": Om.order,
         "centralizer_order": C.order}
    if not applicable:
        return Check("centralizer of Omega_1(O_p) inside O_p", None, w, "hypotheses not met")
    return Check("centralizer of Omega_1(O_p) inside O_p", C <= Op, w)


def verify_lemma_5_6(G: Group, p: int) -> VerificationReport:
    with _Timer() as tm:
        Op = op_core(G, p)
        Om = _omega1_of(G, Op, p)
        hyps = [Check("p odd", p % 2 == 1),
                Check("p-soluble", is_p_soluble(G, p)),
                Check("O_p'(G) = 1", op_prime_core(G, p).is_trivial()),
                Check("O_p(G) != 1", not Op.is_trivial()),
                Check("Omega_1(O_p) of exponent p",
                      bool((G.power_map(p)[Om.members] == 0).all()))]
        C = centralizer(G, Om)
        concl = Check("centralizer of Omega_1(O_p) inside O_p", C <= Op,
                      {"centralizer": _sub(C), "o_p": _sub(Op)})
        rep = VerificationReport("lemma5.6", _expr(G), {"p": p}, hyps, concl)
    return _finish(rep, tm)


def normal_sylow_pipeline(G: Group, p: int) -> Check:
    """Pass to G/O_p'(G), let Omega = Omega_1(O_p), build the conjugation
    module on the graded pieces of the lower p-central series of Omega and
    run the nilpotency-degree criterion on it."""
    Q, _ = quotient(G, op_prime_core(G, p))
    Op = op_core(Q, p)
    if Op.is_trivial():
        return Check("normal Sylow criterion", None, {"o_p_order": 1}, "O_p of the quotient is trivial")
    Om = _omega1_of(Q, Op, p)
    rep = conjugation_module(Q, Om, p)
    res = lemma_crit_check(Q, p, rep)
    P = sylow_subgroup(Q, p)
    K = rep.kernel()
    blocks = sorted({tuple(jordan_block_sizes(rep.matrix_of(x), p))
                     for x in P.generators if Q.element_orders[x] == p})
    w = {"module_dimension": rep.dimension, "layer_dims": [L.dim for L in rep.layers],
         "criterion": res.status, "failed_hypothesis": res.failed,
         "kernel_order": K.order, "sylow_order": P.order, "kernel_equals_sylow": K == P,
         "sylow_normal": P.is_normal(), "generator_blocks": [list(b) for b in blocks]}
    holds = res.status == "normalSylowPredicted" and bool(res.verified)
    note = ""
    if res.status == "normalSylowPredicted" and K != P and P.is_normal():
        note = ("kernel of the module is smaller than P; P is still normal, which is what "
                "the criterion's proof delivers via the semisimplification")
    return Check("normal Sylow criterion", holds, w, note)


def fusion_side_check(G: Group, p: int, cap: int = DEFAULT_SUBGROUP_CAP,
                      level: str = "allSubgroupsUnderCap") -> Check:
    N = normalizer(G, sylow_subgroup(G, p))
    try:
        v = controls_p_fusion(N, G, p, level, cap)
    except CapExceeded as exc:
        return Check("N_G(P) controls p-fusion", None, note=f"capExceeded: {exc}")
    return Check("N_G(P) controls p-fusion", v.controls, v.to_json())


def verify_thm_e(G: Group, p: int, cap: int = DEFAULT_SUBGROUP_CAP) -> VerificationReport:
    """p-soluble G whose Sylow is p-central of height p-2 is a p'pp'-sandwich."""
    with _Timer() as tm:
        series = upper_p_series(G, p)
        P = sylow_subgroup(G, p)
        Pg = P.as_group()
        hyps = [Check("p odd", p % 2 == 1),
                Check("p-soluble", series[-1].is_whole(),
                      {"upper_p_series": [t.order for t in series]}),
                Check(f"Sylow p-central of height {p - 2}",
                      p > 2 and is_pi_central_of_height(Pg, p, 1, p - 2),
                      {"height": central_height(Pg, p, 1)})]
        O = op_prime_core(G, p)
        PO = p_prime_normal_product(G, P, O)
        tower = opp_tower(G, p)
        concl = Check("P.O_p'(G) normal and G a sandwich group",
                      PO.is_normal() and tower.is_sandwich,
                      {"PO": _sub(PO), "PO_normal": PO.is_normal(), "tower": tower.to_json()})
        Q, _ = quotient(G, O)
        side = [lemma_5_6_check(Q, p)]
        if p % 2:
            side.append(normal_sylow_pipeline(G, p))
        side.append(fusion_side_check(G, p, cap))
        notes = [c.note for c in side if c.note and c.holds is False]
        rep = VerificationReport("E", _expr(G), {"p": p}, hyps, concl, side, notes=notes)
    return _finish(rep, tm)


def verify_prop_5_2(G: Group, p: int, cap: int = DEFAULT_SUBGROUP_CAP) -> VerificationReport:
    with _Timer() as tm:
        hyps = [Check("sandwich group", opp_tower(G, p).is_sandwich)]
        rep = VerificationReport("prop5.2", _expr(G), {"p": p}, hyps,
                                 fusion_side_check(G, p, cap))
    return _finish(rep, tm)


def verify_prop_3_6(G: Group, p: int, k: int, cap: int = DEFAULT_SUBGROUP_CAP) -> VerificationReport:
    """G = P.C_G(E) for every elementary abelian E, plus the consequence that
    P controls elementary abelian fusion."""
    with _Timer() as tm:
        hyps = [Check(f"p-central of height {k}", is_pi_central_of_height(G, p, 1, k),
                      {"height": central_height(G, p, 1)})]
        side = []
        try:
            if hyps[0].holds:
                res = prop_fungr_check(G, p, k, cap)
                w = {"checked": res.checked}
                if res.failing is not None:
                    w["failing"] = _sub(res.failing)
                concl = Check("G = P.C_G(E) for all E", res.holds, w)
                if res.holds:
                    ea = controls_elementary_abelian_fusion(sylow_subgroup(G, p), G, p, cap)
                    side.append(Check("P controls elementary abelian fusion", ea))
            else:
                concl = Check("G = P.C_G(E) for all E", None, note="not evaluated")
        except CapExceeded as exc:
            concl = Check("G = P.C_G(E) for all E", None, note=f"capExceeded: {exc}")
        rep = VerificationReport("prop3.6", _expr(G), {"p": p, "k": k}, hyps, concl, side)
    return _finish(rep, tm)


def verify_cor_5_4(rep: FpMatrixRep, constituents: list) -> VerificationReport:
    """Jordan blocks of order-p elements on a semisimple module have size 1,
    p-1 or p.  Semisimplicity is by construction: ``constituents`` are the
    summands, each re-checked irreducible by spinning."""
    G, p = rep.group, rep.p
    with _Timer() as tm:
        dims = [c.dimension for c in constituents]
        hyps = [Check("p-soluble", is_p_soluble(G, p), {"upper_p_series":
                      [t.order for t in upper_p_series(G, p)]}),
                Check("irreducible constituents", all(is_irreducible_by_spin(c) for c in constituents)
                      and sum(dims) == rep.dimension, {"dims": dims}),
                Check("representation", rep.is_homomorphism())]
        allowed = {1, p - 1, p}
        seen, bad = set(), None
        for x in np.flatnonzero(G.element_orders == p):
            sizes = jordan_block_sizes(rep.matrix_of(int(x)), p)
            seen.add(tuple(sizes))
            if bad is None and not set(sizes) <= allowed:
                bad = {"element": int(x), "sizes": sizes}
        concl = Check("block sizes in {1, p-1, p}", bad is None,
                      bad if bad else {"size_patterns": sorted(list(s) for s in seen)})
        out = VerificationReport("cor5.4", _expr(G), {"p": p, "dimension": rep.dimension},
                                 hyps, concl)
    return _finish(out, tm)


# -- the property battery -----------------------------------------------------


def _item(theorem, P, params, hyps, concl, side=()):
    return VerificationReport(theorem, _expr(P), params, hyps, concl, list(side))


def _prop_2_1(P: Group, p: int, k: int, rng) -> VerificationReport:
    ls = lambda_series(P, p, k)
    top = ls.last_index + 1
    fail = None
    for n in range(1, top + 1):
        for m in range(1, top + 1):
            if not commutator(P, ls[n], ls[m]) <= ls[n + m]:
                fail = fail or {"part": "a", "n": n, "m": m}
        if not agemo(P, p, 1, ls[n]) <= ls[n + k]:
            fail = fail or {"part": "b", "n": n}
        if not ls[n].is_normal() or not ls[n + 1] <= ls[n]:
            fail = fail or {"part": "series", "n": n}
    congr = "skipped (k = p-1)"
    if k <= p - 2:
        congr = "ok"
        for n in range(1, top + 1):
            ok, pair = power_congruence(P, p, ls[n], ls[n], ls[n + k + 1], rng, SAMPLED_PAIRS,
                                        EXHAUSTIVE_PAIRS)
            if not ok:
                fail = fail or {"part": "c", "n": n, "pair": pair}
    if k == 1:
        lp = lower_p_central_series(P, p)
        same = all(lp[n] == ls[n] for n in range(1, max(lp.last_index, ls.last_index) + 2))
        if not same:
            fail = fail or {"part": "k=1 agrees with the lower p-central series"}
    return _item("prop2.1", P, {"p": p, "k": k}, [Check("k <= p-1", k <= p - 1)],
                 Check("(a), (b), (c)", fail is None, fail or {"terms": ls.orders(),
                                                                "congruence": congr}))


def _lemma_2_4(P: Group, p: int) -> VerificationReport:
    fail = None
    for i in (1, 2):
        Oi, Oprev = omega(P, p, i), omega(P, p, i - 1)
        for r in range(0, 5):
            lhs = agemo(P, p, 1, iterated_commutator(P, Oi, r))
            rhs = join(P, iterated_commutator(P, Oprev, r), iterated_commutator(P, Oi, r + p - 1))
            if not lhs <= rhs:
                fail = fail or {"i": i, "r": r, "lhs_order": lhs.order, "rhs_order": rhs.order}
    return _item("lemma2.4", P, {"p": p}, [], Check("power-commutator inclusion", fail is None,
                                                    fail or {"i": [1, 2], "r": [0, 4]}))


def _prop_4_2(P: Group, p: int, rng) -> VerificationReport:
    hyp = [Check("p odd", p % 2 == 1)]
    variant = None
    if p % 2:
        if is_pi_central_of_height(P, p, 1, p - 2):
            variant = (1, p - 2)
        elif is_pi_central_of_height(P, p, 2, p - 1):
            variant = (2, p - 1)
        hyp.append(Check(f"p-central of height {p - 2} or p^2-central of height {p - 1}",
                         variant is not None,
                         {"height": central_height(P, p, 1), "height_p2": central_height(P, p, 2)}))
    if variant is None:
        return _item("prop4.2", P, {"p": p}, hyp, Check("(a)-(d)", None, note="not evaluated"))
    i, k = variant
    ms = m_series(P, p)
    top = ms.last_index
    fail = None
    for n in range(0, top + 1):
        Mn = ms[n]
        if not Mn <= ms[n + 1] or not Mn.is_normal():
            fail = fail or {"part": "ascending", "n": n}
        Q, _ = quotient(P, Mn)
        if not is_pi_central_of_height(Q, p, i, k):
            fail = fail or {"part": "a", "n": n}
        if not commutator(P, Mn, P.whole()) <= ms[n - 1]:
            fail = fail or {"part": "b", "n": n}
        if not agemo(P, p, 1, Mn) <= ms[n - p + 1]:
            fail = fail or {"part": "c", "n": n}
    for n in range(0, top + 1):
        for m in range(0, n + 1):
            ok, pair = power_congruence(P, p, ms[n], ms[m], ms[m - p], rng, SAMPLED_PAIRS,
                                        EXHAUSTIVE_PAIRS)
            if not ok:
                fail = fail or {"part": "d", "n": n, "m": m, "pair": pair}
    side = [_m_bookkeeping(P, p)] if i == 1 else []
    return _item("prop4.2", P, {"p": p, "variant": f"p^{i}-central of height {k}"}, hyp,
                 Check("(a)-(d)", fail is None, fail or {"terms": ms.orders()}), side)


def _prop_2_2(P: Group, p: int, k: int) -> VerificationReport:
    gr = lambda_graded(P, p, k)
    ell = k_elementary_p_length(P, p, k)
    inj = all(gr.is_t_injective(s) for s in range(1, ell - k + 1) if s in gr.layers)
    hyps = [Check(f"k <= p-2", k <= p - 2),
            Check("t injective below l-k+1", inj, {"length": ell})]
    concl = Check(f"p-central of height {k}", is_pi_central_of_height(P, p, 1, k),
                  {"height": central_height(P, p, 1)})
    return _item("prop2.2", P, {"p": p, "k": k}, hyps, concl)


def _length_characterisation(P: Group, p: int, k: int) -> VerificationReport:
    ell = k_elementary_p_length(P, p, k)
    exp_p = bool((P.power_map(p) == 0).all())
    zs = zeta_series(P)
    cls = len(zs.terms) - 1
    # for l <= k: length l  <=>  exponent p and class l
    lhs = ell <= k
    rhs = exp_p and cls <= k
    holds = lhs == rhs and (not lhs or cls == ell or P.order == 1)
    return _item("length", P, {"p": p, "k": k}, [Check("k <= p-1", k <= p - 1)],
                 Check("length <= k iff exponent p and class = length", holds,
                       {"length": ell, "exponent_p": exp_p, "class": cls}))


def verify_prop_suite(P: Group, p: int, k: int | None = None, seed: int = 0) -> VerificationReport:
    """Run the whole battery on a p-group; ``k`` defaults to every admissible value."""
    _require_p_group(P, p)
    rng = np.random.default_rng(seed)
    with _Timer() as tm:
        ks = [k] if k else list(range(1, p))
        items = []
        for kk in ks:
            items.append(_prop_2_1(P, p, kk, rng))
            items.append(_length_characterisation(P, p, kk))
            if kk <= p - 2:
                items.append(_prop_2_2(P, p, kk))
                gr = lambda_graded(P, p, kk)
                items[-1].side_checks.append(Check("graded object well defined",
                                                   gr.rederive(rng)))
        items.append(_lemma_2_4(P, p))
        if p % 2:
            items.append(_prop_4_2(P, p, rng))
        bad = [it.theorem for it in items if it.status in ("REFUTED", "capExceeded")]
        bad += [f"{it.theorem}:{c.name}" for it in items for c in it.side_checks
                if c.holds is False]
        concl = Check("every item", not bad, {"failing": bad} if bad else None)
        rep = VerificationReport("props", _expr(P), {"p": p, "k": k, "seed": seed}, [],
                                 concl, items=items)
    return _finish(rep, tm)


# -- parameter selection and the catalog sweep -------------------------------


def thm_c_parameters(P: Group, p: int):
    """An (i, k) pair under which Theorems B and C apply, or None.

    Prefers i = 1 with the actual central height when that is at most p-2,
    then i = 2 with k = p-1."""
    h = central_height(P, p, 1)
    if h is not None and h <= p - 2:
        return 1, max(h, 1)
    if is_pi_central_of_height(P, p, 2, p - 1):
        return 2, p - 1
    return None


def _entry_job(name: str, seed: int, max_order: int) -> dict:
    from . import catalog as cat
    entry = cat.get(name)
    G = entry.build(max_order)
    checks = [c.to_json() for c in cat.verify_entry(entry, max_order, G)]
    reports = []
    p = entry.p
    if p and p % 2 and G.is_p_group(p) and G.order > 1:
        params = thm_c_parameters(G, p)
        i, k = params if params else (1, p - 1)
        reports.append(verify_thm_c(G, p, i, k))
    if "thmA" in entry.tags:
        reports.append(verify_thm_a(G, p))
    if "thmE" in entry.tags:
        reports.append(verify_thm_e(G, p))
    body = {"name": name, "expr": entry.expr, "checks": checks,
            "reports": [r.to_json(timing=False) for r in reports]}
    digest = hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode())
    statuses = [r.status for r in reports]
    return {"name": name, "ok": all(c["ok"] for c in checks), "statuses": statuses,
            "hash": digest.hexdigest(), "body": body,
            "timingMs": sum(r.timing_ms for r in reports)}


@dataclass
class SweepResult:
    entries: list
    seed: int

    @property
    def aggregate_hash(self) -> str:
        h = hashlib.sha256(f"seed={self.seed}".encode())
        for e in sorted(self.entries, key=lambda e: e["name"]):
            h.update(f"{e['name']}:{e['hash']}".encode())
        return h.hexdigest()

    @property
    def exit_code(self) -> int:
        codes = [EXIT_CODES[s] for e in self.entries for s in e["statuses"]]
        if not all(e["ok"] for e in self.entries):
            codes.append(2)
        return max(codes, default=0)

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "seed": self.seed, "aggregateHash": self.aggregate_hash,
                "entries": [{k: e[k] for k in ("name", "ok", "statuses", "hash")}
                            for e in sorted(self.entries, key=lambda e: e["name"])]}


def verify_all(seed: int = 0, jobs: int = 1, include_heavy: bool = False,
               max_order: int = 10 ** 6) -> SweepResult:
    """Check every catalog expectation and run the theorem drivers the entry
    is tagged for.  Jobs are independent; results are sorted by name, so the
    aggregate hash does not depend on ``jobs``."""
    from . import catalog as cat
    names = [e.name for e in cat.catalog() if include_heavy or "heavy" not in e.tags]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as pool:
            out = list(pool.map(_entry_job, names, [seed] * len(names),
                                [max_order] * len(names)))
    else:
        out = [_entry_job(n, seed, max_order) for n in names]
    return SweepResult(out, seed)
