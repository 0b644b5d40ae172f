"""Named example groups with the properties they are expected to have.

Every expectation carries a provenance tag:

``PAPER``
    the value is asserted in the source text (``source`` quotes where);
``TRIVIAL``
    it follows directly from the construction;
``DERIVED``
    it was computed, and ``oracle`` names the independent computation that
    the test suite uses to re-derive it.

``verify_entry`` re-evaluates every expectation through the public API, so
building the whole catalog doubles as a self-test of the engine.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .core.expr import evaluate
from .core.group import (DEFAULT_MAX_ORDER, Group, Subgroup, center, commutator,
                         normalizer, quotient)
from .core.iso import is_isomorphic
from .errors import InvalidPrimes, MalformedExpr, SizeCapExceeded
from .fusion import controls_p_fusion
from .series import (agemo, central_height, is_pi_central_of_height, is_power_surjective,
                     k_elementary_p_length, omega, omega_exact_set, zeta_series)
from .sylow import is_p_nilpotent, op_core, op_prime_core, opp_tower, sylow_subgroup

PROVENANCE = ("PAPER", "TRIVIAL", "DERIVED")


@dataclass(frozen=True)
class Expectation:
    prop: str
    params: dict
    expected: Any
    provenance: str
    source: str = ""          # quotation for PAPER, oracle name for DERIVED

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if self.provenance == "DERIVED" and not self.source:
            raise ValueError(f"derived expectation {self.prop} must name its oracle")

    def to_json(self) -> dict:
        return {"property": self.prop, "parameters": dict(self.params),
                "expected": self.expected, "provenance": self.provenance,
                "source": self.source}


@dataclass
class CatalogEntry:
    name: str
    expr: str
    expectations: list = field(default_factory=list)
    tags: tuple = ()
    p: int | None = None      # the prime the entry is about
    note: str = ""

    def build(self, max_order: int = DEFAULT_MAX_ORDER) -> Group:
        return evaluate(self.expr, max_order=max_order)

    def to_json(self) -> dict:
        return {"name": self.name, "expr": self.expr, "p": self.p, "tags": list(self.tags),
                "note": self.note, "expectations": [e.to_json() for e in self.expectations]}


def E(prop, expected, provenance, source="", **params) -> Expectation:
    return Expectation(prop, params, expected, provenance, source)


# -- property evaluators ------------------------------------------------------


def _sylow_group(G: Group, p: int) -> Group:
    return G if G.is_p_group(p) else sylow_subgroup(G, p).as_group()


def _exponent(G: Group) -> int:
    return int(np.lcm.reduce(G.element_orders))


def _nilpotency_class(G: Group):
    zs = zeta_series(G)
    return len(zs.terms) - 1 if zs.terms[-1].is_whole() else None


def _quotient_height(G: Group, p: int, i: int, by: int):
    """Central height (for Omega_i) of G / Omega_by(G)."""
    Q, _ = quotient(G, omega(G, p, by))
    return central_height(Q, p, i)


def _complement(G: Group, p: int):
    res = is_p_nilpotent(G, p)
    if not res.yes:
        return None
    C = res.complement
    return {"order": C.order, "normal": C.is_normal(),
            "coprime": C.order % p != 0,
            "meets_sylow_trivially": int(sylow_subgroup(G, p).mask[C.members].sum()) == 1}


PROPERTIES: dict[str, Callable] = {
    "order": lambda G: G.order,
    "exponent": _exponent,
    "abelian": lambda G: G.is_abelian(),
    "nilpotency_class": _nilpotency_class,
    "derived_order": lambda G: commutator(G, G.whole(), G.whole()).order,
    "center_order": lambda G: center(G).order,
    "omega_order": lambda G, p, i=1: omega(G, p, i).order,
    "agemo_order": lambda G, p, j=1: agemo(G, p, j).order,
    "omega_exact": lambda G, p, j=1: omega_exact_set(G, p, j).equal,
    "power_surjective": lambda G, p: is_power_surjective(G, p),
    "pi_central": lambda G, p, i, k: is_pi_central_of_height(G, p, i, k),
    "central_height": lambda G, p, i=1: central_height(G, p, i),
    "sylow_order": lambda G, p: sylow_subgroup(G, p).order,
    "sylow_central_height": lambda G, p, i=1: central_height(_sylow_group(G, p), p, i),
    "quotient_central_height": _quotient_height,
    "p_nilpotent": lambda G, p: bool(is_p_nilpotent(G, p)),
    "complement": _complement,
    "o_p_order": lambda G, p: op_core(G, p).order,
    "o_p_prime_order": lambda G, p: op_prime_core(G, p).order,
    "sandwich": lambda G, p: opp_tower(G, p).is_sandwich,
    "normalizer_controls_fusion": lambda G, p, level="cyclic": controls_p_fusion(
        normalizer(G, sylow_subgroup(G, p)), G, p, level).controls,
    "k_length": lambda G, p, k: k_elementary_p_length(G, p, k),
    "isomorphic_to": lambda G, expr: is_isomorphic(G, evaluate(expr)).verdict,
    "structure_map_ok": lambda G: _structure_map_ok(G),
}


def _structure_map_ok(G: Group) -> bool:
    """For a pull-back along beta: C_p wr C_p -> C_p, re-check that beta is
    onto with elementary abelian kernel."""
    beta = G.beta
    p = beta.target.order
    K = beta.kernel()
    W = beta.source
    return (beta.image().is_whole() and beta.is_homomorphism()
            and K.as_group().is_abelian() and bool((W.power_map(p)[K.members] == 0).all())
            and K.order * p == W.order)


def evaluate_property(G: Group, exp: Expectation):
    return PROPERTIES[exp.prop](G, **exp.params)


@dataclass
class EntryCheck:
    name: str
    expectation: Expectation
    actual: Any
    ok: bool

    def to_json(self) -> dict:
        return {"entry": self.name, **self.expectation.to_json(),
                "actual": self.actual, "ok": self.ok}


def verify_entry(entry: CatalogEntry, max_order: int = DEFAULT_MAX_ORDER,
                 G: Group | None = None) -> list:
    G = entry.build(max_order) if G is None else G
    out = []
    for exp in entry.expectations:
        actual = evaluate_property(G, exp)
        out.append(EntryCheck(entry.name, exp, actual, actual == exp.expected))
    return out


# -- named builders -----------------------------------------------------------


def build_ypm(p: int, m: int, max_order: int = 3 ** 6) -> Group:
    """Y_p(m); by default only p = 3 and m <= 3 are admitted."""
    if p % 2 == 0:
        raise InvalidPrimes("Y_p(m) needs an odd prime")
    if m < 1:
        raise MalformedExpr("m must be >= 1")
    if p ** (p + m) > max_order:
        raise SizeCapExceeded(f"|Y_{p}({m})| = {p}^{p + m} exceeds the cap {max_order}")
    return evaluate(f"ypm({p},{m})", max_order=max_order)


def build_pl(p: int, exponents, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    exps = ",".join(str(int(e)) for e in exponents)
    return evaluate(f"pl({p},[{exps}])", max_order=max_order)


def congruence_kernel(G: Group, p: int, m: int):
    """K_m: the matrices of G congruent to the identity modulo p^m."""
    codes = G.codes
    eye = np.array([1, 0, 0, 1], dtype=np.int64)
    hit = ((codes - eye) % p ** m == 0).all(axis=1)
    return Subgroup(G, np.flatnonzero(hit))


def build_sl2_and_sylow(p: int, n: int, max_order: int = 20000):
    """SL_2(Z/p^n) with a Sylow p-subgroup and the congruence kernels K_m."""
    G = evaluate(f"sl2zmod({p},{n})", max_order=max_order)
    P = sylow_subgroup(G, p)
    G.congruence_kernels = {m: congruence_kernel(G, p, m) for m in range(1, n + 1)}
    return G, P


def build_thm_a_fixture(p: int, q: int, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    return evaluate(f"thmafix({p},{q})", max_order=max_order)


# -- the inventory ------------------------------------------------------------

ENUM = "enumeration"
CENSUS = "exhaustive element-order census"
ZETA = "centre-scan zeta oracle"


SL2_NOTE = ("Omega_1-extension property for SL_n needs p > n+1 and n <= (p-1)/2; "
            "recorded here, not enforced")


def standard_small_p_groups(p: int) -> list:
    """Cyclic, elementary abelian, order-p^3, wreath and product groups."""
    if p > 7:
        raise InvalidPrimes("standard small p-groups are listed for p <= 7 only")
    out = []
    for n in range(1, 5):
        out.append(CatalogEntry(f"C{p ** n}", f"cyclic({p ** n})", [
            E("order", p ** n, "TRIVIAL"),
            E("power_surjective", True, "TRIVIAL", p=p),
            E("omega_order", p, "TRIVIAL", p=p),
            E("k_length", n, "DERIVED", "lambda recursion on cyclic groups", p=p, k=1),
        ], ("pgroup", "standard"), p))
    for r in range(2, 5):
        out.append(CatalogEntry(f"E{p}^{r}", f"elemab({p},{r})", [
            E("order", p ** r, "TRIVIAL"),
            E("omega_order", p ** r, "TRIVIAL", p=p),
            E("agemo_order", 1, "TRIVIAL", p=p),
            E("k_length", 1, "TRIVIAL", p=p, k=1),
        ], ("pgroup", "standard"), p))
    out.append(CatalogEntry(f"Heis{p}", f"heis({p})", [
        E("order", p ** 3, "DERIVED", ENUM),
        E("nilpotency_class", 2, "DERIVED", ZETA),
        E("exponent", p, "DERIVED", CENSUS),
        E("center_order", p, "DERIVED", ZETA),
        E("k_length", 2, "PAPER", "exponent p and nilpotency class l", p=p, k=1),
    ], ("pgroup", "standard", "heisenberg"), p))
    out.append(CatalogEntry(f"Mod{p}^3", f"modular({p},3)", [
        E("order", p ** 3, "DERIVED", ENUM),
        E("exponent", p * p, "DERIVED", CENSUS),
        E("nilpotency_class", 2, "DERIVED", ZETA),
        E("omega_order", p * p, "DERIVED", CENSUS, p=p),
    ], ("pgroup", "standard", "modular"), p))
    if p ** (p + 1) <= 10 ** 5:
        out.append(CatalogEntry(f"C{p}wrC{p}", f"wreath(cyclic({p}),cyclic({p}))", [
            E("order", p ** (p + 1), "TRIVIAL"),
            E("nilpotency_class", p, "DERIVED", ZETA),
            E("exponent", p * p, "DERIVED", CENSUS),
        ], ("pgroup", "standard", "wreath"), p))
    out.append(CatalogEntry(f"Heis{p}xC{p}", f"dirprod(heis({p}),cyclic({p}))", [
        E("order", p ** 4, "TRIVIAL"),
        E("center_order", p * p, "DERIVED", ZETA),
    ], ("pgroup", "standard"), p))
    out.append(CatalogEntry(f"C{p * p}xC{p}", f"dirprod(cyclic({p * p}),cyclic({p}))", [
        E("order", p ** 3, "TRIVIAL"),
        E("omega_order", p * p, "TRIVIAL", p=p),
        E("agemo_order", p, "TRIVIAL", p=p),
    ], ("pgroup", "standard"), p))
    out.append(CatalogEntry(f"Mod{p}^3xC{p}", f"dirprod(modular({p},3),cyclic({p}))", [
        E("order", p ** 4, "TRIVIAL"),
        E("exponent", p * p, "DERIVED", CENSUS),
    ], ("pgroup", "standard"), p))
    out.append(CatalogEntry(f"C{p * p}xC{p * p}", f"dirprod(cyclic({p * p}),cyclic({p * p}))", [
        E("order", p ** 4, "TRIVIAL"),
        E("power_surjective", True, "TRIVIAL", p=p),
    ], ("pgroup", "standard"), p))
    return out


def _jordan_semidirect(p: int) -> str:
    """E_p^3 extended by the unipotent Jordan block of size 3."""
    return f"semidirect(elemab({p},3),cyclic({p}),[[g0*g1,g1*g2,g2]])"


def _sandwich_fixtures() -> list:
    J = _jordan_semidirect(5)
    JC2 = f"semidirect({J},cyclic(2),[[g0^-1,g1^-1,g2^-1,g3]])"
    JC4 = f"semidirect({J},cyclic(4),[[g0^2,g1^2,g2^2,g3]])"
    C11 = f"semidirect(cyclic(11),{JC2},[[g0],[g0],[g0],[g0^3],[g0^-1]])"
    common = [E("sandwich", True, "DERIVED", "explicit tower of cores", p=5),
              E("sylow_central_height", 3, "DERIVED", ZETA, p=5)]
    return [
        CatalogEntry("J5:C2", JC2, [E("order", 1250, "TRIVIAL"),
                                    E("o_p_prime_order", 1, "DERIVED", "normal p'-subgroup scan", p=5),
                                    *common], ("thmE", "sandwich"), 5),
        CatalogEntry("J5:C4", JC4, [E("order", 2500, "TRIVIAL"), *common], ("thmE", "sandwich"), 5),
        CatalogEntry("C11:(J5:C2)", C11, [E("order", 13750, "TRIVIAL"),
                                          E("o_p_prime_order", 11, "DERIVED", "normal p'-subgroup scan", p=5),
                                          *common], ("thmE", "sandwich"), 5),
        CatalogEntry("Heis5:C4", "semidirect(heis(5),cyclic(4),[[g0^2,g1^3]])", [
            E("order", 500, "TRIVIAL"),
            E("sylow_central_height", 2, "DERIVED", ZETA, p=5),
            E("sandwich", True, "DERIVED", "explicit tower of cores", p=5),
        ], ("thmE", "sandwich"), 5),
        CatalogEntry("NSyl5(SL2(Z/25))", "nsylow(sl2zmod(5,2),5)", [
            E("order", 2500, "DERIVED", ENUM),
            E("sylow_central_height", 3, "PAPER", "P in Syl_p(G) is p-central of height 3", p=5),
            E("sandwich", True, "TRIVIAL", p=5),
        ], ("thmE", "sandwich", "boundary"), 5,
            note="the conjugation module on Omega_1(O_p) has kernel Omega_1, strictly "
                 "smaller than P, although P is normal"),
    ]


def _truncations() -> list:
    out = []
    heights = {(3, 1, 1): 1, (3, 1, 2): 2, (3, 1, 3): 4,
               (3, 2, 1): 1, (3, 2, 2): 1, (3, 2, 3): 2, (5, 1, 1): 1}
    own = {(3, 1, 1): 2, (3, 1, 2): 2, (3, 1, 3): 2,
           (3, 2, 1): 2, (3, 2, 2): 4, (3, 2, 3): 4, (5, 1, 1): 4}
    for (p, i, s), h in heights.items():
        out.append(CatalogEntry(f"Trunc({p},{i},{s})", f"trunc({p},{i},{s})", [
            E("order", p ** ((p - 1) * s + i + 1), "TRIVIAL"),
            E("central_height", own[(p, i, s)], "DERIVED", ZETA, p=p, i=i),
            E("quotient_central_height", h, "DERIVED", "quotient + centre-scan oracle",
              p=p, i=1, by=i),
        ], ("pgroup", "truncation"), p,
            note=f"finite truncation with coefficients mod {p}^{s}; P/Omega_{i} has "
                 f"central height {h}"))
    return out


def catalog() -> list:
    """The full inventory, in a fixed order."""
    entries = [
        CatalogEntry("SL2(F5)", "sl2zmod(5,1)", [
            E("order", 120, "TRIVIAL"),
            E("pi_central", True, "PAPER", "the finite group G=SL_2(r) is 2-central", p=2, i=1, k=1),
            E("p_nilpotent", False, "PAPER", "Theorem A does not hold for p=2", p=2),
            E("sylow_order", 8, "DERIVED", "exhaustive maximal p-subgroup search", p=2),
            E("o_p_order", 1, "DERIVED", "conjugate-intersection oracle", p=5),
            E("o_p_order", 2, "DERIVED", "conjugate-intersection oracle", p=2),
        ], ("thmA", "boundary"), 2),
        CatalogEntry("SL2(F7)", "sl2zmod(7,1)", [
            E("order", 336, "TRIVIAL"),
            E("pi_central", True, "PAPER", "the finite group G=SL_2(r) is 2-central", p=2, i=1, k=1),
            E("p_nilpotent", False, "PAPER", "Theorem A does not hold for p=2", p=2),
            E("sylow_order", 16, "DERIVED", "exhaustive maximal p-subgroup search", p=2),
        ], ("thmA", "boundary"), 2),
        CatalogEntry("SL2(Z/25)", "sl2zmod(5,2)", [
            E("order", 15000, "DERIVED", ENUM),
            E("sylow_order", 625, "DERIVED", "order formula and p-element closure", p=5),
            E("sylow_central_height", 3, "PAPER", "P in Syl_p(G) is p-central of height 3", p=5),
            E("normalizer_controls_fusion", False, "PAPER",
              "N_G(P) does not control p-fusion in G", p=5, level="cyclic"),
        ], ("fusion", "boundary"), 5),
        CatalogEntry("Syl5(SL2(Z/25))", "sl2sylow(5,2)", [
            E("order", 625, "DERIVED", ENUM),
            E("central_height", 3, "PAPER", "P in Syl_p(G) is p-central of height 3", p=5),
            E("omega_order", 125, "PAPER", "Omega_1(P_m)=K_m/K_{m+1}", p=5),
            E("omega_exact", True, "DERIVED", CENSUS, p=5, j=1),
        ], ("pgroup", "sl2"), 5, note=SL2_NOTE),
        CatalogEntry("Syl5(SL2(Z/125))", "sl2sylow(5,3)", [
            E("order", 5 ** 7, "DERIVED", ENUM),
            E("omega_order", 125, "PAPER", "Omega_1(P_m)=K_m/K_{m+1}", p=5),
            E("central_height", 3, "DERIVED", ZETA, p=5),
        ], ("pgroup", "sl2", "heavy"), 5, note=SL2_NOTE),
        CatalogEntry("Syl3(SL2(Z/27))", "sl2sylow(3,3)", [
            E("order", 3 ** 7, "DERIVED", ENUM),
            E("central_height", 5, "DERIVED", ZETA, p=3),
        ], ("pgroup", "sl2"), 3, note=SL2_NOTE),
        CatalogEntry("Y3(1)", "ypm(3,1)", [
            E("order", 81, "PAPER", "Y_p(1)=C_p wr C_p"),
            E("isomorphic_to", "yes", "PAPER", "Y_p(1)=C_p wr C_p",
              expr="wreath(cyclic(3),cyclic(3))"),
            E("structure_map_ok", True, "TRIVIAL"),
        ], ("pgroup", "ypm"), 3),
        CatalogEntry("Y3(2)", "ypm(3,2)", [
            E("order", 243, "DERIVED", "pull-back order |ker beta| p^m against enumeration"),
            E("structure_map_ok", True, "TRIVIAL"),
        ], ("pgroup", "ypm"), 3),
        CatalogEntry("Y3(3)", "ypm(3,3)", [
            E("order", 729, "DERIVED", "pull-back order |ker beta| p^m against enumeration"),
            E("structure_map_ok", True, "TRIVIAL"),
        ], ("pgroup", "ypm"), 3),
        CatalogEntry("PL(Z/3)", "pl(3,[1])", [E("order", 1, "TRIVIAL")], ("pgroup", "pl"), 3),
        CatalogEntry("PL(Z/9)", "pl(3,[2])", [
            E("order", 3, "DERIVED", "unit-group count of 1 + 3Z/9"),
        ], ("pgroup", "pl"), 3),
        CatalogEntry("PL(Z/27)", "pl(3,[3])", [
            E("order", 9, "DERIVED", "unit-group count of 1 + 3Z/27"),
        ], ("pgroup", "pl"), 3),
        CatalogEntry("PL(Z/9+Z/9)", "pl(3,[2,2])", [
            E("order", 81, "DERIVED", "congruence count of I + 3 End"),
            E("central_height", 1, "PAPER", "is a p-central p-group", p=3),
        ], ("pgroup", "pl"), 3),
        CatalogEntry("PL(Z/9+Z/27)", "pl(3,[2,3])", [
            E("order", 243, "DERIVED", "congruence count of I + 3 End"),
            E("central_height", 1, "PAPER", "is a p-central p-group", p=3),
        ], ("pgroup", "pl"), 3),
        CatalogEntry("PL(Z/25+Z/25)", "pl(5,[2,2])", [
            E("order", 625, "DERIVED", "congruence count of I + 5 End"),
            E("central_height", 1, "PAPER", "is a p-central p-group", p=5),
        ], ("pgroup", "pl"), 5),
        CatalogEntry("ThmA(3,7)", "thmafix(3,7)", [
            E("order", 63, "TRIVIAL"),
            E("omega_order", 3, "DERIVED", CENSUS, p=3),
            E("central_height", 1, "DERIVED", ZETA, p=3),
            E("complement", {"order": 7, "normal": True, "coprime": True,
                             "meets_sylow_trivially": True}, "DERIVED", "explicit complement", p=3),
            E("nilpotency_class", None, "DERIVED", ZETA),
        ], ("thmA",), 3),
        CatalogEntry("ThmA(5,11)", "thmafix(5,11)", [
            E("order", 275, "TRIVIAL"),
            E("omega_order", 5, "DERIVED", CENSUS, p=5),
            E("central_height", 1, "DERIVED", ZETA, p=5),
            E("complement", {"order": 11, "normal": True, "coprime": True,
                             "meets_sylow_trivially": True}, "DERIVED", "explicit complement", p=5),
            E("nilpotency_class", None, "DERIVED", ZETA),
        ], ("thmA", "thmE"), 5),
        CatalogEntry("ThmA(3,7;h2)", "semidirect(cyclic(7),semidirect(cyclic(27),cyclic(9),[[g0^4]]),"
                                     "[[g0],[g0^2]])", [
            E("order", 1701, "TRIVIAL"),
            E("central_height", 2, "DERIVED", ZETA, p=3),
            E("complement", {"order": 7, "normal": True, "coprime": True,
                             "meets_sylow_trivially": True}, "DERIVED", "explicit complement", p=3),
            E("nilpotency_class", None, "DERIVED", ZETA),
        ], ("thmA",), 3),
    ]
    entries += _sandwich_fixtures()
    entries += _truncations()
    for p in (3, 5):
        entries += standard_small_p_groups(p)
    return entries


def get(name: str) -> CatalogEntry:
    for entry in catalog():
        if entry.name == name:
            return entry
    raise KeyError(name)


def resolve(text: str) -> str:
    """Catalog names stand for their expressions wherever an expression is expected."""
    for entry in catalog():
        if entry.name == text:
            return entry.expr
    return text
