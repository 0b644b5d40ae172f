"""Text grammar for group expressions.

    expr   := NAME '(' [arg (',' arg)*] ')'
    arg    := expr | INT | '[' [arg (',' arg)*] ']' | word | STRING
    word   := factor ('*' factor)*          e.g.  g0^2*g1^-1, or e for identity
    factor := GEN ['^' ['-'] INT]

Words name elements of an already-built group through its generators
g0, g1, ...  Permutations are given as cycle strings: perm(4, "(0 1 2)", "(0 1)").

Constructors
    cyclic(n)  elemab(p, r)  abelian([n1, ..., nr])  heis(p)  modular(p, n)
    perm(n, "cycles", ...)   sl2zmod(p, n)  sl2sylow(p, n)  pl(p, [e1, ..., er])
    dirprod(A, B, ...)       semidirect(K, H, [[word, ...], ...])
    wreath(A, B)             pullback(X, Y, C, [words in C], [words in C])
    ypm(p, m)  thmafix(p, q)  trunc(p, i, s)
Accessors
    sylow(G, p)  nsylow(G, p)  derived(G)  center(G)  mod_center(G)
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import MalformedExpr, PclabError
from . import products as prod
from .group import DEFAULT_MAX_ORDER, Group, Homomorphism, center, commutator, quotient

_TOKEN = re.compile(r'\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<str>"[^"]*")|(?P<op>[()\[\],*^-]))')


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Word:
    factors: tuple  # ((gen, exponent), ...)


def tokenize(text: str) -> list:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise MalformedExpr(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise MalformedExpr(f"expected {value or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        node = self.arg()
        if self.i != len(self.toks):
            raise MalformedExpr(f"trailing input at token {self.peek()[1]!r}")
        return node

    def arg(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return int(val)
        if kind == "str":
            self.take()
            return val[1:-1]
        if val == "[":
            self.take("[")
            items = []
            if self.peek()[1] != "]":
                items.append(self.arg())
                while self.peek()[1] == ",":
                    self.take(",")
                    items.append(self.arg())
            self.take("]")
            return items
        if kind == "name":
            if re.fullmatch(r"g\d+|e", val) and self.toks[self.i + 1:self.i + 2] != [("op", "(")]:
                return self.word()
            self.take()
            self.take("(")
            args = []
            if self.peek()[1] != ")":
                args.append(self.arg())
                while self.peek()[1] == ",":
                    self.take(",")
                    args.append(self.arg())
            self.take(")")
            return Call(val, tuple(args))
        raise MalformedExpr(f"unexpected token {val!r}")

    def word(self):
        factors = [self.factor()]
        while self.peek()[1] == "*":
            self.take("*")
            factors.append(self.factor())
        return Word(tuple(f for f in factors if f is not None))

    def factor(self):
        _, val = self.take()
        exp = 1
        if self.peek()[1] == "^":
            self.take("^")
            sign = 1
            if self.peek()[1] == "-":
                self.take("-")
                sign = -1
            kind, num = self.take()
            if kind != "num":
                raise MalformedExpr(f"bad exponent {num!r}")
            exp = sign * int(num)
        if val == "e":
            return None
        return (int(val[1:]), exp)


def parse(text: str):
    return _Parser(text).parse()


def to_text(node) -> str:
    if isinstance(node, Call):
        return f"{node.name}(" + ",".join(to_text(a) for a in node.args) + ")"
    if isinstance(node, Word):
        if not node.factors:
            return "e"
        return "*".join(f"g{g}" if e == 1 else f"g{g}^{e}" for g, e in node.factors)
    if isinstance(node, list):
        return "[" + ",".join(to_text(a) for a in node) + "]"
    if isinstance(node, str):
        return f'"{node}"'
    return str(node)


def eval_word(G: Group, word) -> int:
    if isinstance(word, int) and word == 1:
        return 0
    if not isinstance(word, Word):
        raise MalformedExpr(f"expected a word in generators, got {word!r}")
    x = 0
    for gen, exp in word.factors:
        if gen >= len(G.generators):
            raise MalformedExpr(f"g{gen} is not a generator of {G!r}")
        x = G.mul(x, G.pow(G.generators[gen], exp))
    return x


def _ints(args, n, name):
    if len(args) != n or not all(isinstance(a, int) for a in args):
        raise MalformedExpr(f"{name} expects {n} integer arguments")
    return args


def _parse_cycles(text: str) -> list:
    cycles = []
    for body in re.findall(r"\(([^()]*)\)", text):
        nums = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
        if nums:
            cycles.append(nums)
    if not re.fullmatch(r"\s*(\([^()]*\)\s*)*", text):
        raise MalformedExpr(f"bad cycle string {text!r}")
    return cycles


def evaluate(expr, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Build the group described by ``expr`` (text or parsed tree)."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    node = parse(expr) if isinstance(expr, str) else expr
    if not isinstance(node, Call):
        raise MalformedExpr("expression must be a constructor call")
    try:
        G = _eval(node, max_order)
    except PclabError:
        raise
    except (ValueError, KeyError, AssertionError) as exc:
        raise MalformedExpr(f"{to_text(node)}: {exc}") from None
    G.expr = to_text(node)
    return G


def _sub(node, max_order):
    if not isinstance(node, Call):
        raise MalformedExpr(f"expected a group expression, got {node!r}")
    return evaluate(node, max_order)


def _eval(node: Call, cap: int) -> Group:
    name, a = node.name, node.args
    if name == "cyclic":
        (n,) = _ints(a, 1, name)
        return prod.cyclic(n, max_order=cap)
    if name == "elemab":
        p, r = _ints(a, 2, name)
        return prod.elementary_abelian(p, r, max_order=cap)
    if name == "abelian":
        if len(a) != 1 or not isinstance(a[0], list):
            raise MalformedExpr("abelian expects a list of cyclic orders")
        return prod.abelian(a[0], max_order=cap)
    if name == "heis":
        (p,) = _ints(a, 1, name)
        return prod.heisenberg(p, max_order=cap)
    if name == "modular":
        p, n = _ints(a, 2, name)
        if n < 3:
            raise MalformedExpr("modular(p, n) needs n >= 3")
        K = prod.cyclic(p ** (n - 1))
        H = prod.cyclic(p)
        aut = prod.automorphism_from_images(K, [K.pow(K.generators[0], 1 + p ** (n - 2))])
        return prod.semidirect(K, H, [aut], max_order=cap, name=f"M({p}^{n})")
    if name == "perm":
        if not a or not isinstance(a[0], int):
            raise MalformedExpr("perm(n, cycles...) expects a degree first")
        degree = a[0]
        gens = [prod.cycles_to_perm(degree, _parse_cycles(c)) for c in a[1:]]
        if not gens:
            gens = [list(range(degree))]
        return prod.perm_group(degree, gens, max_order=cap)
    if name == "sl2zmod":
        p, n = _ints(a, 2, name)
        return prod.sl2_mod(p, n, max_order=cap)
    if name == "sl2sylow":
        p, n = _ints(a, 2, name)
        return prod.sl2_sylow(p, n, max_order=cap)
    if name == "pl":
        if len(a) != 2 or not isinstance(a[0], int) or not isinstance(a[1], list):
            raise MalformedExpr("pl(p, [e1, ..., er]) expected")
        return prod.pl_group(a[0], a[1], max_order=cap)
    if name == "dirprod":
        return prod.direct_product(*[_sub(x, cap) for x in a], max_order=cap)
    if name == "semidirect":
        if len(a) != 3 or not isinstance(a[2], list):
            raise MalformedExpr("semidirect(K, H, [[images of K gens] per H gen])")
        K, H = _sub(a[0], cap), _sub(a[1], cap)
        auts = []
        for images in a[2]:
            if not isinstance(images, list):
                raise MalformedExpr("each action must be a list of words")
            auts.append(prod.automorphism_from_images(K, [eval_word(K, w) for w in images]))
        return prod.semidirect(K, H, auts, max_order=cap)
    if name == "wreath":
        if len(a) != 2:
            raise MalformedExpr("wreath(A, B)")
        return prod.wreath_regular(_sub(a[0], cap), _sub(a[1], cap), max_order=cap)
    if name == "pullback":
        if len(a) != 5:
            raise MalformedExpr("pullback(X, Y, C, [f images], [g images])")
        X, Y, C = (_sub(x, cap) for x in a[:3])
        try:
            f = Homomorphism.from_generator_images(X, C, [eval_word(C, w) for w in a[3]])
            g = Homomorphism.from_generator_images(Y, C, [eval_word(C, w) for w in a[4]])
        except ValueError as exc:
            raise MalformedExpr(f"pullback leg: {exc}") from None
        return prod.pullback(f, g, max_order=cap)
    if name == "ypm":
        p, m = _ints(a, 2, name)
        return prod.y_group(p, m, max_order=cap)
    if name == "thmafix":
        p, q = _ints(a, 2, name)
        return prod.thm_a_fixture(p, q, max_order=cap)
    if name == "trunc":
        p, i, s = _ints(a, 3, name)
        return prod.truncated_counterexample(p, i, s, max_order=cap)
    if name in ("sylow", "nsylow"):
        if len(a) != 2 or not isinstance(a[1], int):
            raise MalformedExpr(f"{name}(G, p)")
        from ..sylow import sylow_subgroup
        from .group import normalizer
        G = _sub(a[0], cap)
        P = sylow_subgroup(G, a[1])
        sub = P if name == "sylow" else normalizer(G, P)
        return sub.as_group(name=f"{name}({G.name},{a[1]})")
    if name == "derived":
        G = _sub(a[0], cap)
        return commutator(G, G.whole(), G.whole()).as_group(name=f"[{G.name},{G.name}]")
    if name == "center":
        G = _sub(a[0], cap)
        return center(G).as_group(name=f"Z({G.name})")
    if name == "mod_center":
        G = _sub(a[0], cap)
        Q, _ = quotient(G, center(G), name=f"{G.name}/Z")
        return Q
    raise MalformedExpr(f"unknown constructor {name!r}")
