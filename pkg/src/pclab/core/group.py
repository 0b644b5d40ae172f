"""Fully enumerated finite groups.

Elements are plain ints: the position of the element in a breadth-first
enumeration from the generators.  Index 0 is always the identity.
"""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from ..errors import NotNormal, SizeCapExceeded
from .backends import Backend, QuotientBackend, SubgroupBackend

DEFAULT_MAX_ORDER = 2 ** 21
TABLE_LIMIT = 2500


def _packer(radix):
    """Return a function mapping code rows to sortable keys."""
    total = 1
    for r in radix:
        total *= max(int(r), 1)
    if total < 2 ** 62:
        mult = np.ones(len(radix), dtype=np.int64)
        for i in range(1, len(radix)):
            mult[i] = mult[i - 1] * max(int(radix[i - 1]), 1)

        def pack(codes):
            return np.asarray(codes, dtype=np.int64) @ mult
        return pack

    def pack_void(codes):
        codes = np.ascontiguousarray(codes, dtype=np.int64)
        return codes.view(np.dtype((np.void, 8 * codes.shape[1]))).ravel()
    return pack_void


class Group:
    """A finite group enumerated by breadth-first closure.

    The enumeration starts from the identity; each frontier element ``x`` is
    left-multiplied by the generators in declaration order and unseen
    products are appended in that order.  ``parent[i]`` and ``parent_gen[i]``
    record that element ``i`` equals ``generators[parent_gen[i]] * parent[i]``.
    """

    def __init__(self, backend: Backend, gen_codes, max_order=DEFAULT_MAX_ORDER, name=None):
        self.backend = backend
        self.name = name
        self._pack = _packer(backend.radix)
        gen_codes = np.asarray(gen_codes, dtype=np.int64).reshape(-1, backend.width)
        self._enumerate(gen_codes, max_order)
        self.generators = [int(self.index_of(c[None, :])[0]) for c in gen_codes]

    # -- construction --------------------------------------------------

    def _enumerate(self, gens, max_order):
        ident = self.backend.identity()[None, :]
        ngen = len(gens)
        chunks = [ident]
        parent = [np.array([-1])]
        pgen = [np.array([-1])]
        depth = [np.array([0])]
        seen = self._pack(ident)
        frontier = ident
        frontier_idx = np.array([0])
        count = 1
        level = 0
        while len(frontier) and ngen:
            level += 1
            a = np.tile(gens, (len(frontier), 1))
            b = np.repeat(frontier, ngen, axis=0)
            prod = self.backend.mul(a, b)
            keys = self._pack(prod)
            _, first = np.unique(keys, return_index=True)
            first = first[~np.isin(keys[first], seen)]
            first.sort()
            if not len(first):
                break
            if count + len(first) > max_order:
                raise SizeCapExceeded(
                    f"closure exceeded max order {max_order} (reached {count + len(first)})")
            new_idx = np.arange(count, count + len(first))
            chunks.append(prod[first])
            parent.append(frontier_idx[first // ngen])
            pgen.append(first % ngen)
            depth.append(np.full(len(first), level))
            seen = np.sort(np.concatenate([seen, keys[first]]))
            frontier = prod[first]
            frontier_idx = new_idx
            count += len(first)
        self.codes = np.concatenate(chunks)
        self.order = len(self.codes)
        self.parent = np.concatenate(parent)
        self.parent_gen = np.concatenate(pgen)
        self.depth = np.concatenate(depth)
        keys = self._pack(self.codes)
        self._key_order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._key_order]

    @classmethod
    def from_subgroup(cls, sub: "Subgroup", name=None):
        """Re-enumerate a subgroup as a group in its own right.

        ``embedding`` maps the new indices back to the parent's.
        """
        gens = np.asarray(sub.generators, dtype=np.int64)[:, None]
        G = cls(SubgroupBackend(sub.parent), gens, name=name)
        G.embedding = G.codes[:, 0].copy()
        return G

    # -- element lookup -------------------------------------------------

    def index_of(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).reshape(-1, self.backend.width)
        keys = self._pack(codes)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        if not (self._sorted_keys[pos] == keys).all():
            raise KeyError("code does not belong to this group")
        return self._key_order[pos]

    def contains_codes(self, codes) -> np.ndarray:
        keys = self._pack(np.asarray(codes, dtype=np.int64).reshape(-1, self.backend.width))
        pos = np.minimum(np.searchsorted(self._sorted_keys, keys), self.order - 1)
        return self._sorted_keys[pos] == keys

    # -- arithmetic -----------------------------------------------------

    @cached_property
    def table(self):
        """Full Cayley table for small groups, ``None`` above TABLE_LIMIT."""
        if self.order > TABLE_LIMIT:
            return None
        n = self.order
        dtype = np.int16 if n < 2 ** 15 else np.int32
        t = np.empty((n, n), dtype=dtype)
        step = max(1, 2 ** 18 // n)
        for i in range(0, n, step):
            rows = self.codes[i:i + step]
            a = np.repeat(rows, n, axis=0)
            b = np.tile(self.codes, (len(rows), 1))
            t[i:i + step] = self.index_of(self.backend.mul(a, b)).reshape(len(rows), n)
        return t

    def mul(self, a, b):
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        scalar = a_arr.ndim == 0 and b_arr.ndim == 0
        a_arr, b_arr = np.broadcast_arrays(a_arr, b_arr)
        shape = a_arr.shape
        a_flat = a_arr.ravel()
        b_flat = b_arr.ravel()
        t = self.table if self.order <= TABLE_LIMIT else None
        if t is not None:
            out = t[a_flat, b_flat].astype(np.int64)
        else:
            out = self.index_of(self.backend.mul(self.codes[a_flat], self.codes[b_flat]))
        return int(out[0]) if scalar else out.reshape(shape)

    def _power_scan(self):
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        inverse = np.zeros(n, dtype=np.int64)
        base = np.arange(n)
        pending = base.copy()
        prev = np.zeros(n, dtype=np.int64)
        cur = base.copy()
        k = 1
        while len(pending):
            done = cur == 0
            orders[pending[done]] = k
            inverse[pending[done]] = prev[done]
            keep = ~done
            pending, prev, cur = pending[keep], cur[keep], cur[keep]
            if not len(pending):
                break
            cur = self.mul(cur, pending)
            k += 1
        self.__dict__["element_orders"] = orders
        self.__dict__["inverses"] = inverse

    @cached_property
    def element_orders(self) -> np.ndarray:
        self._power_scan()
        return self.__dict__["element_orders"]

    @cached_property
    def inverses(self) -> np.ndarray:
        self._power_scan()
        return self.__dict__["inverses"]

    def inv(self, a):
        out = self.inverses[np.asarray(a, dtype=np.int64)]
        return int(out) if np.ndim(out) == 0 else out

    def element_order(self, x: int) -> int:
        return int(self.element_orders[x])

    def pow(self, a, k: int):
        """Vectorised ``a**k`` (negative ``k`` allowed)."""
        a = np.asarray(a, dtype=np.int64)
        scalar = a.ndim == 0
        a = np.atleast_1d(a)
        if k < 0:
            a = self.inverses[a]
            k = -k
        result = np.zeros_like(a)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return int(result[0]) if scalar else result

    @cached_property
    def memo(self) -> dict:
        """Per-group cache for derived objects (series, cores, ...)."""
        return {}

    @cached_property
    def pth_power_cache(self):
        return {}

    def power_map(self, k: int) -> np.ndarray:
        """x -> x**k for every element, cached per exponent."""
        cache = self.pth_power_cache
        if k not in cache:
            cache[k] = self.pow(np.arange(self.order), k)
        return cache[k]

    def comm(self, a, b):
        """Commutator [a, b] = a^-1 b^-1 a b."""
        ia, ib = self.inv(a), self.inv(b)
        return self.mul(self.mul(ia, ib), self.mul(a, b))

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    # -- convenience ----------------------------------------------------

    @cached_property
    def all_elements(self) -> np.ndarray:
        return np.arange(self.order)

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.all_elements, gens=self.generators)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, np.array([0]), gens=[])

    def is_abelian(self) -> bool:
        g = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in g for b in g)

    @cached_property
    def prime_factors(self) -> dict:
        n, out, d = self.order, {}, 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, 0) + 1
                n //= d
            d += 1
        if n > 1:
            out[n] = out.get(n, 0) + 1
        return out

    def is_p_group(self, p: int) -> bool:
        return set(self.prime_factors) <= {p}

    def p_part(self, p: int) -> int:
        return p ** self.prime_factors.get(p, 0)

    def __len__(self):
        return self.order

    def __repr__(self):
        label = self.name or self.backend.kind
        return f"<Group {label} order={self.order}>"


class Subgroup:
    """A subgroup of an enumerated group, held as a sorted index array."""

    def __init__(self, parent: Group, members, gens=None):
        self.parent = parent
        members = np.unique(np.asarray(members, dtype=np.int64))
        self.members = members
        self.order = len(members)
        if parent.order % self.order:
            raise ValueError(f"|H| = {self.order} does not divide |G| = {parent.order}")
        self._gens = None if gens is None else [int(g) for g in gens]
        self._normal = None

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    @property
    def generators(self) -> list:
        if self._gens is None:
            self._gens = closure(self.parent, self.members).generators
        return self._gens

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def contains(self, xs) -> np.ndarray:
        return self.mask[np.asarray(xs, dtype=np.int64)]

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and self.order == other.order and np.array_equal(self.members, other.members))

    def __hash__(self):
        return hash((id(self.parent), self.members.tobytes()))

    def __le__(self, other: "Subgroup") -> bool:
        return self.order <= other.order and bool(other.mask[self.members].all())

    def __lt__(self, other):
        return self.order < other.order and self <= other

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    @property
    def key(self) -> bytes:
        return self.members.tobytes()

    def is_normal(self) -> bool:
        if self._normal is None:
            G = self.parent
            ok = True
            for s in G.generators:
                if not self.mask[G.conj(s, self.members)].all():
                    ok = False
                    break
            self._normal = ok
        return self._normal

    def as_group(self, name=None) -> Group:
        return Group.from_subgroup(self, name=name)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<Subgroup order={self.order} of {self.parent!r}>"


class Homomorphism:
    """A map of enumerated groups given by the image of every element."""

    def __init__(self, source: Group, target: Group, images):
        self.source = source
        self.target = target
        self.images = np.asarray(images, dtype=np.int64)
        assert self.images.shape == (source.order,)

    def __call__(self, x):
        out = self.images[np.asarray(x, dtype=np.int64)]
        return int(out) if np.ndim(out) == 0 else out

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(self.images == 0))

    def image(self) -> Subgroup:
        return Subgroup(self.target, np.unique(self.images))

    def preimage(self, sub: Subgroup) -> Subgroup:
        return Subgroup(self.source, np.flatnonzero(sub.mask[self.images]))

    def is_homomorphism(self, samples=None, seed=0) -> bool:
        """Exhaustive check up to 10^4 elements, random triples above."""
        S, T = self.source, self.target
        if S.order <= 10 ** 4 and samples is None:
            for a in range(S.order):
                b = np.arange(S.order)
                if not np.array_equal(self.images[S.mul(a, b)],
                                      T.mul(self.images[a], self.images[b])):
                    return False
            return True
        rng = np.random.default_rng(seed)
        n = samples or 10 ** 5
        a = rng.integers(0, S.order, n)
        b = rng.integers(0, S.order, n)
        return bool(np.array_equal(self.images[S.mul(a, b)],
                                   T.mul(self.images[a], self.images[b])))

    @classmethod
    def from_generator_images(cls, source: Group, target: Group, gen_images) -> "Homomorphism":
        """Extend generator images along the enumeration tree, then validate.

        Raises ``ValueError`` when the images do not define a homomorphism.
        """
        gen_images = [int(x) for x in gen_images]
        if len(gen_images) != len(source.generators):
            raise ValueError("one image per generator required")
        # generator images indexed by enumeration-generator slot
        slot = np.asarray(gen_images, dtype=np.int64)
        images = np.zeros(source.order, dtype=np.int64)
        for lvl in range(1, int(source.depth.max(initial=0)) + 1):
            idx = np.flatnonzero(source.depth == lvl)
            images[idx] = target.mul(slot[source.parent_gen[idx]], images[source.parent[idx]])
        for s, img in zip(source.generators, gen_images):
            if images[s] != img:
                raise ValueError("generator images are inconsistent")
        allx = np.arange(source.order)
        for s, img in zip(source.generators, gen_images):
            if not np.array_equal(images[source.mul(s, allx)], target.mul(img, images)):
                raise ValueError("generator images do not define a homomorphism")
        return cls(source, target, images)


# -- subgroup generation --------------------------------------------------


def _extend(G: Group, mask: np.ndarray, members: list, gens: list, g: int):
    """Grow the closed set ``mask`` (under right-multiplication by ``gens``) by ``g``."""
    gens.append(g)
    cur = np.concatenate(members)
    frontier = np.unique(G.mul(cur, g))
    frontier = frontier[~mask[frontier]]
    garr = np.asarray(gens, dtype=np.int64)
    while len(frontier):
        mask[frontier] = True
        members.append(frontier)
        prod = G.mul(frontier[:, None], garr[None, :]).ravel()
        prod = np.unique(prod)
        frontier = prod[~mask[prod]]


def closure(G: Group, seed) -> Subgroup:
    """Smallest subgroup containing ``seed``.

    Generators are picked greedily: the lowest-index seed element not yet in
    the current subgroup is added until the seed is exhausted.
    """
    seed = np.unique(np.asarray(list(seed) if not isinstance(seed, np.ndarray) else seed,
                                dtype=np.int64))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    members = [np.array([0])]
    gens: list = []
    while True:
        rest = seed[~mask[seed]]
        if not len(rest):
            break
        _extend(G, mask, members, gens, int(rest[0]))
    sub = Subgroup(G, np.flatnonzero(mask), gens=gens)
    sub.__dict__["mask"] = mask
    return sub


def normal_closure(G: Group, seed, under=None) -> Subgroup:
    """Smallest subgroup containing ``seed`` and normalised by ``under``
    (default: the generators of ``G``)."""
    conj_by = np.asarray(G.generators if under is None else list(under), dtype=np.int64)
    N = closure(G, seed)
    if not len(conj_by):
        return N
    mask = N.mask.copy()
    members = [N.members]
    gens = list(N.generators)
    inv_by = G.inv(conj_by)
    checked = 0
    while checked < len(gens):
        new_gens = np.asarray(gens[checked:], dtype=np.int64)
        checked = len(gens)
        c = G.mul(G.mul(inv_by[:, None], new_gens[None, :]), conj_by[:, None]).ravel()
        queue = list(np.unique(c[~mask[c]]))
        for x in queue:
            if not mask[x]:
                _extend(G, mask, members, gens, int(x))
        # the fresh generators still need conjugating
    sub = Subgroup(G, np.flatnonzero(mask), gens=gens)
    sub.__dict__["mask"] = mask
    return sub


def join(G: Group, *subs: Subgroup) -> Subgroup:
    seed = [g for s in subs for g in s.generators]
    return closure(G, seed)


def commutator(G: Group, N: Subgroup, M: Subgroup) -> Subgroup:
    """[N, M]: commutators of generator pairs, normally closed in <N, M>."""
    gn = np.asarray(N.generators, dtype=np.int64)
    gm = np.asarray(M.generators, dtype=np.int64)
    if not len(gn) or not len(gm):
        return G.trivial()
    seed = G.comm(gn[:, None], gm[None, :]).ravel()
    return normal_closure(G, seed, under=list(gn) + list(gm))


def iterated_commutator(G: Group, N: Subgroup, k: int, M: Subgroup = None) -> Subgroup:
    """[N, M, ..., M] with M repeated k times (M defaults to G)."""
    M = G.whole() if M is None else M
    cur = N
    for _ in range(k):
        if cur.is_trivial():
            break
        cur = commutator(G, cur, M)
    return cur


def power_subgroup(G: Group, H: Subgroup, e: int) -> Subgroup:
    """Subgroup generated by the e-th powers of the elements of H."""
    return closure(G, G.power_map(e)[H.members])


def centralizer(G: Group, S: Subgroup) -> Subgroup:
    allx = G.all_elements
    mask = np.ones(G.order, dtype=bool)
    for s in S.generators:
        mask &= G.mul(allx, s) == G.mul(s, allx)
    return Subgroup(G, np.flatnonzero(mask))


def center(G: Group) -> Subgroup:
    return centralizer(G, G.whole())


def normalizer(G: Group, S: Subgroup) -> Subgroup:
    allx = G.all_elements
    mask = np.ones(G.order, dtype=bool)
    for s in S.generators:
        mask &= S.mask[G.conj(allx, s)]
    return Subgroup(G, np.flatnonzero(mask))


def conjugate(G: Group, S: Subgroup, g: int) -> Subgroup:
    """g S g^-1."""
    return Subgroup(G, G.conj(g, S.members), gens=[G.conj(g, s) for s in S.generators])


def coset_labels(G: Group, N: Subgroup, side="left") -> np.ndarray:
    """Label every element by the minimal index of its coset gN (or Ng)."""
    n = G.order
    if N.order <= n // N.order:
        labels = np.arange(n)
        allx = G.all_elements
        for h in N.members[1:]:
            other = G.mul(allx, h) if side == "left" else G.mul(h, allx)
            np.minimum(labels, other, out=labels)
        return labels
    labels = np.full(n, -1, dtype=np.int64)
    for g in range(n):
        if labels[g] < 0:
            coset = G.mul(g, N.members) if side == "left" else G.mul(N.members, g)
            labels[coset] = g
    return labels


def quotient(G: Group, N: Subgroup, name=None):
    """Return (G/N, projection)."""
    if not N.is_normal():
        raise NotNormal("quotient requires a normal subgroup")
    labels = coset_labels(G, N)
    gens = np.unique(labels[np.asarray(G.generators, dtype=np.int64)])
    gens = gens[gens != 0]
    Q = Group(QuotientBackend(G, labels), gens[:, None], name=name)
    proj = Homomorphism(G, Q, Q.index_of(labels[:, None]))
    Q.projection = proj
    return Q, proj


def order_is_coprime(n: int, p: int) -> bool:
    return math.gcd(n, p) == 1
