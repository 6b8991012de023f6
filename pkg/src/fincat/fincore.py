"""Finite categories, functors, natural transformations and finite lattices.

A category is stored by its total composition table; every law is checked
by exhaustive evaluation when the category is built.  ``table[(g, f)]`` is
the composite ``g . f`` (first ``f``, then ``g``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Optional

from .errors import (
    AssociativityBroken,
    CategoryLawError,
    FinCatError,
    FunctorError,
    IdentityLawBroken,
    NaturalityError,
    NoJoin,
    NonComposablePair,
    NotAPoset,
    ShapeMismatch,
    TriangleIdentityFails,
    UnknownObject,
)
from .finset import sort_key


class FinCat:
    """A finite category given by objects, arrows and a total composition table."""

    def __init__(
        self,
        objects: Iterable[Hashable],
        arrows: Iterable[tuple[Hashable, Hashable, Hashable]],
        identity: Mapping[Hashable, Hashable],
        table: Mapping[tuple[Hashable, Hashable], Hashable],
        name: Optional[str] = None,
        check: bool = True,
    ):
        self.objects = tuple(objects)
        arrows = tuple(arrows)
        self.arrows = tuple(a for a, _, _ in arrows)
        self.src = {a: s for a, s, _ in arrows}
        self.tgt = {a: t for a, _, t in arrows}
        self.identity = dict(identity)
        self.table = dict(table)
        self.name = name
        self._op = None
        self._cached_key = None
        self._homs: dict = {}
        for a in self.arrows:
            self._homs.setdefault((self.src[a], self.tgt[a]), []).append(a)
        self._homs = {k: tuple(v) for k, v in self._homs.items()}
        if check:
            self._validate()

    def _validate(self) -> None:
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise FinCatError("duplicate object ids")
        if len(set(self.arrows)) != len(self.arrows):
            raise FinCatError("duplicate arrow ids")
        for a in self.arrows:
            if self.src[a] not in objs:
                raise UnknownObject(self.src[a])
            if self.tgt[a] not in objs:
                raise UnknownObject(self.tgt[a])
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or i not in self.src or self.src[i] != x or self.tgt[i] != x:
                raise FinCatError(f"object {x!r} lacks a valid identity arrow")
        for (g, f), h in self.table.items():
            if g not in self.src or f not in self.src:
                raise NonComposablePair(g, f, "composite of unknown arrows")
            if self.tgt[f] != self.src[g]:
                raise NonComposablePair(g, f)
            if h not in self.src:
                raise NonComposablePair(g, f, "composite is not an arrow")
        for f in self.arrows:
            for g in self.hom_from(self.tgt[f]):
                if (g, f) not in self.table:
                    raise NonComposablePair(g, f, "composite missing for composable pair")
        for f in self.arrows:
            if (
                self.table[(self.identity[self.tgt[f]], f)] != f
                or self.table[(f, self.identity[self.src[f]])] != f
            ):
                raise IdentityLawBroken(f)
        for (g, f), h in self.table.items():
            if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                raise NonComposablePair(g, f, "composite has wrong endpoints")
        for f in self.arrows:
            for g in self.hom_from(self.tgt[f]):
                gf = self.table[(g, f)]
                for h in self.hom_from(self.tgt[g]):
                    if self.table[(h, gf)] != self.table[(self.table[(h, g)], f)]:
                        raise AssociativityBroken(f, g, h)

    # -- queries ---------------------------------------------------------
    def hom(self, a: Hashable, b: Hashable) -> tuple:
        return self._homs.get((a, b), ())

    def hom_from(self, a: Hashable) -> tuple:
        return tuple(f for f in self.arrows if self.src[f] == a)

    def hom_to(self, b: Hashable) -> tuple:
        return tuple(f for f in self.arrows if self.tgt[f] == b)

    def compose(self, g: Hashable, f: Hashable) -> Hashable:
        """``g . f``; raises if not composable."""
        try:
            return self.table[(g, f)]
        except KeyError:
            raise NonComposablePair(g, f) from None

    def id(self, x: Hashable) -> Hashable:
        try:
            return self.identity[x]
        except KeyError:
            raise UnknownObject(x) from None

    def is_identity(self, f: Hashable) -> bool:
        return self.identity[self.src[f]] == f

    def non_identity_arrows(self) -> tuple:
        return tuple(f for f in self.arrows if not self.is_identity(f))

    def arrow_triples(self) -> tuple:
        return tuple((f, self.src[f], self.tgt[f]) for f in self.arrows)

    def is_thin(self) -> bool:
        return all(len(v) <= 1 for v in self._homs.values())

    def check_object(self, x: Hashable) -> None:
        if x not in self.identity:
            raise UnknownObject(x)

    def _key(self) -> tuple:
        if self._cached_key is not None:
            return self._cached_key
        self._cached_key = (
            self.objects,
            self.arrow_triples(),
            tuple(sorted(self.identity.items(), key=lambda kv: sort_key(kv[0]))),
            tuple(sorted(self.table.items(), key=lambda kv: sort_key(kv[0]))),
        )
        return self._cached_key

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, FinCat) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash((self.objects, self.arrows))

    def __repr__(self) -> str:
        label = self.name or "FinCat"
        return f"<{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"


def validate_cat(objects, arrows, identity, compose, name=None) -> FinCat:
    """Build a FinCat from raw tables, raising the first violated law."""
    return FinCat(objects, arrows, identity, compose, name=name)


# -- constructions ------------------------------------------------------------

def op_cat(c: FinCat) -> FinCat:
    """Opposite category; cached so that ``op_cat(op_cat(c)) is c``."""
    cached = getattr(c, "_op", None)
    if cached is not None:
        return cached
    o = FinCat(
        c.objects,
        [(f, c.tgt[f], c.src[f]) for f in c.arrows],
        c.identity,
        {(f, g): h for (g, f), h in c.table.items()},
        name=f"op({c.name})" if c.name else None,
        check=False,
    )
    c._op = o
    o._op = c
    return o


_PRODUCTS: dict = {}


def product_cat(a: FinCat, b: FinCat) -> FinCat:
    """Product category; object and arrow ids are pairs.  Memoized per pair of inputs."""
    hit = _PRODUCTS.get((id(a), id(b)))
    if hit is not None and hit[0] is a and hit[1] is b:
        return hit[2]
    objects = [(x, y) for x in a.objects for y in b.objects]
    arrows = [((f, g), (a.src[f], b.src[g]), (a.tgt[f], b.tgt[g])) for f in a.arrows for g in b.arrows]
    identity = {(x, y): (a.identity[x], b.identity[y]) for x, y in objects}
    table = {
        ((g1, g2), (f1, f2)): (a.table[(g1, f1)], b.table[(g2, f2)])
        for (g1, f1) in a.table
        for (g2, f2) in b.table
    }
    name = f"{a.name}x{b.name}" if a.name and b.name else None
    ab = FinCat(objects, arrows, identity, table, name=name, check=False)
    _PRODUCTS[(id(a), id(b))] = (a, b, ab)
    return ab


def projections(a: FinCat, b: FinCat, ab: Optional[FinCat] = None) -> tuple["FinFunctor", "FinFunctor"]:
    ab = ab or product_cat(a, b)
    p1 = FinFunctor(ab, a, {o: o[0] for o in ab.objects}, {f: f[0] for f in ab.arrows})
    p2 = FinFunctor(ab, b, {o: o[1] for o in ab.objects}, {f: f[1] for f in ab.arrows})
    return p1, p2


def terminal() -> FinCat:
    return FinCat(["*"], [("id_*", "*", "*")], {"*": "id_*"}, {("id_*", "id_*"): "id_*"}, name="1")


def walking_arrow() -> FinCat:
    """The category **2**: objects 0, 1 and one arrow u: 0 -> 1."""
    arrows = [("id0", "0", "0"), ("id1", "1", "1"), ("u", "0", "1")]
    table = {
        ("id0", "id0"): "id0",
        ("id1", "id1"): "id1",
        ("u", "id0"): "u",
        ("id1", "u"): "u",
    }
    return FinCat(["0", "1"], arrows, {"0": "id0", "1": "id1"}, table, name="2")


def discrete(n: int, prefix: str = "") -> FinCat:
    objs = [f"{prefix}{i}" for i in range(n)]
    return FinCat(
        objs,
        [(f"id{o}", o, o) for o in objs],
        {o: f"id{o}" for o in objs},
        {(f"id{o}", f"id{o}"): f"id{o}" for o in objs},
        name=f"disc{n}",
    )


def from_generators(objects, identity_names, arrows, compose, name=None) -> FinCat:
    """Build a category from non-identity arrows and their composites.

    ``arrows`` lists ``(id, src, tgt)`` for non-identity arrows; composites
    involving identities are inserted automatically; every other composable
    pair must appear in ``compose``.
    """
    objects = list(objects)
    ids = {o: identity_names.get(o, f"id_{o}") if isinstance(identity_names, dict) else f"id_{o}" for o in objects}
    all_arrows = [(ids[o], o, o) for o in objects] + list(arrows)
    src = {a: s for a, s, _ in all_arrows}
    tgt = {a: t for a, _, t in all_arrows}
    table = {}
    for a, s, t in all_arrows:
        table[(ids[t], a)] = a
        table[(a, ids[s])] = a
    for (g, f), h in compose.items():
        table[(g, f)] = h
    return FinCat(objects, all_arrows, ids, table, name=name)


def le_arrow(a: str, b: str) -> str:
    return f"{a}<={b}"


def poset(elements: Iterable[str], relations: Iterable[tuple[str, str]], name: Optional[str] = None) -> FinCat:
    """Thin category generated by ``relations``, closed under reflexivity and transitivity."""
    elements = list(elements)
    le = {(x, x) for x in elements}
    le.update(relations)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(le):
            for (c, d) in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
    for a, b in le:
        if a != b and (b, a) in le:
            raise NotAPoset(a, b)
    pairs = [(a, b) for a in elements for b in elements if (a, b) in le]
    arrows = [(le_arrow(a, b), a, b) for a, b in pairs]
    identity = {x: le_arrow(x, x) for x in elements}
    table = {}
    for a, b in pairs:
        for c in elements:
            if (b, c) in le:
                table[(le_arrow(b, c), le_arrow(a, b))] = le_arrow(a, c)
    return FinCat(elements, arrows, identity, table, name=name)


def chain(n: int) -> FinCat:
    elems = [str(i) for i in range(n)]
    return poset(elems, [(elems[i], elems[i + 1]) for i in range(n - 1)], name=f"C{n}")


# -- functors -----------------------------------------------------------------

class FinFunctor:
    def __init__(self, dom: FinCat, cod: FinCat, obj_map: Mapping, arr_map: Mapping, name=None, check=True):
        self.dom = dom
        self.cod = cod
        self.obj_map = dict(obj_map)
        self.arr_map = dict(arr_map)
        self.name = name
        if check:
            self._validate()

    def _validate(self) -> None:
        d, c = self.dom, self.cod
        for x in d.objects:
            if x not in self.obj_map:
                raise FunctorError(f"object {x!r} unmapped")
            if self.obj_map[x] not in c.identity:
                raise UnknownObject(self.obj_map[x])
        for f in d.arrows:
            if f not in self.arr_map:
                raise FunctorError(f"arrow {f!r} unmapped")
            g = self.arr_map[f]
            if g not in c.src:
                raise FunctorError(f"arrow {f!r} mapped to unknown {g!r}")
            if c.src[g] != self.obj_map[d.src[f]] or c.tgt[g] != self.obj_map[d.tgt[f]]:
                raise FunctorError(f"arrow {f!r} mapped to {g!r} with wrong endpoints")
        for x in d.objects:
            if self.arr_map[d.identity[x]] != c.identity[self.obj_map[x]]:
                raise FunctorError(f"identity of {x!r} not preserved")
        for (g, f), h in d.table.items():
            if c.table[(self.arr_map[g], self.arr_map[f])] != self.arr_map[h]:
                raise FunctorError(f"composite {g!r}.{f!r} not preserved")

    def __call__(self, x: Hashable) -> Hashable:
        return self.obj_map[x]

    def fmap(self, f: Hashable) -> Hashable:
        return self.arr_map[f]

    def then(self, other: "FinFunctor") -> "FinFunctor":
        if other.dom != self.cod:
            raise ShapeMismatch("functors do not compose")
        return FinFunctor(
            self.dom,
            other.cod,
            {x: other.obj_map[y] for x, y in self.obj_map.items()},
            {f: other.arr_map[g] for f, g in self.arr_map.items()},
            check=False,
        )

    def after(self, other: "FinFunctor") -> "FinFunctor":
        return other.then(self)

    def op(self) -> "FinFunctor":
        return FinFunctor(op_cat(self.dom), op_cat(self.cod), self.obj_map, self.arr_map, check=False)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FinFunctor)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.obj_map == other.obj_map
            and self.arr_map == other.arr_map
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.obj_map.items(), key=lambda kv: sort_key(kv[0]))))

    def __repr__(self) -> str:
        return f"<FinFunctor {self.name or ''} {self.dom!r} -> {self.cod!r}>"


def identity_functor(c: FinCat) -> FinFunctor:
    return FinFunctor(c, c, {x: x for x in c.objects}, {f: f for f in c.arrows}, check=False)


def const_functor(dom: FinCat, cod: FinCat, obj: Hashable) -> FinFunctor:
    cod.check_object(obj)
    return FinFunctor(dom, cod, {x: obj for x in dom.objects}, {f: cod.identity[obj] for f in dom.arrows})


def to_terminal(dom: FinCat, term: Optional[FinCat] = None) -> FinFunctor:
    term = term or terminal()
    (pt,) = term.objects
    return const_functor(dom, term, pt)


def all_functors(d: FinCat, c: FinCat) -> Iterator[FinFunctor]:
    """Every functor ``d -> c``, by backtracking over object then arrow images."""
    gens = d.non_identity_arrows()
    for images in itertools.product(c.objects, repeat=len(d.objects)):
        om = dict(zip(d.objects, images))
        am = {d.identity[x]: c.identity[om[x]] for x in d.objects}
        yield from _extend_arrows(d, c, om, am, list(gens))


def _extend_arrows(d, c, om, am, todo):
    if not todo:
        fun = FinFunctor(d, c, om, am, check=False)
        try:
            fun._validate()
        except FinCatError:
            return
        yield fun
        return
    f = todo[0]
    for g in c.hom(om[d.src[f]], om[d.tgt[f]]):
        am[f] = g
        ok = True
        for (x, y), h in d.table.items():
            if x in am and y in am and h in am and c.table[(am[x], am[y])] != am[h]:
                ok = False
                break
        if ok:
            yield from _extend_arrows(d, c, om, am, todo[1:])
        del am[f]


# -- natural transformations ----------------------------------------------------

class CatNat:
    """A natural transformation between parallel FinFunctors."""

    def __init__(self, dom: FinFunctor, cod: FinFunctor, components: Mapping, check: bool = True):
        self.dom = dom
        self.cod = cod
        self.components = dict(components)
        if check:
            self._validate()

    def _validate(self) -> None:
        F, G = self.dom, self.cod
        if F.dom != G.dom or F.cod != G.cod:
            raise ShapeMismatch("functors are not parallel")
        C = F.cod
        for x in F.dom.objects:
            a = self.components.get(x)
            if a is None or C.src.get(a) != F(x) or C.tgt.get(a) != G(x):
                raise NaturalityError(C.identity.get(F(x)), f"bad component at {x!r}")
        for f in F.dom.arrows:
            s, t = F.dom.src[f], F.dom.tgt[f]
            if C.table[(self.components[t], F.fmap(f))] != C.table[(G.fmap(f), self.components[s])]:
                raise NaturalityError(f)

    def __getitem__(self, x: Hashable) -> Hashable:
        return self.components[x]

    def then(self, other: "CatNat") -> "CatNat":
        C = self.dom.cod
        return CatNat(
            self.dom,
            other.cod,
            {x: C.table[(other.components[x], self.components[x])] for x in self.components},
            check=False,
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CatNat)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.components.items(), key=lambda kv: sort_key(kv[0]))))

    def __repr__(self) -> str:
        return f"CatNat({self.components!r})"


def identity_nat(F: FinFunctor) -> CatNat:
    return CatNat(F, F, {x: F.cod.identity[F(x)] for x in F.dom.objects}, check=False)


def whisker_left(H: FinFunctor, alpha: CatNat) -> CatNat:
    """``alpha H`` for ``H: X -> A`` and ``alpha: F => G`` with ``F, G: A -> B``."""
    return CatNat(H.then(alpha.dom), H.then(alpha.cod), {x: alpha.components[H(x)] for x in H.dom.objects}, check=False)


def whisker_right(alpha: CatNat, H: FinFunctor) -> CatNat:
    """``H alpha`` for ``alpha: F => G`` between functors into ``H.dom``."""
    return CatNat(
        alpha.dom.then(H), alpha.cod.then(H), {x: H.fmap(a) for x, a in alpha.components.items()}, check=False
    )


def all_cat_nats(F: FinFunctor, G: FinFunctor) -> list[CatNat]:
    """Every natural transformation ``F => G``, by backtracking in object order."""
    if F.dom != G.dom or F.cod != G.cod:
        raise ShapeMismatch("functors are not parallel")
    A, C = F.dom, F.cod
    objs = A.objects
    pos = {x: i for i, x in enumerate(objs)}
    checks: list[list] = [[] for _ in objs]
    for f in A.arrows:
        checks[max(pos[A.src[f]], pos[A.tgt[f]])].append(f)
    out = []
    comp: dict = {}

    def go(i):
        if i == len(objs):
            out.append(CatNat(F, G, dict(comp), check=False))
            return
        x = objs[i]
        for a in C.hom(F(x), G(x)):
            comp[x] = a
            if all(
                C.table[(comp[A.tgt[f]], F.fmap(f))] == C.table[(G.fmap(f), comp[A.src[f]])] for f in checks[i]
            ):
                go(i + 1)
        comp.pop(x, None)

    go(0)
    return out


# -- adjunctions ------------------------------------------------------------------

@dataclass(frozen=True)
class AdjunctionWitness:
    """``left -| right`` with verified unit and counit."""

    left: FinFunctor
    right: FinFunctor
    unit: CatNat
    counit: CatNat


def check_adjunction(F: FinFunctor, G: FinFunctor, unit: CatNat, counit: CatNat) -> AdjunctionWitness:
    A, B = F.dom, F.cod
    if G.dom != B or G.cod != A:
        raise ShapeMismatch("F: A -> B and G: B -> A required")
    if unit.dom != identity_functor(A) or unit.cod != F.then(G):
        raise ShapeMismatch("unit must be 1 => GF")
    if counit.dom != G.then(F) or counit.cod != identity_functor(B):
        raise ShapeMismatch("counit must be FG => 1")
    for a in A.objects:
        if B.table[(counit[F(a)], F.fmap(unit[a]))] != B.identity[F(a)]:
            raise TriangleIdentityFails(a, "left")
    for b in B.objects:
        if A.table[(G.fmap(counit[b]), unit[G(b)])] != A.identity[G(b)]:
            raise TriangleIdentityFails(b, "right")
    return AdjunctionWitness(F, G, unit, counit)


# -- lattices -----------------------------------------------------------------------

class FinLattice:
    """A finite poset with all joins, presented by its binary join table and bottom."""

    def __init__(self, carrier: FinCat, join: Mapping, bottom: Hashable):
        self.carrier = carrier
        self.join_table = dict(join)
        self.bottom = bottom

    @property
    def elements(self) -> tuple:
        return self.carrier.objects

    def le(self, a: Hashable, b: Hashable) -> bool:
        return bool(self.carrier.hom(a, b))

    def join(self, a: Hashable, b: Hashable) -> Hashable:
        return self.join_table[(a, b)]

    def join_all(self, items: Iterable[Hashable]) -> Hashable:
        acc = self.bottom
        for x in items:
            acc = self.join_table[(acc, x)]
        return acc

    def arrow(self, a: Hashable, b: Hashable) -> Hashable:
        (f,) = self.carrier.hom(a, b)
        return f

    def down_set(self, a: Hashable) -> frozenset:
        return frozenset(x for x in self.elements if self.le(x, a))

    def __repr__(self) -> str:
        return f"<FinLattice {self.carrier.name or ''} {len(self.elements)} elements>"


def check_poset(c: FinCat) -> None:
    for a in c.objects:
        for b in c.objects:
            n = len(c.hom(a, b))
            if n > 1 or (a != b and n and c.hom(b, a)):
                raise NotAPoset(a, b)


def lattice_from_poset(c: FinCat) -> FinLattice:
    check_poset(c)

    def le(a, b):
        return bool(c.hom(a, b))

    objs = c.objects
    bottoms = [x for x in objs if all(le(x, y) for y in objs)]
    if not bottoms:
        raise NoJoin(None, None)
    join = {}
    for a in objs:
        for b in objs:
            ubs = [u for u in objs if le(a, u) and le(b, u)]
            least = [u for u in ubs if all(le(u, v) for v in ubs)]
            if not least:
                raise NoJoin(a, b)
            join[(a, b)] = least[0]
    return FinLattice(c, join, bottoms[0])


def monotone_maps(src: FinCat, dst: FinCat) -> Iterator[FinFunctor]:
    """Every functor between two posets (i.e. every monotone map)."""
    order = list(src.objects)
    targets = list(dst.objects)
    le = {(p, q): dst.hom(p, q)[0] for p in targets for q in targets if dst.hom(p, q)}
    # constraints against objects already placed: x >= order[j] and x <= order[j]
    below = [[j for j in range(i) if src.hom(order[j], order[i])] for i in range(len(order))]
    above = [[j for j in range(i) if src.hom(order[i], order[j])] for i in range(len(order))]
    ends = [(f, order.index(src.src[f]), order.index(src.tgt[f])) for f in src.arrows]
    images = [None] * len(order)

    def go(i):
        if i == len(order):
            om = dict(zip(order, images))
            am = {f: le[(images[s], images[t])] for f, s, t in ends}
            yield FinFunctor(src, dst, om, am, check=False)
            return
        for y in targets:
            if all((images[j], y) in le for j in below[i]) and all((y, images[j]) in le for j in above[i]):
                images[i] = y
                yield from go(i + 1)
        images[i] = None

    yield from go(0)


def is_isomorphic(c: FinCat, d: FinCat) -> Optional[FinFunctor]:
    """Search for an isomorphism of categories; returns it or ``None``.

    Backtracking over objects pruned by (in-degree, out-degree, loop count),
    then over arrows hom-set by hom-set with composition checks.
    """
    if len(c.objects) != len(d.objects) or len(c.arrows) != len(d.arrows):
        return None

    def sig(k, x):
        return (len(k.hom_to(x)), len(k.hom_from(x)), len(k.hom(x, x)))

    cobjs = sorted(c.objects, key=lambda x: sort_key(sig(c, x)))
    om: dict = {}
    used: set = set()

    def objs(i):
        if i == len(cobjs):
            yield dict(om)
            return
        x = cobjs[i]
        for y in d.objects:
            if y in used or sig(d, y) != sig(c, x):
                continue
            if any(len(c.hom(x, p)) != len(d.hom(y, om[p])) or len(c.hom(p, x)) != len(d.hom(om[p], y)) for p in om):
                continue
            if len(c.hom(x, x)) != len(d.hom(y, y)):
                continue
            om[x] = y
            used.add(y)
            yield from objs(i + 1)
            used.discard(y)
            del om[x]

    for omap in objs(0):
        arrows = list(c.arrows)
        am: dict = {}
        used_arrows: set = set()

        def arr(i):
            if i == len(arrows):
                return dict(am)
            f = arrows[i]
            for g in d.hom(omap[c.src[f]], omap[c.tgt[f]]):
                if g in used_arrows:
                    continue
                am[f] = g
                ok = all(
                    d.table[(am[x], am[y])] == am[h]
                    for (x, y), h in c.table.items()
                    if x in am and y in am and h in am
                )
                if ok:
                    used_arrows.add(g)
                    res = arr(i + 1)
                    if res is not None:
                        return res
                    used_arrows.discard(g)
                del am[f]
            return None

        found = arr(0)
        if found is not None:
            return FinFunctor(c, d, omap, found)
    return None
