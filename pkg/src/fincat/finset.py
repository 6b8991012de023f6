"""Finite sets, functions between them, and their (co)limits.

Element ids are hashable values built from ``str``, ``int`` and nested
tuples.  Constructed sets encode provenance in their ids (pairs for
products, tagged pairs for sums, class representatives for quotients) so
that every construction is reproducible bit-for-bit.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Any, Hashable, Iterable, Iterator, Mapping

from .errors import FinCatError, UnknownElement


@lru_cache(maxsize=None)
def sort_key(x: Hashable) -> tuple:
    """Total order on element ids: ints < strings < tuples, tuples lexicographic."""
    if x is None:
        return (-1,)
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(i) for i in x))
    raise TypeError(f"unsupported element id {x!r}")


def canonical_order(items: Iterable[Hashable]) -> tuple:
    return tuple(sorted(items, key=sort_key))


class FinSet:
    """An ordered, duplicate-free list of element ids."""

    __slots__ = ("elements", "_members")

    def __init__(self, elements: Iterable[Hashable] = ()):
        elements = tuple(elements)
        members = frozenset(elements)
        if len(members) != len(elements):
            seen = set()
            dup = next(e for e in elements if e in seen or seen.add(e))
            raise FinCatError(f"duplicate element {dup!r}")
        self.elements = elements
        self._members = members

    @classmethod
    def sorted(cls, elements: Iterable[Hashable]) -> "FinSet":
        return cls(canonical_order(set(elements)))

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._members

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return "FinSet(%r)" % (list(self.elements),)

    def same_members(self, other: "FinSet") -> bool:
        return self._members == other._members


class SetMap:
    """A total function between finite sets, given by its table."""

    __slots__ = ("dom", "cod", "table")

    def __init__(self, dom: FinSet, cod: FinSet, table: Mapping[Hashable, Hashable], check: bool = True):
        self.dom = dom
        self.cod = cod
        self.table = dict(table)
        if check:
            for x in dom:
                if x not in self.table:
                    raise FinCatError(f"map undefined on {x!r}")
                if self.table[x] not in cod:
                    raise FinCatError(f"image {self.table[x]!r} of {x!r} outside codomain")
            if len(self.table) != len(dom):
                extra = next(k for k in self.table if k not in dom)
                raise FinCatError(f"map defined outside domain at {extra!r}")

    @classmethod
    def identity(cls, s: FinSet) -> "SetMap":
        return cls(s, s, {x: x for x in s}, check=False)

    def __call__(self, x: Hashable) -> Hashable:
        try:
            return self.table[x]
        except KeyError:
            raise UnknownElement(x) from None

    def then(self, other: "SetMap") -> "SetMap":
        """Diagrammatic composite: first ``self``, then ``other``."""
        return SetMap(self.dom, other.cod, {x: other.table[y] for x, y in self.table.items()}, check=False)

    def after(self, other: "SetMap") -> "SetMap":
        return other.then(self)

    def graph(self) -> tuple:
        return tuple((x, self.table[x]) for x in self.dom)

    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table.values()) == set(self.cod)

    def is_bijective(self) -> bool:
        return len(self.dom) == len(self.cod) and self.is_injective()

    def inverse(self) -> "SetMap":
        if not self.is_bijective():
            raise FinCatError("map is not invertible")
        return SetMap(self.cod, self.dom, {y: x for x, y in self.table.items()}, check=False)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SetMap)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash(self.graph())

    def __repr__(self) -> str:
        return "SetMap(%r)" % (dict(self.graph()),)


def graph_apply(graph: tuple, x: Hashable) -> Hashable:
    """Apply a function stored as a sorted tuple of (input, output) pairs."""
    for a, b in graph:
        if a == x:
            return b
    raise UnknownElement(x)


def all_functions(dom: Iterable[Hashable], cod: Iterable[Hashable]) -> Iterator[tuple]:
    """Every function ``dom -> cod`` as a graph tuple, in lexicographic order."""
    dom = tuple(dom)
    cod = tuple(cod)
    for images in itertools.product(cod, repeat=len(dom)):
        yield tuple(zip(dom, images))


class Quotient:
    """A finite set together with a partition given by class representatives."""

    __slots__ = ("carrier", "class_of", "classes")

    def __init__(self, carrier: FinSet, class_of: Mapping[Hashable, Hashable]):
        self.carrier = carrier
        self.class_of = dict(class_of)
        for x in carrier:
            r = self.class_of[x]
            if r not in carrier or self.class_of[r] != r:
                raise FinCatError(f"bad representative {r!r} for {x!r}")
        self.classes = FinSet.sorted(self.class_of.values())

    def __call__(self, x: Hashable) -> Hashable:
        try:
            return self.class_of[x]
        except KeyError:
            raise UnknownElement(x) from None

    def projection(self) -> SetMap:
        return SetMap(self.carrier, self.classes, self.class_of, check=False)

    def members(self, rep: Hashable) -> tuple:
        return tuple(x for x in self.carrier if self.class_of[x] == rep)

    def __len__(self) -> int:
        return len(self.classes)

    def __repr__(self) -> str:
        return f"Quotient({len(self.carrier)} elements, {len(self.classes)} classes)"


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        for x in items:
            self.parent[x] = x

    def add(self, x: Hashable) -> None:
        self.parent.setdefault(x, x)

    def find(self, x: Hashable) -> Hashable:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Hashable, y: Hashable) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        # keep the smaller id as root so roots are class minima
        if sort_key(ry) < sort_key(rx):
            rx, ry = ry, rx
        self.parent[ry] = rx


def coequalize(s: FinSet, pairs: Iterable[tuple]) -> Quotient:
    """Quotient of ``s`` by the equivalence relation generated by ``pairs``.

    Each class is represented by its least element under :func:`sort_key`.
    """
    uf = UnionFind(s)
    for a, b in pairs:
        if a not in s:
            raise UnknownElement(a)
        if b not in s:
            raise UnknownElement(b)
        uf.union(a, b)
    return Quotient(s, {x: uf.find(x) for x in s})


def product(*sets: FinSet) -> FinSet:
    return FinSet(itertools.product(*[s.elements for s in sets]))


def disjoint_union(tagged: Iterable[tuple[Hashable, FinSet]]) -> FinSet:
    return FinSet((tag, x) for tag, s in tagged for x in s)


def limit_of_diagram(diagram: Any) -> tuple[FinSet, dict]:
    """Limit of a finite-set-valued functor.

    ``diagram`` needs ``shape`` (a FinCat), ``on_obj`` and ``on_arr``.  The
    limit is the set of compatible families, each encoded as the tuple of
    its values in the order of ``shape.objects``.
    """
    shape = diagram.shape
    objs = shape.objects
    index = {j: i for i, j in enumerate(objs)}
    constraints: list[list[tuple]] = [[] for _ in objs]
    for u in shape.arrows:
        s, t = shape.src[u], shape.tgt[u]
        later = max(index[s], index[t])
        constraints[later].append((index[s], index[t], diagram.on_arr[u]))

    families = []
    partial: list = [None] * len(objs)

    def extend(i: int) -> None:
        if i == len(objs):
            families.append(tuple(partial))
            return
        for x in diagram.on_obj[objs[i]]:
            partial[i] = x
            if all(m.table[partial[si]] == partial[ti] for si, ti, m in constraints[i]):
                extend(i + 1)
        partial[i] = None

    extend(0)
    apex = FinSet(families)
    projections = {
        j: SetMap(apex, diagram.on_obj[j], {fam: fam[index[j]] for fam in apex}, check=False)
        for j in objs
    }
    return apex, projections


def colimit_of_diagram(diagram: Any) -> tuple[Quotient, dict]:
    """Colimit of a finite-set-valued functor as a quotient of the disjoint union.

    Elements of the disjoint union are ``(j, x)`` with ``x`` in ``D(j)``;
    ``x ~ D(u)(x)`` for every arrow ``u``.
    """
    shape = diagram.shape
    carrier = disjoint_union((j, diagram.on_obj[j]) for j in shape.objects)
    pairs = []
    for u in shape.arrows:
        s, t = shape.src[u], shape.tgt[u]
        m = diagram.on_arr[u]
        for x in diagram.on_obj[s]:
            pairs.append(((s, x), (t, m.table[x])))
    q = coequalize(carrier, pairs)
    injections = {
        j: SetMap(diagram.on_obj[j], q.classes, {x: q.class_of[(j, x)] for x in diagram.on_obj[j]}, check=False)
        for j in shape.objects
    }
    return q, injections
