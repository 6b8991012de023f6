"""Set-valued functors, natural families, and the presheaf construction.

A presheaf on ``A`` is a :class:`SetFunctor` whose shape is ``op_cat(A)``.
Because ``op_cat`` keeps arrow ids, ``F.on_arr[f]`` for ``f: a -> b`` in
``A`` is the restriction map ``F(b) -> F(a)``.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Optional

from .errors import (
    BijectionFails,
    FinCatError,
    FunctorError,
    NaturalityError,
    NotIso,
    ShapeMismatch,
    UnknownObject,
)
from .fincore import FinCat, FinFunctor, op_cat
from .finset import FinSet, SetMap, colimit_of_diagram, sort_key


class SetFunctor:
    """A functor from a finite category into finite sets."""

    def __init__(self, shape: FinCat, on_obj: Mapping, on_arr: Mapping, check: bool = True):
        self.shape = shape
        self.on_obj = dict(on_obj)
        self.on_arr = dict(on_arr)
        if check:
            self.validate()

    def validate(self) -> None:
        C = self.shape
        for x in C.objects:
            if x not in self.on_obj:
                raise FunctorError(f"no value at object {x!r}")
        for f in C.arrows:
            m = self.on_arr.get(f)
            if m is None:
                raise FunctorError(f"no action for arrow {f!r}")
            if m.dom != self.on_obj[C.src[f]] or m.cod != self.on_obj[C.tgt[f]]:
                raise FunctorError(f"action of {f!r} has wrong domain or codomain")
        for x in C.objects:
            if self.on_arr[C.identity[x]].table != {e: e for e in self.on_obj[x]}:
                raise FunctorError(f"identity at {x!r} not preserved")
        for (g, f), h in C.table.items():
            mf, mg, mh = self.on_arr[f].table, self.on_arr[g].table, self.on_arr[h].table
            if any(mg[mf[e]] != mh[e] for e in mf):
                raise FunctorError(f"composite {g!r}.{f!r} not preserved")

    def __call__(self, x: Hashable) -> FinSet:
        try:
            return self.on_obj[x]
        except KeyError:
            raise UnknownObject(x) from None

    def act(self, f: Hashable, e: Hashable) -> Hashable:
        return self.on_arr[f].table[e]

    def sizes(self) -> tuple:
        return tuple(len(self.on_obj[x]) for x in self.shape.objects)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SetFunctor)
            and self.shape == other.shape
            and self.on_obj == other.on_obj
            and self.on_arr == other.on_arr
        )

    def __hash__(self) -> int:
        return hash(tuple(self.on_obj[x] for x in self.shape.objects))

    def __repr__(self) -> str:
        vals = ", ".join(f"{x!r}: {len(self.on_obj[x])}" for x in self.shape.objects)
        return f"SetFunctor({{{vals}}})"


def set_functor(shape: FinCat, values: Mapping, actions: Mapping) -> SetFunctor:
    """Build a SetFunctor from element lists and dict-actions of non-identity arrows."""
    on_obj = {x: FinSet(values[x]) for x in shape.objects}
    on_arr = {}
    for f in shape.arrows:
        s, t = shape.src[f], shape.tgt[f]
        if shape.is_identity(f):
            on_arr[f] = SetMap.identity(on_obj[s])
        else:
            on_arr[f] = SetMap(on_obj[s], on_obj[t], actions[f])
    return SetFunctor(shape, on_obj, on_arr)


def presheaf(A: FinCat, values: Mapping, actions: Mapping) -> SetFunctor:
    """Presheaf on ``A``; ``actions[f]`` for ``f: a -> b`` maps ``F(b) -> F(a)``."""
    return set_functor(op_cat(A), values, actions)


def constant(shape: FinCat, elements: Iterable[Hashable]) -> SetFunctor:
    s = FinSet(elements)
    return SetFunctor(shape, {x: s for x in shape.objects}, {f: SetMap.identity(s) for f in shape.arrows}, check=False)


def precompose(G: SetFunctor, K: FinFunctor) -> SetFunctor:
    """``G . K`` for ``K`` landing in ``G.shape``."""
    if K.cod != G.shape:
        raise ShapeMismatch("functor codomain is not the shape of the set functor")
    return SetFunctor(
        K.dom,
        {x: G.on_obj[K(x)] for x in K.dom.objects},
        {f: G.on_arr[K.fmap(f)] for f in K.dom.arrows},
        check=False,
    )


# -- natural families ------------------------------------------------------------

class NatFamily:
    """A family of component maps between two set functors on the same shape."""

    __slots__ = ("dom", "cod", "components", "_key")

    def __init__(self, dom: SetFunctor, cod: SetFunctor, components: Mapping, check: bool = True):
        self.dom = dom
        self.cod = cod
        self.components = dict(components)
        self._key = None
        if check:
            self.validate()

    def validate(self) -> None:
        F, G = self.dom, self.cod
        if F.shape != G.shape:
            raise ShapeMismatch("natural family between functors of different shapes")
        C = F.shape
        for x in C.objects:
            m = self.components.get(x)
            if m is None or m.dom != F.on_obj[x] or m.cod != G.on_obj[x]:
                raise FinCatError(f"bad component at {x!r}")
        for f in C.arrows:
            s, t = C.src[f], C.tgt[f]
            a_s, a_t = self.components[s].table, self.components[t].table
            Ff, Gf = F.on_arr[f].table, G.on_arr[f].table
            for e in F.on_obj[s]:
                if a_t[Ff[e]] != Gf[a_s[e]]:
                    raise NaturalityError(f, f"element {e!r}")

    @property
    def key(self) -> tuple:
        """Canonical hashable id: the component graphs in object order."""
        if self._key is None:
            self._key = tuple(self.components[x].graph() for x in self.dom.shape.objects)
        return self._key

    @classmethod
    def from_key(cls, dom: SetFunctor, cod: SetFunctor, key: tuple) -> "NatFamily":
        comps = {x: SetMap(dom.on_obj[x], cod.on_obj[x], dict(g), check=False) for x, g in zip(dom.shape.objects, key)}
        return cls(dom, cod, comps, check=False)

    def __getitem__(self, x: Hashable) -> SetMap:
        return self.components[x]

    def then(self, other: "NatFamily") -> "NatFamily":
        return NatFamily(
            self.dom, other.cod, {x: self.components[x].then(other.components[x]) for x in self.components}, check=False
        )

    def is_iso(self) -> bool:
        return all(m.is_bijective() for m in self.components.values())

    def inverse(self) -> "NatFamily":
        return NatFamily(self.cod, self.dom, {x: m.inverse() for x, m in self.components.items()}, check=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NatFamily) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"NatFamily({dict((x, dict(m.graph())) for x, m in self.components.items())!r})"


def identity_family(F: SetFunctor) -> NatFamily:
    return NatFamily(F, F, {x: SetMap.identity(F.on_obj[x]) for x in F.shape.objects}, check=False)


def nat_hom(F: SetFunctor, G: SetFunctor, only_bijective: bool = False) -> list[NatFamily]:
    """Every natural family ``F => G``, without duplicates.

    Backtracking over one element at a time, in object order; each
    naturality constraint is checked as soon as both of its endpoints are
    assigned, so partial assignments that already break a square are cut.
    """
    if F.shape != G.shape:
        raise ShapeMismatch("nat_hom between functors of different shapes")
    C = F.shape
    variables = [(x, e) for x in C.objects for e in F.on_obj[x]]
    index = {v: i for i, v in enumerate(variables)}
    checks: list[list] = [[] for _ in variables]
    for f in C.arrows:
        if C.is_identity(f):
            continue
        s, t = C.src[f], C.tgt[f]
        Ff, Gf = F.on_arr[f].table, G.on_arr[f].table
        for e in F.on_obj[s]:
            i, j = index[(s, e)], index[(t, Ff[e])]
            checks[max(i, j)].append((i, j, Gf))
    domains = [G.on_obj[x].elements for x, _ in variables]
    values: list = [None] * len(variables)
    used_at: dict = {x: set() for x in C.objects}
    out: list[NatFamily] = []

    def go(k: int) -> None:
        if k == len(variables):
            comps = {}
            for x in C.objects:
                comps[x] = SetMap(
                    F.on_obj[x], G.on_obj[x], {e: values[index[(x, e)]] for e in F.on_obj[x]}, check=False
                )
            out.append(NatFamily(F, G, comps, check=False))
            return
        x = variables[k][0]
        for v in domains[k]:
            if only_bijective and v in used_at[x]:
                continue
            values[k] = v
            if all(values[j] == g[values[i]] for i, j, g in checks[k]):
                if only_bijective:
                    used_at[x].add(v)
                go(k + 1)
                if only_bijective:
                    used_at[x].discard(v)
        values[k] = None

    if only_bijective and any(len(F.on_obj[x]) != len(G.on_obj[x]) for x in C.objects):
        return []
    go(0)
    return out


def find_iso(F: SetFunctor, G: SetFunctor) -> Optional[NatFamily]:
    """An isomorphism ``F => G`` if one exists (existence check by search)."""
    for alpha in nat_hom(F, G, only_bijective=True):
        return alpha
    return None


def nat_hom_set(F: SetFunctor, G: SetFunctor) -> FinSet:
    """``nat_hom`` as a FinSet of canonical family keys."""
    return FinSet(a.key for a in nat_hom(F, G))


# -- representables -----------------------------------------------------------------

def yoneda(A: FinCat, a: Hashable) -> SetFunctor:
    """The representable presheaf ``A(-, a)``; values are hom-sets of arrow ids."""
    A.check_object(a)
    Aop = op_cat(A)
    on_obj = {x: FinSet(A.hom(x, a)) for x in A.objects}
    on_arr = {}
    for f in A.arrows:
        x, y = A.src[f], A.tgt[f]
        on_arr[f] = SetMap(on_obj[y], on_obj[x], {g: A.table[(g, f)] for g in on_obj[y]}, check=False)
    return SetFunctor(Aop, on_obj, on_arr, check=False)


def corepresentable(A: FinCat, a: Hashable) -> SetFunctor:
    """The copresheaf ``A(a, -)``."""
    A.check_object(a)
    on_obj = {x: FinSet(A.hom(a, x)) for x in A.objects}
    on_arr = {}
    for f in A.arrows:
        x, y = A.src[f], A.tgt[f]
        on_arr[f] = SetMap(on_obj[x], on_obj[y], {g: A.table[(f, g)] for g in on_obj[x]}, check=False)
    return SetFunctor(A, on_obj, on_arr, check=False)


def yoneda_map(A: FinCat, f: Hashable) -> NatFamily:
    """``y(f): y(a) => y(b)`` for ``f: a -> b``, by postcomposition."""
    a, b = A.src[f], A.tgt[f]
    ya, yb = yoneda(A, a), yoneda(A, b)
    return NatFamily(
        ya, yb, {x: SetMap(ya.on_obj[x], yb.on_obj[x], {g: A.table[(f, g)] for g in ya.on_obj[x]}, check=False) for x in A.objects},
        check=False,
    )


def yoneda_element(alpha: NatFamily, a: Hashable) -> Hashable:
    """The Yoneda bijection ``Nat(y(a), F) -> F(a)``: evaluate at the identity."""
    A = op_cat(alpha.dom.shape)
    return alpha.components[a].table[A.identity[a]]


def yoneda_family(A: FinCat, F: SetFunctor, a: Hashable, e: Hashable) -> NatFamily:
    """Inverse Yoneda bijection: ``e in F(a)`` gives ``y(a) => F``, ``g |-> F(g)(e)``."""
    ya = yoneda(A, a)
    return NatFamily(
        ya, F,
        {x: SetMap(ya.on_obj[x], F.on_obj[x], {g: F.on_arr[g].table[e] for g in ya.on_obj[x]}, check=False) for x in A.objects},
        check=False,
    )


def check_yoneda_lemma(A: FinCat, a: Hashable, F: SetFunctor) -> dict:
    """Verify that evaluation at ``id_a`` is a bijection ``Nat(y(a), F) -> F(a)``."""
    fams = nat_hom(yoneda(A, a), F)
    image = {}
    for alpha in fams:
        e = yoneda_element(alpha, a)
        if e in image:
            raise BijectionFails("not injective", (a, e))
        image[e] = alpha
    if set(image) != set(F.on_obj[a]):
        missing = next(e for e in F.on_obj[a] if e not in image)
        raise BijectionFails("not surjective", (a, missing))
    for e, alpha in image.items():
        if yoneda_family(A, F, a, e) != alpha:
            raise BijectionFails("inverse disagrees", (a, e))
    return image


# -- restriction and extension ------------------------------------------------------

def restrict(f: FinFunctor, G: SetFunctor) -> SetFunctor:
    """``G . f^op`` for a presheaf ``G`` on ``f.cod``."""
    if G.shape != op_cat(f.cod):
        raise ShapeMismatch("presheaf is not on the codomain of the functor")
    return precompose(G, f.op())


def restrict_family(f: FinFunctor, alpha: NatFamily) -> NatFamily:
    return NatFamily(
        restrict(f, alpha.dom), restrict(f, alpha.cod), {a: alpha.components[f(a)] for a in f.dom.objects}, check=False
    )


def extend(f: FinFunctor, F: SetFunctor) -> SetFunctor:
    """Left extension of a presheaf along ``f`` (pointwise left Kan extension along ``f^op``)."""
    from .kan import lan_set

    if F.shape != op_cat(f.dom):
        raise ShapeMismatch("presheaf is not on the domain of the functor")
    return lan_set(f.op(), F).extension


def check_ext_restrict_adjunction(f: FinFunctor, F: SetFunctor, G: SetFunctor) -> dict:
    """Verify ``Nat(extend(f, F), G) ~= Nat(F, restrict(f, G))`` by mates.

    The forward map pastes with the unit of the extension; the backward map
    sends ``beta`` to ``[(a, h), x] |-> G(h)(beta_a(x))``.  Both composites
    are checked to be identities elementwise.  Returns the forward
    bijection keyed by family keys.
    """
    from .kan import check_lan_universal, lan_set

    if F.shape != op_cat(f.dom) or G.shape != op_cat(f.cod):
        raise ShapeMismatch("presheaves do not match the functor")
    K = f.op()
    return check_lan_universal(lan_set(K, F), K, F, G)


# -- categories of elements ------------------------------------------------------------

def elements_of(F: SetFunctor, contravariant: bool = True) -> tuple[FinCat, FinFunctor]:
    """Category of elements with its projection.

    For a presheaf on ``A`` (``contravariant=True``) the projection lands in
    ``A``; objects are ``(a, x)``, arrows ``(f, x')`` go from
    ``(a, F(f)(x'))`` to ``(b, x')`` for ``f: a -> b``.  For a copresheaf,
    arrows ``(f, x)`` go from ``(a, x)`` to ``(b, F(f)(x))``.
    """
    base = op_cat(F.shape) if contravariant else F.shape
    objects = [(a, x) for a in base.objects for x in F.on_obj[a]]
    arrows = []
    for f in base.arrows:
        a, b = base.src[f], base.tgt[f]
        if contravariant:
            for x2 in F.on_obj[b]:
                arrows.append(((f, x2), (a, F.on_arr[f].table[x2]), (b, x2)))
        else:
            for x in F.on_obj[a]:
                arrows.append(((f, x), (a, x), (b, F.on_arr[f].table[x])))
    identity = {(a, x): (base.identity[a], x) for a, x in objects}
    src = {u: s for u, s, _ in arrows}
    tgt = {u: t for u, _, t in arrows}
    table = {}
    for (f, xf) in src:
        for (g, xg) in src:
            if tgt[(f, xf)] == src[(g, xg)]:
                h = base.table[(g, f)]
                table[((g, xg), (f, xf))] = (h, xg if contravariant else xf)
    el = FinCat(objects, arrows, identity, table, check=False)
    proj = FinFunctor(el, base, {o: o[0] for o in objects}, {u: u[0] for u in src}, check=False)
    return el, proj


def density_check(A: FinCat, F: SetFunctor) -> NatFamily:
    """Verify ``colim_{(a,x) in el(F)} y(a) ~= F`` via ``[(a,x), g] |-> F(g)(x)``.

    Returns the canonical comparison as a NatFamily from the colimit
    presheaf to ``F``; raises NotIso at the first object where it fails.
    """
    if F.shape != op_cat(A):
        raise ShapeMismatch("presheaf is not on the given category")
    el, proj = elements_of(F)
    values = {}
    quotients = {}
    for c in A.objects:
        diagram = SetFunctor(
            el,
            {o: FinSet(A.hom(c, o[0])) for o in el.objects},
            {u: SetMap(FinSet(A.hom(c, el.src[u][0])), FinSet(A.hom(c, el.tgt[u][0])),
                       {g: A.table[(u[0], g)] for g in A.hom(c, el.src[u][0])}, check=False) for u in el.arrows},
            check=False,
        )
        q, _ = colimit_of_diagram(diagram)
        quotients[c] = q
        values[c] = q.classes
    comps = {}
    for c in A.objects:
        q = quotients[c]
        table = {}
        for (obj, g) in q.carrier:
            a, x = obj
            img = F.on_arr[g].table[x]
            rep = q.class_of[(obj, g)]
            if table.setdefault(rep, img) != img:
                raise NotIso(c, f"comparison not well defined on class {rep!r}")
        m = SetMap(values[c], F.on_obj[c], table, check=False)
        if not m.is_bijective():
            raise NotIso(c)
        comps[c] = m
    # functorial action of the colimit presheaf, induced by precomposition
    on_arr = {}
    for f in A.arrows:
        c, d = A.src[f], A.tgt[f]
        qd, qc = quotients[d], quotients[c]
        on_arr[f] = SetMap(values[d], values[c], {qd.class_of[x]: qc.class_of[(x[0], A.table[(x[1], f)])] for x in qd.carrier}, check=False)
    colim = SetFunctor(op_cat(A), values, on_arr, check=False)
    colim.validate()
    alpha = NatFamily(colim, F, comps, check=False)
    alpha.validate()
    return alpha


# -- random instances -------------------------------------------------------------------

def random_set_functor(shape: FinCat, rng, max_size: int = 2, min_size: int = 0, attempts: int = 50) -> SetFunctor:
    """A random set functor with values of size in ``[min_size, max_size]``.

    Sizes are drawn first; maps for non-identity arrows are then chosen by
    randomized backtracking against the composition table.
    """
    from .finset import all_functions

    C = shape
    gens = list(C.non_identity_arrows())
    for _ in range(attempts):
        sizes = {x: rng.randint(min_size, max_size) for x in C.objects}
        # an arrow out of a non-empty value needs a non-empty target
        for u in gens:
            if sizes[C.src[u]] and not sizes[C.tgt[u]]:
                sizes[C.tgt[u]] = 1
        values = {x: FinSet(range(sizes[x])) for x in C.objects}
        chosen: dict = {C.identity[x]: {e: e for e in values[x]} for x in C.objects}
        constraints = [(g, f, h) for (g, f), h in C.table.items()]

        def ok():
            for g, f, h in constraints:
                if g in chosen and f in chosen and h in chosen:
                    mf, mg, mh = chosen[f], chosen[g], chosen[h]
                    if any(mg[mf[e]] != mh[e] for e in mf):
                        return False
            return True

        def go(i):
            if i == len(gens):
                return True
            u = gens[i]
            cands = list(all_functions(values[C.src[u]], values[C.tgt[u]]))
            rng.shuffle(cands)
            for graph in cands:
                chosen[u] = dict(graph)
                if ok() and go(i + 1):
                    return True
            chosen.pop(u, None)
            return False

        if go(0):
            on_arr = {u: SetMap(values[C.src[u]], values[C.tgt[u]], chosen[u], check=False) for u in C.arrows}
            F = SetFunctor(C, values, on_arr)
            return F
    raise FinCatError("no random functor found")
