"""The presheaf relative monad on finite data, its Kleisli bicategory, and algebras.

``P A`` is infinite even for finite ``A``, so the monad is evaluated on
*worlds*: finite full subcategories of ``P A`` that contain every
representable.  A presheaf of presheaves is a presheaf on a world.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Optional, Sequence

from .errors import CounitNotIso, FinCatError, LawFails, ShapeMismatch, ZigZagFails
from .fincore import CatNat, FinCat, FinFunctor, FinLattice, all_functors, monotone_maps, op_cat, poset
from .finset import FinSet, SetMap, sort_key
from .kan import lan_set, weighted_colim
from .presheaf import (
    NatFamily,
    SetFunctor,
    identity_family,
    nat_hom,
    random_set_functor,
    restrict,
    yoneda,
    yoneda_family,
    yoneda_map,
)
from .prof import Profunctor, compose_coend, hom_prof, induced_map, prof_shape


# -- worlds -----------------------------------------------------------------------------

class World:
    """A finite full subcategory of presheaves on ``base`` containing the representables.

    Objects are ``("y", a)`` for representables and ``("p", i)`` for the
    extra members; arrows are ``(src, tgt, i)`` indexing ``nat_hom``.
    """

    def __init__(self, base: FinCat, members: Sequence[SetFunctor] = (), name: Optional[str] = None):
        self.base = base
        self.presheaf = {("y", a): yoneda(base, a) for a in base.objects}
        for i, P in enumerate(members):
            if P.shape != op_cat(base):
                raise ShapeMismatch("world member is not a presheaf on the base")
            self.presheaf[("p", i)] = P
        objects = list(self.presheaf)
        self.family: dict = {}
        self.arrow_of: dict = {}
        arrows, identity = [], {}
        for s in objects:
            for t in objects:
                for i, alpha in enumerate(nat_hom(self.presheaf[s], self.presheaf[t])):
                    u = (s, t, i)
                    arrows.append((u, s, t))
                    self.family[u] = alpha
                    self.arrow_of[(s, t, alpha.key)] = u
        for s in objects:
            identity[s] = self.arrow_of[(s, s, identity_family(self.presheaf[s]).key)]
        table = {}
        for u1, s1, t1 in arrows:
            for u2, s2, t2 in arrows:
                if t1 == s2:
                    table[(u2, u1)] = self.arrow_of[(s1, t2, self.family[u1].then(self.family[u2]).key)]
        self.cat = FinCat(objects, arrows, identity, table, name=name or f"W({base.name})", check=False)
        A = base
        self.y = FinFunctor(
            A, self.cat, {a: ("y", a) for a in A.objects},
            {f: self.arrow_of[(("y", A.src[f]), ("y", A.tgt[f]), yoneda_map(A, f).key)] for f in A.arrows},
            check=False,
        )

    def yhat(self, Q: Hashable, a: Hashable, q: Hashable) -> Hashable:
        """The arrow ``y(a) -> Q`` of the world picked by ``q in Q(a)``."""
        fam = yoneda_family(self.base, self.presheaf[Q], a, q)
        return self.arrow_of[(("y", a), Q, fam.key)]

    def members(self) -> list:
        return [o for o in self.cat.objects if o[0] == "p"]


# -- the monad ---------------------------------------------------------------------------

class PresheafMonad:
    """Unit ``y``, multiplication ``mu = P* y`` (restriction along Yoneda).

    ``mutate="mu"`` drops one element from the multiplication, for fault
    injection.
    """

    def __init__(self, mutate: Optional[str] = None):
        self.mutate = mutate

    def unit(self, A: FinCat, a: Hashable) -> SetFunctor:
        return yoneda(A, a)

    def mu(self, world: World, Theta: SetFunctor) -> SetFunctor:
        out = restrict(world.y, Theta)
        if self.mutate == "mu":
            out = _drop_one(out)
        return out

    def eta_P(self, world: World, P: SetFunctor) -> SetFunctor:
        """``Q |-> Nat(Q, P)`` as a presheaf on the world (values are family keys)."""
        D = world.cat
        homs = {Q: nat_hom(world.presheaf[Q], P) for Q in D.objects}
        on_obj = {Q: FinSet(a.key for a in homs[Q]) for Q in D.objects}
        on_arr = {}
        for u in D.arrows:
            s, t = D.src[u], D.tgt[u]
            fam = world.family[u]
            on_arr[u] = SetMap(on_obj[t], on_obj[s],
                               {b.key: fam.then(b).key for b in homs[t]}, check=False)
        return SetFunctor(op_cat(D), on_obj, on_arr, check=False)

    def extend_op(self, world: World, P: SetFunctor) -> SetFunctor:
        """``P_1 y``: left extension of a presheaf on ``A`` to the world."""
        return lan_set(world.y.op(), P).extension


def _drop_one(F: SetFunctor) -> SetFunctor:
    """Remove the last element at the first object with a non-empty value."""
    for x in F.shape.objects:
        if len(F.on_obj[x]):
            victim = F.on_obj[x].elements[-1]
            on_obj = dict(F.on_obj)
            on_obj[x] = FinSet(e for e in F.on_obj[x] if e != victim)
            on_arr = {}
            for f, m in F.on_arr.items():
                s, t = F.shape.src[f], F.shape.tgt[f]
                tab = {e: v for e, v in m.table.items() if e in on_obj[s]}
                on_arr[f] = SetMap(on_obj[s], on_obj[t], tab, check=False)
            return SetFunctor(F.shape, on_obj, on_arr, check=False)
    return F


def _eval_at_identity(world: World, P: SetFunctor, a: Hashable, key: tuple) -> Hashable:
    """Yoneda evaluation of a family ``y(a) => P`` given by its key."""
    fam = NatFamily.from_key(yoneda(world.base, a), P, key)
    return fam.components[a].table[world.base.identity[a]]


def _bijection(dom: FinSet, cod: FinSet, table: dict) -> bool:
    return len(dom) == len(cod) and set(table.values()) == set(cod) and len(set(table.values())) == len(table)


@dataclass
class LawReport:
    law: str
    checked: int = 0
    details: list = field(default_factory=list)


def check_unit_laws(world: World, monad: Optional[PresheafMonad] = None, samples: Iterable[SetFunctor] = ()) -> LawReport:
    """Both unit laws, pointwise.

    (i) ``mu(eta_P(P)) ~= P`` by ``alpha |-> alpha_a(id_a)`` for every world
    object ``P`` and every extra sample; (ii) ``mu(P_1 y P) ~= P`` by the
    unit of the extension.
    """
    monad = monad or PresheafMonad()
    A = world.base
    rep = LawReport("unit")
    candidates = [(str(Q), world.presheaf[Q]) for Q in world.cat.objects] + [(f"sample{i}", P) for i, P in enumerate(samples)]
    for name, P in candidates:
        M = monad.mu(world, monad.eta_P(world, P))
        for a in A.objects:
            table = {k: _eval_at_identity(world, P, a, k) for k in M.on_obj[a]}
            if not _bijection(M.on_obj[a], P.on_obj[a], table):
                raise LawFails("unit (i)", name, a, "evaluation at the identity is not a bijection")
        for f in A.arrows:
            s, t = A.src[f], A.tgt[f]
            for k in M.on_obj[t]:
                if _eval_at_identity(world, P, s, M.on_arr[f].table[k]) != P.on_arr[f].table[_eval_at_identity(world, P, t, k)]:
                    raise LawFails("unit (i)", name, f, "comparison not natural")
        E = lan_set(world.y.op(), P)
        back = monad.mu(world, E.extension)
        for a in A.objects:
            table = E.unit.components[a].table
            if not _bijection(P.on_obj[a], back.on_obj[a], table) or not set(table.values()) <= set(back.on_obj[a]):
                raise LawFails("unit (ii)", name, a, "unit of the extension is not a bijection")
        rep.checked += 1
    return rep


def nested_world(world: World, members: Sequence[SetFunctor] = ()) -> World:
    """A world over the world: presheaves on ``world.cat``."""
    return World(world.cat, members, name=f"W({world.cat.name})")


def check_assoc_law(world: World, outer: World, samples: Iterable[SetFunctor], monad: Optional[PresheafMonad] = None) -> LawReport:
    """Associativity on presheaves ``Xi`` on the nested world ``outer``.

    The composite through ``mu`` twice gives ``a |-> Xi(y(y a))``.  The
    composite through ``P_1 mu`` gives the weighted colimit of
    ``Theta |-> Theta(y a)`` by ``Xi``.  The canonical comparison
    ``[(Theta, xi), t] |-> Xi(t^)(xi)`` is checked to be well defined,
    bijective and natural in ``a``.
    """
    monad = monad or PresheafMonad()
    A, D1, D2 = world.base, world.cat, outer.cat
    rep = LawReport("associativity")
    for n, Xi in enumerate(samples):
        if Xi.shape != op_cat(D2):
            raise ShapeMismatch("sample is not a presheaf on the nested world")
        twice = monad.mu(world, monad.mu(outer, Xi))
        maps = {}
        for a in A.objects:
            ya = ("y", a)
            ev = SetFunctor(D2, {T: outer.presheaf[T].on_obj[ya] for T in D2.objects},
                            {u: outer.family[u].components[ya] for u in D2.arrows}, check=False)
            q = weighted_colim(Xi, ev)
            table = {}
            for elem in q.carrier:
                (T, xi), t = elem
                arrow = outer.yhat(T, ya, t)
                img = Xi.on_arr[arrow].table[xi]
                r = q.class_of[elem]
                if table.setdefault(r, img) != img:
                    raise LawFails("associativity", n, a, f"comparison not well defined on {r!r}")
            if not _bijection(q.classes, twice.on_obj[a], table) or not set(table.values()) <= set(twice.on_obj[a]):
                raise LawFails("associativity", n, a, "comparison is not a bijection")
            maps[a] = (q, table)
        for f in A.arrows:
            s, t = A.src[f], A.tgt[f]
            q_t, tab_t = maps[t]
            q_s, tab_s = maps[s]
            yf = world.y.fmap(f)
            for r in q_t.classes:
                (T, xi), x = r
                moved = q_s.class_of[((T, xi), outer.presheaf[T].on_arr[yf].table[x])]
                if tab_s[moved] != twice.on_arr[f].table[tab_t[r]]:
                    raise LawFails("associativity", n, f, "comparison not natural")
        rep.checked += 1
    return rep


def lax_idempotency_witness(world: World, samples: Iterable[SetFunctor], presheaves: Iterable[SetFunctor] = (),
                            monad: Optional[PresheafMonad] = None) -> LawReport:
    """``mu -| eta_P`` with invertible counit, and both zig-zags.

    Counit at ``P``: evaluation at the identity, ``mu(eta_P P) -> P``.
    Unit at ``Theta``: ``t |-> (a |-> q |-> Theta(q^)(t))``.
    """
    monad = monad or PresheafMonad()
    A, D = world.base, world.cat
    rep = LawReport("lax idempotency")
    plist = [world.presheaf[Q] for Q in D.objects] + list(presheaves)
    for n, P in enumerate(plist):
        M = monad.mu(world, monad.eta_P(world, P))
        for a in A.objects:
            table = {k: _eval_at_identity(world, P, a, k) for k in M.on_obj[a]}
            if not _bijection(M.on_obj[a], P.on_obj[a], table):
                raise CounitNotIso(n, a)
        # second zig-zag: eta(counit) . unit_{eta P} = id on Nat(Q, P)
        for Q in D.objects:
            Qp = world.presheaf[Q]
            for t in nat_hom(Qp, P):
                for a in A.objects:
                    for q in Qp.on_obj[a]:
                        composite = world.family[world.yhat(Q, a, q)].then(t)
                        if composite.components[a].table[A.identity[a]] != t.components[a].table[q]:
                            raise ZigZagFails(n, (Q, a), "eta(counit) . unit != id")
        rep.checked += 1
    for n, Theta in enumerate(samples):
        if Theta.shape != op_cat(D):
            raise ShapeMismatch("sample is not a presheaf on the world")
        mT = monad.mu(world, Theta)
        etaM = monad.eta_P(world, mT)
        comps = {}
        for Q in D.objects:
            Qp = world.presheaf[Q]
            table = {}
            for t in Theta.on_obj[Q]:
                fam = {}
                for a in A.objects:
                    fam[a] = SetMap(Qp.on_obj[a], mT.on_obj[a],
                                    {q: Theta.on_arr[world.yhat(Q, a, q)].table[t] for q in Qp.on_obj[a]}, check=False)
                alpha = NatFamily(Qp, mT, fam, check=False)
                try:
                    alpha.validate()
                except FinCatError as exc:
                    raise ZigZagFails(n, Q, "unit component is not natural") from exc
                table[t] = alpha.key
            comps[Q] = SetMap(Theta.on_obj[Q], etaM.on_obj[Q], table)
        unit = NatFamily(Theta, etaM, comps)
        # first zig-zag: counit_{mu Theta} . mu(unit) = id
        for a in A.objects:
            ya = ("y", a)
            for t in mT.on_obj[a]:
                key = unit.components[ya].table[t]
                if _eval_at_identity(world, mT, a, key) != t:
                    raise ZigZagFails(f"theta{n}", a, "counit . mu(unit) != id")
        rep.checked += 1
    return rep


def default_world(A: FinCat, seed: int = 0, extra: int = 2, max_size: int = 2) -> World:
    """Representables plus a few random presheaves."""
    rng = random.Random(seed)
    members = [random_set_functor(op_cat(A), rng, max_size) for _ in range(extra)]
    return World(A, members)


def default_theta_samples(world: World, seed: int = 0, extra: int = 2, monad: Optional[PresheafMonad] = None) -> list:
    """Representables-of-representables, ``eta_P`` of each member, and random ones."""
    monad = monad or PresheafMonad()
    D = world.cat
    out = [yoneda(D, ("y", a)) for a in world.base.objects]
    out += [monad.eta_P(world, world.presheaf[Q]) for Q in world.members()]
    rng = random.Random(seed)
    out += [random_set_functor(op_cat(D), rng, 2) for _ in range(extra)]
    return out


# -- Kleisli bicategory -------------------------------------------------------------------

class KleisliCell:
    """``X -|-> Y`` in the Kleisli sense: each ``x`` gives a presheaf on ``Y``.

    Stored as the profunctor ``Y -|-> X`` whose body at ``(x, y)`` is the
    value of the presheaf for ``x`` at ``y``.
    """

    def __init__(self, X: FinCat, Y: FinCat, prof: Profunctor):
        if prof.src != Y or prof.dst != X:
            raise ShapeMismatch("Kleisli cell X -|-> Y is a profunctor Y -|-> X")
        self.X, self.Y, self.prof = X, Y, prof

    def at(self, x: Hashable) -> SetFunctor:
        """The presheaf on ``Y`` assigned to ``x``."""
        P, Y = self.prof, self.Y
        return SetFunctor(op_cat(Y), {y: P(x, y) for y in Y.objects},
                          {k: P.body.on_arr[(self.X.identity[x], k)] for k in Y.arrows}, check=False)

    def __eq__(self, other):
        return isinstance(other, KleisliCell) and self.prof == other.prof

    def __hash__(self):
        return hash(self.prof)


def kleisli_unit(X: FinCat) -> KleisliCell:
    return KleisliCell(X, X, hom_prof(X))


def kleisli_of_functor(f: FinFunctor) -> KleisliCell:
    """``p(f) = y . f``."""
    from .prof import conjoint

    return KleisliCell(f.dom, f.cod, conjoint(f))


def kleisli_compose(g: KleisliCell, f: KleisliCell) -> KleisliCell:
    """``g . f`` for ``f: X -|-> Y`` and ``g: Y -|-> Z``.

    At ``x`` the result is the colimit of ``y |-> g(y)`` weighted by
    ``f(x)``, evaluated at each ``z``; representatives are
    ``((y, w), d)``.
    """
    if f.Y != g.X:
        raise ShapeMismatch("Kleisli cells do not compose")
    X, Y, Z = f.X, f.Y, g.Y
    shape = prof_shape(Z, X)
    quotients = {}
    for x in X.objects:
        W = f.at(x)
        for z in Z.objects:
            D = SetFunctor(Y, {y: g.prof(y, z) for y in Y.objects},
                           {k: g.prof.body.on_arr[(k, Z.identity[z])] for k in Y.arrows}, check=False)
            quotients[(x, z)] = weighted_colim(W, D)
    on_obj = {o: quotients[o].classes for o in shape.objects}
    on_arr = {}
    for (h, k) in shape.arrows:
        s, t = shape.src[(h, k)], shape.tgt[(h, k)]
        qt = quotients[t]
        table = {}
        for ((y, w), d) in on_obj[s]:
            w2 = f.prof.act(h, Y.identity[y], w)
            d2 = g.prof.act(Y.identity[y], k, d)
            table[((y, w), d)] = qt.class_of[((y, w2), d2)]
        on_arr[(h, k)] = SetMap(on_obj[s], on_obj[t], table, check=False)
    prof = Profunctor(Z, X, SetFunctor(shape, on_obj, on_arr, check=False), quotients)
    return KleisliCell(X, Z, prof)


def _reencode(e):
    (y, w), d = e
    return (y, (w, d))


def kleisli_vs_coend(g: KleisliCell, f: KleisliCell) -> int:
    """Check ``kleisli_compose(g, f)`` equals ``compose_coend(f, g)`` on representatives.

    Representatives ``((y, w), d)`` correspond to ``(y, (w, d))``; values
    and every action table must match exactly.  Returns the element count.
    """
    K = kleisli_compose(g, f).prof
    C = compose_coend(f.prof, g.prof)
    n = 0
    for o in K.body.shape.objects:
        mine = [_reencode(e) for e in K.body.on_obj[o]]
        if mine != list(C.body.on_obj[o]):
            raise LawFails("kleisli = coend", (f, g), o, "representatives differ")
        n += len(mine)
    for u, m in K.body.on_arr.items():
        cm = C.body.on_arr[u].table
        for e, v in m.table.items():
            if cm[_reencode(e)] != _reencode(v):
                raise LawFails("kleisli = coend", (f, g), u, f"action differs at {e!r}")
    return n


def kleisli_left_unit(f: KleisliCell) -> NatFamily:
    """``eta . f => f``: ``[(y, w), h] |-> f(x)(h)(w)``."""
    comp = kleisli_compose(kleisli_unit(f.Y), f).prof
    X, Y = f.X, f.Y
    alpha = induced_map(comp, f.prof, lambda o, e: f.prof.act(X.identity[o[0]], e[1], e[0][1]))
    if not alpha.is_iso():
        raise LawFails("left unit", "kleisli", None, "comparison not invertible")
    return alpha


def kleisli_right_unit(f: KleisliCell) -> NatFamily:
    """``f . eta => f``: ``[(x2, h), w] |-> f(h)(w)``."""
    comp = kleisli_compose(f, kleisli_unit(f.X)).prof
    Y = f.Y
    alpha = induced_map(comp, f.prof, lambda o, e: f.prof.act(e[0][1], Y.identity[o[1]], e[1]))
    if not alpha.is_iso():
        raise LawFails("right unit", "kleisli", None, "comparison not invertible")
    return alpha


def kleisli_associator(h: KleisliCell, g: KleisliCell, f: KleisliCell) -> NatFamily:
    """``(h . g) . f => h . (g . f)`` by rebracketing representatives."""
    hg = kleisli_compose(h, g)
    gf = kleisli_compose(g, f)
    left = kleisli_compose(hg, f).prof
    right = kleisli_compose(h, gf).prof

    def fn(o, e):
        x, v = o
        (y, w), ((z, d), t) = e
        s = gf.prof.quotients[(x, z)].class_of[((y, w), d)]
        return right.quotients[o].class_of[((z, s), t)]

    alpha = induced_map(left, right, fn)
    if not alpha.is_iso():
        raise LawFails("associativity", "kleisli", None, "comparison not invertible")
    return alpha


def random_kleisli_cell(X: FinCat, Y: FinCat, rng, max_size: int = 2) -> KleisliCell:
    body = random_set_functor(prof_shape(Y, X), rng, max_size)
    return KleisliCell(X, Y, Profunctor(Y, X, body))


# -- algebras (lattice case) --------------------------------------------------------------

@dataclass
class AlgebraWitness:
    carrier: FinLattice
    structure: dict
    down_sets: list
    checked: int


def down_sets(L: FinLattice) -> list:
    """Every down-closed subset, as sorted tuples, in a fixed order."""
    elems = L.elements
    out = []
    for bits in itertools.product((0, 1), repeat=len(elems)):
        S = {e for e, b in zip(elems, bits) if b}
        if all(x in S for s in S for x in elems if L.le(x, s)):
            out.append(tuple(e for e in elems if e in S))
    return sorted(out, key=lambda t: (len(t), sort_key(t)))


def algebra_check(L: FinLattice, structure=None) -> AlgebraWitness:
    """Join as the algebra structure ``P_1 L -> L`` on a finite lattice.

    Checks the unit axiom on principal down-sets, the multiplication axiom
    (join of a union = join of joins) on every down-set of down-sets
    generated by at most two down-sets, the Galois connection
    ``join -| down-set`` with invertible counit, and uniqueness among all
    monotone maps satisfying the unit axiom.
    """
    ds = down_sets(L)
    s = structure or {S: L.join_all(S) for S in ds}
    for x in L.elements:
        if s[tuple(e for e in L.elements if L.le(e, x))] != x:
            raise LawFails("algebra unit", L, x)
    n = 0
    for S1, S2 in itertools.combinations_with_replacement(ds, 2):
        family = [T for T in ds if set(T) <= set(S1) or set(T) <= set(S2)]
        union = tuple(e for e in L.elements if any(e in T for T in family))
        if s[union] != L.join_all(s[T] for T in family):
            raise LawFails("algebra multiplication", L, (S1, S2))
        n += 1
    for S in ds:
        for x in L.elements:
            if L.le(s[S], x) != (set(S) <= L.down_set(x)):
                raise LawFails("join -| down-set", L, (S, x))
    # uniqueness: monotone maps from down-sets (by inclusion) satisfying the unit axiom
    names = [str(i) for i in range(len(ds))]
    rel = [(names[i], names[j]) for i, a in enumerate(ds) for j, b in enumerate(ds) if i != j and set(a) <= set(b)]
    DL = poset(names, rel, name="D(L)")
    principal = {tuple(e for e in L.elements if L.le(e, x)): x for x in L.elements}
    for m in monotone_maps(DL, L.carrier):
        if all(m(names[i]) == principal[S] for i, S in enumerate(ds) if S in principal):
            if any(m(names[i]) != L.join_all(S) for i, S in enumerate(ds)):
                raise LawFails("algebra uniqueness", L, m.obj_map)
    return AlgebraWitness(L, s, ds, n)


# -- main theorem round trip --------------------------------------------------------------

@dataclass
class StageCheck:
    stage: str
    name: str
    ok: bool
    witness: str = ""


@dataclass
class RoundTripReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]


def _run(report, stage, name, fn):
    try:
        fn()
        report.checks.append(StageCheck(stage, name, True))
    except FinCatError as exc:
        report.checks.append(StageCheck(stage, name, False, f"{type(exc).__name__}: {exc}"))


def _corrupt_companion(f: FinFunctor) -> Profunctor:
    """Swap two elements of one hom-set of the companion, consistently.

    The result is still a profunctor (isomorphic to the companion), but the
    literal unit and counit formulas no longer fit it.
    """
    from .prof import companion

    P = companion(f)
    shape = P.body.shape
    for o in shape.objects:
        vals = P.body.on_obj[o].elements
        if len(vals) >= 2:
            sw = {vals[0]: vals[1], vals[1]: vals[0]}
            on_arr = {}
            for u, m in P.body.on_arr.items():
                s, t = shape.src[u], shape.tgt[u]
                tab = {}
                for e, v in m.table.items():
                    e2 = sw.get(e, e) if s == o else e
                    tab[e2] = sw.get(v, v) if t == o else v
                on_arr[u] = SetMap(m.dom, m.cod, tab, check=False)
            return Profunctor(P.src, P.dst, SetFunctor(shape, P.body.on_obj, on_arr))
    return P


def chi_from_equipment(f: FinFunctor, mutate: bool = False) -> dict:
    """``chi^f`` read off the unit of ``companion(f) -| conjoint(f)``.

    At ``(a, x)`` the unit sends ``h: x -> a`` to ``[f x, (f h, 1)]`` in
    ``conjoint . companion``; composing the pair gives an arrow
    ``f x -> f a``.  With ``mutate`` one component is redirected.
    """
    from .prof import companion_adjunction

    adj = companion_adjunction(f)
    A, B = f.dom, f.cod
    chi = {}
    done = not mutate
    for a in A.objects:
        ya = yoneda(A, a)
        N = restrict(f, yoneda(B, f(a)))
        comps = {}
        for x in A.objects:
            table = {}
            for h in ya.on_obj[x]:
                cls = adj.unit.components[(a, x)].table[h]
                _, (yy, xx) = cls
                table[h] = B.table[(yy, xx)]
                if not done and len(N.on_obj[x]) >= 2:
                    table[h] = next(v for v in N.on_obj[x] if v != table[h])
                    done = True
            comps[x] = SetMap(ya.on_obj[x], N.on_obj[x], table)
        chi[a] = NatFamily(ya, N, comps, check=False)
    return chi


def main_theorem_roundtrip(categories: Sequence[FinCat], functors: Sequence[FinFunctor] = (),
                           mutate: Optional[str] = None, seed: int = 0, presheaves: Optional[dict] = None) -> RoundTripReport:
    """Run the three stages on a corpus.

    (a) every functor's conjoint gives a locally fully faithful assignment
    and ``companion -| conjoint`` holds; (b) the nerve is rebuilt as
    ``P* f . y`` and ``chi`` from the equipment, then ya1 to ya4 run on it;
    (c) ``mu = P* y`` passes the unit, associativity and lax idempotency
    checks.  ``mutate`` is one of ``None, "chi", "mu", "companion"``.
    """
    from .kan import absolute_lifting_check, default_probes, nerve, ya1_check, ya3_check, ya4_check
    from .prof import companion_adjunction, local_ff_check

    rep = RoundTripReport()
    functors = list(functors) or [f for A in categories for B in categories for f in all_functors(A, B)]
    for f in functors:
        tag = f"{f.dom.name}->{f.cod.name} {sorted(f.obj_map.items())}"
        L = _corrupt_companion(f) if mutate == "companion" else None
        _run(rep, "a", f"companion -| conjoint {tag}", lambda f=f, L=L: companion_adjunction(f, L))
    for f in functors:
        for g in functors:
            if f.dom == g.dom and f.cod == g.cod:
                _run(rep, "a", f"local ff {sorted(f.obj_map.items())} {sorted(g.obj_map.items())}",
                     lambda f=f, g=g: local_ff_check(f, g))
    for f in functors:
        tag = f"{f.dom.name}->{f.cod.name} {sorted(f.obj_map.items())}"

        def nerve_literal(f=f):
            N = nerve(f)
            for b in f.cod.objects:
                if restrict(f, yoneda(f.cod, b)) != N.at(b):
                    raise LawFails("nerve", tag, b)

        _run(rep, "b", f"nerve = P*f . y {tag}", nerve_literal)
        _run(rep, "b", f"ya1 {tag}", lambda f=f: ya1_check(f, chi_from_equipment(f, mutate == "chi")))
        _run(rep, "b", f"ya2 {tag}", lambda f=f: absolute_lifting_check(
            f, default_probes(f.dom, f.cod, 1), chi_from_equipment(f, mutate == "chi")))
    for A in categories:
        samples = (presheaves or {}).get(A.name) or [random_set_functor(op_cat(A), random.Random(seed), 2)]
        _run(rep, "b", f"ya3 {A.name}", lambda A=A, s=samples: ya3_check(A, s))
    for f in functors:
        for g in functors:
            if f.cod == g.dom:
                _run(rep, "b", f"ya4 {sorted(f.obj_map.items())} {sorted(g.obj_map.items())}",
                     lambda f=f, g=g: ya4_check(f, g))
    monad = PresheafMonad("mu" if mutate == "mu" else None)
    for A in categories:
        W = default_world(A, seed, extra=1)
        _run(rep, "c", f"unit laws {A.name}", lambda W=W: check_unit_laws(W, monad))
        thetas = default_theta_samples(W, seed, extra=1)
        _run(rep, "c", f"lax idempotency {A.name}", lambda W=W, t=thetas: lax_idempotency_witness(W, t, monad=monad))
        if len(W.cat.objects) <= 4:
            W2 = nested_world(W)
            xis = [yoneda(W2.cat, ("y", ("y", a))) for a in A.objects]
            xis.append(random_set_functor(op_cat(W2.cat), random.Random(seed), 1))
            _run(rep, "c", f"associativity {A.name}", lambda W=W, W2=W2, x=xis: check_assoc_law(W, W2, x, monad))
    return rep
