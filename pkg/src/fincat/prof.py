"""Profunctors between finite categories.

A profunctor ``A -|-> B`` is a set functor on ``product_cat(B, op_cat(A))``:
objects are pairs ``(b, a)``, covariant in ``b`` and contravariant in
``a``.  This matches the reading of ``A -|-> B`` as a functor
``B -> P A``; the companion of ``f: A -> B`` is then ``(b, a) |-> B(f a, b)``.
Every canonical comparison is returned as an explicit NatFamily.
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Optional

from .errors import BijectionFails, FinCatError, NotIso, ShapeMismatch, TriangleIdentityFails
from .fincore import AdjunctionWitness, CatNat, FinCat, FinFunctor, all_cat_nats, op_cat, product_cat
from .finset import FinSet, Quotient, SetMap, coequalize
from .presheaf import NatFamily, SetFunctor, identity_family, nat_hom, precompose


def prof_shape(A: FinCat, B: FinCat) -> FinCat:
    """Shape of the body of a profunctor ``A -|-> B``."""
    return product_cat(B, op_cat(A))


class Profunctor:
    """``src -|-> dst`` with body on ``dst x op(src)``."""

    def __init__(self, src: FinCat, dst: FinCat, body: SetFunctor, quotients: Optional[dict] = None):
        if body.shape != prof_shape(src, dst):
            raise ShapeMismatch("body is not on dst x op(src)")
        self.src = src
        self.dst = dst
        self.body = body
        self.quotients = quotients or {}

    def __call__(self, b: Hashable, a: Hashable) -> FinSet:
        return self.body.on_obj[(b, a)]

    def act(self, g: Hashable, k: Hashable, x: Hashable) -> Hashable:
        """``P(g, k)(x)`` for ``g`` in ``dst`` and ``k`` in ``src`` (acting contravariantly)."""
        return self.body.on_arr[(g, k)].table[x]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Profunctor) and self.src == other.src and self.dst == other.dst and self.body == other.body

    def __hash__(self) -> int:
        return hash(self.body)

    def __repr__(self) -> str:
        return f"Profunctor({self.src.name} -|-> {self.dst.name}, sizes={self.body.sizes()})"


def profunctor(A: FinCat, B: FinCat, values: Mapping, actions: Mapping) -> Profunctor:
    """Build from element lists at ``(b, a)`` and actions of non-identity pair arrows.

    ``actions`` may omit arrows whose action is determined by the others;
    missing ones are derived by factoring ``(g, k) = (g, 1) . (1, k)``.
    """
    shape = prof_shape(A, B)
    on_obj = {o: FinSet(values[o]) for o in shape.objects}
    on_arr = {}
    for (g, k) in shape.arrows:
        s, t = shape.src[(g, k)], shape.tgt[(g, k)]
        if shape.is_identity((g, k)):
            on_arr[(g, k)] = SetMap.identity(on_obj[s])
        elif (g, k) in actions:
            on_arr[(g, k)] = SetMap(on_obj[s], on_obj[t], actions[(g, k)])
    for (g, k) in shape.arrows:
        if (g, k) in on_arr:
            continue
        b, a = shape.src[(g, k)]
        first = on_arr[(B.identity[b], k)]
        second = on_arr[(g, A.identity[A.src[k]])]
        on_arr[(g, k)] = first.then(second)
    return Profunctor(A, B, SetFunctor(shape, on_obj, on_arr))


def hom_prof(A: FinCat) -> Profunctor:
    """The identity profunctor: ``(b, a) |-> A(a, b)``."""
    shape = prof_shape(A, A)
    on_obj = {(b, a): FinSet(A.hom(a, b)) for b, a in shape.objects}
    on_arr = {}
    for (g, k) in shape.arrows:
        (b, a), (b2, a2) = shape.src[(g, k)], shape.tgt[(g, k)]
        on_arr[(g, k)] = SetMap(on_obj[(b, a)], on_obj[(b2, a2)],
                                {h: A.table[(g, A.table[(h, k)])] for h in on_obj[(b, a)]}, check=False)
    return Profunctor(A, A, SetFunctor(shape, on_obj, on_arr, check=False))


def compose_coend(Q: Profunctor, P: Profunctor) -> Profunctor:
    """``Q . P`` for ``P: A -|-> B`` and ``Q: B -|-> C``.

    At ``(c, a)`` the elements are classes of ``(b, (y, x))`` with
    ``y in Q(c, b)``, ``x in P(b, a)``, under
    ``(b, (y, P(g, 1) x)) ~ (b2, (Q(1, g) y, x))`` for ``g: b2 -> b``.
    """
    if P.dst != Q.src:
        raise ShapeMismatch("middle categories differ")
    A, B, C = P.src, P.dst, Q.dst
    shape = prof_shape(A, C)
    quotients = {}
    for c, a in shape.objects:
        carrier = FinSet((b, (y, x)) for b in B.objects for y in Q(c, b) for x in P(b, a))
        pairs = []
        for g in B.non_identity_arrows():
            b2, b = B.src[g], B.tgt[g]
            Pg = P.body.on_arr[(g, A.identity[a])].table
            Qg = Q.body.on_arr[(C.identity[c], g)].table
            for y in Q(c, b):
                for x in P(b2, a):
                    pairs.append(((b, (y, Pg[x])), (b2, (Qg[y], x))))
        quotients[(c, a)] = coequalize(carrier, pairs)
    on_obj = {o: quotients[o].classes for o in shape.objects}
    on_arr = {}
    for (h, k) in shape.arrows:
        s, t = shape.src[(h, k)], shape.tgt[(h, k)]
        qt = quotients[t]
        table = {}
        for (b, (y, x)) in on_obj[s]:
            y2 = Q.act(h, B.identity[b], y)
            x2 = P.act(B.identity[b], k, x)
            table[(b, (y, x))] = qt.class_of[(b, (y2, x2))]
        on_arr[(h, k)] = SetMap(on_obj[s], on_obj[t], table, check=False)
    return Profunctor(A, C, SetFunctor(shape, on_obj, on_arr, check=False), quotients)


def induced_map(S: Profunctor, T: Profunctor, fn: Callable[[Hashable, Hashable], Hashable]) -> NatFamily:
    """NatFamily ``S => T`` induced from a map on representatives of a composite.

    ``fn(obj, element)`` is evaluated on every member of every class of
    ``S`` (which must come from :func:`compose_coend`), so a map that does
    not respect the coend relation is reported, not silently accepted.
    """
    comps = {}
    for o in S.body.shape.objects:
        q = S.quotients[o]
        table = {}
        for elem in q.carrier:
            img = fn(o, elem)
            rep = q.class_of[elem]
            if table.setdefault(rep, img) != img:
                raise NotIso(o, f"comparison not well defined on class {rep!r}")
        comps[o] = SetMap(S.body.on_obj[o], T.body.on_obj[o], table)
    return NatFamily(S.body, T.body, comps)


def _class(P: Profunctor, o: Hashable, elem: Hashable) -> Hashable:
    return P.quotients[o].class_of[elem]


# -- coherence 2-cells -------------------------------------------------------------

def left_unitor(P: Profunctor) -> tuple[Profunctor, NatFamily]:
    """``hom . P => P``: ``[b2, (h, x)] |-> P(h, 1) x``."""
    A = P.src
    HP = compose_coend(hom_prof(P.dst), P)
    return HP, induced_map(HP, P, lambda o, e: P.act(e[1][0], A.identity[o[1]], e[1][1]))


def right_unitor(P: Profunctor) -> tuple[Profunctor, NatFamily]:
    """``P . hom => P``: ``[a2, (x, h)] |-> P(1, h) x``."""
    B = P.dst
    PH = compose_coend(P, hom_prof(P.src))
    return PH, induced_map(PH, P, lambda o, e: P.act(B.identity[o[0]], e[1][1], e[1][0]))


def associator(R: Profunctor, Q: Profunctor, P: Profunctor, RQ=None, QP=None, left=None, right=None):
    """``(R . Q) . P => R . (Q . P)`` by rebracketing representatives.

    Returns ``(left, right, alpha)``.
    """
    RQ = RQ or compose_coend(R, Q)
    QP = QP or compose_coend(Q, P)
    left = left or compose_coend(RQ, P)
    right = right or compose_coend(R, QP)

    def fn(o, e):
        d, a = o
        b, ((c, (z, y)), x) = e
        return _class(right, o, (c, (z, _class(QP, (c, a), (b, (y, x))))))

    return left, right, induced_map(left, right, fn)


def whisker_post(Q: Profunctor, alpha: NatFamily, P: Profunctor, P2: Profunctor, QP=None, QP2=None):
    """``Q . alpha`` for ``alpha: P => P2``; returns ``(QP, QP2, family)``."""
    QP = QP or compose_coend(Q, P)
    QP2 = QP2 or compose_coend(Q, P2)

    def fn(o, e):
        b, (y, x) = e
        return _class(QP2, o, (b, (y, alpha.components[(b, o[1])].table[x])))

    return QP, QP2, induced_map(QP, QP2, fn)


def whisker_pre(alpha: NatFamily, Q: Profunctor, Q2: Profunctor, P: Profunctor, QP=None, Q2P=None):
    """``alpha . P`` for ``alpha: Q => Q2``; returns ``(QP, Q2P, family)``."""
    QP = QP or compose_coend(Q, P)
    Q2P = Q2P or compose_coend(Q2, P)

    def fn(o, e):
        b, (y, x) = e
        return _class(Q2P, o, (b, (alpha.components[(o[0], b)].table[y], x)))

    return QP, Q2P, induced_map(QP, Q2P, fn)


# -- companions and conjoints --------------------------------------------------------

def companion(f: FinFunctor) -> Profunctor:
    """``B(f, 1): A -|-> B``, ``(b, a) |-> B(f a, b)``."""
    A, B = f.dom, f.cod
    shape = prof_shape(A, B)
    on_obj = {(b, a): FinSet(B.hom(f(a), b)) for b, a in shape.objects}
    on_arr = {}
    for (g, k) in shape.arrows:
        s, t = shape.src[(g, k)], shape.tgt[(g, k)]
        fk = f.fmap(k)
        on_arr[(g, k)] = SetMap(on_obj[s], on_obj[t], {h: B.table[(g, B.table[(h, fk)])] for h in on_obj[s]}, check=False)
    return Profunctor(A, B, SetFunctor(shape, on_obj, on_arr, check=False))


def conjoint(f: FinFunctor) -> Profunctor:
    """``B(1, f): B -|-> A``, ``(a, b) |-> B(b, f a)``."""
    A, B = f.dom, f.cod
    shape = prof_shape(B, A)
    on_obj = {(a, b): FinSet(B.hom(b, f(a))) for a, b in shape.objects}
    on_arr = {}
    for (k, g) in shape.arrows:
        s, t = shape.src[(k, g)], shape.tgt[(k, g)]
        fk = f.fmap(k)
        on_arr[(k, g)] = SetMap(on_obj[s], on_obj[t], {h: B.table[(fk, B.table[(h, g)])] for h in on_obj[s]}, check=False)
    return Profunctor(B, A, SetFunctor(shape, on_obj, on_arr, check=False))


class ProfAdjunction:
    """Unit and counit of ``L -| R`` in profunctors, with both triangle composites."""

    def __init__(self, L, R, unit, counit, left_triangle, right_triangle):
        self.L, self.R = L, R
        self.unit, self.counit = unit, counit
        self.left_triangle, self.right_triangle = left_triangle, right_triangle


def check_prof_adjunction(L: Profunctor, R: Profunctor, unit_fn, counit_fn) -> ProfAdjunction:
    """Build ``unit: hom => R.L`` and ``counit: L.R => hom`` and check both triangles.

    ``unit_fn(obj, h)`` gives a representative of ``R.L`` at ``obj``;
    ``counit_fn(obj, elem)`` maps a representative of ``L.R`` into hom.
    """
    A, B = L.src, L.dst
    hA, hB = hom_prof(A), hom_prof(B)
    RL, LR = compose_coend(R, L), compose_coend(L, R)
    unit = NatFamily(hA.body, RL.body, {
        o: SetMap(hA.body.on_obj[o], RL.body.on_obj[o], {h: _class(RL, o, unit_fn(o, h)) for h in hA.body.on_obj[o]})
        for o in hA.body.shape.objects})
    counit = induced_map(LR, hB, counit_fn)

    # L => L.hom => L.(R.L) => (L.R).L => hom.L => L
    LH, runit = right_unitor(L)
    _, L_RL, step2 = whisker_post(L, unit, hA, RL, QP=LH)
    LR_L, _, assoc = associator(L, R, L, RQ=LR, QP=RL, right=L_RL)
    _, HL, step4 = whisker_pre(counit, LR, hB, L, QP=LR_L)
    _, lunit = left_unitor(L)
    tri_l = runit.inverse().then(step2).then(assoc.inverse()).then(step4).then(lunit)
    for o, m in tri_l.components.items():
        if any(x != y for x, y in m.table.items()):
            raise TriangleIdentityFails(o, "left")

    # R => hom.R => (R.L).R => R.(L.R) => R.hom => R
    HR, lunit_r = left_unitor(R)
    _, RL_R, step2r = whisker_pre(unit, hA, RL, R, QP=HR)
    _, R_LR, assoc_r = associator(R, L, R, RQ=RL, QP=LR, left=RL_R)
    _, RH, step4r = whisker_post(R, counit, LR, hB, QP=R_LR)
    _, runit_r = right_unitor(R)
    tri_r = lunit_r.inverse().then(step2r).then(assoc_r).then(step4r).then(runit_r)
    for o, m in tri_r.components.items():
        if any(x != y for x, y in m.table.items()):
            raise TriangleIdentityFails(o, "right")
    return ProfAdjunction(L, R, unit, counit, tri_l, tri_r)


def companion_adjunction(f: FinFunctor, L: Optional[Profunctor] = None) -> ProfAdjunction:
    """``companion(f) -| conjoint(f)``.

    Unit at ``(a2, a)``: ``h |-> [f a, (f h, 1)]``; counit at ``(b2, b)``:
    ``[a, (u, v)] |-> u . v``.  ``L`` may replace the companion (used to
    inject faults).
    """
    B = f.cod
    L = L or companion(f)
    R = conjoint(f)

    def unit_fn(o, h):
        a2, a = o
        return (f(a), (f.fmap(h), B.identity[f(a)]))

    def counit_fn(o, e):
        _, (u, v) = e
        return B.table[(u, v)]

    return check_prof_adjunction(L, R, unit_fn, counit_fn)


def mates_check(adj: AdjunctionWitness) -> NatFamily:
    """``companion(f) ~= conjoint(u)`` for ``f -| u``, via ``k |-> u(k) . unit_a``."""
    f, u, eta = adj.left, adj.right, adj.unit
    A = f.dom
    N, M = companion(f), conjoint(u)
    if N.body.shape != M.body.shape:
        raise ShapeMismatch("companion and conjoint live on different shapes")
    comps = {}
    for (b, a) in N.body.shape.objects:
        table = {k: A.table[(u.fmap(k), eta[a])] for k in N(b, a)}
        m = SetMap(N(b, a), M(b, a), table)
        if not m.is_bijective():
            raise NotIso((b, a))
        comps[(b, a)] = m
    return NatFamily(N.body, M.body, comps)


def companion_composite(f: FinFunctor, g: FinFunctor) -> NatFamily:
    """``companion(g) . companion(f) ~= companion(g f)`` via ``[b, (y, x)] |-> y . g(x)``."""
    C = g.cod
    comp = compose_coend(companion(g), companion(f))
    target = companion(f.then(g))
    alpha = induced_map(comp, target, lambda o, e: C.table[(e[1][0], g.fmap(e[1][1]))])
    if not alpha.is_iso():
        raise NotIso("companion composite")
    return alpha


def local_ff_check(f: FinFunctor, g: FinFunctor) -> dict:
    """``CatNat(f, g) ~= Nat(p f, p g)`` where ``p f`` is the conjoint.

    The map sends ``alpha`` to ``h |-> alpha_a . h``.  Returns it on keys.
    """
    B = f.cod
    pf, pg = conjoint(f), conjoint(g)
    targets = {a.key for a in nat_hom(pf.body, pg.body)}
    out = {}
    for alpha in all_cat_nats(f, g):
        comps = {(a, b): SetMap(pf(a, b), pg(a, b), {h: B.table[(alpha[a], h)] for h in pf(a, b)})
                 for a, b in pf.body.shape.objects}
        key = NatFamily(pf.body, pg.body, comps).key
        if key not in targets:
            raise BijectionFails("image not natural", alpha.components)
        out[tuple(sorted(alpha.components.items()))] = key
    if len(set(out.values())) != len(out) or len(out) != len(targets):
        raise BijectionFails("local full faithfulness", (len(out), len(targets)))
    return out


def is_iso_prof(P: Profunctor, Q: Profunctor) -> bool:
    from .presheaf import find_iso

    return P.body.shape == Q.body.shape and find_iso(P.body, Q.body) is not None


# -- currying ---------------------------------------------------------------------------

class CurryResult:
    def __init__(self, curried: Profunctor, flat: SetFunctor, cells: int):
        self.curried = curried
        self.flat = flat
        self.cells = cells


def _reindex(F: SetFunctor, dom: FinCat, obj_map: Mapping, arr_map: Mapping) -> SetFunctor:
    T = FinFunctor(dom, F.shape, obj_map, arr_map)
    out = precompose(F, T)
    out.validate()
    return out


def curry_dualize(P: Profunctor, A: FinCat, B: FinCat, others: tuple = ()) -> CurryResult:
    """Move ``B`` across: ``A x B -|-> C`` becomes ``A -|-> op(B) x C``.

    Two routes are computed and compared table for table: the direct
    reindexing, and a detour through the flat functor on
    ``C x op(A) x op(B)``.  The inverse reindexing must give back ``P``,
    and 2-cells to each profunctor in ``others`` must correspond.
    """
    AB = product_cat(A, B)
    if P.src != AB:
        raise ShapeMismatch("source must be a product A x B")
    C = P.dst
    oA, oB = op_cat(A), op_cat(B)
    D = product_cat(oB, C)
    target_shape = prof_shape(A, D)

    def direct(Q):
        return _reindex(Q.body, target_shape,
                        {((b, c), a): (c, (a, b)) for ((b, c), a) in target_shape.objects},
                        {((g, h), k): (h, (k, g)) for ((g, h), k) in target_shape.arrows})

    body = direct(P)
    flat_shape = product_cat(C, product_cat(oA, oB))
    flat = _reindex(P.body, flat_shape,
                    {(c, (a, b)): (c, (a, b)) for (c, (a, b)) in flat_shape.objects},
                    {(h, (k, g)): (h, (k, g)) for (h, (k, g)) in flat_shape.arrows})
    via_flat = _reindex(flat, target_shape,
                        {((b, c), a): (c, (a, b)) for ((b, c), a) in target_shape.objects},
                        {((g, h), k): (h, (k, g)) for ((g, h), k) in target_shape.arrows})
    if via_flat != body:
        raise NotIso("curry", "the two reindexing routes disagree")
    back = _reindex(body, P.body.shape,
                    {(c, (a, b)): ((b, c), a) for (c, (a, b)) in P.body.shape.objects},
                    {(h, (k, g)): ((g, h), k) for (h, (k, g)) in P.body.shape.arrows})
    if back != P.body:
        raise NotIso("curry", "uncurrying does not recover the profunctor")
    cells = 0
    for Q in others:
        qb = direct(Q)
        before = nat_hom(P.body, Q.body)
        after = {a.key for a in nat_hom(body, qb)}
        images = set()
        for alpha in before:
            comps = {((b, c), a): alpha.components[(c, (a, b))] for ((b, c), a) in target_shape.objects}
            images.add(NatFamily(body, qb, comps, check=False).key)
        if images != after or len(images) != len(before):
            raise BijectionFails("curried 2-cells", (len(before), len(after)))
        cells += len(before)
    return CurryResult(Profunctor(A, D, body), flat, cells)
