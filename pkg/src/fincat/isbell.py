"""Isbell conjugation between presheaves and copresheaves on a finite category.

For a presheaf ``F`` on ``A``, ``O(F)`` is the copresheaf ``a |-> Nat(F, y a)``;
for a copresheaf ``G``, ``Spec(G)`` is the presheaf ``a |-> Nat(G, A(a, -))``.
Elements of both are NatFamily keys.  ``O`` is covariant in ``a`` by
postcomposition with ``y(f)``; ``Spec`` is contravariant by precomposition.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional

from .errors import BijectionFails, NotIso, ShapeMismatch
from .fincore import FinCat, FinFunctor, op_cat
from .finset import FinSet, SetMap, limit_of_diagram
from .kan import comma, ran_set, ya1_check, ya3_check
from .presheaf import (
    NatFamily,
    SetFunctor,
    corepresentable,
    elements_of,
    nat_hom,
    precompose,
    yoneda,
)


def _base(F: SetFunctor) -> FinCat:
    return op_cat(F.shape)


def _corep_map(A: FinCat, f: Hashable) -> NatFamily:
    """``A(b, -) => A(a, -)`` for ``f: a -> b``, ``k |-> k . f``."""
    a, b = A.src[f], A.tgt[f]
    zb, za = corepresentable(A, b), corepresentable(A, a)
    return NatFamily(zb, za, {x: SetMap(zb.on_obj[x], za.on_obj[x], {k: A.table[(k, f)] for k in zb.on_obj[x]},
                                        check=False) for x in A.objects}, check=False)


def _postcompose_key(dom: SetFunctor, mid: SetFunctor, cod: SetFunctor, key: tuple, m: NatFamily) -> tuple:
    return NatFamily.from_key(dom, mid, key).then(m).key


def isbell_o(F: SetFunctor) -> SetFunctor:
    """``O(F)``: the copresheaf ``a |-> Nat(F, y a)``."""
    A = _base(F)
    ys = {a: yoneda(A, a) for a in A.objects}
    on_obj = {a: FinSet(alpha.key for alpha in nat_hom(F, ys[a])) for a in A.objects}
    on_arr = {}
    for f in A.arrows:
        a, b = A.src[f], A.tgt[f]
        yf = _yoneda_between(A, f, ys)
        on_arr[f] = SetMap(on_obj[a], on_obj[b], {k: _postcompose_key(F, ys[a], ys[b], k, yf) for k in on_obj[a]})
    return SetFunctor(A, on_obj, on_arr)


def _yoneda_between(A, f, ys):
    a, b = A.src[f], A.tgt[f]
    return NatFamily(ys[a], ys[b], {x: SetMap(ys[a].on_obj[x], ys[b].on_obj[x], {g: A.table[(f, g)] for g in ys[a].on_obj[x]},
                                              check=False) for x in A.objects}, check=False)


def isbell_spec(G: SetFunctor) -> SetFunctor:
    """``Spec(G)``: the presheaf ``a |-> Nat(G, A(a, -))``."""
    A = G.shape
    zs = {a: corepresentable(A, a) for a in A.objects}
    on_obj = {a: FinSet(beta.key for beta in nat_hom(G, zs[a])) for a in A.objects}
    on_arr = {}
    for f in A.arrows:
        a, b = A.src[f], A.tgt[f]
        zf = _corep_map(A, f)
        on_arr[f] = SetMap(on_obj[b], on_obj[a], {k: _postcompose_key(G, zs[b], zs[a], k, zf) for k in on_obj[b]})
    return SetFunctor(op_cat(A), on_obj, on_arr)


def o_on_maps(alpha: NatFamily, OF2: SetFunctor, OF: SetFunctor) -> NatFamily:
    """``O(alpha): O(F2) => O(F)`` for ``alpha: F => F2``, by precomposition."""
    A = OF.shape
    comps = {}
    for a in A.objects:
        ya = yoneda(A, a)
        comps[a] = SetMap(OF2.on_obj[a], OF.on_obj[a],
                          {k: alpha.then(NatFamily.from_key(alpha.cod, ya, k)).key for k in OF2.on_obj[a]})
    return NatFamily(OF2, OF, comps)


def spec_on_maps(phi: NatFamily, SG2: SetFunctor, SG: SetFunctor) -> NatFamily:
    """``Spec(phi): Spec(G2) => Spec(G)`` for ``phi: G => G2``."""
    A = phi.dom.shape
    comps = {}
    for a in A.objects:
        za = corepresentable(A, a)
        comps[a] = SetMap(SG2.on_obj[a], SG.on_obj[a],
                          {k: phi.then(NatFamily.from_key(phi.cod, za, k)).key for k in SG2.on_obj[a]})
    return NatFamily(SG2, SG, comps)


def isbell_unit(F: SetFunctor, OF: Optional[SetFunctor] = None, SOF: Optional[SetFunctor] = None) -> NatFamily:
    """``F => Spec O F``: ``e in F(x)`` goes to the family ``b |-> (alpha |-> alpha_x(e))``."""
    A = _base(F)
    OF = OF or isbell_o(F)
    SOF = SOF or isbell_spec(OF)
    objs = A.objects
    comps = {}
    for x in objs:
        table = {}
        for e in F.on_obj[x]:
            key = tuple(tuple((k, dict(k[objs.index(x)])[e]) for k in OF.on_obj[b]) for b in objs)
            table[e] = key
        comps[x] = SetMap(F.on_obj[x], SOF.on_obj[x], table)
    return NatFamily(F, SOF, comps)


def isbell_counit(G: SetFunctor, SG: Optional[SetFunctor] = None, OSG: Optional[SetFunctor] = None) -> NatFamily:
    """``G => O Spec G``: ``g in G(x)`` goes to ``b |-> (beta |-> beta_x(g))``."""
    A = G.shape
    SG = SG or isbell_spec(G)
    OSG = OSG or isbell_o(SG)
    objs = A.objects
    comps = {}
    for x in objs:
        comps[x] = SetMap(G.on_obj[x], OSG.on_obj[x],
                          {g: tuple(tuple((k, dict(k[objs.index(x)])[g]) for k in SG.on_obj[b]) for b in objs)
                           for g in G.on_obj[x]})
    return NatFamily(G, OSG, comps)


def is_self_dual(F: SetFunctor) -> bool:
    """Whether ``F`` is fixed by ``Spec O``, i.e. the unit is invertible."""
    return isbell_unit(F).is_iso()


def adjunction_check(F: SetFunctor, G: SetFunctor) -> dict:
    """``Nat(G, O F) ~= Nat(F, Spec G)``, both ways and against the unit route.

    ``phi`` goes to ``psi_x(e)_b(g) = phi_b(g)_x(e)``; the literal route is
    ``Spec(phi) . unit``.  Raises BijectionFails on a mismatch.
    """
    A = G.shape
    if _base(F) != A:
        raise ShapeMismatch("F and G live over different categories")
    objs = A.objects
    OF, SG = isbell_o(F), isbell_spec(G)
    SOF = isbell_spec(OF)
    unit = isbell_unit(F, OF, SOF)
    left = nat_hom(G, OF)
    right = nat_hom(F, SG)
    right_keys = {p.key for p in right}

    def forward(phi: NatFamily) -> tuple:
        out = []
        for x in objs:
            xi = objs.index(x)
            graph = []
            for e in F.on_obj[x]:
                fam = tuple(tuple((g, dict(phi[b].table[g][xi])[e]) for g in G.on_obj[b]) for b in objs)
                graph.append((e, fam))
            out.append(tuple(graph))
        return tuple(out)

    def backward(psi: NatFamily) -> tuple:
        out = []
        for b in objs:
            bi = objs.index(b)
            graph = []
            for g in G.on_obj[b]:
                fam = tuple(tuple((e, dict(psi[x].table[e][bi])[g]) for e in F.on_obj[x]) for x in objs)
                graph.append((g, fam))
            out.append(tuple(graph))
        return tuple(out)

    images = set()
    for phi in left:
        k = forward(phi)
        if k not in right_keys:
            raise BijectionFails("forward", phi.key)
        literal = unit.then(spec_on_maps(phi, SOF, SG)).key
        if literal != k:
            raise BijectionFails("unit route", phi.key)
        if backward(NatFamily.from_key(F, SG, k)) != phi.key:
            raise BijectionFails("round trip", phi.key)
        images.add(k)
    if images != right_keys:
        missing = sorted(right_keys - images, key=repr)[0]
        raise BijectionFails("surjectivity", missing)
    return {"pairs": len(left)}


def o_as_limit(F: SetFunctor) -> dict:
    """Compare ``O(F)(b)`` with the limit over ``el(F)`` of ``(a, e) |-> A(a, b)``."""
    A = _base(F)
    el, proj = elements_of(F)
    elop = op_cat(el)
    OF = isbell_o(F)
    objs = A.objects
    out = {}
    for b in objs:
        D = precompose(yoneda(A, b), proj.op())
        apex, _ = limit_of_diagram(D)
        image = set()
        for k in OF.on_obj[b]:
            comps = {a: dict(g) for a, g in zip(objs, k)}
            image.add(tuple(comps[a][e] for a, e in elop.objects))
        if image != set(apex) or len(image) != len(OF.on_obj[b]):
            raise NotIso(b, "O(F) differs from the limit over elements")
        out[b] = len(apex)
    return out


# -- duality checks --------------------------------------------------------------------

def corepresentable_is_dual_yoneda(A: FinCat) -> bool:
    return all(yoneda(op_cat(A), a) == corepresentable(A, a) for a in A.objects)


def dual_ya1(f: FinFunctor) -> dict:
    """The first Yoneda axiom for ``f.op()``."""
    return ya1_check(f.op())


def dual_density(A: FinCat, copresheaves: Iterable[SetFunctor]) -> int:
    """Density for copresheaves, read as presheaves on ``op(A)``."""
    return ya3_check(op_cat(A), list(copresheaves))


def ran_via_opposite_comma(K: FinFunctor, F: SetFunctor) -> dict:
    """``Ran_K F (b)`` against the limit over ``op(K.op() | b)``, per object ``b``."""
    E = ran_set(K, F)
    out = {}
    for b in K.cod.objects:
        cc = comma(K.op(), b)
        cat = op_cat(cc.cat)
        D = precompose(F, cc.proj.op())
        if D.shape != cat:
            raise ShapeMismatch("opposite comma does not carry the diagram")
        apex, _ = limit_of_diagram(D)
        mine = {frozenset(zip(cat.objects, t)) for t in apex}
        theirs = {frozenset(zip(E.commas[b].cat.objects, t)) for t in E.certificates[b]}
        if mine != theirs:
            raise NotIso(b, "right extension differs from the dual left construction")
        out[b] = len(apex)
    return out


def self_duality_check(F: SetFunctor) -> dict:
    """The unit ``F => Spec O F`` with its invertibility status; never a refutation."""
    unit = isbell_unit(F)
    return {"unit": unit.key, "self_dual": unit.is_iso(),
            "sizes": {"F": F.sizes(), "SpecOF": unit.cod.sizes()}}


def spec_idempotence(G: SetFunctor) -> bool:
    """``Spec O Spec G ~= Spec G`` through the unit at ``Spec G``."""
    return isbell_unit(isbell_spec(G)).is_iso()


def isbell_adjunction_check(samples: Iterable[tuple]) -> dict:
    """Run ``adjunction_check`` and the limit route over ``(F, G)`` pairs."""
    pairs = limits = 0
    for F, G in samples:
        pairs += adjunction_check(F, G)["pairs"]
        limits += len(o_as_limit(F))
    return {"samples_pairs": pairs, "limit_objects": limits}


def ambidextrous_pairing_check(A: FinCat, functors: Iterable[FinFunctor] = (),
                               spans: Iterable[tuple] = ()) -> dict:
    """Corepresentables against the dual Yoneda, the dual axioms, and ``Ran`` via the op route."""
    out = {"dual_yoneda": corepresentable_is_dual_yoneda(A)}
    out["dual_density"] = dual_density(A, [corepresentable(A, a) for a in A.objects])
    out["dual_ya1"] = sum(1 for f in functors if dual_ya1(f) is not None)
    out["ran_op_route"] = sum(len(ran_via_opposite_comma(K, F)) for K, F in spans)
    return out
