import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincat.corpus import idem
from fincat.errors import (
    AssociativityBroken,
    FunctorError,
    IdentityLawBroken,
    NoJoin,
    NotAPoset,
    TriangleIdentityFails,
)
from fincat.fincore import (
    CatNat,
    FinCat,
    FinFunctor,
    all_functors,
    chain,
    check_adjunction,
    discrete,
    identity_functor,
    identity_nat,
    is_isomorphic,
    lattice_from_poset,
    monotone_maps,
    op_cat,
    poset,
    product_cat,
    terminal,
    walking_arrow,
)


def triples(C):
    return [(a, C.src[a], C.tgt[a]) for a in C.arrows]


def posets(max_n=4):
    """Random naturally labelled posets."""
    return st.integers(1, max_n).flatmap(lambda n: st.tuples(
        st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1]))))


def build(case):
    n, rel = case
    return poset([str(i) for i in range(n)], [(str(a), str(b)) for a, b in rel])


def test_terminal_and_walking_arrow_are_valid():
    assert len(terminal().arrows) == 1
    W = walking_arrow()
    assert W.hom("0", "1") == ("u",) and W.hom("1", "0") == ()


def test_broken_identity_law_names_the_arrow():
    W = walking_arrow()
    table = dict(W.table)
    table[("u", "id0")] = "id0"
    with pytest.raises(IdentityLawBroken) as err:
        FinCat(W.objects, triples(W), W.identity, table)
    assert err.value.arrow == "u"


def test_non_associative_monoid_rejected():
    table = {("id", x): x for x in ("id", "a", "b")}
    table.update({(x, "id"): x for x in ("a", "b")})
    table.update({(x, y): "id" for x in "ab" for y in "ab"})
    with pytest.raises(AssociativityBroken):
        FinCat(["*"], [("id", "*", "*"), ("a", "*", "*"), ("b", "*", "*")], {"*": "id"}, table)


def test_op_of_point_and_arrow():
    assert is_isomorphic(op_cat(terminal()), terminal()) is not None
    o = op_cat(walking_arrow())
    assert o.hom("1", "0") == ("u",) and o.hom("0", "1") == ()


def test_op_is_an_involution():
    C3 = chain(3)
    assert op_cat(op_cat(C3)) == C3
    assert op_cat(op_cat(C3)).table == C3.table


def test_products():
    two = walking_arrow()
    sq = product_cat(two, two)
    assert (len(sq.objects), len(sq.arrows)) == (4, 9)
    assert is_isomorphic(product_cat(terminal(), two), two) is not None
    assert is_isomorphic(product_cat(discrete(2), discrete(3)), discrete(6)) is not None


def test_poset_closure_and_cycles():
    C = poset("abc", [("a", "b"), ("b", "c")])
    assert C.hom("a", "c")
    with pytest.raises(NotAPoset):
        poset("ab", [("a", "b"), ("b", "a")])


def test_functor_must_preserve_composition():
    two = walking_arrow()
    with pytest.raises(FunctorError):
        FinFunctor(two, two, {"0": "1", "1": "0"}, {"id0": "id1", "id1": "id0", "u": "u"})


def test_functor_counts():
    two = walking_arrow()
    assert len(list(all_functors(two, two))) == 3
    assert len(list(monotone_maps(chain(3), chain(2)))) == 4
    assert len(list(all_functors(idem(), idem()))) == 2


def test_identity_adjunction():
    C = chain(3)
    I = identity_functor(C)
    assert check_adjunction(I, I, identity_nat(I), identity_nat(I)).left is I


def test_idempotent_unit_breaks_triangle():
    I = identity_functor(idem())
    e = CatNat(I, I, {"*": "e"})
    with pytest.raises(TriangleIdentityFails):
        check_adjunction(I, I, e, e)


def test_galois_connection_on_chains():
    C2, C3 = chain(2), chain(3)
    f = next(m for m in monotone_maps(C2, C3) if m.obj_map == {"0": "0", "1": "2"})
    r = next(m for m in monotone_maps(C3, C2) if m.obj_map == {"0": "0", "1": "0", "2": "1"})
    unit = CatNat(identity_functor(C2), f.then(r), {a: f"{a}<={r(f(a))}" for a in C2.objects})
    counit = CatNat(r.then(f), identity_functor(C3), {b: f"{f(r(b))}<={b}" for b in C3.objects})
    assert check_adjunction(f, r, unit, counit)


def test_lattices():
    L = lattice_from_poset(chain(3))
    assert all(L.join(a, b) == max(a, b) for a in "012" for b in "012")
    with pytest.raises(NoJoin):
        lattice_from_poset(discrete(2))
    D = lattice_from_poset(poset("blrt", [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")]))
    assert D.join("l", "r") == "t" and D.bottom == "b"


@settings(max_examples=60, deadline=None)
@given(posets())
def test_random_posets_are_categories(case):
    P = build(case)
    assert P.is_thin()
    assert op_cat(op_cat(P)) == P
    for a, b in itertools.product(P.objects, repeat=2):
        assert len(P.hom(a, b)) == len(op_cat(P).hom(b, a))


@settings(max_examples=40, deadline=None)
@given(posets(3), posets(3))
def test_product_hom_sets_multiply(c1, c2):
    A, B = build(c1), build(c2)
    AB = product_cat(A, B)
    for (a, b), (a2, b2) in itertools.product(AB.objects, repeat=2):
        assert len(AB.hom((a, b), (a2, b2))) == len(A.hom(a, a2)) * len(B.hom(b, b2))


@settings(max_examples=40, deadline=None)
@given(posets(3), posets(3))
def test_monotone_maps_are_brute_force_monotone(c1, c2):
    A, B = build(c1), build(c2)
    got = sorted(tuple(sorted(f.obj_map.items())) for f in monotone_maps(A, B))
    want = []
    for images in itertools.product(B.objects, repeat=len(A.objects)):
        m = dict(zip(A.objects, images))
        if all(B.hom(m[x], m[y]) for x in A.objects for y in A.objects if A.hom(x, y)):
            want.append(tuple(sorted(m.items())))
    assert got == sorted(want)


@settings(max_examples=30, deadline=None)
@given(posets(4))
def test_isomorphism_survives_relabelling(case):
    n, rel = case
    P = build(case)
    perm = list(reversed(range(n)))
    Q = poset([f"x{perm[i]}" for i in range(n)], [(f"x{perm[a]}", f"x{perm[b]}") for a, b in rel])
    iso = is_isomorphic(P, Q)
    assert iso is not None
    assert all(Q.hom(iso(a), iso(b)) for a in P.objects for b in P.objects if P.hom(a, b))
