import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincat import corpus
from fincat.errors import ShapeMismatch
from fincat.fincore import (
    CatNat,
    FinFunctor,
    chain,
    check_adjunction,
    discrete,
    identity_functor,
    identity_nat,
    monotone_maps,
    product_cat,
    terminal,
    walking_arrow,
)
from fincat.presheaf import random_set_functor
from fincat.prof import (
    Profunctor,
    associator,
    companion,
    companion_adjunction,
    companion_composite,
    compose_coend,
    conjoint,
    curry_dualize,
    hom_prof,
    is_iso_prof,
    left_unitor,
    local_ff_check,
    mates_check,
    prof_shape,
    right_unitor,
)

ONE, TWO = terminal(), walking_arrow()
CATS = ["One", "Two", "Disc2", "Idem", "Par"]


def rand_prof(A, B, rng, size=2):
    return Profunctor(A, B, random_set_functor(prof_shape(A, B), rng, size))


def const_at(A, B, b):
    return FinFunctor(A, B, {a: b for a in A.objects}, {f: B.identity[b] for f in A.arrows})


def naive_composite_sizes(Q, P):
    """Class counts of the composite, by closing the relation over every arrow of B."""
    A, B, C = P.src, P.dst, Q.dst
    out = {}
    for c, a in prof_shape(A, C).objects:
        elems = [(b, y, x) for b in B.objects for y in Q(c, b) for x in P(b, a)]
        parent = {e: e for e in elems}

        def root(e):
            while parent[e] != e:
                e = parent[e]
            return e

        for g in B.arrows:
            b2, b = B.src[g], B.tgt[g]
            for y in Q(c, b):
                for x in P(b2, a):
                    left = (b, y, P.act(g, A.identity[a], x))
                    right = (b2, Q.act(C.identity[c], g, y), x)
                    parent[root(left)] = root(right)
        out[(c, a)] = len({root(e) for e in elems})
    return out


def test_hom_prof_grid():
    assert hom_prof(ONE).body.sizes() == (1,)
    H = hom_prof(TWO)
    # body objects are (b, a) and H(b, a) = Two(a, b)
    assert [len(H(b, a)) for b, a in H.body.shape.objects] == [1, 0, 1, 1]
    D = hom_prof(discrete(2))
    assert [len(D(b, a)) for b, a in D.body.shape.objects] == [1, 0, 0, 1]


@pytest.mark.parametrize("name", CATS)
def test_unitors_are_isos(name):
    A = corpus.category(name)
    rng = random.Random(name)
    for B in (ONE, TWO):
        P = rand_prof(A, B, rng)
        assert left_unitor(P)[1].is_iso()
        assert right_unitor(P)[1].is_iso()


def test_discrete_middle_has_no_quotient():
    rng = random.Random(5)
    D = discrete(2)
    P, Q = rand_prof(TWO, D, rng), rand_prof(D, TWO, rng)
    QP = compose_coend(Q, P)
    for c, a in QP.body.shape.objects:
        assert len(QP(c, a)) == sum(len(Q(c, b)) * len(P(b, a)) for b in D.objects)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        compose_coend(hom_prof(ONE), hom_prof(TWO))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CATS), st.sampled_from(CATS), st.sampled_from(CATS), st.integers(0, 10 ** 6))
def test_composite_matches_naive_closure(a, b, c, seed):
    A, B, C = (corpus.category(n) for n in (a, b, c))
    rng = random.Random(seed)
    P, Q = rand_prof(A, B, rng), rand_prof(B, C, rng)
    QP = compose_coend(Q, P)
    assert {o: len(QP(*o)) for o in QP.body.shape.objects} == naive_composite_sizes(Q, P)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(CATS), min_size=4, max_size=4), st.integers(0, 10 ** 6))
def test_associator_is_iso(names, seed):
    A, B, C, D = (corpus.category(n) for n in names)
    rng = random.Random(seed)
    P, Q, R = rand_prof(A, B, rng), rand_prof(B, C, rng), rand_prof(C, D, rng)
    assert associator(R, Q, P)[2].is_iso()


def test_companion_examples():
    assert companion(identity_functor(TWO)) == hom_prof(TWO)
    assert conjoint(identity_functor(TWO)) == hom_prof(TWO)
    N = companion(const_at(ONE, TWO, "0"))
    assert [N(b, "*").elements for b in TWO.objects] == [("id0",), ("u",)]


@pytest.mark.parametrize("fname", list(corpus.functors()))
def test_companion_adjunction_on_corpus(fname):
    adj = companion_adjunction(corpus.functors()[fname])
    assert adj.unit is not None and adj.counit is not None


def test_companion_composite():
    fs = corpus.functors()
    assert companion_composite(fs["low"], fs["squash"]).is_iso()
    assert companion_composite(fs["pt0"], fs["src"]).is_iso()


def test_mates_for_identity_and_galois():
    I = identity_functor(TWO)
    w = check_adjunction(I, I, identity_nat(I), identity_nat(I))
    alpha = mates_check(w)
    assert all(m.table == {h: h for h in m.dom} for m in alpha.components.values())
    C2, C3 = chain(2), chain(3)
    f = next(m for m in monotone_maps(C2, C3) if m.obj_map == {"0": "0", "1": "2"})
    r = next(m for m in monotone_maps(C3, C2) if m.obj_map == {"0": "0", "1": "0", "2": "1"})
    unit = CatNat(identity_functor(C2), f.then(r), {a: f"{a}<={r(f(a))}" for a in C2.objects})
    counit = CatNat(r.then(f), identity_functor(C3), {b: f"{f(r(b))}<={b}" for b in C3.objects})
    assert mates_check(check_adjunction(f, r, unit, counit)).is_iso()


def test_local_full_faithfulness():
    fs = list(corpus.functors().values())
    n = 0
    for f, g in itertools.product(fs, repeat=2):
        if f.dom == g.dom and f.cod == g.cod:
            local_ff_check(f, g)
            n += 1
    assert n >= len(fs)


def test_curry_on_points():
    AB = product_cat(ONE, ONE)
    rng = random.Random(0)
    Q = rand_prof(AB, ONE, rng)
    res = curry_dualize(Q, ONE, ONE, others=(Q,))
    assert res.curried.body.sizes() == Q.body.sizes()
    assert res.cells >= 1


def test_curry_relabels_two():
    AB = product_cat(TWO, ONE)
    rng = random.Random(2)
    P = rand_prof(AB, ONE, rng)
    res = curry_dualize(P, TWO, ONE)
    assert sorted(res.curried.body.sizes()) == sorted(P.body.sizes())


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["One", "Two", "Disc2"]), st.sampled_from(["One", "Two"]), st.integers(0, 10 ** 6))
def test_curry_random(a, b, seed):
    A, B = corpus.category(a), corpus.category(b)
    rng = random.Random(seed)
    AB = product_cat(A, B)
    P, P2 = rand_prof(AB, ONE, rng), rand_prof(AB, ONE, rng)
    curry_dualize(P, A, B, others=(P, P2))


def test_iso_prof():
    rng = random.Random(1)
    P = rand_prof(TWO, TWO, rng)
    assert is_iso_prof(left_unitor(P)[0], P)
