import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincat import corpus
from fincat.errors import ShapeMismatch
from fincat.fincore import FinFunctor, chain, discrete, identity_functor, op_cat, terminal, walking_arrow
from fincat.finset import all_functions, colimit_of_diagram
from fincat.presheaf import (
    check_ext_restrict_adjunction,
    check_yoneda_lemma,
    constant,
    density_check,
    elements_of,
    extend,
    find_iso,
    nat_hom,
    presheaf,
    random_set_functor,
    restrict,
    yoneda,
    yoneda_element,
    yoneda_family,
)

SMALL = ["One", "Two", "Disc2", "Idem", "Par", "C3"]


def brute_nat_count(F, G):
    """Count natural families by trying every choice of components."""
    C = F.shape
    choices = [list(all_functions(F.on_obj[x], G.on_obj[x])) for x in C.objects]
    n = 0
    for pick in itertools.product(*choices):
        comp = {x: dict(g) for x, g in zip(C.objects, pick)}
        if all(G.on_arr[f].table[comp[C.src[f]][e]] == comp[C.tgt[f]][F.on_arr[f].table[e]]
               for f in C.arrows for e in F.on_obj[C.src[f]]):
            n += 1
    return n


def const_at(A, B, b):
    return FinFunctor(A, B, {a: b for a in A.objects}, {f: B.identity[b] for f in A.arrows})


def test_representables_on_point_and_arrow():
    one, two = terminal(), walking_arrow()
    assert yoneda(one, "*").sizes() == (1,)
    y0, y1 = yoneda(two, "0"), yoneda(two, "1")
    assert (y0.on_obj["0"].elements, y0.on_obj["1"].elements) == (("id0",), ())
    assert (y1.on_obj["0"].elements, y1.on_obj["1"].elements) == (("u",), ("id1",))


def test_nat_hom_examples():
    two = walking_arrow()
    assert len(nat_hom(yoneda(two, "0"), yoneda(two, "1"))) == 1
    assert len(nat_hom(yoneda(two, "1"), yoneda(two, "0"))) == 0
    G = presheaf(two, {"0": "ab", "1": "c"}, {"u": {"c": "a"}})
    assert len(nat_hom(constant(op_cat(two), ()), G)) == 1


def test_yoneda_bijection_is_evaluation():
    two = walking_arrow()
    F = presheaf(two, {"0": "ab", "1": "xyz"}, {"u": {"x": "a", "y": "b", "z": "b"}})
    for a in two.objects:
        for alpha in nat_hom(yoneda(two, a), F):
            assert yoneda_family(two, F, a, yoneda_element(alpha, a)) == alpha
        assert len(check_yoneda_lemma(two, a, F)) == len(F.on_obj[a])


def test_restrict_examples():
    two = walking_arrow()
    G = presheaf(two, {"0": "ab", "1": "c"}, {"u": {"c": "a"}})
    assert restrict(identity_functor(two), G) == G
    r = restrict(const_at(terminal(), two, "0"), yoneda(two, "1"))
    assert r.on_obj["*"].elements == ("u",)


def test_restrict_along_projection():
    from fincat.fincore import product_cat, projections

    two = walking_arrow()
    p1, _ = projections(two, two)
    R = restrict(p1, yoneda(two, "1"))
    AB = product_cat(two, two)
    for (a, b) in AB.objects:
        assert len(R.on_obj[(a, b)]) == len(two.hom(a, "1"))


def test_extend_examples():
    two = walking_arrow()
    F = presheaf(two, {"0": "ab", "1": "c"}, {"u": {"c": "a"}})
    assert find_iso(extend(identity_functor(two), F), F) is not None
    f = const_at(terminal(), two, "1")
    assert find_iso(extend(f, yoneda(terminal(), "*")), yoneda(two, "1")) is not None
    bang = const_at(two, terminal(), "*")
    q, _ = colimit_of_diagram(F)
    assert len(extend(bang, F).on_obj["*"]) == len(q)


def test_extension_preserves_representables_everywhere():
    cats = corpus.categories()
    for f in corpus.functors(cats).values():
        for a in f.dom.objects:
            assert find_iso(extend(f, yoneda(f.dom, a)), yoneda(f.cod, f(a))) is not None


def test_ext_restrict_small_cases():
    two = walking_arrow()
    f = const_at(terminal(), two, "0")
    F = constant(op_cat(terminal()), (0,))
    bij = check_ext_restrict_adjunction(f, F, yoneda(two, "1"))
    assert len(bij) == 1
    with pytest.raises(ShapeMismatch):
        check_ext_restrict_adjunction(f, yoneda(two, "0"), yoneda(two, "1"))


def test_density_examples():
    two = walking_arrow()
    F = presheaf(two, {"0": "ab", "1": "c"}, {"u": {"c": "a"}})
    assert density_check(two, F).is_iso()
    D = discrete(2)
    G = presheaf(D, {"0": "ab", "1": "xyz"}, {})
    assert density_check(D, G).is_iso()
    el, _ = elements_of(G)
    assert len(el.objects) == 5


@pytest.mark.parametrize("name", SMALL)
def test_nat_hom_matches_brute_force(name):
    A = corpus.category(name)
    rng = random.Random(name)
    Fs = [random_set_functor(op_cat(A), rng, 2) for _ in range(4)]
    for F, G in itertools.product(Fs, repeat=2):
        assert len(nat_hom(F, G)) == brute_nat_count(F, G)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10 ** 6))
def test_yoneda_for_random_presheaves(name, seed):
    A = corpus.category(name)
    F = random_set_functor(op_cat(A), random.Random(seed), 3)
    for a in A.objects:
        assert len(nat_hom(yoneda(A, a), F)) == len(F.on_obj[a])
    assert density_check(A, F).is_iso()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(corpus.functors())), st.integers(0, 10 ** 6))
def test_adjunction_counts_agree(fname, seed):
    f = corpus.functors()[fname]
    rng = random.Random(seed)
    F = random_set_functor(op_cat(f.dom), rng, 2)
    G = random_set_functor(op_cat(f.cod), rng, 2)
    bij = check_ext_restrict_adjunction(f, F, G)
    assert len(bij) == len(nat_hom(F, restrict(f, G))) == len(nat_hom(extend(f, F), G))
