import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincat import corpus
from fincat.errors import NotCocomplete
from fincat.fincore import (
    FinFunctor,
    chain,
    discrete,
    identity_functor,
    lattice_from_poset,
    monotone_maps,
    op_cat,
    product_cat,
    terminal,
    walking_arrow,
)
from fincat.finset import FinSet, SetMap, colimit_of_diagram, limit_of_diagram
from fincat.kan import (
    JoinRefutation,
    absolute_lifting_check,
    check_lan_universal,
    check_ran_universal,
    coend,
    coend_as_weighted_colim,
    comma,
    default_probes,
    end,
    formal_aft,
    formal_kan_lemma,
    galois_oracle,
    is_nervous,
    lan_set,
    nerve,
    ran_set,
    set_hom_bifunctor,
    weighted_colim,
    weighted_colim_adjunction_check,
    ya1_check,
    ya4_check,
)
from fincat.presheaf import (
    SetFunctor,
    constant,
    corepresentable,
    extend,
    find_iso,
    nat_hom,
    random_set_functor,
    set_functor,
    yoneda,
)

ONE, TWO = terminal(), walking_arrow()


def const_at(A, B, b):
    return FinFunctor(A, B, {a: b for a in A.objects}, {f: B.identity[b] for f in A.arrows})


def hom_bifunctor(A):
    """``(x, y) |-> A(x, y)`` on ``op(A) x A``, built directly from the table."""
    shape = product_cat(op_cat(A), A)
    on_obj = {(x, y): FinSet(A.hom(x, y)) for x, y in shape.objects}
    on_arr = {}
    for (f, g) in shape.arrows:
        s, t = shape.src[(f, g)], shape.tgt[(f, g)]
        on_arr[(f, g)] = SetMap(on_obj[s], on_obj[t], {h: A.table[(g, A.table[(h, f)])] for h in on_obj[s]})
    return SetFunctor(shape, on_obj, on_arr)


def closure_count(elements, pairs):
    parent = {e: e for e in elements}

    def root(e):
        while parent[e] != e:
            e = parent[e]
        return e

    for a, b in pairs:
        parent[root(a)] = root(b)
    return len({root(e) for e in elements})


# comma categories and extensions

def test_comma_examples():
    assert len(comma(identity_functor(ONE), "*").cat.objects) == 1
    c = comma(const_at(ONE, TWO, "0"), "1")
    assert c.cat.objects == (("*", "u"),)
    c = comma(identity_functor(TWO), "1")
    assert len(c.cat.objects) == 2
    assert len(c.cat.non_identity_arrows()) == 1


def test_lan_examples():
    F = set_functor(TWO, {"0": "ab", "1": "xyz"}, {"u": {"a": "x", "b": "x"}})
    assert find_iso(lan_set(identity_functor(TWO), F).extension, F) is not None
    bang = const_at(TWO, ONE, "*")
    q, _ = colimit_of_diagram(F)
    assert len(lan_set(bang, F).extension.on_obj["*"]) == len(q) == 3


def test_lan_reproduces_extend_of_presheaves():
    f = corpus.functors()["squash"]
    F = random_set_functor(op_cat(f.dom), random.Random(3), 2)
    direct = lan_set(f.op(), F).extension
    assert find_iso(direct, extend(f, F)) is not None


def test_ran_examples():
    F = set_functor(TWO, {"0": "ab", "1": "xyz"}, {"u": {"a": "x", "b": "y"}})
    assert find_iso(ran_set(identity_functor(TWO), F).extension, F) is not None
    apex, _ = limit_of_diagram(F)
    assert len(ran_set(const_at(TWO, ONE, "*"), F).extension.on_obj["*"]) == len(apex)
    R = ran_set(const_at(ONE, TWO, "0"), constant(ONE, "pq")).extension
    assert R.sizes() == (2, 1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(corpus.functors())), st.integers(0, 10 ** 6))
def test_universal_properties(fname, seed):
    K = corpus.functors()[fname]
    rng = random.Random(seed)
    F = random_set_functor(K.dom, rng, 2)
    G = random_set_functor(K.cod, rng, 2)
    assert len(check_lan_universal(lan_set(K, F), K, F, G)) == len(nat_hom(lan_set(K, F).extension, G))
    assert len(check_ran_universal(ran_set(K, F), K, F, G)) == len(nat_hom(G, ran_set(K, F).extension))


def test_lan_along_bang_counts_cocones():
    F = set_functor(TWO, {"0": "ab", "1": "x"}, {"u": {"a": "x", "b": "x"}})
    bang = const_at(TWO, ONE, "*")
    for n in range(3):
        G = constant(ONE, range(n))
        cocones = sum(1 for t in itertools.product(range(n), repeat=3) if t[0] == t[1] == t[2])
        assert len(check_lan_universal(lan_set(bang, F), bang, F, G)) == cocones


# nerves and the Yoneda axioms

def test_nerve_examples():
    N = nerve(identity_functor(TWO))
    assert all(N.at(b) == yoneda(TWO, b) for b in TWO.objects)
    assert nerve(const_at(ONE, TWO, "0")).at("1").on_obj["*"].elements == ("u",)
    assert is_nervous(identity_functor(TWO))


def test_nerve_of_left_adjoint_is_representable():
    C2, C3 = chain(2), chain(3)
    f = next(m for m in monotone_maps(C2, C3) if m.obj_map == {"0": "0", "1": "2"})
    r = {"0": "0", "1": "0", "2": "1"}
    N = nerve(f)
    for b in C3.objects:
        assert find_iso(N.at(b), yoneda(C2, r[b])) is not None


@pytest.mark.parametrize("fname", list(corpus.functors()))
def test_yoneda_axioms_on_corpus(fname):
    f = corpus.functors()[fname]
    ya1_check(f)
    assert absolute_lifting_check(f, default_probes(f.dom, f.cod))


def test_lifting_over_point_is_hom():
    f = identity_functor(TWO)
    for a, b in itertools.product(TWO.objects, repeat=2):
        probe = (const_at(ONE, TWO, a), const_at(ONE, TWO, b))
        sizes = absolute_lifting_check(f, [probe])
        assert list(sizes.values()) == [len(TWO.hom(a, b))]


def test_composite_law():
    fs = corpus.functors()
    ya4_check(fs["low"], fs["squash"])
    ya4_check(fs["src"], fs["collapse"])


# coends, ends, weighted colimits

def test_coend_examples():
    F = constant(product_cat(op_cat(ONE), ONE), "abc")
    assert len(coend(F, ONE)) == 3
    D = discrete(3)
    H = hom_bifunctor(D)
    assert len(coend(H, D)) == 3
    H2 = hom_bifunctor(TWO)
    carrier = [(a, x) for a in TWO.objects for x in H2.on_obj[(a, a)]]
    pairs = []
    for f in TWO.arrows:
        a, a2 = TWO.src[f], TWO.tgt[f]
        for x in H2.on_obj[(a2, a)]:
            pairs.append(((a, H2.act((f, TWO.identity[a]), x)), (a2, H2.act((TWO.identity[a2], f), x))))
    assert len(coend(H2, TWO)) == closure_count(carrier, pairs) == 2


@pytest.mark.parametrize("name", ["One", "Two", "Disc2", "Idem", "Par"])
def test_end_of_hom_is_nat(name):
    A = corpus.category(name)
    rng = random.Random(name)
    for _ in range(3):
        F, G = random_set_functor(A, rng, 2), random_set_functor(A, rng, 2)
        assert len(end(set_hom_bifunctor(F, G), A)) == len(nat_hom(F, G))


def test_end_over_discrete_is_product():
    D = discrete(2)
    shape = product_cat(op_cat(D), D)
    F = SetFunctor(shape, {o: FinSet(range(2 if o[0] == o[1] == "0" else 3)) for o in shape.objects},
                   {u: SetMap.identity(FinSet(range(2 if shape.src[u] == ("0", "0") else 3))) for u in shape.arrows})
    assert len(end(F, D)) == 6


def test_weighted_colimits():
    D = set_functor(TWO, {"0": "ab", "1": "xyz"}, {"u": {"a": "x", "b": "z"}})
    for a in TWO.objects:
        assert len(weighted_colim(yoneda(TWO, a), D)) == len(D.on_obj[a])
    q, _ = colimit_of_diagram(D)
    assert len(weighted_colim(constant(op_cat(TWO), (0,)), D)) == len(q)
    for n in range(3):
        W = yoneda(TWO, "1")
        assert weighted_colim_adjunction_check(W, D, FinSet(range(n))) == n ** len(D.on_obj["1"])


@pytest.mark.parametrize("name", ["Two", "Idem", "C3"])
def test_coend_is_hom_weighted_colimit(name):
    A = corpus.category(name)
    F = random_set_functor(product_cat(op_cat(A), A), random.Random(1), 2)
    assert coend_as_weighted_colim(F, A).is_bijective()


# lattices

def test_formal_kan_join_formula():
    C3 = chain(3)
    L = lattice_from_poset(C3)
    for g in monotone_maps(C3, chain(2)):
        if len(set(g.obj_map.values())) < 2:
            continue
        for f in monotone_maps(C3, C3):
            ext = formal_kan_lemma(g, f, L)
            for c in g.cod.objects:
                want = L.join_all([f(a) for a in C3.objects if g.cod.hom(g(a), c)])
                assert ext.values[c] == want
    ident = identity_functor(C3)
    for f in monotone_maps(C3, C3):
        assert formal_kan_lemma(ident, f, L).extension.obj_map == f.obj_map
    with pytest.raises(NotCocomplete):
        formal_kan_lemma(identity_functor(discrete(2)), identity_functor(discrete(2)))


def test_aft_examples():
    C2, C3 = lattice_from_poset(chain(2)), lattice_from_poset(chain(3))
    ident = identity_functor(C3.carrier)
    assert formal_aft(ident).right.obj_map == ident.obj_map
    f = next(m for m in monotone_maps(C2.carrier, C3.carrier) if m.obj_map == {"0": "0", "1": "2"})
    w = formal_aft(f)
    assert w.right.obj_map == {"0": "0", "1": "0", "2": "1"} == galois_oracle(f, C2, C3)


def test_aft_refutes_non_join_map():
    D = corpus.diamond()
    L = lattice_from_poset(D)
    C3 = lattice_from_poset(chain(3))
    f = FinFunctor(D, C3.carrier, {"b": "0", "l": "1", "r": "1", "t": "2"},
                   {u: C3.arrow({"b": "0", "l": "1", "r": "1", "t": "2"}[D.src[u]],
                                {"b": "0", "l": "1", "r": "1", "t": "2"}[D.tgt[u]]) for u in D.arrows})
    ref = formal_aft(f, L, C3)
    assert isinstance(ref, JoinRefutation)
    assert {ref.a, ref.b} == {"l", "r"}
    assert galois_oracle(f, L, C3) is None
