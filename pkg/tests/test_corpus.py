import collections
import itertools

import pytest

from fincat import corpus
from fincat.fincore import is_isomorphic

CATS = corpus.categories()


def test_lattice_counts_by_size():
    """Unlabelled lattices with 1..5 elements number 1, 1, 1, 2, 5."""
    Ls = corpus.lattices()
    sizes = collections.Counter(len(L.elements) for L in Ls)
    assert [sizes[n] for n in range(1, 6)] == [1, 1, 1, 2, 5]
    for L, M in itertools.combinations(Ls, 2):
        if len(L.elements) == len(M.elements):
            assert is_isomorphic(L.carrier, M.carrier) is None


def test_lattices_have_joins_and_bounds():
    for L in corpus.lattices():
        assert L.join_all([]) == L.bottom
        for a, b in itertools.product(L.elements, repeat=2):
            j = L.join(a, b)
            assert L.le(a, j) and L.le(b, j)


@pytest.mark.parametrize("name", list(CATS))
def test_builtin_categories_are_small(name):
    C = CATS[name]
    assert len(C.objects) <= 4 and len(C.arrows) <= 12


def test_functors_land_in_builtins():
    for f in corpus.functors().values():
        assert f.dom in CATS.values() and f.cod in CATS.values()
        for (g, h), c in f.dom.table.items():
            assert f.cod.table[(f.arr_map[g], f.arr_map[h])] == f.arr_map[c]


@pytest.mark.parametrize("name", list(CATS))
def test_sample_functors_are_valid(name):
    A = CATS[name]
    for F in corpus.presheaves(A) + corpus.copresheaves(A):
        F.validate()
        assert all(len(v) <= 3 for v in F.on_obj.values())


def test_skew_corpus_shapes():
    roots = corpus.skew_roots()
    assert set(roots) == {"one_point", "two_points", "empty_root", "empty_to_point", "point_to_pair"}
    for name, ctx, fs in corpus.skew_corpus():
        assert len(fs) == 4
        assert all(len(v) >= 1 for F in fs for v in F.on_obj.values())
