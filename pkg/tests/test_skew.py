import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincat import corpus
from fincat.errors import DiagramFails, ShapeMismatch
from fincat.fincore import terminal, walking_arrow
from fincat.finset import FinSet
from fincat.presheaf import constant, find_iso, random_set_functor
from fincat.skew import (
    MutatedStructure,
    SkewContext,
    check_coherence,
    check_skm1,
    check_skm3,
    gamma_closed_form,
    j_dense,
    j_fully_faithful,
    normality_report,
    skew_prod,
)

ONE = terminal()
ROOTS = corpus.skew_roots()


def point_ctx(n, probes=(0, 1, 2)):
    return SkewContext(ONE, constant(ONE, range(n)), probes)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2), st.integers(0, 3), st.integers(0, 3))
def test_product_over_a_point_counts(j, a, b):
    """Over a single object with no arrows the coend has no relations."""
    ctx = point_ctx(j)
    P = skew_prod(constant(ONE, range(a)), constant(ONE, range(b)), ctx)
    assert len(P.on_obj["*"]) == a * b ** j


def test_unit_on_the_right_at_a_point():
    ctx = point_ctx(1)
    F = constant(ONE, "abc")
    assert find_iso(skew_prod(F, ctx.J, ctx), F) is not None
    ctx2 = point_ctx(2)
    F2 = constant(ONE, range(2))
    assert len(skew_prod(F2, F2, ctx2).on_obj["*"]) == 8


def test_j_product_is_density_comonad():
    X, J = ROOTS["point_to_pair"]
    ctx = SkewContext(X, J)
    G = random_set_functor(X, random.Random(0), 2)
    P = skew_prod(J, G, ctx)
    for x in X.objects:
        assert P.on_obj[x] == ctx.j1(J, G.on_obj[x]).classes()


def test_shape_must_match():
    with pytest.raises(ShapeMismatch):
        SkewContext(walking_arrow(), constant(ONE, (0,)))


def test_point_with_singleton_root_is_normal():
    ctx = point_ctx(1)
    r = normality_report(ctx, [constant(ONE, "ab")])
    assert r["rho_invertible"] and r["lambda_invertible"] and r["gamma_invertible"]
    assert r["J_fully_faithful"] and r["J_dense"]


@pytest.mark.parametrize("name", list(ROOTS))
def test_normality_matches_syntactic_criteria(name):
    X, J = ROOTS[name]
    ctx = SkewContext(X, J)
    fs = [random_set_functor(X, random.Random(k), 2, 1) for k in range(2)]
    r = normality_report(ctx, fs)
    assert r["rho_matches"] and r["lambda_matches"]
    assert r["J_fully_faithful"] == j_fully_faithful(ctx)
    assert r["J_dense"] == j_dense(ctx)


def test_non_full_root_reports_witness():
    ctx = point_ctx(2)
    r = normality_report(ctx, [constant(ONE, "ab")])
    assert not r["J_fully_faithful"] and not r["rho_invertible"]
    assert r["rho_witness"] is not None


def test_skm3_when_everything_is_the_root():
    ctx = point_ctx(1)
    J = ctx.J
    assert check_skm3(ctx) >= 1
    assert check_skm1(ctx, J, J, J, J) >= 1


@pytest.mark.parametrize("name", list(ROOTS))
def test_coherence_on_roots(name):
    X, J = ROOTS[name]
    ctx = SkewContext(X, J)
    rng = random.Random(name)
    fs = [random_set_functor(X, rng, 2, 1) for _ in range(4)]
    counts = check_coherence(ctx, *fs)
    assert counts["probe_sizes"] == (0, 1, 2)
    F, G, H = fs[:3]
    g = ctx.gamma(F, G, H)
    for x in X.objects:
        for c in ctx.prod(ctx.prod(F, G), H).on_obj[x]:
            assert g(x, c) == gamma_closed_form(ctx, F, G, H, x, c)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_coherence_random_at_two_point_root(seed):
    ctx = point_ctx(2)
    rng = random.Random(seed)
    fs = [random_set_functor(ONE, rng, 2) for _ in range(4)]
    check_coherence(ctx, *fs)


def test_swapped_gamma_fails_skm1():
    ctx = point_ctx(2).with_structure(MutatedStructure("gamma"))
    fs = [constant(ONE, range(2)) for _ in range(4)]
    with pytest.raises(DiagramFails) as err:
        check_coherence(ctx, *fs)
    assert err.value.axiom == "skm1"
    assert err.value.obj == "*" and err.value.element is not None


@pytest.mark.parametrize("kind", ["gamma", "gamma_last", "lambda", "rho"])
def test_every_mutation_is_caught_somewhere(kind):
    caught = False
    for name in ("two_points", "point_to_pair"):
        X, J = ROOTS[name]
        ctx = SkewContext(X, J).with_structure(MutatedStructure(kind))
        fs = [random_set_functor(X, random.Random(k), 2, 2) for k in range(4)]
        try:
            check_coherence(ctx, *fs)
        except DiagramFails:
            caught = True
    assert caught


def test_lambda_mutation_is_vacuous_on_empty_root():
    """With J empty the domain of lambda is empty, so there is nothing to corrupt."""
    X, J = ROOTS["empty_root"]
    ctx = SkewContext(X, J).with_structure(MutatedStructure("lambda"))
    fs = [constant(X, range(2)) for _ in range(4)]
    check_coherence(ctx, *fs)


def test_probe_sizes_are_required():
    from fincat.errors import FinCatError

    with pytest.raises(FinCatError):
        SkewContext(ONE, constant(ONE, (0,)), ())
    ctx = point_ctx(1, (0, 3))
    assert [len(P.on_obj["*"]) for P in ctx.probes()] == [0, 3]
    assert len(ctx.j1(ctx.J, FinSet(range(3))).classes()) == 3
