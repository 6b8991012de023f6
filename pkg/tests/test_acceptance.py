"""Acceptance criteria 1 to 11.

Each criterion is one test.  Under pytest the PASS/FAIL lines are printed in
the terminal summary (see conftest.py); run this file directly to get the
same lines on stdout.  Every criterion must finish within a minute.
"""

from __future__ import annotations

import itertools
import random
import subprocess
import sys
import time
from pathlib import Path


from fincat import corpus
from fincat.dsl import load, parse, pretty
from fincat.errors import DiagramFails, FinCatError
from fincat.fincore import all_functors, op_cat
from fincat.isbell import (
    adjunction_check,
    isbell_o,
    o_as_limit,
    self_duality_check,
)
from fincat.kan import JoinRefutation, formal_aft, galois_oracle
from fincat.presheaf import (
    check_ext_restrict_adjunction,
    check_yoneda_lemma,
    corepresentable,
    density_check,
    nat_hom,
    yoneda,
)
from fincat.prof import companion_adjunction, local_ff_check
from fincat.relmonad import (
    PresheafMonad,
    check_assoc_law,
    check_unit_laws,
    default_theta_samples,
    default_world,
    kleisli_associator,
    kleisli_left_unit,
    kleisli_right_unit,
    kleisli_vs_coend,
    lax_idempotency_witness,
    main_theorem_roundtrip,
    nested_world,
    random_kleisli_cell,
)
from fincat.skew import MutatedStructure, check_coherence, normality_report

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
GOLDEN = CORPUS / "golden"
LIMIT = 60.0
SEED = 20240601

RESULTS: dict = {}
TITLES = {
    1: "Yoneda lemma",
    2: "extension/restriction adjunction",
    3: "density",
    4: "relative monad laws",
    5: "Kleisli composition equals coend composition",
    6: "equipment axioms",
    7: "main theorem round trip and mutations",
    8: "lattice adjoint functor theorem against the Galois oracle",
    9: "skew coherence, normality and mutations",
    10: "Isbell duality",
    11: "CLI determinism and round trip",
}


# -- the shipped corpus --------------------------------------------------------

def _environments():
    return [load(p.read_text(), str(p.relative_to(ROOT))) for p in sorted(CORPUS.glob("*.fc"))]


def _world():
    """Categories, functors and presheaves from the built-in corpus and the DSL files."""
    cats = dict(corpus.categories())
    functors = list(corpus.functors(cats).values())
    presheaves: dict = {}
    copresheaves: dict = {}
    for env in _environments():
        for name in env.names():
            ent = env.entities[name]
            if ent.kind in ("category", "poset", "lattice"):
                C = env.category(name)
                if not any(C == D for D in cats.values()):
                    cats[f"{Path(env.source).stem}:{name}"] = C
            elif ent.kind == "functor":
                functors.append(ent.value)
            elif ent.kind == "presheaf":
                presheaves.setdefault(ent.value.shape, []).append(ent.value)
            elif ent.kind == "copresheaf":
                copresheaves.setdefault(ent.value.shape, []).append(ent.value)
    return cats, functors, presheaves, copresheaves


CATS, FUNCTORS, DSL_PRESHEAVES, DSL_COPRESHEAVES = _world()


def _presheaves(A):
    return corpus.presheaves(A, SEED) + DSL_PRESHEAVES.get(op_cat(A), [])


def _copresheaves(A):
    return corpus.copresheaves(A, SEED) + DSL_COPRESHEAVES.get(A, [])


# -- bookkeeping ----------------------------------------------------------------

def criterion(n: int):
    def wrap(fn):
        def test():
            t0 = time.perf_counter()
            try:
                detail = fn()
                ok = True
            except (AssertionError, FinCatError) as exc:
                detail, ok = f"{type(exc).__name__}: {exc}", False
            secs = time.perf_counter() - t0
            if ok and secs > LIMIT:
                detail, ok = f"took {secs:.1f}s", False
            RESULTS[n] = (ok, detail, secs)
            assert ok, detail

        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        test.criterion = n
        return test

    return wrap


def summary_lines() -> list:
    lines = []
    for n in sorted(TITLES):
        if n not in RESULTS:
            lines.append(f"SKIP {n:2d} {TITLES[n]}  [not run]")
            continue
        ok, detail, secs = RESULTS[n]
        lines.append(f"{'PASS' if ok else 'FAIL'} {n:2d} {TITLES[n]}  [{detail}; {secs:.1f}s]")
    return lines


# -- criteria ---------------------------------------------------------------------

@criterion(1)
def test_01_yoneda_lemma():
    """|Nat(y a, F)| = |F(a)| with evaluation at the identity a bijection."""
    n = 0
    for A in CATS.values():
        for F in _presheaves(A):
            for a in A.objects:
                image = check_yoneda_lemma(A, a, F)
                assert len(nat_hom(yoneda(A, a), F)) == len(F.on_obj[a]) == len(image)
                n += 1
    return f"{n} triples over {len(CATS)} categories"


@criterion(2)
def test_02_extension_restriction():
    """Nat(extend f F, G) and Nat(F, restrict f G) correspond by mates."""
    n = 0
    for f in FUNCTORS:
        Fs = _presheaves(f.dom)
        Gs = _presheaves(f.cod)
        for F, G in itertools.product(Fs, Gs):
            check_ext_restrict_adjunction(f, F, G)
            n += 1
    return f"{n} pairs over {len(FUNCTORS)} functors"


@criterion(3)
def test_03_density():
    n = 0
    for A in CATS.values():
        for F in _presheaves(A):
            density_check(A, F)
            n += 1
    return f"{n} presheaves"


@criterion(4)
def test_04_relative_monad():
    """Unit laws, lax idempotency and associativity on nested samples."""
    counts = [0, 0, 0]
    for A in CATS.values():
        W = default_world(A, SEED)
        counts[0] += check_unit_laws(W, PresheafMonad()).checked
        counts[1] += lax_idempotency_witness(W, default_theta_samples(W, SEED)).checked
        if len(A.objects) > 2:
            continue
        Ws = default_world(A, SEED, extra=1)
        W2 = nested_world(Ws)
        xis = [yoneda(W2.cat, ("y", ("y", a))) for a in A.objects]
        xis.append(corpus.random_set_functor(op_cat(W2.cat), random.Random(SEED), 1))
        counts[2] += check_assoc_law(Ws, W2, xis, PresheafMonad()).checked
    return "unit {}, lax idempotency {}, associativity {} checks".format(*counts)


def _kleisli_cats():
    return [CATS[k] for k in ("One", "Two", "Disc2", "Idem", "C3")]


@criterion(5)
def test_05_kleisli_vs_coend():
    """At least 100 random pairs agree exactly; unit and associativity on 50 triples."""
    rng = random.Random(SEED)
    cats = _kleisli_cats()
    pairs = triples = elems = 0
    while pairs < 120:
        X, Y, Z = (rng.choice(cats) for _ in range(3))
        f = random_kleisli_cell(X, Y, rng)
        g = random_kleisli_cell(Y, Z, rng)
        elems += kleisli_vs_coend(g, f)
        pairs += 1
    while triples < 60:
        W, X, Y, Z = (rng.choice(cats) for _ in range(4))
        f, g, h = random_kleisli_cell(W, X, rng), random_kleisli_cell(X, Y, rng), random_kleisli_cell(Y, Z, rng)
        kleisli_left_unit(f)
        kleisli_right_unit(f)
        kleisli_associator(h, g, f)
        triples += 1
    return f"{pairs} pairs ({elems} elements), {triples} triples"


@criterion(6)
def test_06_equipment():
    """companion -| conjoint for every functor; local full faithfulness for parallel pairs."""
    parallel = 0
    for f in FUNCTORS:
        companion_adjunction(f)
    for f, g in itertools.product(FUNCTORS, repeat=2):
        if f.dom == g.dom and f.cod == g.cod:
            local_ff_check(f, g)
            parallel += 1
    small = [CATS[k] for k in ("One", "Two", "Disc2")]
    for A, B in itertools.product(small, repeat=2):
        fs = list(all_functors(A, B))
        for f in fs:
            companion_adjunction(f)
        for f, g in itertools.product(fs, repeat=2):
            local_ff_check(f, g)
            parallel += 1
    return f"{len(FUNCTORS)} corpus functors, {parallel} parallel pairs"


@criterion(7)
def test_07_main_theorem():
    """All functors among five small categories.  Par and Idem have hom-sets with two
    arrows, which the chi and companion mutations need to have anything to corrupt."""
    cats = [CATS[k] for k in ("One", "Two", "Disc2", "Par", "Idem")]
    rt = main_theorem_roundtrip(cats, seed=SEED)
    assert rt.ok, rt.failures()[:1]
    caught = []
    for kind in ("chi", "mu", "companion"):
        bad = main_theorem_roundtrip(cats, mutate=kind, seed=SEED).failures()
        assert bad, f"mutation {kind} not caught"
        assert all(c.witness for c in bad)
        caught.append(f"{kind}@({bad[0].stage})")
    return f"{len(rt.checks)} checks; caught " + ", ".join(caught)


@criterion(8)
def test_08_lattice_aft():
    """Exhaustive over monotone maps between all lattices with at most five elements."""
    Ls = corpus.lattices(5)
    assert len(Ls) == 10
    adj = refuted = 0
    for L, M in itertools.product(Ls, repeat=2):
        for f in corpus_monotone(L, M):
            got, want = formal_aft(f, L, M), galois_oracle(f, L, M)
            if isinstance(got, JoinRefutation):
                assert want is None, (f.obj_map, want)
                if got.a is None:
                    assert f(L.bottom) != M.bottom
                else:
                    assert M.join(f(got.a), f(got.b)) != f(L.join(got.a, got.b))
                refuted += 1
            else:
                assert want == dict(got.right.obj_map), (f.obj_map, want)
                adj += 1
    return f"{adj} adjoints, {refuted} refutations"


def corpus_monotone(L, M):
    from fincat.fincore import monotone_maps

    return monotone_maps(L.carrier, M.carrier)


@criterion(9)
def test_09_skew():
    rows = []
    for name, ctx, fs in corpus.skew_corpus(SEED):
        counts = check_coherence(ctx, *fs)
        nr = normality_report(ctx, fs[:2])
        assert nr["rho_matches"] and nr["lambda_matches"], (name, nr)
        rows.append(f"{name}:{sum(counts[k] for k in ('skm1', 'skm2', 'skm3', 'skm4'))}")
    two = {n: (c, fs) for n, c, fs in corpus.skew_corpus(SEED)}["two_points"]
    ctx, fs = two
    wide = [corpus.random_set_functor(ctx.X, random.Random(k), max_size=2, min_size=2) for k in range(4)]
    caught = []
    for kind in ("gamma", "gamma_last", "lambda", "rho"):
        try:
            check_coherence(ctx.with_structure(MutatedStructure(kind)), *wide)
        except DiagramFails as exc:
            caught.append(f"{kind}->{exc.axiom}")
        else:
            raise AssertionError(f"mutation {kind} not caught")
    return "diagrams " + " ".join(rows) + "; caught " + ", ".join(caught)


@criterion(10)
def test_10_isbell():
    pairs = duals = limits = 0
    for key in ("One", "Two", "Disc2", "Idem", "C3"):
        A = CATS[key]
        Fs, Gs = _presheaves(A), _copresheaves(A)
        for F, G in itertools.product(Fs, Gs):
            adjunction_check(F, G)
            pairs += 1
        for a in A.objects:
            assert self_duality_check(yoneda(A, a))["self_dual"], (key, a)
            assert nat_hom(isbell_o(yoneda(A, a)), corepresentable(A, a), only_bijective=True)
            duals += 1
        for F in Fs:
            o_as_limit(F)
            limits += 1
    return f"{pairs} adjunction pairs, {duals} representables self-dual, {limits} limit routes"


def _cli(*args) -> str:
    out = subprocess.run([sys.executable, "-m", "fincat", *args], capture_output=True, text=True, cwd=ROOT)
    assert out.returncode in (0, 1), out.stderr
    return out.stdout


@criterion(11)
def test_11_cli_determinism():
    files = sorted(CORPUS.glob("*.fc"))
    assert files
    for p in files:
        text = p.read_text()
        doc = parse(text, p.name)
        assert parse(pretty(doc), p.name) == doc, p.name
        assert pretty(parse(pretty(doc))) == pretty(doc)
        for fmt in ("text", "json"):
            rel = str(p.relative_to(ROOT))
            first = _cli("report", "-f", rel, "--format", fmt)
            second = _cli("report", "-f", rel, "--format", fmt)
            assert first == second, f"{p.name} {fmt} differs between runs"
            golden = GOLDEN / f"{p.stem}.{'txt' if fmt == 'text' else 'json'}"
            assert golden.read_text() == first, f"{golden.name} is stale"
    return f"{len(files)} files, text and json"


if __name__ == "__main__":
    for test in [v for k, v in sorted(globals().items()) if k.startswith("test_")]:
        try:
            test()
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(RESULTS[n][0] for n in RESULTS) else 1)
