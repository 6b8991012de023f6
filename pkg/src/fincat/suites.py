"""Axiom suites shared by the command line and the test-suite.

Each suite returns a Report; a failing check carries the exception text,
which names the object and element at fault.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Optional, Sequence

from .errors import FinCatError
from .fincore import FinCat, FinFunctor, op_cat
from .presheaf import SetFunctor, random_set_functor
from .report import Report


def attempt(report: Report, name: str, fn: Callable, detail: Callable = None) -> bool:
    try:
        out = fn()
    except FinCatError as exc:
        report.fail(name, f"{type(exc).__name__}: {exc}")
        return False
    report.ok(name, detail(out) if detail else "")
    return True


def _tag(f: FinFunctor) -> str:
    return f.name or f"{f.dom.name}->{f.cod.name}"


def yoneda_axioms(A: FinCat, presheaves: Sequence[SetFunctor], functors: Sequence[FinFunctor] = (),
                  probe_size: int = 2) -> Report:
    """Yoneda lemma, density, extension/restriction and ya1 to ya4 over ``A``."""
    from .kan import absolute_lifting_check, default_probes, ya1_check, ya3_check, ya4_check
    from .presheaf import check_ext_restrict_adjunction, check_yoneda_lemma, density_check

    rep = Report(["suite", "yoneda-axioms", A.name or "?"])
    for i, F in enumerate(presheaves):
        for a in A.objects:
            attempt(rep, f"yoneda lemma P{i} at {a}", lambda a=a, F=F: check_yoneda_lemma(A, a, F),
                    lambda r: f"{len(r)} elements")
        attempt(rep, f"density P{i}", lambda F=F: density_check(A, F))
    attempt(rep, "ya3 density of y", lambda: ya3_check(A, presheaves), lambda n: f"{n} samples")
    for f in functors:
        if f.dom != A:
            continue
        attempt(rep, f"ya1 {_tag(f)}", lambda f=f: ya1_check(f))
        attempt(rep, f"ya2 {_tag(f)}", lambda f=f: absolute_lifting_check(f, default_probes(f.dom, f.cod, probe_size)))
        rng = random.Random(f"ext:{_tag(f)}")
        Gs = [random_set_functor(op_cat(f.cod), rng, 2) for _ in range(2)]
        for i, F in enumerate(presheaves[:3]):
            for j, G in enumerate(Gs):
                attempt(rep, f"extend -| restrict {_tag(f)} P{i} G{j}",
                        lambda f=f, F=F, G=G: check_ext_restrict_adjunction(f, F, G))
        for g in functors:
            if g.dom == f.cod:
                attempt(rep, f"ya4 {_tag(f)} then {_tag(g)}", lambda f=f, g=g: ya4_check(f, g))
    return rep


def relmonad_laws(A: FinCat, seed: int = 0) -> Report:
    """Unit laws, associativity and lax idempotency of the presheaf relative monad."""
    from .presheaf import yoneda
    from .relmonad import (
        PresheafMonad,
        check_assoc_law,
        check_unit_laws,
        default_theta_samples,
        default_world,
        lax_idempotency_witness,
        nested_world,
    )

    rep = Report(["suite", "relmonad-laws", A.name or "?"])
    monad = PresheafMonad()
    W = default_world(A, seed)
    rep.value("world objects", len(W.cat.objects))
    attempt(rep, "unit laws", lambda: check_unit_laws(W, monad), lambda r: f"{r.checked} checks")
    thetas = default_theta_samples(W, seed)
    attempt(rep, "lax idempotency", lambda: lax_idempotency_witness(W, thetas, monad=monad),
            lambda r: f"{r.checked} checks")
    Wsmall = default_world(A, seed, extra=1)
    W2 = nested_world(Wsmall)
    xis = [yoneda(W2.cat, ("y", ("y", a))) for a in A.objects]
    xis.append(random_set_functor(op_cat(W2.cat), random.Random(seed), 1))
    attempt(rep, "associativity", lambda: check_assoc_law(Wsmall, W2, xis, monad), lambda r: f"{r.checked} checks")
    return rep


def skew_coherence(X: FinCat, J: SetFunctor, functors: Sequence[SetFunctor] = (), seed: int = 0,
                   probe_size: int = 2, name: str = "") -> Report:
    """skm1 to skm4 with constant probes, and the normality report."""
    from .skew import SkewContext, check_coherence, gamma_closed_form, normality_report

    rep = Report(["suite", "skew-coherence", name or X.name or "?"])
    ctx = SkewContext(X, J, tuple(range(probe_size + 1)), name=name)
    fs = list(functors)
    rng = random.Random(f"skew:{name}:{seed}")
    while len(fs) < 4:
        fs.append(random_set_functor(X, rng, max_size=2, min_size=1))
    F, G, H, K = fs[:4]
    attempt(rep, "coherence skm1-skm4", lambda: check_coherence(ctx, F, G, H, K),
            lambda r: ", ".join(f"{k}={r[k]}" for k in ("skm1", "skm2", "skm3", "skm4")))

    def closed_form():
        g = ctx.gamma(F, G, H)
        dom = ctx.prod(ctx.prod(F, G), H)
        for x in X.objects:
            for c in dom.on_obj[x]:
                if g(x, c) != gamma_closed_form(ctx, F, G, H, x, c):
                    raise FinCatError(f"gamma differs from its closed form at {x!r}, {c!r}")
        return True

    attempt(rep, "gamma matches closed form", closed_form)
    nr = normality_report(ctx, fs[:2])
    for k in ("J_fully_faithful", "J_dense", "rho_invertible", "lambda_invertible", "gamma_invertible"):
        rep.value(k, nr[k])
    for k, crit in (("rho_matches", "rho invertible iff J fully faithful"), ("lambda_matches", "lambda invertible iff J dense")):
        if nr[k]:
            rep.ok(crit)
        else:
            rep.fail(crit, f"witness {nr[k.replace('matches', 'witness')]!r}")
    return rep


def isbell(A: FinCat, presheaves: Sequence[SetFunctor], copresheaves: Sequence[SetFunctor],
           functors: Sequence[FinFunctor] = (), seed: int = 0) -> Report:
    from .isbell import (
        adjunction_check,
        ambidextrous_pairing_check,
        o_as_limit,
        self_duality_check,
        spec_idempotence,
    )
    from .presheaf import corepresentable, yoneda

    rep = Report(["suite", "isbell", A.name or "?"])
    for i, F in enumerate(presheaves):
        for j, G in enumerate(copresheaves):
            attempt(rep, f"O -| Spec P{i} G{j}", lambda F=F, G=G: adjunction_check(F, G),
                    lambda r: f"{r['pairs']} pairs")
        attempt(rep, f"O as limit over elements P{i}", lambda F=F: o_as_limit(F))
        rep.value(f"self-dual P{i}", self_duality_check(F)["self_dual"])
    for a in A.objects:
        def rep_dual(a=a):
            if not self_duality_check(yoneda(A, a))["self_dual"]:
                raise FinCatError(f"unit at y({a}) is not invertible")
        attempt(rep, f"y({a}) self-dual", rep_dual)
    for j, G in enumerate(copresheaves):
        def idem(G=G):
            if not spec_idempotence(G):
                raise FinCatError("Spec O Spec differs from Spec")
        attempt(rep, f"Spec O Spec = Spec G{j}", idem)
    rng = random.Random(f"isbell:{A.name}:{seed}")
    own = [f for f in functors if f.dom == A]
    spans = [(f, random_set_functor(A, rng, 2)) for f in own]
    attempt(rep, "ambidextrous pairing", lambda: ambidextrous_pairing_check(A, own, spans),
            lambda r: ", ".join(f"{k}={v}" for k, v in r.items()))
    return rep


def main_theorem(categories: Sequence[FinCat], functors: Sequence[FinFunctor] = (), seed: int = 0,
                 mutate: Optional[str] = None) -> Report:
    from .relmonad import main_theorem_roundtrip

    rep = Report(["suite", "main-theorem"] + [c.name or "?" for c in categories])
    rt = main_theorem_roundtrip(list(categories), list(functors), mutate=mutate, seed=seed)
    for c in rt.checks:
        if c.ok:
            rep.ok(f"({c.stage}) {c.name}")
        else:
            rep.fail(f"({c.stage}) {c.name}", c.witness)
    return rep
