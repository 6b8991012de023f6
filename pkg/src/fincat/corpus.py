"""The built-in example corpus: small categories, functors, presheaves,
all lattices with at most five elements, and skew contexts.

Everything here is deterministic for a given seed.  The DSL files shipped
under ``corpus/`` describe the same categories and functors by name.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

from .fincore import (
    FinCat,
    FinFunctor,
    FinLattice,
    chain,
    discrete,
    from_generators,
    is_isomorphic,
    lattice_from_poset,
    poset,
    terminal,
    walking_arrow,
)
from .errors import NoJoin
from .finset import FinSet, SetMap
from .presheaf import SetFunctor, constant, corepresentable, random_set_functor, yoneda
from .fincore import op_cat


def idem() -> FinCat:
    """One object with a non-trivial idempotent."""
    return from_generators(["*"], {}, [("e", "*", "*")], {("e", "e"): "e"}, name="Idem")


def parallel_pair() -> FinCat:
    return from_generators(["0", "1"], {}, [("s", "0", "1"), ("t", "0", "1")], {}, name="Par")


def diamond() -> FinCat:
    return poset(["b", "l", "r", "t"], [("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")], name="Diamond")


_BUILDERS = {
    "One": terminal,
    "Two": walking_arrow,
    "C3": lambda: chain(3),
    "Disc2": lambda: discrete(2),
    "Idem": idem,
    "Par": parallel_pair,
    "Diamond": diamond,
}


def category(name: str) -> FinCat:
    return _BUILDERS[name]()


def categories() -> dict:
    """Corpus name to category, in a fixed order."""
    return {name: build() for name, build in _BUILDERS.items()}


def thin_functor(A: FinCat, B: FinCat, obj_map: dict, arr_map: Optional[dict] = None, name: Optional[str] = None) -> FinFunctor:
    """A functor whose arrow map is forced wherever ``B`` has a single candidate arrow."""
    am = dict(arr_map or {})
    for f in A.arrows:
        if f not in am:
            cands = B.hom(obj_map[A.src[f]], obj_map[A.tgt[f]])
            if A.is_identity(f):
                am[f] = B.identity[obj_map[A.src[f]]]
            elif len(cands) == 1:
                am[f] = cands[0]
            else:
                raise ValueError(f"arrow {f!r} needs an explicit image")
    return FinFunctor(A, B, obj_map, am, name=name)


def functors(cats: Optional[dict] = None) -> dict:
    """Curated functors between corpus categories, keyed by name."""
    c = cats or categories()
    One, Two, C3, Disc2, Id, Par, Dia = (c[k] for k in ("One", "Two", "C3", "Disc2", "Idem", "Par", "Diamond"))
    specs = [
        ("pt0", One, Two, {"*": "0"}, None),
        ("pt1", One, Two, {"*": "1"}, None),
        ("bang2", Two, One, {"0": "*", "1": "*"}, None),
        ("low", Two, C3, {"0": "0", "1": "1"}, None),
        ("high", Two, C3, {"0": "1", "1": "2"}, None),
        ("span", Two, C3, {"0": "0", "1": "2"}, None),
        ("squash", C3, Two, {"0": "0", "1": "0", "2": "1"}, None),
        ("incl", Disc2, Two, {"0": "0", "1": "1"}, None),
        ("bangI", Id, One, {"*": "*"}, None),
        ("ptI", One, Id, {"*": "*"}, None),
        ("src", Two, Par, {"0": "0", "1": "1"}, {"u": "s"}),
        ("collapse", Par, Two, {"0": "0", "1": "1"}, {"s": "u", "t": "u"}),
        ("edge", C3, Dia, {"0": "b", "1": "l", "2": "t"}, None),
    ]
    return {n: thin_functor(A, B, om, am, name=n) for n, A, B, om, am in specs}


def presheaves(A: FinCat, seed: int = 0, extra: int = 2, max_size: int = 2) -> list:
    """Representables, the empty and terminal presheaves, then seeded random ones."""
    rng = random.Random(f"{A.name}:{seed}")
    out = [yoneda(A, a) for a in A.objects]
    out.append(constant(op_cat(A), ()))
    out.append(constant(op_cat(A), (0,)))
    out += [random_set_functor(op_cat(A), rng, max_size) for _ in range(extra)]
    return out


def copresheaves(A: FinCat, seed: int = 0, extra: int = 2, max_size: int = 2) -> list:
    rng = random.Random(f"co:{A.name}:{seed}")
    out = [corepresentable(A, a) for a in A.objects]
    out.append(constant(A, ()))
    out.append(constant(A, (0,)))
    out += [random_set_functor(A, rng, max_size) for _ in range(extra)]
    return out


# -- lattices -------------------------------------------------------------------------

def _naturally_labelled_posets(n: int) -> Iterator[set]:
    """Order relations on ``range(n)`` contained in the usual order; every
    finite poset has such a labelling."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if all((i, k) in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            yield rel


def lattices(max_size: int = 5) -> list:
    """Every lattice with ``1..max_size`` elements, one per isomorphism class."""
    found: list = []
    for n in range(1, max_size + 1):
        for rel in _naturally_labelled_posets(n):
            names = [str(i) for i in range(n)]
            P = poset(names, [(str(i), str(j)) for i, j in rel], name=f"L{n}")
            try:
                L = lattice_from_poset(P)
            except NoJoin:
                continue
            if any(len(M.elements) == n and is_isomorphic(M.carrier, P) is not None for M in found):
                continue
            found.append(L)
    for i, L in enumerate(found):
        L.carrier.name = f"L{len(L.elements)}_{i}"
    return found


# -- skew contexts --------------------------------------------------------------------

def _set_functor(X: FinCat, values: dict, maps: dict) -> SetFunctor:
    on_obj = {x: FinSet(v) for x, v in values.items()}
    on_arr = {}
    for f in X.arrows:
        s, t = X.src[f], X.tgt[f]
        on_arr[f] = SetMap.identity(on_obj[s]) if X.is_identity(f) else SetMap(on_obj[s], on_obj[t], maps[f])
    return SetFunctor(X, on_obj, on_arr)


def skew_roots() -> dict:
    """Name to ``(X, J)``; chosen to cover each combination of fully faithful and dense."""
    One, Two = terminal(), walking_arrow()
    return {
        "one_point": (One, constant(One, (0,))),
        "two_points": (One, constant(One, (0, 1))),
        "empty_root": (One, constant(One, ())),
        "empty_to_point": (Two, _set_functor(Two, {"0": (), "1": (0,)}, {"u": {}})),
        "point_to_pair": (Two, _set_functor(Two, {"0": (0,), "1": (0, 1)}, {"u": {0: 0}})),
    }


def skew_corpus(seed: int = 0, probe_sizes=(0, 1, 2)) -> list:
    """``(name, ctx, [F, G, H, K])`` with nonempty random functors of size at most 2."""
    from .skew import SkewContext

    out = []
    for name, (X, J) in skew_roots().items():
        rng = random.Random(f"skew:{name}:{seed}")
        fs = [random_set_functor(X, rng, max_size=2, min_size=1) for _ in range(4)]
        out.append((name, SkewContext(X, J, probe_sizes, name=name), fs))
    return out
