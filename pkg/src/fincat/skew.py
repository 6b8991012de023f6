"""The skew-monoidal structure ``F <| G = J_1 F . G`` on set functors over ``X``.

``J: X -> Set`` is a set functor; ``J_1 F`` is the endofunctor of finite
sets ``S |-> coend^x Set(J x, S) x F x``.  Elements of a coend are
triples ``(x, phi, e)`` with ``phi`` a function graph ``J x -> S``.  Coend
values are canonicalized lazily: a class is found by breadth-first search
over the generating relation and represented by its least member, so
large outer composites never need to be enumerated.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Hashable, Iterable, Optional, Sequence

from .errors import DiagramFails, FinCatError, ShapeMismatch
from .fincore import FinCat
from .finset import FinSet, SetMap, all_functions, graph_apply, sort_key
from .presheaf import NatFamily, SetFunctor, constant, corepresentable, nat_hom


def _compose_graph(outer: dict, phi: tuple) -> tuple:
    return tuple((j, outer[s]) for j, s in phi)


class CoendValue:
    """``J_1 F (S)`` with lazy canonical representatives."""

    def __init__(self, ctx: "SkewContext", F: SetFunctor, S: FinSet):
        self.ctx, self.F, self.S = ctx, F, S
        self._rep: dict = {}
        self._classes: Optional[FinSet] = None

    def carrier(self) -> Iterable[tuple]:
        J, F, S = self.ctx.J, self.F, self.S
        for x in self.ctx.X.objects:
            for phi in all_functions(J.on_obj[x], S):
                for e in F.on_obj[x]:
                    yield (x, phi, e)

    def _neighbours(self, elem):
        X, J, F, S = self.ctx.X, self.ctx.J, self.F, self.S
        x, phi, e = elem
        d = dict(phi)
        # (x2, psi, F(h) e) ~ (x, psi . J h, e) for h: x -> x2
        for h in self.ctx.out_arrows[x]:
            x2 = X.tgt[h]
            Jh = J.on_arr[h].table
            fixed = {}
            ok = True
            for j, s in phi:
                t = Jh[j]
                if fixed.setdefault(t, s) != s:
                    ok = False
                    break
            if not ok:
                continue
            free = [t for t in J.on_obj[x2] if t not in fixed]
            e2 = F.on_arr[h].table[e]
            for vals in itertools.product(S.elements, repeat=len(free)):
                g = dict(fixed)
                g.update(zip(free, vals))
                yield (x2, tuple((t, g[t]) for t in J.on_obj[x2]), e2)
        for h in self.ctx.in_arrows[x]:
            x0 = X.src[h]
            Jh = J.on_arr[h].table
            Fh = F.on_arr[h].table
            psi = tuple((j, d[Jh[j]]) for j in J.on_obj[x0])
            for e0 in self.ctx.preimages(F, h, e):
                yield (x0, psi, e0)

    def canon(self, elem: tuple) -> tuple:
        hit = self._rep.get(elem)
        if hit is not None:
            return hit
        seen = {elem}
        queue = deque([elem])
        while queue:
            cur = queue.popleft()
            for nb in self._neighbours(cur):
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        rep = min(seen, key=sort_key)
        for s in seen:
            self._rep[s] = rep
        return rep

    def classes(self) -> FinSet:
        if self._classes is None:
            self._classes = FinSet.sorted(self.canon(c) for c in self.carrier())
        return self._classes

    def map_along(self, t: dict, target: "CoendValue", elem: tuple) -> tuple:
        """``J_1 F (t)``: ``[x, phi, e] |-> [x, t . phi, e]``."""
        x, phi, e = elem
        return target.canon((x, _compose_graph(t, phi), e))


class SkewStructure:
    """The structure maps; subclassed to inject faults."""

    def rho(self, ctx, F, x, e):
        """``rho_F: F => F <| J``, ``e |-> [x, id, e]``."""
        Jx = ctx.J.on_obj[x]
        return ctx.j1(F, Jx).canon((x, tuple((j, j) for j in Jx), e))

    def lam(self, ctx, F, x, c):
        """``lambda_F: J <| F => F``, ``[x0, phi, j] |-> phi(j)``."""
        _, phi, j = c
        return graph_apply(phi, j)

    def gamma(self, ctx, F, G, H, x, c):
        """``gamma_{F,G,H}`` at ``x``: the mate of ``J_1 F * rho_G`` evaluated at ``H x``.

        First ``J_1(J_1 F * rho_G)`` sends ``[x0, phi, [x1, psi, e]]`` to
        ``[x0, phi, [x1, rho_G . psi, e]]``; then the counit
        ``J_1(V J) => V`` for ``V = J_1 F . J_1 G`` applies ``V(phi)``.
        """
        x0, phi, inner = c
        x1, psi, e = inner
        JGx0 = ctx.j1(G, ctx.J.on_obj[x0])
        mid = ctx.j1(F, JGx0.classes())
        v = mid.canon((x1, tuple((j, self.rho(ctx, G, x0, g)) for j, g in psi), e))
        return self.epsilon(ctx, F, G, H.on_obj[x], x0, phi, v)

    def epsilon(self, ctx, F, G, S, x0, phi, v):
        """Counit at ``S``: ``[x0, phi, v] |-> J_1 F(J_1 G(phi))(v)``."""
        JG_S = ctx.j1(G, S)
        JGx0 = ctx.j1(G, ctx.J.on_obj[x0])
        inner = {w: JGx0.map_along(dict(phi), JG_S, w) for w in JGx0.classes()}
        x1, omega, e = v
        return ctx.j1(F, JG_S.classes()).canon((x1, _compose_graph(inner, omega), e))


def gamma_closed_form(ctx, F, G, H, x, c):
    """Oracle: ``[x0, phi, [x1, psi, e]] |-> [x1, j |-> [x0, phi, psi(j)], e]``."""
    x0, phi, (x1, psi, e) = c
    JG_S = ctx.j1(G, H.on_obj[x])
    omega = tuple((j, JG_S.canon((x0, phi, g))) for j, g in psi)
    return ctx.j1(F, JG_S.classes()).canon((x1, omega, e))


class SkewContext:
    """``X``, the root ``J`` and the probe sizes; caches coend values and products."""

    def __init__(self, X: FinCat, J: SetFunctor, probe_sizes: Sequence[int] = (0, 1, 2),
                 structure: Optional[SkewStructure] = None, name: str = ""):
        if J.shape != X:
            raise ShapeMismatch("J must be a set functor on X")
        self.X, self.J = X, J
        self.probe_sizes = tuple(probe_sizes)
        if not self.probe_sizes:
            raise FinCatError("at least one probe size is required")
        self.structure = structure or SkewStructure()
        self.name = name
        self.out_arrows = {x: [h for h in X.non_identity_arrows() if X.src[h] == x] for x in X.objects}
        self.in_arrows = {x: [h for h in X.non_identity_arrows() if X.tgt[h] == x] for x in X.objects}
        self._j1: dict = {}
        self._prod: dict = {}
        self._pre: dict = {}
        self._keep: list = []

    def preimages(self, F, h, e):
        key = (id(F), h)
        if key not in self._pre:
            inv: dict = {}
            for a, b in F.on_arr[h].table.items():
                inv.setdefault(b, []).append(a)
            self._pre[key] = inv
            self._keep.append(F)
        return self._pre[key].get(e, ())

    def with_structure(self, structure: SkewStructure) -> "SkewContext":
        return SkewContext(self.X, self.J, self.probe_sizes, structure, self.name)

    def j1(self, F: SetFunctor, S: FinSet) -> CoendValue:
        key = (id(F), S.elements)
        hit = self._j1.get(key)
        if hit is None:
            hit = CoendValue(self, F, S)
            self._j1[key] = hit
            self._keep.append(F)
        return hit

    def prod(self, F: SetFunctor, G: SetFunctor) -> SetFunctor:
        """``F <| G`` materialized: ``x |-> J_1 F (G x)``."""
        key = (id(F), id(G))
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        X = self.X
        on_obj = {x: self.j1(F, G.on_obj[x]).classes() for x in X.objects}
        on_arr = {}
        for h in X.arrows:
            s, t = X.src[h], X.tgt[h]
            src_v, tgt_v = self.j1(F, G.on_obj[s]), self.j1(F, G.on_obj[t])
            Gh = G.on_arr[h].table
            on_arr[h] = SetMap(on_obj[s], on_obj[t], {c: src_v.map_along(Gh, tgt_v, c) for c in on_obj[s]}, check=False)
        P = SetFunctor(X, on_obj, on_arr, check=False)
        self._prod[key] = P
        self._keep.extend([F, G])
        return P

    def probes(self) -> list:
        """Constant functors at each probe size: ``F <| K_S`` evaluates ``J_1 F`` at ``S``."""
        return [constant(self.X, range(n)) for n in self.probe_sizes]

    # -- whiskering ----------------------------------------------------------------
    def whisker_right(self, alpha, F2, K, x, c):
        """``alpha <| K``: ``[x0, phi, a] |-> [x0, phi, alpha_x0(a)]``."""
        x0, phi, a = c
        return self.j1(F2, K.on_obj[x]).canon((x0, phi, alpha(x0, a)))

    def whisker_left(self, F, beta, G2, x, c):
        """``F <| beta``: ``[x0, phi, e] |-> [x0, beta_x . phi, e]``."""
        x0, phi, e = c
        return self.j1(F, G2.on_obj[x]).canon((x0, tuple((j, beta(x, s)) for j, s in phi), e))

    # -- structure maps as functions ------------------------------------------------
    def rho(self, F):
        return lambda x, e: self.structure.rho(self, F, x, e)

    def lam(self, F):
        return lambda x, c: self.structure.lam(self, F, x, c)

    def gamma(self, F, G, H):
        return lambda x, c: self.structure.gamma(self, F, G, H, x, c)

    def component(self, which: str, *args) -> dict:
        """Evaluate ``rho``, ``lam`` or ``gamma`` as SetMaps at every object."""
        X = self.X
        out = {}
        if which == "rho":
            (F,) = args
            fn, dom = self.rho(F), F
            cod = self.prod(F, self.J)
        elif which == "lam":
            (F,) = args
            fn, dom, cod = self.lam(F), self.prod(self.J, F), F
        elif which == "gamma":
            F, G, H = args
            fn, dom = self.gamma(F, G, H), self.prod(self.prod(F, G), H)
            cod = self.prod(F, self.prod(G, H))
        else:
            raise FinCatError(f"unknown structure map {which!r}")
        for x in X.objects:
            out[x] = SetMap(dom.on_obj[x], cod.on_obj[x], {c: fn(x, c) for c in dom.on_obj[x]})
        return out


# -- products and coherence ---------------------------------------------------------------

def skew_prod(F: SetFunctor, G: SetFunctor, ctx: SkewContext) -> SetFunctor:
    return ctx.prod(F, G)


def _fail(axiom, x, c, left, right):
    raise DiagramFails(axiom, x, c, f"{left!r} != {right!r}")


def check_skm1(ctx: SkewContext, F, G, H, K) -> int:
    """Skew associativity, both legs from ``((F<|G)<|H)<|K``."""
    P = ctx.prod
    FG, GH, HK = P(F, G), P(G, H), P(H, K)
    FG_H, F_GH, GH_K, G_HK = P(FG, H), P(F, GH), P(GH, K), P(G, HK)
    dom = P(FG_H, K)
    g1, g2 = ctx.gamma(FG, H, K), ctx.gamma(F, G, HK)
    g3, g4, g5 = ctx.gamma(F, G, H), ctx.gamma(F, GH, K), ctx.gamma(G, H, K)
    n = 0
    for x in ctx.X.objects:
        for c in dom.on_obj[x]:
            left = g2(x, g1(x, c))
            r1 = ctx.whisker_right(g3, F_GH, K, x, c)
            r2 = g4(x, r1)
            right = ctx.whisker_left(F, g5, G_HK, x, r2)
            if left != right:
                _fail("skm1", x, c, left, right)
            n += 1
    return n


def check_skm2(ctx: SkewContext, F, G) -> int:
    """Both unit diagrams: ``lambda . gamma = lambda <| G`` and ``gamma . rho = F <| rho``."""
    P, J = ctx.prod, ctx.J
    n = 0
    JF = P(J, F)
    dom = P(JF, G)
    FG = P(F, G)
    gJ, lam_FG, lam_F = ctx.gamma(J, F, G), ctx.lam(FG), ctx.lam(F)
    for x in ctx.X.objects:
        for c in dom.on_obj[x]:
            left = lam_FG(x, gJ(x, c))
            right = ctx.whisker_right(lam_F, F, G, x, c)
            if left != right:
                _fail("skm2 (left unit)", x, c, left, right)
            n += 1
    GJ = P(G, J)
    rho_FG, gR, rho_G = ctx.rho(FG), ctx.gamma(F, G, J), ctx.rho(G)
    for x in ctx.X.objects:
        for c in FG.on_obj[x]:
            left = gR(x, rho_FG(x, c))
            right = ctx.whisker_left(F, rho_G, GJ, x, c)
            if left != right:
                _fail("skm2 (right unit)", x, c, left, right)
            n += 1
    return n


def check_skm3(ctx: SkewContext) -> int:
    """``lambda_J . rho_J = id_J``."""
    J = ctx.J
    rho, lam = ctx.rho(J), ctx.lam(J)
    n = 0
    for x in ctx.X.objects:
        for j in J.on_obj[x]:
            got = lam(x, rho(x, j))
            if got != j:
                _fail("skm3", x, j, got, j)
            n += 1
    return n


def check_skm4(ctx: SkewContext, F, G) -> int:
    """``(F <| lambda_G) . gamma_{F,J,G} . (rho_F <| G) = id``."""
    P, J = ctx.prod, ctx.J
    FG, FJ = P(F, G), P(F, J)
    rho_F, gam, lam_G = ctx.rho(F), ctx.gamma(F, J, G), ctx.lam(G)
    n = 0
    for x in ctx.X.objects:
        for c in FG.on_obj[x]:
            r1 = ctx.whisker_right(rho_F, FJ, G, x, c)
            r2 = gam(x, r1)
            got = ctx.whisker_left(F, lam_G, G, x, r2)
            if got != c:
                _fail("skm4", x, c, got, c)
            n += 1
    return n


def check_coherence(ctx: SkewContext, F, G, H, K, probes: bool = True) -> dict:
    """All four diagrams, at every object; with ``probes`` the last argument
    also ranges over constant functors of the probe sizes.

    Returns element counts per axiom and the probe sizes used.
    """
    lasts = [K] + (ctx.probes() if probes else [])
    report = {"skm1": 0, "skm2": 0, "skm3": 0, "skm4": 0, "probe_sizes": ctx.probe_sizes if probes else ()}
    for L in lasts:
        report["skm1"] += check_skm1(ctx, F, G, H, L)
    for L in [G] + (ctx.probes() if probes else []):
        report["skm2"] += check_skm2(ctx, F, L)
        report["skm4"] += check_skm4(ctx, F, L)
    report["skm3"] += check_skm3(ctx)
    return report


# -- normality ---------------------------------------------------------------------------

def j_fully_faithful(ctx: SkewContext) -> bool:
    X, J = ctx.X, ctx.J
    for x in X.objects:
        for y in X.objects:
            images = {J.on_arr[h].graph() for h in X.hom(x, y)}
            if len(images) != len(X.hom(x, y)) or len(images) != _count_functions(J.on_obj[x], J.on_obj[y]):
                return False
    return True


def _count_functions(a, b) -> int:
    return len(b) ** len(a)


def j_dense(ctx: SkewContext) -> bool:
    """The nerve ``S |-> Set(J -, S)`` is fully faithful on probe sets."""
    from .kan import power_presheaf

    X, J = ctx.X, ctx.J
    # power_presheaf wants a covariant functor and returns a presheaf on X
    sets = [FinSet(range(n)) for n in ctx.probe_sizes]
    for S in sets:
        for T in sets:
            PS, PT = power_presheaf(J, S), power_presheaf(J, T)
            targets = {a.key for a in nat_hom(PS, PT)}
            images = set()
            for t in all_functions(S, T):
                td = dict(t)
                comps = {x: SetMap(PS.on_obj[x], PT.on_obj[x], {phi: _compose_graph(td, phi) for phi in PS.on_obj[x]},
                                   check=False) for x in X.objects}
                images.add(NatFamily(PS, PT, comps, check=False).key)
            if images != targets or len(images) != _count_functions(S, T):
                return False
    return True


def _is_bijection(table: dict, cod: FinSet) -> bool:
    vals = list(table.values())
    return len(set(vals)) == len(vals) == len(cod) and set(vals) == set(cod)


def rho_invertible(ctx: SkewContext, tests: Iterable[SetFunctor]) -> Optional[tuple]:
    """``None`` if every ``rho_F`` is invertible, else a witness ``(F index, x)``."""
    for i, F in enumerate(tests):
        FJ = ctx.prod(F, ctx.J)
        rho = ctx.rho(F)
        for x in ctx.X.objects:
            if not _is_bijection({e: rho(x, e) for e in F.on_obj[x]}, FJ.on_obj[x]):
                return (i, x)
    return None


def lambda_invertible(ctx: SkewContext) -> Optional[int]:
    """``None`` if the density counit is invertible at every probe set, else the failing size."""
    for n in ctx.probe_sizes:
        S = FinSet(range(n))
        v = ctx.j1(ctx.J, S)
        table = {c: graph_apply(c[1], c[2]) for c in v.classes()}
        if not _is_bijection(table, S):
            return n
    return None


def gamma_invertible(ctx: SkewContext, triples: Iterable[tuple]) -> Optional[tuple]:
    for i, (F, G, H) in enumerate(triples):
        comp = ctx.component("gamma", F, G, H)
        for x, m in comp.items():
            if not m.is_bijective():
                return (i, x)
    return None


def normality_report(ctx: SkewContext, tests: Sequence[SetFunctor] = ()) -> dict:
    """Which structure maps are invertible, against the syntactic criteria.

    The ``rho`` test set always includes the corepresentables ``X(x, -)``,
    for which ``rho`` is exactly the action of ``J`` on hom-sets.
    """
    reps = [corepresentable(ctx.X, x) for x in ctx.X.objects]
    tests = list(tests)
    ff = j_fully_faithful(ctx)
    dense = j_dense(ctx)
    rho_w = rho_invertible(ctx, reps + tests)
    lam_w = lambda_invertible(ctx)
    gam_w = gamma_invertible(ctx, [(F, G, H) for F in tests[:2] for G in tests[:2] for H in tests[:1]]) if tests else None
    return {
        "J_fully_faithful": ff,
        "J_dense": dense,
        "rho_invertible": rho_w is None,
        "rho_witness": rho_w,
        "lambda_invertible": lam_w is None,
        "lambda_witness": lam_w,
        "gamma_invertible": gam_w is None,
        "gamma_witness": gam_w,
        "rho_matches": (rho_w is None) == ff,
        "lambda_matches": (lam_w is None) == dense,
        "probe_sizes": ctx.probe_sizes,
    }


# -- fault injection ----------------------------------------------------------------------

class MutatedStructure(SkewStructure):
    """Changes one structure map at a single input: the least element of its
    domain at the first object of ``X``.

    ``kind`` is one of ``gamma``, ``gamma_last`` (the greatest element
    instead), ``lambda`` and ``rho``.
    """

    def __init__(self, kind: str):
        self.kind = kind
        self._points: dict = {}

    def _point(self, key, domain):
        if key not in self._points:
            elems = sorted(domain, key=sort_key)
            self._points[key] = (elems[-1] if self.kind == "gamma_last" else elems[0]) if elems else None
        return self._points[key]

    @staticmethod
    def _perturb(value, target: CoendValue):
        x1, omega, e = value
        S = target.S
        if omega and len(S) >= 2:
            j, s = omega[0]
            other = next(t for t in S if t != s)
            cand = target.canon((x1, ((j, other),) + omega[1:], e))
            if cand != value:
                return cand
        F = target.F
        for e2 in F.on_obj[x1]:
            if e2 != e:
                cand = target.canon((x1, omega, e2))
                if cand != value:
                    return cand
        return value

    def rho(self, ctx, F, x, e):
        out = super().rho(ctx, F, x, e)
        if self.kind == "rho" and x == ctx.X.objects[0] and e == self._point(("rho", id(F)), F.on_obj[x]):
            return self._perturb(out, ctx.j1(F, ctx.J.on_obj[x]))
        return out

    def lam(self, ctx, F, x, c):
        out = super().lam(ctx, F, x, c)
        if self.kind == "lambda" and x == ctx.X.objects[0]:
            S = F.on_obj[x]
            if c == self._point(("lam", id(F)), ctx.j1(ctx.J, S).classes()) and len(S) >= 2:
                return next(s for s in S if s != out)
        return out

    def gamma(self, ctx, F, G, H, x, c):
        out = super().gamma(ctx, F, G, H, x, c)
        if self.kind in ("gamma", "gamma_last") and x == ctx.X.objects[0]:
            dom = ctx.j1(ctx.prod(F, G), H.on_obj[x]).classes()
            if c == self._point(("gamma", id(F), id(G), id(H)), dom):
                JG_S = ctx.j1(G, H.on_obj[x])
                return self._perturb(out, ctx.j1(F, JG_S.classes()))
        return out
