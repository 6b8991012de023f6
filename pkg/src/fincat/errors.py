"""Exception hierarchy.  Every check failure carries a finite witness."""

from __future__ import annotations


class FinCatError(Exception):
    """Base class for all errors raised by the engine."""


class UnknownElement(FinCatError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"unknown element {element!r}")


class UnknownObject(FinCatError):
    def __init__(self, obj):
        self.obj = obj
        super().__init__(f"unknown object {obj!r}")


class ShapeMismatch(FinCatError):
    pass


class CategoryLawError(FinCatError):
    """A composition table violates a category law."""


class NonComposablePair(CategoryLawError):
    def __init__(self, g, f, reason="composite defined on a non-composable pair"):
        self.g, self.f = g, f
        super().__init__(f"{reason}: ({g!r}, {f!r})")


class IdentityLawBroken(CategoryLawError):
    def __init__(self, arrow):
        self.arrow = arrow
        super().__init__(f"identity law broken at arrow {arrow!r}")


class AssociativityBroken(CategoryLawError):
    def __init__(self, f, g, h):
        self.f, self.g, self.h = f, g, h
        super().__init__(f"associativity broken at ({h!r}, {g!r}, {f!r})")


class FunctorError(FinCatError):
    pass


class NaturalityError(FinCatError):
    def __init__(self, arrow, detail=""):
        self.arrow = arrow
        super().__init__(f"naturality square fails at arrow {arrow!r}" + (f": {detail}" if detail else ""))


class TriangleIdentityFails(FinCatError):
    def __init__(self, obj, which):
        self.obj, self.which = obj, which
        super().__init__(f"{which} triangle identity fails at object {obj!r}")


class NotAPoset(FinCatError):
    def __init__(self, a, b):
        self.a, self.b = a, b
        super().__init__(f"more than one arrow {a!r} -> {b!r}, or a non-trivial cycle")


class NoJoin(FinCatError):
    def __init__(self, a, b):
        self.a, self.b = a, b
        super().__init__(f"no least upper bound for {a!r} and {b!r}")


class NotCocomplete(FinCatError):
    pass


class BijectionFails(FinCatError):
    def __init__(self, side, witness):
        self.side, self.witness = side, witness
        super().__init__(f"bijection fails ({side}): {witness!r}")


class NotIso(FinCatError):
    def __init__(self, where, detail=""):
        self.where = where
        super().__init__(f"canonical map is not invertible at {where!r}" + (f": {detail}" if detail else ""))


class LawFails(FinCatError):
    def __init__(self, law, sample, where, detail=""):
        self.law, self.sample, self.where = law, sample, where
        super().__init__(f"law {law} fails on sample {sample!r} at {where!r}" + (f": {detail}" if detail else ""))


class CounitNotIso(LawFails):
    def __init__(self, sample, where, detail=""):
        super().__init__("counit", sample, where, detail)


class ZigZagFails(LawFails):
    def __init__(self, sample, where, detail=""):
        super().__init__("zig-zag", sample, where, detail)


class DiagramFails(FinCatError):
    def __init__(self, axiom, obj, element, detail=""):
        self.axiom, self.obj, self.element = axiom, obj, element
        super().__init__(f"diagram {axiom} fails at object {obj!r} on element {element!r}" + (f": {detail}" if detail else ""))
