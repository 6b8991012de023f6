"""A small declaration language for finite categories and the data over them.

Grammar (``#`` starts a comment; ``[]`` optional, ``*`` repetition)::

    document    := decl*
    decl        := category | poset | lattice | functor | presheaf
                 | profunctor | adjunction | suite
    category    := "category" NAME "{" citem* "}"
    citem       := "object" NAME ("," NAME)* ";"
                 | "arrow" NAME ":" NAME "->" NAME ";"
                 | "compose" NAME "." NAME "=" NAME ";"
    poset       := ("poset" | "lattice") NAME "{" [chain (sep chain)* [sep]] "}"
    chain       := NAME ("<" NAME)*                      sep := ";" | ","
    functor     := "functor" NAME ":" NAME "->" NAME "{" (NAME "->" NAME ";")* "}"
    presheaf    := ("presheaf" | "copresheaf") NAME "on" NAME "{" pitem* "}"
    pitem       := "at" NAME "=" set ";" | "act" arrow "=" map ";"
    profunctor  := "profunctor" NAME ":" NAME "-|->" NAME
                   ( "=" pexpr ";" | "{" qitem* "}" )
    pexpr       := "hom" NAME | "companion" NAME | "conjoint" NAME | "compose" NAME NAME
    qitem       := "at" NAME "," NAME "=" set ";" | "act" arrow "," arrow "=" map ";"
    adjunction  := "adjunction" NAME ":" NAME "-|" NAME ( ";" | "{" aitem* "}" )
    aitem       := ("unit" | "counit") NAME "=" arrow ";"
    suite       := "suite" NAME "{" (KIND NAME* ";")* "}"
    arrow       := NAME | NAME "<" NAME                  # the second form names a poset arrow
    set         := "{" [NAME ("," NAME)*] "}"
    map         := "{" [NAME "->" NAME ("," NAME "->" NAME)*] "}"

``NAME`` is an identifier (hyphens allowed between word characters), a
non-negative integer, or a double-quoted string.  Identities are inserted
automatically and named ``id_x``.  Composition tables of general
categories must list every composable pair of non-identity arrows; posets
omit them.  Omitted functor, action or adjunction entries are filled only
when forced: an identity, a unique candidate, or a composite of given ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import FinCatError

# -- diagnostics -----------------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class DslError(FinCatError):
    """A located diagnostic with a one-line fix hint."""

    label = "error"

    def __init__(self, message: str, span: Optional[Span] = None, hint: str = "", source: str = ""):
        self.message, self.span, self.hint, self.source = message, span, hint, source
        super().__init__(self.render())

    def render(self) -> str:
        where = f"{self.source}:" if self.source else ""
        where += f"{self.span}: " if self.span else " "
        out = f"{where}{self.label}: {self.message}"
        return out + (f"\n  hint: {self.hint}" if self.hint else "")

    def located(self, source: str) -> "DslError":
        self.source = source
        self.args = (self.render(),)
        return self


class DslSyntaxError(DslError):
    label = "syntax error"


class DuplicateName(DslError):
    label = "duplicate name"


class UnresolvedReference(DslError):
    label = "unresolved reference"


class TableIncomplete(DslError):
    label = "table incomplete"


class DslCheckError(DslError):
    label = "check failed"


# -- tokens ----------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<nl>\n)
      | (?P<comment>\#[^\n]*)
      | (?P<string>"(?:[^"\\\n]|\\.)*")
      | (?P<name>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*|[0-9]+)
      | (?P<sym>-\|->|-\||->|[{}();,.=:<*])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "string", "sym", "eof"
    text: str
    span: Span


def tokenize(text: str) -> list:
    out, line, col, pos = [], 1, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", Span(line, col),
                                 "names are letters, digits, _ or quoted strings")
        kind, lexeme = m.lastgroup, m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind == "name" or kind == "sym":
                out.append(Token(kind, lexeme, Span(line, col)))
            elif kind == "string":
                out.append(Token("name", bytes(lexeme[1:-1], "utf-8").decode("unicode_escape"), Span(line, col)))
            col += len(lexeme)
        pos = m.end()
    out.append(Token("eof", "", Span(line, col)))
    return out


# -- AST -------------------------------------------------------------------------------
# Spans never take part in equality, so round-trip comparisons ignore layout.


@dataclass(frozen=True)
class Ref:
    name: str
    span: Span = field(default=Span(0, 0), compare=False)


@dataclass(frozen=True)
class ArrowRef:
    """A named arrow, or ``a < b`` naming the arrow of a poset."""

    parts: tuple

    @property
    def span(self) -> Span:
        return self.parts[0].span


@dataclass(frozen=True)
class ObjectItem:
    names: tuple


@dataclass(frozen=True)
class ArrowItem:
    name: Ref
    src: Ref
    tgt: Ref


@dataclass(frozen=True)
class ComposeItem:
    g: Ref
    f: Ref
    result: Ref


@dataclass(frozen=True)
class CategoryDecl:
    name: Ref
    items: tuple
    keyword = "category"


@dataclass(frozen=True)
class PosetDecl:
    name: Ref
    chains: tuple
    lattice: bool = False

    @property
    def keyword(self) -> str:
        return "lattice" if self.lattice else "poset"


@dataclass(frozen=True)
class FunctorDecl:
    name: Ref
    dom: Ref
    cod: Ref
    entries: tuple
    keyword = "functor"


@dataclass(frozen=True)
class AtItem:
    where: tuple  # one name, or (b, a) for a profunctor
    elements: tuple


@dataclass(frozen=True)
class ActItem:
    arrows: tuple  # one ArrowRef, or (g, k) for a profunctor
    mapping: tuple


@dataclass(frozen=True)
class PresheafDecl:
    name: Ref
    base: Ref
    items: tuple
    covariant: bool = False

    @property
    def keyword(self) -> str:
        return "copresheaf" if self.covariant else "presheaf"


@dataclass(frozen=True)
class ProfunctorDecl:
    name: Ref
    src: Ref
    dst: Ref
    expr: Optional[tuple]  # (Ref operator, Ref args...)
    items: tuple
    keyword = "profunctor"


@dataclass(frozen=True)
class AdjunctionDecl:
    name: Ref
    left: Ref
    right: Ref
    items: tuple  # (Ref "unit"/"counit", Ref object, ArrowRef)
    keyword = "adjunction"


@dataclass(frozen=True)
class SuiteDecl:
    name: Ref
    runs: tuple  # (Ref kind, tuple of Ref)
    keyword = "suite"


@dataclass(frozen=True)
class Document:
    decls: tuple


SUITE_KINDS = ("yoneda-axioms", "relmonad-laws", "skew-coherence", "isbell", "main-theorem")
_DECL_KEYWORDS = ("category", "poset", "lattice", "functor", "presheaf", "copresheaf", "profunctor", "adjunction", "suite")
_PROF_OPS = ("hom", "companion", "conjoint", "compose")


# -- parser ----------------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list):
        self.toks, self.i = tokens, 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at_sym(self, s: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == s

    def at_word(self, w: str) -> bool:
        return self.tok.kind == "name" and self.tok.text == w

    def expect(self, s: str, hint: str = "") -> Token:
        if not self.at_sym(s):
            raise DslSyntaxError(f"expected {s!r}, found {self._show()}", self.tok.span, hint or f"insert {s!r}")
        return self._advance()

    def expect_word(self, w: str) -> Token:
        if not self.at_word(w):
            raise DslSyntaxError(f"expected {w!r}, found {self._show()}", self.tok.span, f"write {w!r} here")
        return self._advance()

    def _show(self) -> str:
        t = self.tok
        return "end of input" if t.kind == "eof" else repr(t.text)

    def name(self, what: str = "a name") -> Ref:
        if self.tok.kind != "name":
            raise DslSyntaxError(f"expected {what}, found {self._show()}", self.tok.span,
                                 "quote names that contain symbols, e.g. \"a<=b\"")
        t = self._advance()
        return Ref(t.text, t.span)

    def arrow(self) -> ArrowRef:
        first = self.name("an arrow")
        if self.at_sym("<"):
            self._advance()
            return ArrowRef((first, self.name("an object")))
        return ArrowRef((first,))

    def document(self) -> Document:
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.decl())
        return Document(tuple(decls))

    def decl(self):
        t = self.tok
        if t.kind != "name" or t.text not in _DECL_KEYWORDS:
            raise DslSyntaxError(f"expected a declaration, found {self._show()}", t.span,
                                 "declarations start with " + ", ".join(_DECL_KEYWORDS))
        return getattr(self, "_" + t.text)()

    def _block(self, item):
        self.expect("{")
        out = []
        while not self.at_sym("}"):
            if self.tok.kind == "eof":
                raise DslSyntaxError("unterminated block", self.tok.span, "close the block with '}'")
            out.append(item())
        self.expect("}")
        return tuple(out)

    def _category(self):
        self._advance()
        name = self.name("a category name")

        def item():
            if self.at_word("object"):
                self._advance()
                names = [self.name("an object")]
                while self.at_sym(","):
                    self._advance()
                    names.append(self.name("an object"))
                self.expect(";")
                return ObjectItem(tuple(names))
            if self.at_word("arrow"):
                self._advance()
                a = self.name("an arrow name")
                self.expect(":")
                s = self.name("a source object")
                self.expect("->")
                t = self.name("a target object")
                self.expect(";")
                return ArrowItem(a, s, t)
            if self.at_word("compose"):
                self._advance()
                g = self.name("an arrow")
                self.expect(".", "write compositions as `compose g . f = h;`")
                f = self.name("an arrow")
                self.expect("=")
                h = self.name("an arrow")
                self.expect(";")
                return ComposeItem(g, f, h)
            raise DslSyntaxError(f"expected object, arrow or compose, found {self._show()}", self.tok.span,
                                 "category bodies hold `object`, `arrow` and `compose` lines")

        return CategoryDecl(name, self._block(item))

    def _poset(self, lattice: bool = False):
        self._advance()
        name = self.name("a poset name")
        self.expect("{")
        chains = []
        while not self.at_sym("}"):
            chain = [self.name("an element")]
            while self.at_sym("<"):
                self._advance()
                chain.append(self.name("an element"))
            chains.append(tuple(chain))
            if self.at_sym(";") or self.at_sym(","):
                self._advance()
            elif not self.at_sym("}"):
                raise DslSyntaxError(f"expected '<', ';' or '}}', found {self._show()}", self.tok.span,
                                     "separate chains with ';'")
        self.expect("}")
        return PosetDecl(name, tuple(chains), lattice)

    def _lattice(self):
        return self._poset(lattice=True)

    def _functor(self):
        self._advance()
        name = self.name("a functor name")
        self.expect(":")
        dom = self.name("a category")
        self.expect("->")
        cod = self.name("a category")

        def item():
            a = self.name("an object or arrow")
            self.expect("->")
            b = self.name("an object or arrow")
            self.expect(";")
            return (a, b)

        return FunctorDecl(name, dom, cod, self._block(item))

    def _set(self) -> tuple:
        self.expect("{")
        out = []
        if not self.at_sym("}"):
            out.append(self.name("an element"))
            while self.at_sym(","):
                self._advance()
                out.append(self.name("an element"))
        self.expect("}")
        return tuple(out)

    def _map(self) -> tuple:
        self.expect("{")
        out = []
        while not self.at_sym("}"):
            a = self.name("an element")
            self.expect("->")
            b = self.name("an element")
            out.append((a, b))
            if self.at_sym(","):
                self._advance()
            elif not self.at_sym("}"):
                raise DslSyntaxError(f"expected ',' or '}}', found {self._show()}", self.tok.span,
                                     "write maps as {x -> y, z -> w}")
        self.expect("}")
        return tuple(out)

    def _presheaf(self, covariant: bool = False):
        self._advance()
        name = self.name("a presheaf name")
        self.expect_word("on")
        base = self.name("a category")

        def item():
            if self.at_word("at"):
                self._advance()
                x = self.name("an object")
                self.expect("=")
                s = self._set()
                self.expect(";")
                return AtItem((x,), s)
            if self.at_word("act"):
                self._advance()
                f = self.arrow()
                self.expect("=")
                m = self._map()
                self.expect(";")
                return ActItem((f,), m)
            raise DslSyntaxError(f"expected at or act, found {self._show()}", self.tok.span,
                                 "use `at x = {...};` and `act f = {a -> b};`")

        return PresheafDecl(name, base, self._block(item), covariant)

    def _copresheaf(self):
        return self._presheaf(covariant=True)

    def _profunctor(self):
        self._advance()
        name = self.name("a profunctor name")
        self.expect(":")
        src = self.name("a category")
        self.expect("-|->", "profunctors are written P: A -|-> B")
        dst = self.name("a category")
        if self.at_sym("="):
            self._advance()
            op = self.name("hom, companion, conjoint or compose")
            if op.name not in _PROF_OPS:
                raise DslSyntaxError(f"unknown profunctor expression {op.name!r}", op.span,
                                     "use hom A, companion f, conjoint f or compose Q P")
            args = [self.name("an argument")]
            if op.name == "compose":
                args.append(self.name("an argument"))
            self.expect(";")
            return ProfunctorDecl(name, src, dst, (op, *args), ())

        def item():
            if self.at_word("at"):
                self._advance()
                b = self.name("an object")
                self.expect(",")
                a = self.name("an object")
                self.expect("=")
                s = self._set()
                self.expect(";")
                return AtItem((b, a), s)
            if self.at_word("act"):
                self._advance()
                g = self.arrow()
                self.expect(",")
                k = self.arrow()
                self.expect("=")
                m = self._map()
                self.expect(";")
                return ActItem((g, k), m)
            raise DslSyntaxError(f"expected at or act, found {self._show()}", self.tok.span,
                                 "use `at b, a = {...};` and `act g, k = {x -> y};`")

        return ProfunctorDecl(name, src, dst, None, self._block(item))

    def _adjunction(self):
        self._advance()
        name = self.name("an adjunction name")
        self.expect(":")
        left = self.name("a functor")
        self.expect("-|", "adjunctions are written a: f -| g")
        right = self.name("a functor")
        if self.at_sym(";"):
            self._advance()
            return AdjunctionDecl(name, left, right, ())

        def item():
            which = self.name("unit or counit")
            if which.name not in ("unit", "counit"):
                raise DslSyntaxError(f"expected unit or counit, found {which.name!r}", which.span,
                                     "list components as `unit x = f;`")
            x = self.name("an object")
            self.expect("=")
            f = self.arrow()
            self.expect(";")
            return (which, x, f)

        return AdjunctionDecl(name, left, right, self._block(item))

    def _suite(self):
        self._advance()
        name = self.name("a suite name")

        def item():
            kind = self.name("a suite kind")
            if kind.name not in SUITE_KINDS:
                raise DslSyntaxError(f"unknown suite kind {kind.name!r}", kind.span, "one of " + ", ".join(SUITE_KINDS))
            args = []
            while not self.at_sym(";"):
                args.append(self.name("a declared name"))
            self.expect(";")
            return (kind, tuple(args))

        return SuiteDecl(name, self._block(item))


def parse(text: str, source: str = "") -> Document:
    """Parse a document; raises a located DslError."""
    try:
        return _Parser(tokenize(text)).document()
    except DslError as exc:
        raise exc.located(source)


# -- pretty printer --------------------------------------------------------------------

_PLAIN = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*|[0-9]+")


def _n(r) -> str:
    s = r.name if isinstance(r, Ref) else str(r)
    if _PLAIN.fullmatch(s):
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _a(r: ArrowRef) -> str:
    return " < ".join(_n(p) for p in r.parts)


def _set_text(elems) -> str:
    return "{" + ", ".join(_n(e) for e in elems) + "}"


def _map_text(pairs) -> str:
    return "{" + ", ".join(f"{_n(a)} -> {_n(b)}" for a, b in pairs) + "}"


def pretty(doc: Document) -> str:
    """Canonical text; ``parse(pretty(d)) == d`` for every document."""
    blocks = []
    for d in doc.decls:
        lines = []
        if isinstance(d, CategoryDecl):
            lines.append(f"category {_n(d.name)} {{")
            for it in d.items:
                if isinstance(it, ObjectItem):
                    lines.append("  object " + ", ".join(_n(x) for x in it.names) + ";")
                elif isinstance(it, ArrowItem):
                    lines.append(f"  arrow {_n(it.name)}: {_n(it.src)} -> {_n(it.tgt)};")
                else:
                    lines.append(f"  compose {_n(it.g)} . {_n(it.f)} = {_n(it.result)};")
            lines.append("}")
        elif isinstance(d, PosetDecl):
            body = "; ".join(" < ".join(_n(x) for x in c) for c in d.chains)
            lines.append(f"{d.keyword} {_n(d.name)} {{ {body} }}" if body else f"{d.keyword} {_n(d.name)} {{ }}")
        elif isinstance(d, FunctorDecl):
            lines.append(f"functor {_n(d.name)}: {_n(d.dom)} -> {_n(d.cod)} {{")
            lines += [f"  {_n(a)} -> {_n(b)};" for a, b in d.entries]
            lines.append("}")
        elif isinstance(d, PresheafDecl):
            lines.append(f"{d.keyword} {_n(d.name)} on {_n(d.base)} {{")
            for it in d.items:
                if isinstance(it, AtItem):
                    lines.append(f"  at {_n(it.where[0])} = {_set_text(it.elements)};")
                else:
                    lines.append(f"  act {_a(it.arrows[0])} = {_map_text(it.mapping)};")
            lines.append("}")
        elif isinstance(d, ProfunctorDecl):
            head = f"profunctor {_n(d.name)}: {_n(d.src)} -|-> {_n(d.dst)}"
            if d.expr is not None:
                lines.append(head + " = " + " ".join(_n(x) for x in d.expr) + ";")
            else:
                lines.append(head + " {")
                for it in d.items:
                    if isinstance(it, AtItem):
                        lines.append(f"  at {_n(it.where[0])}, {_n(it.where[1])} = {_set_text(it.elements)};")
                    else:
                        lines.append(f"  act {_a(it.arrows[0])}, {_a(it.arrows[1])} = {_map_text(it.mapping)};")
                lines.append("}")
        elif isinstance(d, AdjunctionDecl):
            head = f"adjunction {_n(d.name)}: {_n(d.left)} -| {_n(d.right)}"
            if not d.items:
                lines.append(head + ";")
            else:
                lines.append(head + " {")
                lines += [f"  {_n(w)} {_n(x)} = {_a(f)};" for w, x, f in d.items]
                lines.append("}")
        elif isinstance(d, SuiteDecl):
            lines.append(f"suite {_n(d.name)} {{")
            lines += ["  " + " ".join([_n(k)] + [_n(a) for a in args]) + ";" for k, args in d.runs]
            lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# -- elaboration -----------------------------------------------------------------------

@dataclass
class Entity:
    kind: str
    value: Any
    decl: Any


class Environment:
    """Declared names in order, each elaborated to a checked value."""

    def __init__(self, source: str = ""):
        self.entities: dict = {}
        self.source = source

    def __contains__(self, name: str) -> bool:
        return name in self.entities

    def get(self, ref, kinds: tuple = ()) -> Entity:
        name = ref.name if isinstance(ref, Ref) else ref
        span = ref.span if isinstance(ref, Ref) else None
        ent = self.entities.get(name)
        if ent is None:
            raise UnresolvedReference(f"{name!r} is not declared", span, "declare it before use", self.source)
        if kinds and ent.kind not in kinds:
            raise UnresolvedReference(f"{name!r} is a {ent.kind}, expected {' or '.join(kinds)}", span,
                                      "check the declaration kind", self.source)
        return ent

    def category(self, ref):
        ent = self.get(ref, ("category", "poset", "lattice"))
        return ent.value.carrier if ent.kind == "lattice" else ent.value

    def names(self, kind: Optional[str] = None) -> list:
        return [n for n, e in self.entities.items() if kind is None or e.kind == kind]


def _dup_check(refs, what, env_source=""):
    seen = {}
    for r in refs:
        if r.name in seen:
            raise DuplicateName(f"{what} {r.name!r} declared twice (first at {seen[r.name]})", r.span,
                                "rename one of them", env_source)
        seen[r.name] = r.span


def _wrap(exc: Exception, span, source, hint="") -> DslCheckError:
    return DslCheckError(f"{type(exc).__name__}: {exc}", span, hint or "fix the table at this declaration", source)


def elaborate(doc: Document, source: str = "") -> Environment:
    """Resolve names and build the checked values, in declaration order."""
    env = Environment(source)
    for d in doc.decls:
        if d.name.name in env.entities:
            first = env.entities[d.name.name].decl.name.span
            raise DuplicateName(f"{d.name.name!r} is already declared at {first}", d.name.span,
                                "declaration names must be unique", source)
        try:
            kind, value = _ELAB[type(d)](d, env)
        except DslError as exc:
            raise exc if exc.source else exc.located(source)
        env.entities[d.name.name] = Entity(kind, value, d)
    return env


def load(text: str, source: str = "") -> Environment:
    return elaborate(parse(text, source), source)


def _elab_category(d: CategoryDecl, env: Environment):
    from .fincore import FinCat

    src = env.source
    objs = [r for it in d.items if isinstance(it, ObjectItem) for r in it.names]
    _dup_check(objs, "object", src)
    obj_names = [r.name for r in objs]
    arrows = [it for it in d.items if isinstance(it, ArrowItem)]
    _dup_check([a.name for a in arrows], "arrow", src)
    ids = {o: f"id_{o}" for o in obj_names}
    for a in arrows:
        if a.name.name in obj_names or a.name.name in ids.values():
            raise DuplicateName(f"arrow {a.name.name!r} clashes with an object or identity name", a.name.span,
                                "arrow names must differ from objects and id_x", src)
        for end in (a.src, a.tgt):
            if end.name not in obj_names:
                raise UnresolvedReference(f"object {end.name!r} is not declared in {d.name.name}", end.span,
                                          f"add `object {end.name};`", src)
    src_of = {a.name.name: a.src.name for a in arrows}
    tgt_of = {a.name.name: a.tgt.name for a in arrows}
    for o in obj_names:
        src_of[ids[o]] = tgt_of[ids[o]] = o
    table = {}
    for a in list(src_of):
        table[(ids[tgt_of[a]], a)] = a
        table[(a, ids[src_of[a]])] = a
    given = {}
    for it in d.items:
        if isinstance(it, ComposeItem):
            for r in (it.g, it.f, it.result):
                if r.name not in src_of:
                    raise UnresolvedReference(f"arrow {r.name!r} is not declared in {d.name.name}", r.span,
                                              f"add `arrow {r.name}: x -> y;`", src)
            if tgt_of[it.f.name] != src_of[it.g.name]:
                raise DslCheckError(f"{it.g.name} . {it.f.name} is not composable", it.g.span,
                                    "the target of f must be the source of g", src)
            key = (it.g.name, it.f.name)
            if key in given:
                raise DuplicateName(f"composite {it.g.name} . {it.f.name} given twice", it.g.span,
                                    "keep one compose line per pair", src)
            given[key] = it.result.name
            table[key] = it.result.name
    for f in arrows:
        for g in arrows:
            if f.tgt.name == g.src.name and (g.name.name, f.name.name) not in table:
                raise TableIncomplete(f"no composite for {g.name.name} . {f.name.name}", d.name.span,
                                      f"add `compose {g.name.name} . {f.name.name} = ?;`", src)
    all_arrows = [(ids[o], o, o) for o in obj_names] + [(a.name.name, a.src.name, a.tgt.name) for a in arrows]
    try:
        return "category", FinCat(obj_names, all_arrows, ids, table, name=d.name.name)
    except FinCatError as exc:
        raise _wrap(exc, d.name.span, src, "the composition table breaks a category law")


def _elab_poset(d: PosetDecl, env: Environment):
    from .fincore import lattice_from_poset, poset

    elems, rel = [], []
    for chain in d.chains:
        for r in chain:
            if r.name not in elems:
                elems.append(r.name)
        rel += [(chain[i].name, chain[i + 1].name) for i in range(len(chain) - 1)]
    try:
        P = poset(elems, rel, name=d.name.name)
        if d.lattice:
            return "lattice", lattice_from_poset(P)
    except FinCatError as exc:
        raise _wrap(exc, d.name.span, env.source, "a lattice needs a bottom and all binary joins" if d.lattice
                    else "the order has a cycle")
    return "poset", P


def _resolve_arrow(C, r: ArrowRef, env: Environment):
    from .fincore import le_arrow

    if len(r.parts) == 2:
        a, b = (p.name for p in r.parts)
        name = le_arrow(a, b)
        if name not in C.src:
            raise UnresolvedReference(f"no arrow {a} < {b} in {C.name}", r.span, "the pair must be related", env.source)
        return name
    name = r.parts[0].name
    if name not in C.src:
        raise UnresolvedReference(f"arrow {name!r} is not in {C.name}", r.span, "check the arrow name", env.source)
    return name


def _elab_functor(d: FunctorDecl, env: Environment):
    from .fincore import FinFunctor

    A, B = env.category(d.dom), env.category(d.cod)
    om, am = {}, {}
    _dup_check([a for a, _ in d.entries], "entry for", env.source)
    for a, b in d.entries:
        if a.name in A.objects:
            if b.name not in B.objects:
                raise UnresolvedReference(f"object {b.name!r} is not in {B.name}", b.span, "map objects to objects", env.source)
            om[a.name] = b.name
        elif a.name in A.src:
            if b.name not in B.src:
                raise UnresolvedReference(f"arrow {b.name!r} is not in {B.name}", b.span, "map arrows to arrows", env.source)
            am[a.name] = b.name
        else:
            raise UnresolvedReference(f"{a.name!r} is neither an object nor an arrow of {A.name}", a.span,
                                      "check the domain", env.source)
    for x in A.objects:
        if x not in om:
            raise TableIncomplete(f"object {x!r} of {A.name} has no image", d.name.span, f"add `{x} -> ?;`", env.source)
    for f in A.arrows:
        if f in am:
            continue
        if A.is_identity(f):
            am[f] = B.identity[om[A.src[f]]]
            continue
        cands = B.hom(om[A.src[f]], om[A.tgt[f]])
        if len(cands) == 1:
            am[f] = cands[0]
            continue
        derived = _derive_arrow(A, B, f, am)
        if derived is None:
            raise TableIncomplete(f"arrow {f!r} of {A.name} has no forced image", d.name.span,
                                  f"add `{f} -> ?;`", env.source)
        am[f] = derived
    try:
        return "functor", FinFunctor(A, B, om, am, name=d.name.name)
    except FinCatError as exc:
        raise _wrap(exc, d.name.span, env.source, "the map does not preserve composition")


def _derive_arrow(A, B, f, am):
    for (g, h), c in A.table.items():
        if c == f and not A.is_identity(g) and not A.is_identity(h) and g in am and h in am:
            return B.table[(am[g], am[h])]
    return None


def _close_actions(shape, on_obj, given: dict):
    """Fill actions of composites and of forced maps; return the missing arrows."""
    from .finset import SetMap

    acts = dict(given)
    for f in shape.arrows:
        if shape.is_identity(f):
            acts.setdefault(f, SetMap.identity(on_obj[shape.src[f]]))
    changed = True
    while changed:
        changed = False
        for (g, h), c in shape.table.items():
            if c not in acts and g in acts and h in acts:
                acts[c] = acts[h].then(acts[g])
                changed = True
    missing = []
    for f in shape.arrows:
        if f in acts:
            continue
        dom, cod = on_obj[shape.src[f]], on_obj[shape.tgt[f]]
        if len(dom) == 0 or len(cod) == 1:
            acts[f] = SetMap(dom, cod, {x: cod.elements[0] for x in dom}, check=False)
        else:
            missing.append(f)
    return acts, missing


def _values(items, keyfn, objects, env, what):
    from .finset import FinSet

    vals = {}
    for it in items:
        if isinstance(it, AtItem):
            key = keyfn(it.where)
            if key in vals:
                raise DuplicateName(f"value at {key!r} given twice", it.where[0].span, "keep one `at` line", env.source)
            names = [e.name for e in it.elements]
            if len(set(names)) != len(names):
                raise DuplicateName(f"repeated element in the value at {key!r}", it.where[0].span,
                                    "list each element once", env.source)
            vals[key] = FinSet(names)
    for o in objects:
        if o not in vals:
            raise TableIncomplete(f"no value at {o!r} for {what}", None, f"add `at {o} = {{...}};`", env.source)
    return vals


def _mapping(it: ActItem, dom, cod, env):
    from .finset import SetMap

    table = {}
    for a, b in it.mapping:
        if a.name not in dom:
            raise UnresolvedReference(f"{a.name!r} is not in the domain {list(dom)}", a.span, "map only listed elements", env.source)
        if b.name not in cod:
            raise UnresolvedReference(f"{b.name!r} is not in the codomain {list(cod)}", b.span, "map into listed elements", env.source)
        table[a.name] = b.name
    for x in dom:
        if x not in table:
            raise TableIncomplete(f"action omits {x!r}", it.arrows[0].span, f"add `{x} -> ?`", env.source)
    return SetMap(dom, cod, table)


def _elab_presheaf(d: PresheafDecl, env: Environment):
    from .fincore import op_cat
    from .presheaf import SetFunctor

    A = env.category(d.base)
    shape = A if d.covariant else op_cat(A)
    for it in d.items:
        if isinstance(it, AtItem) and it.where[0].name not in A.objects:
            raise UnresolvedReference(f"object {it.where[0].name!r} is not in {A.name}", it.where[0].span,
                                      "values are indexed by objects", env.source)
    vals = _values(d.items, lambda w: w[0].name, A.objects, env, d.name.name)
    given = {}
    for it in d.items:
        if isinstance(it, ActItem):
            f = _resolve_arrow(A, it.arrows[0], env)
            if f in given:
                raise DuplicateName(f"action of {f!r} given twice", it.arrows[0].span, "keep one `act` line", env.source)
            s, t = shape.src[f], shape.tgt[f]
            given[f] = _mapping(it, vals[s], vals[t], env)
    acts, missing = _close_actions(shape, vals, given)
    if missing:
        f = missing[0]
        raise TableIncomplete(f"action of {f!r} is not determined", d.name.span, f"add `act {f} = {{...}};`", env.source)
    try:
        return ("copresheaf" if d.covariant else "presheaf"), SetFunctor(shape, vals, acts)
    except FinCatError as exc:
        raise _wrap(exc, d.name.span, env.source, "actions must respect composition")


def _elab_profunctor(d: ProfunctorDecl, env: Environment):
    from .prof import Profunctor, companion, compose_coend, conjoint, hom_prof, prof_shape
    from .presheaf import SetFunctor

    A, B = env.category(d.src), env.category(d.dst)
    if d.expr is not None:
        op, *args = d.expr
        try:
            if op.name == "hom":
                P = hom_prof(env.category(args[0]))
            elif op.name in ("companion", "conjoint"):
                f = env.get(args[0], ("functor",)).value
                P = companion(f) if op.name == "companion" else conjoint(f)
            else:
                Q = env.get(args[0], ("profunctor",)).value
                R = env.get(args[1], ("profunctor",)).value
                P = compose_coend(Q, R)
        except DslError:
            raise
        except FinCatError as exc:
            raise _wrap(exc, op.span, env.source, "the operands do not compose")
        if P.src != A or P.dst != B:
            raise DslCheckError(f"expression gives {P.src.name} -|-> {P.dst.name}", d.name.span,
                                f"declare it as {P.src.name} -|-> {P.dst.name}", env.source)
        return "profunctor", P
    shape = prof_shape(A, B)
    for it in d.items:
        if isinstance(it, AtItem):
            b, a = it.where
            if b.name not in B.objects or a.name not in A.objects:
                bad = b if b.name not in B.objects else a
                raise UnresolvedReference(f"{bad.name!r} is not an object of the right category", bad.span,
                                          f"write `at b, a` with b in {B.name} and a in {A.name}", env.source)
    vals = _values(d.items, lambda w: (w[0].name, w[1].name), shape.objects, env, d.name.name)
    given = {}
    for it in d.items:
        if isinstance(it, ActItem):
            u = (_resolve_arrow(B, it.arrows[0], env), _resolve_arrow(A, it.arrows[1], env))
            given[u] = _mapping(it, vals[shape.src[u]], vals[shape.tgt[u]], env)
    acts, missing = _close_actions(shape, vals, given)
    if missing:
        g, k = missing[0]
        raise TableIncomplete(f"action of ({g}, {k}) is not determined", d.name.span,
                              f"add `act {g}, {k} = {{...}};`", env.source)
    try:
        return "profunctor", Profunctor(A, B, SetFunctor(shape, vals, acts))
    except FinCatError as exc:
        raise _wrap(exc, d.name.span, env.source, "actions must respect composition")


def _elab_adjunction(d: AdjunctionDecl, env: Environment):
    from .fincore import CatNat, check_adjunction, identity_functor

    f = env.get(d.left, ("functor",)).value
    g = env.get(d.right, ("functor",)).value
    A, B = f.dom, f.cod
    if g.dom != B or g.cod != A:
        raise DslCheckError(f"{d.right.name} does not go back from {B.name} to {A.name}", d.right.span,
                            "the right adjoint must reverse the left one", env.source)
    comps = {"unit": {}, "counit": {}}
    for which, x, arrow in d.items:
        C = A if which.name == "unit" else B
        if x.name not in C.objects:
            raise UnresolvedReference(f"object {x.name!r} is not in {C.name}", x.span, "components are indexed by objects", env.source)
        comps[which.name][x.name] = _resolve_arrow(C, arrow, env)
    for which, C, src_of, tgt_of in (("unit", A, lambda x: x, lambda x: g(f(x))), ("counit", B, lambda y: f(g(y)), lambda y: y)):
        for x in C.objects:
            if x not in comps[which]:
                cands = C.hom(src_of(x), tgt_of(x))
                if len(cands) != 1:
                    raise TableIncomplete(f"{which} component at {x!r} is not forced", d.name.span,
                                          f"add `{which} {x} = ?;`", env.source)
                comps[which][x] = cands[0]
    try:
        unit = CatNat(identity_functor(A), f.then(g), comps["unit"])
        counit = CatNat(g.then(f), identity_functor(B), comps["counit"])
        return "adjunction", check_adjunction(f, g, unit, counit)
    except FinCatError as exc:
        raise _wrap(exc, d.name.span, env.source, "the components do not satisfy the triangle identities")


def _elab_suite(d: SuiteDecl, env: Environment):
    for kind, args in d.runs:
        for a in args:
            env.get(a)
    return "suite", [(k.name, tuple(a.name for a in args)) for k, args in d.runs]


_ELAB = {
    CategoryDecl: _elab_category,
    PosetDecl: _elab_poset,
    FunctorDecl: _elab_functor,
    PresheafDecl: _elab_presheaf,
    ProfunctorDecl: _elab_profunctor,
    AdjunctionDecl: _elab_adjunction,
    SuiteDecl: _elab_suite,
}
