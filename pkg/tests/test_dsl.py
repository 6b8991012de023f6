from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fincat import corpus, dsl
from fincat.fincore import is_isomorphic
from fincat.presheaf import find_iso, yoneda

CORPUS = sorted((Path(__file__).resolve().parents[1] / "corpus").glob("*.fc"))


def fails(text, exc):
    with pytest.raises(exc) as err:
        dsl.load(text, "t.fc")
    return err.value


def test_single_object_gets_an_identity():
    C = dsl.load("category One { object x; }").category("One")
    assert C.objects == ("x",) and C.arrows == ("id_x",)


def test_poset_chain_is_closed_transitively():
    P = dsl.load("poset C3 { 0 < 1 < 2 }").category("C3")
    assert len(P.arrows) == 6
    assert len(P.hom("0", "2")) == 1


def test_unknown_object_is_located():
    e = fails("category Bad { object x; arrow f: x -> y; }", dsl.UnresolvedReference)
    assert (e.span.line, e.span.col) == (1, 40)
    assert "'y'" in e.message and "object y;" in e.hint
    assert str(e).startswith("t.fc:1:40:")


def test_duplicates():
    e = fails("category A { object x; object x; }", dsl.DuplicateName)
    assert "first at 1:21" in e.message
    e = fails("category A { object x; }\ncategory A { object y; }", dsl.DuplicateName)
    assert e.span.line == 2


def test_missing_composite():
    e = fails("category P { object 0, 1; arrow f: 0 -> 1; arrow g: 1 -> 0; }", dsl.TableIncomplete)
    assert "g . f" in e.message and "compose g . f" in e.hint


def test_missing_presheaf_data():
    fails("category Two { object 0, 1; arrow u: 0 -> 1; }\npresheaf F on Two { at 0 = {a}; }", dsl.TableIncomplete)
    base = "category Two { object 0, 1; arrow u: 0 -> 1; }\n"
    fails(base + "presheaf F on Two { at 0 = {a, b}; at 1 = {c, d}; }", dsl.TableIncomplete)
    fails(base + "presheaf F on Two { at 0 = {a}; at 1 = {c, d}; act u = {c -> a}; }", dsl.TableIncomplete)


def test_forced_actions_are_filled_in():
    env = dsl.load("category Two { object 0, 1; arrow u: 0 -> 1; }\npresheaf F on Two { at 0 = {a}; at 1 = {b, c}; }")
    assert env.entities["F"].value.act("u", "c") == "a"


def test_syntax_errors():
    e = fails("category { }", dsl.DslSyntaxError)
    assert (e.span.line, e.span.col) == (1, 10)
    e = fails("category A { object x y; }", dsl.DslSyntaxError)
    assert "';'" in e.message


def test_cyclic_order_is_rejected():
    fails("poset P { 0 < 1 < 0 }", dsl.DslCheckError)


def test_lattice_needs_joins():
    fails("lattice V { a < t; b < t }", dsl.DslCheckError)


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_pretty_round_trip(path):
    text = dsl.pretty(dsl.parse(path.read_text()))
    assert dsl.pretty(dsl.parse(text)) == text
    assert dsl.load(text).names() == dsl.load(path.read_text()).names()


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_categories_match_builtins(path):
    env = dsl.load(path.read_text())
    builtins = corpus.categories()
    for name in env.names():
        if env.entities[name].kind in ("category", "poset", "lattice") and name in builtins:
            assert is_isomorphic(env.category(name), builtins[name]) is not None


def test_written_out_representable():
    env = dsl.load((CORPUS[0].parent / "presheaves.fc").read_text())
    Two = env.category("Two")
    assert find_iso(env.entities["Y1"].value, yoneda(Two, "1")) is not None


KEYWORDS = {"object", "arrow", "compose", "at", "act", "on", "hom", "id"}
names = st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True).filter(lambda s: s not in KEYWORDS)


@settings(max_examples=50, deadline=None)
@given(st.lists(names, min_size=1, max_size=4, unique=True))
def test_chain_posets_round_trip(elems):
    text = f"poset P {{ {' < '.join(elems)} }}"
    env = dsl.load(dsl.pretty(dsl.parse(text)))
    P = env.category("P")
    n = len(elems)
    assert len(P.arrows) == n * (n + 1) // 2
