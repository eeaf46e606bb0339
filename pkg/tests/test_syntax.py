import pytest
from hypothesis import given, settings, strategies as st

from polarframes.syntax import (
    And, Atom, Bot, BoxDown, BoxUp, Conj, DiaDown, DiaUp, Disj, Fuse, LImp, LSpoon, MBot, MTop,
    Neg, Odot, Or, PAtom, ParseError, QAtom, RImp, RSpoon, SortError, Top, depth, expand_derived,
    parse_ml2, parse_sequent, parse_sub, print_formula,
)

p0, p1, p2 = Atom(0), Atom(1), Atom(2)


@pytest.mark.parametrize("text, tree", [
    ("p0 & p1", And(p0, p1)),
    ("p0 * p1 -> p2", RImp(Fuse(p0, p1), p2)),
    ("p0 -> p1 -> p2", RImp(p0, RImp(p1, p2))),
    ("p0 <- p1 <- p2", LImp(LImp(p0, p1), p2)),
    ("p0 * p1 * p2", Fuse(Fuse(p0, p1), p2)),
    ("p0 | p1 & p2", Or(p0, And(p1, p2))),
    ("(p0 | p1) & top", And(Or(p0, p1), Top())),
    ("bot", Bot()),
    ("p12", Atom(12)),
])
def test_parse_sub(text, tree):
    assert parse_sub(text) == tree


@pytest.mark.parametrize("tree, text", [
    (And(p0, p1), "p0 & p1"),
    (Fuse(Fuse(p0, p1), p2), "p0 * p1 * p2"),
    (Fuse(p0, Fuse(p1, p2)), "p0 * (p1 * p2)"),
    (RImp(RImp(p0, p1), p2), "(p0 -> p1) -> p2"),
    (LImp(p0, LImp(p1, p2)), "p0 <- (p1 <- p2)"),
])
def test_print_sub(tree, text):
    assert print_formula(tree) == text


@pytest.mark.parametrize("text", ["p0 &", "(p0 | p1", "p0 )", "p0 $ p1", "q0", "", "p0 p1", "-> p1"])
def test_parse_sub_errors(text):
    with pytest.raises(ParseError):
        parse_sub(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_sub("p0 & $")
    assert exc.value.position == 5


def test_mixed_residuals_need_parentheses():
    with pytest.raises(ParseError):
        parse_sub("p0 -> p1 <- p2")
    assert parse_sub("(p0 -> p1) <- p2") == LImp(RImp(p0, p1), p2)


def test_parse_ml2_examples():
    assert parse_ml2("[d]<u>P0") == (BoxDown(DiaUp(PAtom(0))), 1)
    f, s = parse_ml2("[d]Q0 * [d]Q1")
    assert f == Odot(BoxDown(QAtom(0)), BoxDown(QAtom(1))) and s == 1
    assert parse_ml2("~Q1 | top@2")[1] == 2
    assert parse_ml2("P1 -> P0") == (RSpoon(PAtom(1), PAtom(0)), 1)


@pytest.mark.parametrize("text", ["[u][u]P0", "[d]P0", "P0 & Q0", "<d>P1", "Q0 * Q1", "~P0 -> Q0"])
def test_parse_ml2_sort_errors(text):
    with pytest.raises(SortError):
        parse_ml2(text)


def test_sort_error_on_construction():
    with pytest.raises(SortError):
        BoxUp(BoxUp(PAtom(0)))


def test_derived_modalities_expand_with_mixed_negations():
    e = expand_derived(DiaUp(PAtom(0)))
    assert e == Neg(BoxUp(Neg(PAtom(0))))
    assert e.child.sort == 2 and e.child.child.sort == 1
    assert expand_derived(DiaDown(QAtom(0))) == Neg(BoxDown(Neg(QAtom(0))))


def test_sequent():
    assert parse_sequent("p0 * p1 |- p1") == (Fuse(p0, p1), p1)
    with pytest.raises(ParseError):
        parse_sequent("p0 |- p1 |- p2")


def test_depth():
    assert depth(p0) == 0
    assert depth(parse_sub("(p0 | p1) * p0")) == 2


# -- round trips

_leaf = st.one_of(st.integers(0, 12).map(Atom), st.just(Top()), st.just(Bot()))
_sub_ctors = (And, Or, Fuse, RImp, LImp)


def _binary(children):
    return st.tuples(st.sampled_from(_sub_ctors), children, children).map(lambda t: t[0](t[1], t[2]))


sub_formulas = st.recursive(_leaf, _binary, max_leaves=40).filter(lambda f: depth(f) <= 8)


@settings(max_examples=300, deadline=None)
@given(sub_formulas)
def test_sub_round_trip(f):
    text = print_formula(f)
    assert parse_sub(text) == f
    assert print_formula(parse_sub(text)) == text


_leaf1 = st.one_of(st.integers(0, 5).map(PAtom), st.just(MTop(1)), st.just(MBot(1)))
_leaf2 = st.one_of(st.integers(0, 5).map(QAtom), st.just(MTop(2)), st.just(MBot(2)))


def _pair(ctors, child):
    return st.tuples(st.sampled_from(ctors), child, child).map(lambda t: t[0](t[1], t[2]))


sort1 = st.deferred(lambda: st.one_of(
    _leaf1, _leaf1, sort1.map(Neg), _pair((Conj, Disj, Odot, RSpoon, LSpoon), sort1),
    sort2.map(BoxDown), sort2.map(DiaDown)))
sort2 = st.deferred(lambda: st.one_of(
    _leaf2, _leaf2, sort2.map(Neg), _pair((Conj, Disj), sort2), sort1.map(BoxUp), sort1.map(DiaUp)))


@settings(max_examples=300, deadline=None)
@given(st.one_of(sort1, sort2))
def test_ml2_round_trip(a):
    text = print_formula(a)
    b, s = parse_ml2(text)
    assert b == a and s == a.sort
