import pickle
import random

import pytest
from hypothesis import given, settings

from conftest import terms
from weihsim.axioms import random_term
from weihsim.term import (EXISTS, FORALL, ONE, TOP, ZERO, ParseError, UnknownLetter,
                          comp, diamond, join, letter, letter_occurrences, letters,
                          meet, oracle, parse, polarity, size, subobjects, substitute,
                          successors, to_str)

a, b, c = letter("a"), letter("b"), letter("c")


def test_hash_consing():
    assert join(a, b) is join(letter("a"), letter("b"))
    assert parse("a|b") is join(a, b)
    assert comp(a, b) != comp(b, a)


def test_sizes():
    assert size(a) == 1
    assert size(parse("b*a")) == 3
    assert size(parse("a^&b^")) == 5
    assert size(parse("(a&b)^")) == 4


def test_parse_precedence_and_associativity():
    assert parse("a|b&c*d^") is join(a, meet(b, comp(c, diamond(letter("d")))))
    assert parse("a*b*c") is comp(comp(a, b), c)
    assert parse("a|b|c") is join(join(a, b), c)
    assert parse("a^^") is diamond(diamond(a))
    assert parse("a ⊔ b ⋆ c⋄ ⊓ ⊤") is join(a, meet(comp(b, diamond(c)), TOP))
    assert parse("0|1") is join(ZERO, ONE)


def test_printing_minimal_parentheses():
    assert to_str(parse("(b*a)|(c*a)")) == "b*a|c*a"
    assert to_str(parse("a*(b*c)")) == "a*(b*c)"
    assert to_str(parse("(a&b)^")) == "(a&b)^"
    assert to_str(parse("a^&b^"), unicode=True) == "a⋄ ⊓ b⋄"


@pytest.mark.parametrize("text", ["a <=", "", "a|", "(a", "a)", "A", "a $ b", "*a"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("a | (b & )")
    assert info.value.position == 9


def test_unknown_letter():
    with pytest.raises(UnknownLetter):
        parse("a*d", alphabet="abc")
    assert parse("a*b", alphabet="ab") is comp(a, b)


def test_round_trip_random_terms():
    rng = random.Random(7)
    for _ in range(10_000):
        t = random_term(rng, 12, ("a", "b", "c", "x1", "nx1"))
        assert parse(to_str(t)) is t
        assert parse(to_str(t, unicode=True)) is t


@given(terms())
def test_round_trip_law(t):
    assert parse(to_str(t)) is t


def test_pickle_reinterns():
    t = parse("(a|b)^*c")
    assert pickle.loads(pickle.dumps(t)) is t


def test_polarities():
    assert polarity(join(a, b)) == EXISTS
    assert polarity(ZERO) == EXISTS
    assert polarity(ONE) == EXISTS
    assert polarity(diamond(a)) == EXISTS
    assert polarity(meet(a, b)) == FORALL
    assert polarity(TOP) == FORALL
    assert polarity(a) == oracle("a")
    assert polarity(comp(meet(a, b), c)) == oracle("c")
    assert polarity(comp(c, meet(a, b))) == FORALL


def test_transitions():
    assert set(successors(join(a, b))) == {a, b}
    assert set(successors(meet(a, b))) == {a, b}
    assert successors(a) == (ONE,)
    assert successors(comp(a, ONE)) == (a,)
    assert set(successors(diamond(a))) == {ONE, comp(diamond(a), a)}
    assert set(successors(comp(c, join(a, b)))) == {comp(c, a), comp(c, b)}
    assert successors(ONE) == () and successors(ZERO) == () and successors(TOP) == ()


def test_subobjects_of_iteration():
    subs = set(subobjects(diamond(a)))
    assert subs == {diamond(a), ONE, comp(diamond(a), a), comp(diamond(a), ONE)}


@given(terms(max_leaves=10))
@settings(max_examples=300)
def test_subobject_bound(t):
    # a single letter has exactly two subobjects, so the bound is not strict
    assert len(subobjects(t)) <= 2 * size(t)


@given(terms())
def test_subobjects_closed_under_transitions(t):
    subs = set(subobjects(t))
    assert t in subs
    assert all(u in subs for s in subs for u in successors(s))


@given(terms())
def test_oracle_context_coherence(t):
    # an oracle term has exactly one successor, and composing on the left keeps it an oracle
    pol = polarity(t)
    if pol.is_oracle:
        assert len(successors(t)) == 1
        assert polarity(comp(b, t)) == pol


@given(terms())
def test_substitution_identity(t):
    assert substitute(t, {x: letter(x) for x in letters(t)}) is t


def test_letter_occurrences():
    occ = letter_occurrences(parse("a*b&a|c^"))
    assert occ == {"a": 2, "b": 1, "c": 1}
