import random

import pytest
from hypothesis import given, settings

from conftest import terms
from weihsim.axioms import random_term
from weihsim.game import DUPLICATOR, SPOILER
from weihsim.simulation import (Mode, MoveLabel, PointedModeUnsupportedTerm,
                                PositionBudgetExceeded, build_arena, is_accepting,
                                make_position, moves, position_controller,
                                position_hash, render_position)
from weihsim.term import ONE, ZERO, letters, parse, size, subobjects

P = parse


def pos(xs, rhs, gamma=()):
    return make_position(gamma, [P(x) for x in xs], P(rhs))


def pointed(xs, rhs):
    return pos(xs, rhs, None)


def targets(p, label):
    return {q for lab, q in moves(p) if lab is label}


def test_controller():
    assert position_controller(pos(["a&b"], "c")) is SPOILER
    assert position_controller(pos(["1"], "c|d")) is DUPLICATOR
    assert position_controller(pos(["a"], "b")) is DUPLICATOR
    assert position_controller(pos(["a"], "b&c")) is SPOILER


def test_fork():
    p = pointed(["a^&b^"], "(a&b)^")
    assert targets(p, MoveLabel.FORK) == {pointed(["a^", "b^"], "(a&b)^")}


def test_fill():
    p = pointed(["a^*a", "b^*b"], "(a&b)^*a")
    assert targets(p, MoveLabel.FILL) == {pointed(["a^*1", "b^*b"], "(a&b)^*1")}


def test_explore_iteration():
    p = pointed(["a^", "b^"], "(a&b)^")
    got = targets(p, MoveLabel.EXPLORE)
    assert pointed(["1", "b^"], "(a&b)^") in got
    assert pointed(["a^*a", "b^"], "(a&b)^") in got


def test_finished_position_has_no_moves():
    assert moves(pos(["1"], "1")) == []


def test_junk_needs_seen_letter_in_extended_mode():
    assert targets(pos(["1"], "a"), MoveLabel.JUNK) == set()
    assert targets(pos(["1"], "a", ("a",)), MoveLabel.JUNK) == {pos(["1"], "1", ("a",))}
    assert targets(pointed(["1"], "a"), MoveLabel.JUNK) == {pointed(["1"], "1")}


def test_fill_records_letter():
    assert targets(pos(["a"], "a"), MoveLabel.FILL) == {pos(["1"], "1", ("a",))}


def test_alea():
    p = pos(["a"], "b&c")
    assert targets(p, MoveLabel.ALEA) == {pos(["a"], "b"), pos(["a"], "c")}
    assert targets(pos(["a|b"], "b&c"), MoveLabel.ALEA) == set()


def test_accepting():
    assert is_accepting(pos(["0"], "a"))
    assert is_accepting(pos(["1"], "1"))
    assert not is_accepting(pos(["a"], "a"))
    # a stuck universal right-hand side wins for Duplicator
    assert is_accepting(pos(["a"], "T"))


def test_trivial_arena():
    g = build_arena(ONE, ONE)
    assert len(g.arena) == 1


def test_fig_positions_are_reachable():
    g = build_arena(P("a^&b^"), P("(a&b)^"), Mode.POINTED)
    expected = [
        (["a^&b^"], "(a&b)^"), (["a^", "b^"], "(a&b)^"), (["1", "b^"], "(a&b)^"),
        (["a^*a", "b^"], "(a&b)^"), (["1"], "(a&b)^"), (["1", "b^*b"], "(a&b)^"),
        (["a^*a", "b^*b"], "(a&b)^"), (["1"], "1"), (["a^*a", "b^*b"], "(a&b)^*(a&b)"),
        (["a^*a", "b^*b"], "(a&b)^*a"), (["a^*a", "b^*b"], "(a&b)^*b"),
    ]
    for xs, rhs in expected:
        assert pointed(xs, rhs) in g.index


def test_pointed_rejects_top_and_zero():
    with pytest.raises(PointedModeUnsupportedTerm):
        build_arena(P("a|T"), P("a"), Mode.POINTED)
    with pytest.raises(PointedModeUnsupportedTerm):
        build_arena(P("a"), ZERO, Mode.POINTED)


def test_budget():
    with pytest.raises(PositionBudgetExceeded):
        build_arena(P("a^&b^"), P("(a&b)^"), Mode.POINTED, max_positions=10)


def test_render_and_hash():
    p = pos(["a", "b|c"], "a*b", ("a",))
    assert render_position(p) == "G={a} | X={a,b|c} |- a*b"
    assert render_position(pointed(["a"], "1"), unicode=True) == "X={a} ⊢ 1"
    assert position_hash(p) == position_hash(pos(["b|c", "a"], "a*b", ("a",)))


def _check_structure(e, f, mode):
    g = build_arena(e, f, mode)
    sub_e, sub_f = set(subobjects(e)), set(subobjects(f))
    sigma = letters(e) | letters(f)
    for v, p in enumerate(g.positions):
        assert set(p.xs) <= sub_e
        assert p.rhs in sub_f
        if p.gamma is not None:
            assert set(p.gamma) <= sigma
            for w in g.arena.succ[v]:
                assert set(p.gamma) <= set(g.positions[w].gamma)
    return g


@given(terms(6), terms(6))
@settings(max_examples=150, deadline=None)
def test_structural_containment_and_gamma_monotonicity(e, f):
    _check_structure(e, f, Mode.EXTENDED)


@given(terms(6, pointed=True), terms(6, pointed=True))
@settings(max_examples=150, deadline=None)
def test_structural_containment_pointed(e, f):
    _check_structure(e, f, Mode.POINTED)


@given(terms(6, pointed=True, meet_free=True), terms(6, pointed=True, meet_free=True))
@settings(max_examples=150, deadline=None)
def test_fragment_collapse(e, f):
    g = build_arena(e, f, Mode.POINTED)
    assert all(len(p.xs) == 1 for p in g.positions)
    assert len(g.arena) <= len(subobjects(e)) * len(subobjects(f))


def test_general_bound_on_random_pairs():
    rng = random.Random(5)
    for _ in range(200):
        e, f = random_term(rng, 6), random_term(rng, 6)
        g = build_arena(e, f, Mode.EXTENDED)
        sigma = len(letters(e) | letters(f))
        assert len(g.arena) <= 2 ** (1 + 2 * size(e) + sigma) * size(f)


def test_determinism():
    e, f = P("a^&b^"), P("(a&b)^")
    g1, g2 = build_arena(e, f, Mode.POINTED), build_arena(e, f, Mode.POINTED)
    assert g1.positions == g2.positions
    assert g1.arena == g2.arena
