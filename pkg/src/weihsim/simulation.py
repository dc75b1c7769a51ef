"""The simulation game between Spoiler and Duplicator.

A position ``(gamma, xs, rhs)`` records the letters already answered by a
genuine oracle call (``gamma``, absent in pointed mode), the set ``xs`` of
left-hand terms that still have to be simulated, and the right-hand term
``rhs`` doing the simulating.
"""
from __future__ import annotations

import enum
import hashlib
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .game import DUPLICATOR, SPOILER, Arena, Player
from .term import (ONE, Term, contains_top_or_zero, letters, polarity,
                   successors, to_str)

DEFAULT_MAX_POSITIONS = 2 ** 22


class Mode(enum.Enum):
    EXTENDED = "extended"
    POINTED = "pointed"


class MoveLabel(enum.Enum):
    EXPLORE = "explore"
    FORK = "fork"
    ALEA = "alea"
    CHOOSE = "choose"
    JUNK = "junk"
    FILL = "fill"


class PositionBudgetExceeded(RuntimeError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"more than {limit} reachable positions (stopped at {count})")
        self.count = count
        self.limit = limit

    def __reduce__(self):
        return (type(self), (self.count, self.limit))


class PointedModeUnsupportedTerm(ValueError):
    pass


class Position(NamedTuple):
    gamma: tuple[str, ...] | None  # None in pointed mode
    xs: tuple[Term, ...]
    rhs: Term


def make_position(gamma, xs, rhs: Term) -> Position:
    """Canonical position: gamma and xs sorted and deduplicated."""
    g = None if gamma is None else tuple(sorted(set(gamma)))
    return Position(g, tuple(sorted(set(xs))), rhs)


def initial_position(lhs: Term, rhs: Term, mode: Mode) -> Position:
    return Position(() if mode is Mode.EXTENDED else None, (lhs,), rhs)


def position_controller(p: Position) -> Player:
    for t in p.xs:
        if t is not ONE and not polarity(t).is_oracle:
            return SPOILER
    pol = polarity(p.rhs)
    if pol.kind == "forall":
        return SPOILER
    return DUPLICATOR


def _alea_enabled(p: Position) -> bool:
    if polarity(p.rhs).kind != "forall":
        return False
    return all(t is ONE or polarity(t).is_oracle for t in p.xs)


def moves(p: Position) -> list[tuple[MoveLabel, Position]]:
    """Every move out of ``p``, one per distinct target, in canonical order.

    The mode is read off ``p``: pointed positions have no gamma and may
    junk any letter.
    """
    out: dict[Position, MoveLabel] = {}
    gamma, xs, rhs = p
    pointed = gamma is None

    def add(label, g, new_xs, new_rhs):
        q = make_position(g, new_xs, new_rhs)
        out.setdefault(q, label)

    # Spoiler decomposes the left-hand side
    for t in xs:
        pol = polarity(t)
        if pol.kind == "exists":
            rest = [u for u in xs if u is not t]
            for t2 in successors(t):
                add(MoveLabel.EXPLORE, gamma, rest + [t2], rhs)
        elif pol.kind == "forall":
            rest = [u for u in xs if u is not t]
            add(MoveLabel.FORK, gamma, rest + list(successors(t)), rhs)

    rpol = polarity(rhs)
    if _alea_enabled(p):
        for r in successors(rhs):
            add(MoveLabel.ALEA, gamma, xs, r)

    if position_controller(p) is DUPLICATOR:
        if rpol.kind == "exists":
            for r in successors(rhs):
                add(MoveLabel.CHOOSE, gamma, xs, r)
        elif rpol.is_oracle:
            a = rpol.letter
            (r,) = successors(rhs)
            if pointed or a in gamma:
                add(MoveLabel.JUNK, gamma, xs, r)
            g2 = None if pointed else gamma + (a,)
            for t in xs:
                if polarity(t) == rpol:
                    rest = [u for u in xs if u is not t]
                    (t2,) = successors(t)
                    add(MoveLabel.FILL, g2, rest + [t2], r)
    return [(label, q) for q, label in out.items()]


def is_accepting(p: Position) -> bool:
    if position_controller(p) is SPOILER and not (_alea_enabled(p) and successors(p.rhs)):
        return True
    # repair: a finished simulation (rhs = 1 with 1 among the simulated terms)
    return p.rhs is ONE and ONE in p.xs


def render_position(p: Position, unicode: bool = False) -> str:
    xs = ",".join(to_str(t, unicode) for t in p.xs)
    turnstile = "⊢" if unicode else "|-"
    body = f"X={{{xs}}} {turnstile} {to_str(p.rhs, unicode)}"
    if p.gamma is None:
        return body
    g = "Γ" if unicode else "G"
    return f"{g}={{{','.join(p.gamma)}}} | {body}"


def position_hash(p: Position) -> str:
    """Stable identifier of a position across processes."""
    return hashlib.sha1(render_position(p).encode()).hexdigest()[:16]


@dataclass
class SimGame:
    """A built arena together with the positions its nodes stand for."""

    lhs: Term
    rhs: Term
    mode: Mode
    arena: Arena
    positions: list[Position]
    index: dict[Position, int]
    labels: dict[tuple[int, int], MoveLabel]
    initial: int = 0

    def position(self, v: int) -> Position:
        return self.positions[v]


def build_arena(lhs: Term, rhs: Term, mode: Mode = Mode.EXTENDED,
                max_positions: int = DEFAULT_MAX_POSITIONS) -> SimGame:
    """Breadth-first closure of the initial position under ``moves``."""
    if mode is Mode.POINTED and (contains_top_or_zero(lhs) or contains_top_or_zero(rhs)):
        raise PointedModeUnsupportedTerm("pointed mode does not support T or 0")
    start = initial_position(lhs, rhs, mode)
    positions = [start]
    index = {start: 0}
    succ: list[tuple[int, ...]] = []
    labels: dict[tuple[int, int], MoveLabel] = {}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        ws = []
        for label, q in moves(positions[v]):
            w = index.get(q)
            if w is None:
                w = len(positions)
                if w >= max_positions:
                    raise PositionBudgetExceeded(w + 1, max_positions)
                index[q] = w
                positions.append(q)
                queue.append(w)
            ws.append(w)
            labels[(v, w)] = label
        succ.append(tuple(ws))
    owner = tuple(position_controller(p) for p in positions)
    accepting = frozenset(v for v, p in enumerate(positions) if is_accepting(p))
    arena = Arena(tuple(succ), owner, accepting)
    return SimGame(lhs, rhs, mode, arena, positions, index, labels)


def alphabet_of(lhs: Term, rhs: Term) -> frozenset[str]:
    return letters(lhs) | letters(rhs)
