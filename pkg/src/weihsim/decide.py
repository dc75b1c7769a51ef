"""Deciding inequations ``lhs <= rhs`` by solving their simulation game."""
from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .game import (DUPLICATOR, Player, PositionalStrategy, certificate_problems,
                   solve)
from .simulation import (DEFAULT_MAX_POSITIONS, Mode, PointedModeUnsupportedTerm,
                         SimGame, build_arena)
from .term import Term, contains_top_or_zero, parse, to_str


class CertificateError(RuntimeError):
    """The solver produced a strategy the independent checker rejects."""


@dataclass(frozen=True)
class Query:
    lhs: Term
    rhs: Term
    mode: Mode = Mode.EXTENDED

    def __post_init__(self):
        if self.mode is Mode.POINTED and (contains_top_or_zero(self.lhs)
                                          or contains_top_or_zero(self.rhs)):
            raise PointedModeUnsupportedTerm(
                f"pointed mode does not support T or 0: {self}")

    @classmethod
    def parse(cls, lhs: str, rhs: str, mode: Mode = Mode.EXTENDED) -> Query:
        return cls(parse(lhs), parse(rhs), mode)

    def converse(self) -> Query:
        return Query(self.rhs, self.lhs, self.mode)

    def __str__(self):
        return f"{to_str(self.lhs)} <= {to_str(self.rhs)}"


@dataclass
class Verdict:
    query: Query
    valid: bool
    winner: Player
    certificate: PositionalStrategy
    positions_explored: int
    arena_digest: str
    elapsed_ms: float
    game: SimGame


def arena_digest(game: SimGame) -> str:
    return hashlib.sha256(game.arena.dump().encode()).hexdigest()


def decide(q: Query, max_positions: int = DEFAULT_MAX_POSITIONS) -> Verdict:
    """Build and solve the game for ``q``; the winner's strategy is re-checked.

    Raises ``PositionBudgetExceeded`` when the arena is too large and
    ``CertificateError`` if the extracted strategy does not verify.
    """
    start = time.perf_counter()
    game = build_arena(q.lhs, q.rhs, q.mode, max_positions)
    result = solve(game.arena, game.initial)
    winner = result.winner(game.initial)
    strategy = result.strategy_for(winner)
    problems = certificate_problems(game.arena, game.initial, winner, strategy)
    if problems:
        raise CertificateError(f"{q}: {'; '.join(problems[:3])}")
    elapsed = (time.perf_counter() - start) * 1000
    return Verdict(q, winner is DUPLICATOR, winner, strategy, len(game.arena),
                   arena_digest(game), elapsed, game)


def is_valid(lhs: Term | str, rhs: Term | str, mode: Mode = Mode.EXTENDED,
             max_positions: int = DEFAULT_MAX_POSITIONS) -> bool:
    if isinstance(lhs, str):
        lhs = parse(lhs)
    if isinstance(rhs, str):
        rhs = parse(rhs)
    return decide(Query(lhs, rhs, mode), max_positions).valid


def _decide_or_error(args):
    q, max_positions = args
    try:
        return decide(q, max_positions)
    except Exception as exc:  # reported per entry
        return exc


def decide_batch(qs: list[Query], parallelism: int = 1,
                 max_positions: int = DEFAULT_MAX_POSITIONS) -> list[Verdict | Exception]:
    """Decide every query; failures come back in place as exception objects."""
    work = [(q, max_positions) for q in qs]
    if parallelism <= 1 or len(qs) <= 1:
        return [_decide_or_error(w) for w in work]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_decide_or_error, work))
