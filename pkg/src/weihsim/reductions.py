"""Hard instance generators: TQBF encodings, de-diamonding, and the
exponential-cycle family, with a brute-force QBF evaluator as their oracle.

Literals are signed integers: ``i`` is the variable x_i and ``-i`` its
negation.  Literals are ordered x1 < ~x1 < x2 < ~x2 < ... and every clause
is stored in descending order, so that its rightmost (first processed)
letter is its smallest literal.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .decide import Query
from .simulation import Mode
from .term import (LETTER_TAG, ONE, Term, comp, comp_all, diamond, join,
                   join_all, letter, letter_occurrences, meet, meet_all,
                   rebuild, size)

MAX_EVAL_VARS = 20
BULLET = "dot"


def literal_key(lit: int) -> tuple[int, bool]:
    return (abs(lit), lit < 0)


def literal_name(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"nx{-lit}"


def alternating_prefix(var_count: int) -> tuple[str, ...]:
    return tuple("forall" if i % 2 == 0 else "exists" for i in range(var_count))


@dataclass
class QbfInstance:
    """Prenex QBF with a DNF body: the formula holds iff some clause is true.

    ``quantifiers[i]`` quantifies x_{i+1}; by default they alternate
    forall/exists starting with forall.
    """

    var_count: int
    clauses: list[tuple[int, ...]]
    quantifiers: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.var_count < 1:
            raise ValueError("need at least one variable")
        if not self.quantifiers:
            self.quantifiers = alternating_prefix(self.var_count)
        if len(self.quantifiers) != self.var_count:
            raise ValueError("one quantifier per variable")
        if any(q not in ("forall", "exists") for q in self.quantifiers):
            raise ValueError(f"bad quantifier in {self.quantifiers}")
        cleaned: list[tuple[int, ...]] = []
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clauses are not supported")
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"literal {lit} out of range")
            c = tuple(sorted(set(clause), key=literal_key, reverse=True))
            if c not in cleaned:
                cleaned.append(c)
        if not cleaned:
            raise ValueError("need at least one clause")
        self.clauses = cleaned

    @property
    def total_size(self) -> int:
        """Number of variables plus number of literal occurrences."""
        return self.var_count + sum(len(c) for c in self.clauses)

    def __str__(self):
        prefix = " ".join(("A" if q == "forall" else "E") + f"x{i + 1}"
                          for i, q in enumerate(self.quantifiers))
        body = " | ".join("(" + " & ".join(
            (f"x{l}" if l > 0 else f"~x{-l}") for l in c) + ")" for c in self.clauses)
        return f"{prefix}. {body}"


def qbf_eval(q: QbfInstance) -> bool:
    """Truth value by exhaustive evaluation of the quantifier game."""
    if q.var_count > MAX_EVAL_VARS:
        raise ValueError(f"refusing to brute-force {q.var_count} > {MAX_EVAL_VARS} variables")

    def holds(assign: dict[int, bool]) -> bool:
        return any(all(assign[abs(l)] == (l > 0) for l in c) for c in q.clauses)

    def go(i: int, assign: dict[int, bool]) -> bool:
        if i > q.var_count:
            return holds(assign)
        branches = (go(i + 1, {**assign, i: v}) for v in (False, True))
        return all(branches) if q.quantifiers[i - 1] == "forall" else any(branches)

    return go(1, {})


def _lit(lit: int) -> Term:
    return letter(literal_name(lit))


def _clause_term(clause: tuple[int, ...]) -> Term:
    return comp_all(_lit(l) for l in clause)


def encode_pointed(q: QbfInstance) -> Query:
    """Meet of clause compositions against one iterated block per variable.

    The block for x_i is ``x_i^ | nx_i^`` when x_i is existential and
    ``x_i^ & nx_i^`` when universal; the block of x1 is rightmost.
    """
    lhs = meet_all(_clause_term(c) for c in q.clauses)
    blocks = []
    for i in range(q.var_count, 0, -1):
        op = join if q.quantifiers[i - 1] == "exists" else meet
        blocks.append(op(diamond(_lit(i)), diamond(_lit(-i))))
    return Query(lhs, comp_all(blocks), Mode.POINTED)


def encode_extended(q: QbfInstance) -> Query:
    """Diamond- and unit-free encoding over the literals plus a bullet letter.

    Existential variables contribute ``(x*dot)&(nx*dot)`` on the left; universal
    ones ``x|nx`` followed by a bullet.  The right-hand side starts with the
    join of all clauses and has ``(x|nx)*dot`` for every variable.
    """
    dot = letter(BULLET)
    left: list[Term] = []
    right: list[Term] = [join_all(_clause_term(c) for c in q.clauses)]
    for i in range(q.var_count, 0, -1):
        x, nx = _lit(i), _lit(-i)
        if q.quantifiers[i - 1] == "exists":
            left.append(meet(comp(x, dot), comp(nx, dot)))
        else:
            left.extend((join(x, nx), dot))
        if i == 1:
            right.extend((join(x, nx), dot))
        else:
            right.append(comp(join(x, nx), dot))
    return Query(comp_all(left), comp_all(right), Mode.EXTENDED)


def encoding_size(query: Query) -> int:
    return size(query.lhs) + size(query.rhs)


def dediamond(t: Term, occurrence_counter) -> Term:
    """Replace each ``l^`` by ``(1|l)*...*(1|l)`` with one factor more than
    ``occurrence_counter[l]``."""
    if t.left is None:
        return t
    if t.right is None:
        body = t.left
        if body.tag != LETTER_TAG:
            raise ValueError(f"can only de-diamond iterated letters, got {body}")
        n = occurrence_counter.get(body.name, 0) + 1
        return comp_all([join(ONE, body)] * n)
    return rebuild(t, dediamond(t.left, occurrence_counter),
                   dediamond(t.right, occurrence_counter))


def dediamond_query(query: Query) -> Query:
    counts = letter_occurrences(query.lhs)
    return Query(query.lhs, dediamond(query.rhs, counts), query.mode)


def gen_expfamily(n: int) -> Query:
    """Pair ``e_n <= f_n`` whose Duplicator strategies need long cycles."""
    if n < 1:
        raise ValueError("n must be positive")

    def xy(i):
        return letter(f"x{i}"), letter(f"y{i}")

    first = meet_all(comp(*xy(i)) for i in range(1, n + 1))
    second = meet_all(comp(*xy(j)) for j in range(n + 1, 2 * n + 1))
    lhs = meet(diamond(first), diamond(second))
    rhs = diamond(meet_all(join(*xy(i)) for i in range(1, 2 * n + 1)))
    return Query(lhs, rhs, Mode.POINTED)


# ---------------------------------------------------------------------------
# instance suites


def all_clauses(var_count: int, max_len: int) -> list[tuple[int, ...]]:
    lits = [l for i in range(1, var_count + 1) for l in (i, -i)]
    return [c for k in range(1, max_len + 1) for c in combinations(lits, k)]


def exhaustive_suite(var_count: int = 2, max_clauses: int = 3, max_len: int = 2) -> list[QbfInstance]:
    """Every body with 1..max_clauses distinct clauses of 1..max_len distinct literals."""
    clauses = all_clauses(var_count, max_len)
    return [QbfInstance(var_count, list(body))
            for k in range(1, max_clauses + 1)
            for body in combinations(clauses, k)]


def random_instance(rng: random.Random, var_count: int = 4, max_clauses: int = 4,
                    max_len: int = 3) -> QbfInstance:
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        vs = rng.sample(range(1, var_count + 1), rng.randint(1, min(max_len, var_count)))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return QbfInstance(var_count, clauses)


# ---------------------------------------------------------------------------
# QDIMACS-like text format


def parse_qdimacs(text: str) -> QbfInstance:
    """Read a restricted QDIMACS file whose matrix lines are DNF terms.

    ``c`` lines are comments, ``p cnf V C`` is optional, ``a``/``e`` lines
    give the prefix (default: alternating, starting universal), and every
    other line is a clause of signed integers, optionally ended by ``0``.
    """
    var_count = None
    quant: dict[int, str] = {}
    clauses = []
    max_var = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        try:
            if fields[0] == "p":
                var_count = int(fields[2])
                continue
            if fields[0] in ("a", "e"):
                for v in map(int, fields[1:]):
                    if v:
                        quant[v] = "forall" if fields[0] == "a" else "exists"
                continue
            lits = [int(f) for f in fields]
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
        if lits and lits[-1] == 0:
            lits.pop()
        if 0 in lits:
            raise ValueError(f"line {lineno}: 0 inside a clause")
        if lits:
            clauses.append(tuple(lits))
            max_var = max(max_var, *(abs(l) for l in lits))
    if var_count is None:
        var_count = max(max_var, max(quant, default=0))
    prefix = alternating_prefix(var_count)
    if quant:
        prefix = tuple(quant.get(i, prefix[i - 1]) for i in range(1, var_count + 1))
    return QbfInstance(var_count, clauses, prefix)


def to_qdimacs(q: QbfInstance) -> str:
    lines = [f"p cnf {q.var_count} {len(q.clauses)}"]
    for i, quant in enumerate(q.quantifiers, 1):
        lines.append(f"{'a' if quant == 'forall' else 'e'} {i} 0")
    lines += [" ".join(map(str, c)) + " 0" for c in q.clauses]
    return "\n".join(lines) + "\n"
