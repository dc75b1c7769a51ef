"""Terms over letters, 0, 1, T with join, meet, composition and iteration.

Terms are hash-consed: building the same structure twice returns the very
same object, so ``is`` / ``==`` are structural equality and terms can be used
directly as dict keys.  The transition relation and polarities that drive the
simulation game live here as cached properties of each term.
"""
from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

# constructor tags; their numeric order is the first component of the
# structural total order on terms
ZERO_TAG, ONE_TAG, TOP_TAG, LETTER_TAG, JOIN_TAG, MEET_TAG, COMP_TAG, DIAMOND_TAG = range(8)

_BINARY = (JOIN_TAG, MEET_TAG, COMP_TAG)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.text = text

    def __reduce__(self):
        return (type(self), (self.message, self.position, self.text))


class UnknownLetter(ParseError):
    pass


@dataclass(frozen=True)
class Polarity:
    kind: str  # "exists", "forall" or "oracle"
    letter: str | None = None

    @property
    def is_oracle(self) -> bool:
        return self.kind == "oracle"

    def __str__(self):
        return f"oracle_{self.letter}" if self.is_oracle else self.kind


EXISTS = Polarity("exists")
FORALL = Polarity("forall")


def oracle(letter: str) -> Polarity:
    return Polarity("oracle", letter)


class Term:
    __slots__ = ("tag", "name", "left", "right", "uid",
                 "_key", "_size", "_pol", "_succ", "_letters")

    def __init__(self, tag, name, left, right, uid):
        self.tag = tag
        self.name = name
        self.left = left
        self.right = right
        self.uid = uid
        self._size = None
        self._pol = None
        self._succ = None
        self._letters = None
        if tag == LETTER_TAG:
            self._key = (tag, name)
        elif left is None:
            self._key = (tag,)
        elif right is None:
            self._key = (tag, left._key)
        else:
            self._key = (tag, left._key, right._key)

    # structural order: tag first, then children, letters by name
    def __lt__(self, other: Term) -> bool:
        return self._key < other._key

    def __le__(self, other: Term) -> bool:
        return self._key <= other._key

    def __gt__(self, other: Term) -> bool:
        return self._key > other._key

    def __ge__(self, other: Term) -> bool:
        return self._key >= other._key

    def __hash__(self):
        return self.uid

    def __reduce__(self):
        return (_make, (self.tag, self.name, self.left, self.right))

    def __repr__(self):
        return f"Term({to_str(self)!r})"

    def __str__(self):
        return to_str(self)

    def __or__(self, other: Term) -> Term:
        return join(self, other)

    def __and__(self, other: Term) -> Term:
        return meet(self, other)

    def __mul__(self, other: Term) -> Term:
        return comp(self, other)

    @property
    def key(self) -> tuple:
        return self._key

    @property
    def is_letter(self) -> bool:
        return self.tag == LETTER_TAG

    @property
    def body(self) -> Term:
        assert self.tag == DIAMOND_TAG
        return self.left


_table: dict[tuple, Term] = {}
_lock = threading.Lock()


def _make(tag, name=None, left=None, right=None) -> Term:
    k = (tag, name,
         None if left is None else left.uid,
         None if right is None else right.uid)
    t = _table.get(k)
    if t is not None:
        return t
    with _lock:
        t = _table.get(k)
        if t is None:
            t = Term(tag, name, left, right, len(_table))
            _table[k] = t
    return t


ZERO = _make(ZERO_TAG)
ONE = _make(ONE_TAG)
TOP = _make(TOP_TAG)


def letter(name: str) -> Term:
    if not _is_letter_name(name):
        raise ValueError(f"invalid letter name {name!r}")
    return _make(LETTER_TAG, name)


def join(a: Term, b: Term) -> Term:
    return _make(JOIN_TAG, None, a, b)


def meet(a: Term, b: Term) -> Term:
    return _make(MEET_TAG, None, a, b)


def comp(a: Term, b: Term) -> Term:
    return _make(COMP_TAG, None, a, b)


def diamond(a: Term) -> Term:
    return _make(DIAMOND_TAG, None, a)


def rebuild(t: Term, left: Term, right: Term | None = None) -> Term:
    """Same constructor as ``t`` applied to new children."""
    return _make(t.tag, None, left, right)


def join_all(ts: Iterable[Term]) -> Term:
    return reduce(join, ts)


def meet_all(ts: Iterable[Term]) -> Term:
    return reduce(meet, ts)


def comp_all(ts: Iterable[Term]) -> Term:
    """Left-nested composition ``t1 * t2 * ... * tn`` (n >= 1)."""
    return reduce(comp, ts)


def interned_count() -> int:
    return len(_table)


# ---------------------------------------------------------------------------
# basic measures


def size(t: Term) -> int:
    """Number of abstract syntax nodes."""
    if t._size is None:
        if t.left is None:
            t._size = 1
        elif t.right is None:
            t._size = 1 + size(t.left)
        else:
            t._size = 1 + size(t.left) + size(t.right)
    return t._size


def letters(t: Term) -> frozenset[str]:
    if t._letters is None:
        if t.tag == LETTER_TAG:
            t._letters = frozenset((t.name,))
        elif t.left is None:
            t._letters = frozenset()
        elif t.right is None:
            t._letters = letters(t.left)
        else:
            t._letters = letters(t.left) | letters(t.right)
    return t._letters


def letter_occurrences(t: Term) -> Counter:
    """Count how many times each letter occurs in ``t``."""
    counts: Counter = Counter()
    stack = [t]
    while stack:
        u = stack.pop()
        if u.tag == LETTER_TAG:
            counts[u.name] += 1
        else:
            stack.extend(c for c in (u.left, u.right) if c is not None)
    return counts


def contains_top_or_zero(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if u is TOP or u is ZERO:
            return True
        stack.extend(c for c in (u.left, u.right) if c is not None)
    return False


def subterms(t: Term) -> set[Term]:
    out = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if u in out:
            continue
        out.add(u)
        stack.extend(c for c in (u.left, u.right) if c is not None)
    return out


def substitute(t: Term, mapping: dict[str, Term]) -> Term:
    """Replace letters by terms; letters missing from ``mapping`` stay put."""
    if t.tag == LETTER_TAG:
        return mapping.get(t.name, t)
    if t.left is None:
        return t
    if t.right is None:
        return diamond(substitute(t.left, mapping))
    return rebuild(t, substitute(t.left, mapping), substitute(t.right, mapping))


# ---------------------------------------------------------------------------
# polarity and transitions


def polarity(t: Term) -> Polarity:
    if t._pol is None:
        tag = t.tag
        if tag == COMP_TAG:
            t._pol = polarity(t.right)
        elif tag == LETTER_TAG:
            t._pol = oracle(t.name)
        elif tag in (MEET_TAG, TOP_TAG):
            t._pol = FORALL
        else:
            # join, 0, 1 and iteration
            t._pol = EXISTS
    return t._pol


def successors(t: Term) -> tuple[Term, ...]:
    """All ``t'`` with ``t -> t'``, sorted in the structural order."""
    if t._succ is None:
        tag = t.tag
        out: set[Term] = set()
        if tag in (JOIN_TAG, MEET_TAG):
            out.update((t.left, t.right))
        elif tag == LETTER_TAG:
            out.add(ONE)
        elif tag == DIAMOND_TAG:
            out.add(ONE)
            out.add(comp(t, t.left))
        elif tag == COMP_TAG:
            if t.right is ONE:
                out.add(t.left)
            for r in successors(t.right):
                out.add(comp(t.left, r))
        t._succ = tuple(sorted(out))
    return t._succ


class SubobjectOverflow(RuntimeError):
    """The subobject closure outgrew its sanity cap; a transition rule is broken."""


def subobjects(t: Term) -> tuple[Term, ...]:
    """Reflexive-transitive closure of ``successors`` from ``t`` (sorted)."""
    cap = 10 * size(t) + 16
    seen = {t}
    todo = [t]
    while todo:
        u = todo.pop()
        for v in successors(u):
            if v not in seen:
                seen.add(v)
                if len(seen) > cap:
                    raise SubobjectOverflow(f"more than {cap} subobjects for {to_str(t)}")
                todo.append(v)
    return tuple(sorted(seen))


# ---------------------------------------------------------------------------
# printing

_LEVEL = {JOIN_TAG: 1, MEET_TAG: 2, COMP_TAG: 3, DIAMOND_TAG: 4}
_ASCII = {JOIN_TAG: "|", MEET_TAG: "&", COMP_TAG: "*", DIAMOND_TAG: "^",
          ZERO_TAG: "0", ONE_TAG: "1", TOP_TAG: "T"}
_UNICODE = {JOIN_TAG: "⊔", MEET_TAG: "⊓", COMP_TAG: "⋆", DIAMOND_TAG: "⋄",
            ZERO_TAG: "0", ONE_TAG: "1", TOP_TAG: "⊤"}


def _level(t: Term) -> int:
    return _LEVEL.get(t.tag, 5)


def to_str(t: Term, unicode: bool = False) -> str:
    sym = _UNICODE if unicode else _ASCII
    sep = " " if unicode else ""
    parts: list[str] = []

    def emit(u: Term, min_level: int):
        paren = _level(u) < min_level
        if paren:
            parts.append("(")
        tag = u.tag
        if tag == LETTER_TAG:
            parts.append(u.name)
        elif tag == DIAMOND_TAG:
            emit(u.left, 4)
            parts.append(sym[tag])
        elif tag in _BINARY:
            lvl = _LEVEL[tag]
            emit(u.left, lvl)
            parts.append(f"{sep}{sym[tag]}{sep}")
            emit(u.right, lvl + 1)
        else:
            parts.append(sym[tag])
        if paren:
            parts.append(")")

    emit(t, 0)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parsing

_OPS = {"|": JOIN_TAG, "⊔": JOIN_TAG, "&": MEET_TAG, "⊓": MEET_TAG,
        "*": COMP_TAG, "⋆": COMP_TAG, "^": DIAMOND_TAG, "⋄": DIAMOND_TAG}
_CONSTS = {"0": ZERO, "1": ONE, "T": TOP, "⊤": TOP}


def _is_letter_name(s: str) -> bool:
    return bool(s) and "a" <= s[0] <= "z" and all(c.isascii() and (c.isalnum() or c == "_") for c in s)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in _OPS or c in "()" or c in _CONSTS:
            tokens.append((c, i))
            i += 1
        elif "a" <= c <= "z":
            j = i + 1
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i, text)
    tokens.append(("", n))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def fail(self, msg):
        raise ParseError(msg, self.pos(), self.text)

    def binary(self, level: int) -> Term:
        if level == 4:
            return self.postfix()
        t = self.binary(level + 1)
        while _OPS.get(self.peek()) == [JOIN_TAG, MEET_TAG, COMP_TAG][level - 1]:
            self.i += 1
            t = _make(_OPS[self.tokens[self.i - 1][0]], None, t, self.binary(level + 1))
        return t

    def postfix(self) -> Term:
        t = self.atom()
        while _OPS.get(self.peek()) == DIAMOND_TAG:
            self.i += 1
            t = diamond(t)
        return t

    def atom(self) -> Term:
        tok = self.peek()
        if tok == "(":
            self.i += 1
            t = self.binary(1)
            if self.peek() != ")":
                self.fail("expected ')'")
            self.i += 1
            return t
        if tok in _CONSTS:
            self.i += 1
            return _CONSTS[tok]
        if tok and _is_letter_name(tok):
            if self.alphabet is not None and tok not in self.alphabet:
                raise UnknownLetter(f"unknown letter {tok!r}", self.pos(), self.text)
            self.i += 1
            return letter(tok)
        self.fail("expected a term" if tok else "unexpected end of input")

    def parse(self) -> Term:
        t = self.binary(1)
        if self.peek():
            self.fail(f"unexpected token {self.peek()!r}")
        return t


def parse(text: str, alphabet: Iterable[str] | None = None) -> Term:
    """Parse concrete syntax; with ``alphabet`` given, other letters are rejected.

    Precedence is ``^`` > ``*`` > ``&`` > ``|``, binary operators associate
    to the left, and the Unicode symbols ⊔ ⊓ ⋆ ⋄ ⊤ are accepted as aliases.
    """
    return _Parser(text, None if alphabet is None else frozenset(alphabet)).parse()
