"""The axioms of right-skewed Kleene algebras with distributive meets, as
instantiable inequation schemes, plus a few derived inequations and a
random term generator for property sweeps.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .decide import Query
from .simulation import Mode
from .term import (ONE, TOP, ZERO, Term, comp, diamond, join, letter, meet,
                   parse, substitute, to_str)


@dataclass(frozen=True)
class AxiomScheme:
    name: str
    variables: tuple[str, ...]
    premises: tuple[tuple[str, str], ...]
    conclusion: tuple[str, str]
    equality: bool = False

    @property
    def conditional(self) -> bool:
        return bool(self.premises)


@dataclass(frozen=True)
class AxiomInstance:
    name: str
    premises: tuple[tuple[Term, Term], ...]
    conclusion: tuple[Term, Term]


def _scheme(name, variables, conclusion, premises=(), equality=False):
    lhs, rhs = (s.strip() for s in conclusion.split("=" if equality else "<="))
    prem = tuple(tuple(s.strip() for s in p.split("<=")) for p in premises)
    return AxiomScheme(name, tuple(variables.split()), prem, (lhs, rhs), equality)


# schema variables are the letters a, b, c, and a2/b2 for the primed ones
SCHEMES: dict[str, AxiomScheme] = {s.name: s for s in [
    # distributive lattice with 0 and T
    _scheme("transitivity", "a b c", "a <= c", ["a <= b", "b <= c"]),
    _scheme("bottom", "a", "0 <= a"),
    _scheme("top", "a", "a <= T"),
    _scheme("join_upper_left", "a b", "a <= a | b"),
    _scheme("join_upper_right", "a b", "b <= a | b"),
    _scheme("join_least", "a b c", "b | c <= a", ["b <= a", "c <= a"]),
    _scheme("meet_lower_left", "a b", "a & b <= a"),
    _scheme("meet_lower_right", "a b", "a & b <= b"),
    _scheme("meet_greatest", "a b c", "a <= b & c", ["a <= b", "a <= c"]),
    _scheme("distributivity", "a b c", "a & (b | c) <= (a & b) | (a & c)"),
    # ordered monoid
    _scheme("unit_right", "a", "a * 1 = a", equality=True),
    _scheme("unit_left", "a", "1 * a = a", equality=True),
    _scheme("associativity", "a b c", "a * (b * c) = (a * b) * c", equality=True),
    _scheme("monotonicity", "a b a2 b2", "a * b <= a2 * b2", ["a <= a2", "b <= b2"]),
    _scheme("zero_absorption", "a", "a * 0 <= 0"),
    _scheme("top_absorption", "a", "T <= a * T"),
    _scheme("right_distributivity_join", "a b c", "a * (b | c) <= (a * b) | (a * c)"),
    _scheme("right_distributivity_meet", "a b c", "(a * b) & (a * c) <= a * (b & c)"),
    _scheme("half_distributivity", "a b c", "(a * b) & c <= (a & c) * b"),
    # iteration
    _scheme("unfold_unit", "a", "1 <= a^"),
    _scheme("unfold_step", "a", "a^ * a <= a^"),
    _scheme("diamond_induction", "a b c", "a & (b * c^) <= b", ["a & (b * c) <= b"]),
]}

# valid in the pointed degrees only
POINTED_SCHEMES: dict[str, AxiomScheme] = {
    "pointed_unit": _scheme("pointed_unit", "a", "1 <= a"),
}

UNCONDITIONAL = [n for n, s in SCHEMES.items() if not s.conditional]
CONDITIONAL = [n for n, s in SCHEMES.items() if s.conditional]


class MissingBinding(KeyError):
    pass


def instantiate(name: str, subst: dict[str, Term]) -> list[AxiomInstance]:
    """Substitute into a scheme; equalities yield one instance per direction."""
    scheme = SCHEMES.get(name) or POINTED_SCHEMES[name]
    missing = [v for v in scheme.variables if v not in subst]
    if missing:
        raise MissingBinding(f"{name}: no binding for {', '.join(missing)}")
    # substitute simultaneously so bound terms may mention schema letters
    mapping = {v: subst[v] for v in scheme.variables}

    def inst(pair):
        return tuple(substitute(parse(s), mapping) for s in pair)

    premises = tuple(inst(p) for p in scheme.premises)
    lhs, rhs = inst(scheme.conclusion)
    if scheme.equality:
        return [AxiomInstance(name, premises, (lhs, rhs)),
                AxiomInstance(name, premises, (rhs, lhs))]
    return [AxiomInstance(name, premises, (lhs, rhs))]


@dataclass(frozen=True)
class DerivedItem:
    name: str
    query: Query
    expected: bool


def derived_corpus() -> list[DerivedItem]:
    """Inequations derived by hand from the axioms, with their expected verdicts."""
    items = [
        ("diamond_idempotent", "a^ * a^", "a^", Mode.EXTENDED, True),
        ("meet_of_iterations", "(b * a^) & (c * a^)", "(b & c) * a^", Mode.EXTENDED, True),
        ("iteration_of_meet", "a^ & b^", "(a & b)^", Mode.EXTENDED, True),
        # diamond induction from (a|b)^ * a <= (a|b)^
        ("diamond_induction_instance", "(a | b)^ * a^", "(a | b)^", Mode.EXTENDED, True),
        ("repeat_call_pointed", "b * a", "a * b * a", Mode.POINTED, True),
        ("repeat_call_extended", "b * a", "a * b * a", Mode.EXTENDED, True),
    ]
    return [DerivedItem(n, Query(parse(l), parse(r), m), e) for n, l, r, m, e in items]


# ---------------------------------------------------------------------------
# random terms

DEFAULT_WEIGHTS = {"letter": 6, "zero": 1, "one": 1, "top": 1,
                   "join": 3, "meet": 3, "comp": 4, "diamond": 2}


def random_term(rng: random.Random, max_size: int, alphabet=("a", "b", "c"),
                weights: dict[str, float] | None = None, pointed: bool = False) -> Term:
    """Random term with at most ``max_size`` nodes.

    ``pointed`` drops 0 and T.  Setting a weight to zero removes that
    constructor, e.g. ``{"meet": 0, "top": 0, "zero": 0}`` for the meet-free fragment.
    """
    w = dict(DEFAULT_WEIGHTS)
    if weights:
        w.update(weights)
    if pointed:
        w["zero"] = w["top"] = 0
    letters_ = [letter(a) for a in alphabet]

    def leaf():
        kinds = [k for k in ("letter", "zero", "one", "top") if w[k] > 0]
        k = rng.choices(kinds, [w[k] for k in kinds])[0]
        return {"zero": ZERO, "one": ONE, "top": TOP}.get(k) or rng.choice(letters_)

    def gen(n: int) -> Term:
        if n <= 1:
            return leaf()
        kinds = [k for k in ("join", "meet", "comp", "diamond") if w[k] > 0]
        if n == 2:
            kinds = [k for k in kinds if k == "diamond"]
        if not kinds:
            return leaf()
        k = rng.choices(kinds, [w[k] for k in kinds])[0]
        if k == "diamond":
            return diamond(gen(n - 1))
        left = rng.randint(1, n - 2)
        op = {"join": join, "meet": meet, "comp": comp}[k]
        return op(gen(left), gen(n - 1 - left))

    return gen(rng.randint(1, max_size))


def random_instances(name: str, rng: random.Random, count: int, max_size: int = 5,
                     alphabet=("a", "b", "c"), pointed: bool = False) -> list[AxiomInstance]:
    scheme = SCHEMES.get(name) or POINTED_SCHEMES[name]
    pointed = pointed or name in POINTED_SCHEMES
    out = []
    for _ in range(count):
        subst = {v: random_term(rng, max_size, alphabet, pointed=pointed)
                 for v in scheme.variables}
        out.extend(instantiate(name, subst))
    return out


def _above(rng, t, max_size, alphabet):
    """A term that is likely, not certainly, above ``t``."""
    r = random_term(rng, max_size, alphabet)
    return rng.choice([t, join(t, r), join(r, t), comp(t, ONE), comp(ONE, t), TOP, r])


def _below(rng, t, max_size, alphabet):
    r = random_term(rng, max_size, alphabet)
    return rng.choice([t, meet(t, r), meet(r, t), comp(t, ONE), ZERO, r])


def horn_candidates(name: str, rng: random.Random, max_size: int = 4,
                    alphabet=("a", "b", "c")) -> dict[str, Term]:
    """A substitution for a conditional scheme, biased towards satisfying its
    premises.  Callers still have to decide the premises."""
    def rt():
        return random_term(rng, max_size, alphabet)

    if name == "transitivity":
        a = rt()
        b = _above(rng, a, max_size, alphabet)
        return {"a": a, "b": b, "c": _above(rng, b, max_size, alphabet)}
    if name == "join_least":
        a = rt()
        return {"a": a, "b": _below(rng, a, max_size, alphabet),
                "c": _below(rng, a, max_size, alphabet)}
    if name == "meet_greatest":
        a = rt()
        return {"a": a, "b": _above(rng, a, max_size, alphabet),
                "c": _above(rng, a, max_size, alphabet)}
    if name == "monotonicity":
        a, b = rt(), rt()
        return {"a": a, "b": b, "a2": _above(rng, a, max_size, alphabet),
                "b2": _above(rng, b, max_size, alphabet)}
    if name == "diamond_induction":
        a, c = rt(), rt()
        b = rng.choice([a, diamond(c), comp(rt(), diamond(c)), TOP, join(a, rt()), rt()])
        return {"a": a, "b": b, "c": c}
    raise KeyError(name)


def corpus_lines(rng: random.Random, per_axiom: int = 5, max_size: int = 4) -> list[str]:
    """Query-file lines for the unconditional axioms and the derived corpus."""
    lines = ["mode: extended", "# derived inequations"]
    for item in derived_corpus():
        if item.query.mode is Mode.EXTENDED:
            lines.append(f"{to_str(item.query.lhs)} <= {to_str(item.query.rhs)}  # {item.name}")
    for name in UNCONDITIONAL:
        lines.append(f"# {name}")
        for inst in random_instances(name, rng, per_axiom, max_size):
            lhs, rhs = inst.conclusion
            lines.append(f"{to_str(lhs)} <= {to_str(rhs)}")
    return lines
