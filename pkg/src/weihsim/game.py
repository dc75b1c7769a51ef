"""Explicit finite Büchi games.

Nodes are dense integers.  Duplicator wins a play if it visits accepting
nodes infinitely often, or if it is finite and ends on an accepting node.
Finite plays are compiled away by ``normalize_dead_ends`` so the solvers only
ever deal with infinite plays.
"""
from __future__ import annotations

import enum
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx


class Player(enum.IntEnum):
    DUPLICATOR = 0
    SPOILER = 1

    @property
    def opponent(self) -> Player:
        return Player(1 - self)

    @property
    def symbol(self) -> str:
        return "E" if self is Player.DUPLICATOR else "A"


DUPLICATOR = Player.DUPLICATOR
SPOILER = Player.SPOILER


@dataclass(frozen=True)
class Arena:
    """Immutable game graph: ``succ[v]`` are the moves out of ``v``."""

    succ: tuple[tuple[int, ...], ...]
    owner: tuple[Player, ...]
    accepting: frozenset[int]

    def __post_init__(self):
        n = len(self.succ)
        if len(self.owner) != n:
            raise ValueError("owner map must cover every node")
        cleaned = []
        for v, ws in enumerate(self.succ):
            seen = dict.fromkeys(ws)
            for w in seen:
                if not 0 <= w < n:
                    raise ValueError(f"move {v}->{w} leaves the arena")
            cleaned.append(tuple(seen))
        object.__setattr__(self, "succ", tuple(cleaned))
        object.__setattr__(self, "owner", tuple(Player(o) for o in self.owner))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if any(not 0 <= v < n for v in self.accepting):
            raise ValueError("accepting set mentions unknown nodes")

    def __len__(self):
        return len(self.succ)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], owner, accepting) -> Arena:
        succ = [[] for _ in range(n)]
        for v, w in edges:
            succ[v].append(w)
        return cls(tuple(tuple(s) for s in succ), tuple(owner), frozenset(accepting))

    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in self.succ]
        for v, ws in enumerate(self.succ):
            for w in ws:
                pred[w].append(v)
        return pred

    def dead_ends(self) -> list[int]:
        return [v for v, ws in enumerate(self.succ) if not ws]

    def reachable(self, initial: int) -> set[int]:
        seen = {initial}
        todo = [initial]
        while todo:
            for w in self.succ[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    def dump(self) -> str:
        """One line per node: ``id controller accepting succ,succ,...``."""
        return "\n".join(
            f"{v} {self.owner[v].symbol} {int(v in self.accepting)} {','.join(map(str, ws))}"
            for v, ws in enumerate(self.succ))


@dataclass
class PositionalStrategy:
    owner: Player
    choice: dict[int, int] = field(default_factory=dict)


@dataclass
class SolveResult:
    duplicator_region: set[int]
    spoiler_region: set[int]
    duplicator_strategy: PositionalStrategy
    spoiler_strategy: PositionalStrategy

    def winner(self, v: int) -> Player:
        return DUPLICATOR if v in self.duplicator_region else SPOILER

    def strategy_for(self, player: Player) -> PositionalStrategy:
        return self.duplicator_strategy if player is DUPLICATOR else self.spoiler_strategy


def normalize_dead_ends(a: Arena) -> Arena:
    """Give every dead end a self-loop, keeping its accepting flag."""
    if all(a.succ):
        return a
    succ = tuple(ws if ws else (v,) for v, ws in enumerate(a.succ))
    return Arena(succ, a.owner, a.accepting)


def _attract(a: Arena, pred, alive, target, player):
    """Layered attractor restricted to ``alive`` nodes.

    Returns ``(rank, witness)``: ``rank[v]`` is the number of rounds ``player``
    needs to force the play from ``v`` into ``target``; ``witness[v]`` is, for
    ``player``'s nodes outside the target, the lowest-id successor of smaller rank.
    """
    rank: dict[int, int] = {}
    queue: deque[int] = deque()
    for v in sorted(target):
        if alive[v] and v not in rank:
            rank[v] = 0
            queue.append(v)
    pending: dict[int, int] = {}
    owner = a.owner
    while queue:
        u = queue.popleft()
        r = rank[u] + 1
        for p in pred[u]:
            if not alive[p] or p in rank:
                continue
            if owner[p] == player:
                rank[p] = r
                queue.append(p)
            else:
                c = pending.get(p)
                if c is None:
                    c = sum(1 for w in a.succ[p] if alive[w])
                c -= 1
                pending[p] = c
                if c == 0:
                    rank[p] = r
                    queue.append(p)
    witness = {}
    for v, r in rank.items():
        if r and owner[v] == player:
            witness[v] = min(w for w in a.succ[v] if rank.get(w, r) < r)
    return rank, witness


def attractor(a: Arena, target: Iterable[int], player: Player) -> tuple[set[int], dict[int, int]]:
    """Nodes from which ``player`` can force a visit to ``target``.

    The second component maps each of ``player``'s attracted nodes outside
    the target to a move that makes progress towards it.
    """
    a = normalize_dead_ends(a)
    rank, witness = _attract(a, a.predecessors(), [True] * len(a), target, player)
    return set(rank), witness


def solve(a: Arena, initial: int | None = None) -> SolveResult:
    """Classical Büchi recurrence with positional strategies for both players.

    Choices are only reported for nodes that have moves in ``a`` itself; a
    dead end's winner is settled by its accepting flag.
    """
    if initial is not None and not 0 <= initial < len(a):
        raise ValueError(f"initial node {initial} is not in the arena")
    raw = a
    a = normalize_dead_ends(a)
    n = len(a)
    pred = a.predecessors()
    alive = [True] * n
    spoiler_choice: dict[int, int] = {}
    while True:
        rank, witness = _attract(a, pred, alive, a.accepting, DUPLICATOR)
        trap = [v for v in range(n) if alive[v] and v not in rank]
        if not trap:
            break
        # Spoiler stays in the trap forever, never seeing an accepting node
        trap_set = set(trap)
        for v in trap:
            if a.owner[v] is SPOILER:
                spoiler_choice[v] = min(w for w in a.succ[v] if w in trap_set)
        srank, switness = _attract(a, pred, alive, trap, SPOILER)
        spoiler_choice.update(switness)
        for v in srank:
            alive[v] = False
    dup_region = {v for v in range(n) if alive[v]}
    spo_region = set(range(n)) - dup_region

    dup_choice: dict[int, int] = {}
    for v in range(n):
        o = a.owner[v]
        if not raw.succ[v]:
            continue
        if o is DUPLICATOR:
            if v in witness and alive[v]:
                dup_choice[v] = witness[v]
            elif alive[v]:
                # accepting node of the final region: any move staying inside
                dup_choice[v] = min(w for w in a.succ[v] if alive[w])
            else:
                dup_choice[v] = min(a.succ[v])
        elif v not in spoiler_choice:
            spoiler_choice[v] = min(a.succ[v])
    spoiler_choice = {v: w for v, w in spoiler_choice.items() if raw.succ[v]}
    return SolveResult(dup_region, spo_region,
                       PositionalStrategy(DUPLICATOR, dup_choice),
                       PositionalStrategy(SPOILER, spoiler_choice))


def naive_solve(a: Arena) -> dict[int, Player]:
    """Greatest fixpoint nu Z. Attr_D(F & CPre_D(Z)), iterated over all nodes.

    Deliberately unoptimized; it serves as an oracle for ``solve``.
    """
    a = normalize_dead_ends(a)
    nodes = range(len(a))

    def cpre(s: set[int]) -> set[int]:
        return {v for v in nodes
                if (any(w in s for w in a.succ[v]) if a.owner[v] is DUPLICATOR
                    else all(w in s for w in a.succ[v]))}

    z = set(nodes)
    while True:
        base = a.accepting & cpre(z)
        y = set(base)
        while True:
            y2 = base | cpre(y)
            if y2 == y:
                break
            y = y2
        if y == z:
            break
        z = y
    return {v: DUPLICATOR if v in z else SPOILER for v in nodes}


def certificate_problems(a: Arena, initial: int, winner: Player,
                         s: PositionalStrategy) -> list[str]:
    """Reasons why ``s`` fails to win from ``initial``; empty when it wins.

    Works on the induced graph: the winner's nodes keep their chosen move,
    the opponent's nodes keep every move.  Cycle checks go through networkx so
    this stays independent of the solver above.
    """
    if s.owner != winner:
        return [f"strategy belongs to {s.owner.name}, not {winner.name}"]
    problems = []
    g = nx.DiGraph()
    g.add_node(initial)
    todo = [initial]
    seen = {initial}
    while todo:
        v = todo.pop()
        moves = a.succ[v]
        if a.owner[v] == winner and moves:
            if v not in s.choice:
                problems.append(f"no choice at reachable node {v}")
                continue
            w = s.choice[v]
            if w not in moves:
                problems.append(f"choice {v}->{w} is not a move")
                continue
            moves = (w,)
        for w in moves:
            g.add_edge(v, w)
            if w not in seen:
                seen.add(w)
                todo.append(w)
    if problems:
        return problems
    acc = a.accepting
    dead = [v for v in g if g.out_degree(v) == 0]
    if winner is DUPLICATOR:
        problems += [f"dead end {v} is not accepting" for v in dead if v not in acc]
        rest = g.subgraph(v for v in g if v not in acc)
        if not nx.is_directed_acyclic_graph(rest):
            cyc = nx.find_cycle(rest)
            problems.append(f"cycle without accepting node through {cyc[0][0]}")
    else:
        problems += [f"dead end {v} is accepting" for v in dead if v in acc]
        for comp in nx.strongly_connected_components(g):
            hit = [v for v in comp if v in acc and (len(comp) > 1 or g.has_edge(v, v))]
            if hit:
                problems.append(f"accepting node {min(hit)} lies on a cycle")
    return problems


def check_certificate(a: Arena, initial: int, winner: Player, s: PositionalStrategy) -> bool:
    return not certificate_problems(a, initial, winner, s)


def random_arena(rng: random.Random, n: int, density: float,
                 accept_prob: float | None = None) -> Arena:
    """Random arena for testing; dead ends are allowed and left raw."""
    if accept_prob is None:
        accept_prob = rng.random()
    succ = tuple(tuple(w for w in range(n) if rng.random() < density) for _ in range(n))
    owner = tuple(Player(rng.randrange(2)) for _ in range(n))
    accepting = frozenset(v for v in range(n) if rng.random() < accept_prob)
    return Arena(succ, owner, accepting)

