"""Graphviz certificates: the part of the arena a positional strategy can reach.

Node ids are position hashes so that certificates of the same query diff
cleanly; the readable position goes in the label.  Duplicator positions are
violet, Spoiler positions orange, accepting positions get a double border.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .game import DUPLICATOR, SPOILER, Player, PositionalStrategy, certificate_problems
from .simulation import (DEFAULT_MAX_POSITIONS, Mode, SimGame, build_arena,
                         position_hash, render_position)
from .term import parse, to_str


def induced_nodes(game: SimGame, strategy: PositionalStrategy) -> list[int]:
    """Nodes reachable from the initial position when ``strategy`` is followed."""
    seen = {game.initial}
    order = [game.initial]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for w in _induced_succ(game, strategy, v):
            if w not in seen:
                seen.add(w)
                order.append(w)
    return order


def _induced_succ(game, strategy, v):
    ws = game.arena.succ[v]
    if game.arena.owner[v] == strategy.owner and ws and v in strategy.choice:
        return (strategy.choice[v],)
    return ws


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(game: SimGame, strategy: PositionalStrategy, unicode: bool = True) -> str:
    a = game.arena
    lines = [
        "digraph certificate {",
        f"  graph [lhs={_quote(to_str(game.lhs))}, rhs={_quote(to_str(game.rhs))}, "
        f"mode={_quote(game.mode.value)}, winner={_quote(strategy.owner.name.lower())}];",
        '  node [shape=box, style="rounded,filled"];',
    ]
    nodes = induced_nodes(game, strategy)
    for v in nodes:
        p = game.positions[v]
        dup = a.owner[v] is DUPLICATOR
        attrs = [f"label={_quote(render_position(p, unicode))}",
                 f"owner={_quote('duplicator' if dup else 'spoiler')}",
                 'color="violet", fillcolor="lavender"' if dup
                 else 'color="orange", fillcolor="papayawhip"']
        if v in a.accepting:
            attrs.append("peripheries=2")
        if v == game.initial:
            attrs.append('initial="true"')
        lines.append(f"  {_quote('p' + position_hash(p))} [{', '.join(attrs)}];")
    for v in nodes:
        src = _quote("p" + position_hash(game.positions[v]))
        for w in _induced_succ(game, strategy, v):
            label = game.labels[(v, w)].value
            dst = _quote("p" + position_hash(game.positions[w]))
            lines.append(f"  {src} -> {dst} [label={_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_ATTR = re.compile(r'(\w+)=(?:"((?:[^"\\]|\\.)*)"|(\w+))')
_GRAPH = re.compile(r'^\s*graph\s*\[(.*)\];?\s*$')
_EDGE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*->\s*"((?:[^"\\]|\\.)*)"\s*(?:\[(.*)\])?;?\s*$')
_NODE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*(?:\[(.*)\])?;?\s*$')


def _attrs(text: str | None) -> dict[str, str]:
    if not text:
        return {}
    return {m.group(1): (m.group(2) if m.group(2) is not None else m.group(3))
            .replace('\\"', '"').replace("\\\\", "\\") for m in _ATTR.finditer(text)}


@dataclass
class DotCertificate:
    graph: dict[str, str]
    nodes: dict[str, dict[str, str]]
    edges: list[tuple[str, str, dict[str, str]]] = field(default_factory=list)


def parse_dot(text: str) -> DotCertificate:
    """Read back the subset of DOT written by ``emit_dot``."""
    cert = DotCertificate({}, {})
    for line in text.splitlines():
        if m := _GRAPH.match(line):
            cert.graph.update(_attrs(m.group(1)))
        elif m := _EDGE.match(line):
            cert.edges.append((m.group(1), m.group(2), _attrs(m.group(3))))
        elif m := _NODE.match(line):
            cert.nodes[m.group(1)] = _attrs(m.group(2))
    for key in ("lhs", "rhs", "mode", "winner"):
        if key not in cert.graph:
            raise ValueError(f"certificate lacks the graph attribute {key!r}")
    return cert


def check_dot(text: str, max_positions: int = DEFAULT_MAX_POSITIONS) -> list[str]:
    """Rebuild the arena named in a certificate and verify the strategy in it.

    Returns a list of problems; an empty list means the certificate holds.
    """
    cert = parse_dot(text)
    mode = Mode(cert.graph["mode"])
    winner = {"duplicator": DUPLICATOR, "spoiler": SPOILER}[cert.graph["winner"]]
    game = build_arena(parse(cert.graph["lhs"]), parse(cert.graph["rhs"]), mode, max_positions)
    by_hash = {"p" + position_hash(p): v for v, p in enumerate(game.positions)}
    problems = []
    unknown = [h for h in cert.nodes if h not in by_hash]
    problems += [f"node {h} is not a position of the game" for h in unknown]
    out: dict[int, set[int]] = {}
    for src, dst, _ in cert.edges:
        if src not in by_hash or dst not in by_hash:
            problems.append(f"edge {src} -> {dst} mentions an unknown position")
            continue
        v, w = by_hash[src], by_hash[dst]
        if w not in game.arena.succ[v]:
            problems.append(f"edge {src} -> {dst} is not a move")
        out.setdefault(v, set()).add(w)
    if problems:
        return problems
    if "p" + position_hash(game.positions[game.initial]) not in cert.nodes:
        return ["the initial position is missing"]
    choice = {}
    for h in cert.nodes:
        v = by_hash[h]
        ws = out.get(v, set())
        if not ws and not game.arena.succ[v]:
            continue
        if game.arena.owner[v] == winner:
            if len(ws) != 1:
                problems.append(f"winner position {v} has {len(ws)} chosen moves")
                continue
            (choice[v],) = ws
        elif ws != set(game.arena.succ[v]):
            problems.append(f"opponent position {v} does not list all its moves")
    strategy = PositionalStrategy(Player(winner), choice)
    problems += certificate_problems(game.arena, game.initial, winner, strategy)
    return problems
