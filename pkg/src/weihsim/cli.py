"""Command-line front end.

Query files hold one inequation per line, ``e <= f`` or ``e == f`` (checked
in both directions).  ``#`` starts a comment and a ``mode: pointed`` or
``mode: extended`` line switches the mode for the lines that follow.

QBF files for ``gen`` list one DNF clause per line as signed integers
(``1 -2`` is x1 & ~x2), optionally ended by ``0``.  Lines starting with
``c`` are comments, ``p cnf V C`` fixes the variable count, and ``a``/``e``
lines quantify variables; unquantified variables alternate forall/exists
starting with forall on x1.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .axioms import corpus_lines
from .decide import CertificateError, Query, Verdict, decide_batch
from .dot import check_dot, emit_dot
from .game import naive_solve, random_arena, solve
from .reductions import (dediamond_query, encode_extended, encode_pointed,
                         gen_expfamily, parse_qdimacs)
from .simulation import (DEFAULT_MAX_POSITIONS, Mode, PointedModeUnsupportedTerm,
                         PositionBudgetExceeded)
from .term import ParseError, parse, to_str

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVALID = 10


class InputError(Exception):
    pass


@dataclass
class QueryLine:
    lineno: int
    source: str
    query: Query


def parse_query_file(text: str, mode: Mode = Mode.EXTENDED, origin: str = "<input>") -> list[QueryLine]:
    """Parse query-file text; raises ``InputError`` pointing at the bad line."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{origin}:{lineno}"
        if line.lower().startswith("mode:"):
            value = line.split(":", 1)[1].strip().lower()
            try:
                mode = Mode(value)
            except ValueError:
                raise InputError(f"{where}: unknown mode {value!r}") from None
            continue
        if "==" in line:
            op = "=="
        elif "<=" in line:
            op = "<="
        else:
            raise InputError(f"{where}: expected 'e <= f' or 'e == f'")
        left, right = line.split(op, 1)
        try:
            lhs = parse(left)
        except ParseError as exc:
            raise InputError(f"{where}: left-hand side: {exc}") from None
        try:
            rhs = parse(right)
        except ParseError as exc:
            raise InputError(f"{where}: right-hand side: {exc}") from None
        try:
            q = Query(lhs, rhs, mode)
        except PointedModeUnsupportedTerm as exc:
            raise InputError(f"{where}: {exc}") from None
        out.append(QueryLine(lineno, line, q))
        if op == "==":
            out.append(QueryLine(lineno, line, q.converse()))
    return out


def verdict_record(v: Verdict, cert_path: str | None = None) -> dict:
    rec = {"lhs": to_str(v.query.lhs), "rhs": to_str(v.query.rhs),
           "mode": v.query.mode.value, "valid": v.valid,
           "positions_explored": v.positions_explored,
           "elapsed_ms": round(v.elapsed_ms, 3)}
    if cert_path is not None:
        rec["cert_path"] = cert_path
    return rec


def _cert_path(base: str, i: int, total: int) -> Path:
    p = Path(base)
    if total == 1:
        return p
    return p.with_name(f"{p.stem}-{i + 1}{p.suffix or '.dot'}")


def cmd_decide(args) -> int:
    mode = Mode(args.mode)
    chunks = []
    if args.queries:
        chunks += [(q, "<arg>") for q in args.queries]
    if args.file:
        if args.file == "-":
            chunks.append((sys.stdin.read(), "<stdin>"))
        else:
            try:
                chunks.append((Path(args.file).read_text(), args.file))
            except OSError as exc:
                raise InputError(f"{args.file}: {exc.strerror}") from None
    if not chunks:
        chunks.append((sys.stdin.read(), "<stdin>"))
    lines: list[QueryLine] = []
    for text, origin in chunks:
        lines += parse_query_file(text, mode, origin)
    if not lines:
        raise InputError("no queries given")

    results = decide_batch([ql.query for ql in lines], args.jobs, args.max_positions)
    code = EXIT_OK
    any_invalid = False
    for i, (ql, res) in enumerate(zip(lines, results)):
        if isinstance(res, PositionBudgetExceeded):
            print(f"line {ql.lineno}: {ql.query}: budget exceeded: {res}", file=sys.stderr)
            code = max(code, EXIT_BUDGET)
            continue
        if isinstance(res, CertificateError):
            print(f"line {ql.lineno}: {res}", file=sys.stderr)
            return 1
        if isinstance(res, Exception):
            raise res
        cert = None
        if args.cert:
            cert = str(_cert_path(args.cert, i, len(lines)))
            Path(cert).write_text(emit_dot(res.game, res.certificate))
        any_invalid |= not res.valid
        if args.json:
            print(json.dumps(verdict_record(res, cert)))
        else:
            print(f"{'VALID' if res.valid else 'INVALID'}  {res.query}  [{res.query.mode.value}]")
        if args.stats:
            print(f"  positions={res.positions_explored} elapsed_ms={res.elapsed_ms:.3f} "
                  f"digest={res.arena_digest[:16]}", file=sys.stderr)
    if code == EXIT_OK and any_invalid and args.fail_on_invalid:
        code = EXIT_INVALID
    return code


def cmd_check_cert(args) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        raise InputError(f"{args.path}: {exc.strerror}") from None
    try:
        problems = check_dot(text, args.max_positions)
    except (ValueError, KeyError) as exc:
        raise InputError(f"{args.path}: malformed certificate: {exc}") from None
    if problems:
        for p in problems:
            print(f"{args.path}: {p}", file=sys.stderr)
        print("REJECTED")
        return 1
    print("ACCEPTED")
    return EXIT_OK


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.kind in ("qbf-pointed", "qbf-extended"):
        if not args.arg:
            raise InputError(f"gen {args.kind} needs a QBF file")
        try:
            text = sys.stdin.read() if args.arg == "-" else Path(args.arg).read_text()
            qbf = parse_qdimacs(text)
        except OSError as exc:
            raise InputError(f"{args.arg}: {exc.strerror}") from None
        except ValueError as exc:
            raise InputError(f"{args.arg}: {exc}") from None
        if args.kind == "qbf-pointed":
            q = encode_pointed(qbf)
            if args.dediamond:
                q = dediamond_query(q)
        else:
            q = encode_extended(qbf)
        _emit([f"# {qbf}", f"mode: {q.mode.value}", str(q)], args.output)
    elif args.kind == "expfamily":
        try:
            n = int(args.arg)
            q = gen_expfamily(n)
        except (TypeError, ValueError):
            raise InputError(f"gen expfamily needs a positive integer, got {args.arg!r}") from None
        _emit([f"mode: {q.mode.value}", str(q)], args.output)
    else:
        _emit(corpus_lines(random.Random(args.seed), args.per_axiom, args.max_size), args.output)
    return EXIT_OK


def cmd_oracle_compare(args) -> int:
    rng = random.Random(args.seed)
    mismatches = 0
    start = time.perf_counter()
    for k in range(args.count):
        a = random_arena(rng, rng.randint(1, args.max_nodes), rng.uniform(0.05, 0.4))
        fast = solve(a)
        slow = naive_solve(a)
        bad = [v for v in range(len(a)) if fast.winner(v) != slow[v]]
        if bad:
            mismatches += 1
            print(f"arena {k}: disagreement at nodes {bad}", file=sys.stderr)
    print(f"{args.count} arenas, {mismatches} mismatches, "
          f"{(time.perf_counter() - start) * 1000:.0f} ms")
    return EXIT_OK if mismatches == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weihsim", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide inequations")
    d.add_argument("queries", nargs="*", help="queries such as 'a*b <= a|b'")
    d.add_argument("-f", "--file", help="query file ('-' for stdin)")
    d.add_argument("--mode", choices=[m.value for m in Mode], default="extended")
    d.add_argument("--max-positions", type=int, default=DEFAULT_MAX_POSITIONS)
    d.add_argument("--cert", metavar="PATH.dot",
                   help="write the winner's strategy; numbered per query when there are several")
    d.add_argument("--json", action="store_true", help="one JSON object per query")
    d.add_argument("--stats", action="store_true", help="arena statistics on stderr")
    d.add_argument("--fail-on-invalid", action="store_true", help="exit 10 if any query is invalid")
    d.add_argument("-j", "--jobs", type=int, default=1, help="worker processes")
    d.set_defaults(func=cmd_decide)

    c = sub.add_parser("check-cert", help="re-check a DOT certificate")
    c.add_argument("path")
    c.add_argument("--max-positions", type=int, default=DEFAULT_MAX_POSITIONS)
    c.set_defaults(func=cmd_check_cert)

    g = sub.add_parser("gen", help="emit query files")
    g.add_argument("kind", choices=["qbf-pointed", "qbf-extended", "expfamily", "axioms"])
    g.add_argument("arg", nargs="?", help="QBF file for qbf-*, n for expfamily")
    g.add_argument("-o", "--output")
    g.add_argument("--dediamond", action="store_true", help="qbf-pointed without iteration")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--per-axiom", type=int, default=5)
    g.add_argument("--max-size", type=int, default=4)
    g.set_defaults(func=cmd_gen)

    o = sub.add_parser("oracle-compare", help="fast vs naive solver on random arenas")
    o.add_argument("--count", type=int, default=500)
    o.add_argument("--max-nodes", type=int, default=40)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle_compare)
    return p


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PositionBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
