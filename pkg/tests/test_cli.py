import json
import subprocess
import sys
from pathlib import Path

import pytest

from weihsim.cli import InputError, parse_query_file, run
from weihsim.decide import decide
from weihsim.dot import check_dot, emit_dot, induced_nodes, parse_dot
from weihsim.simulation import Mode
from weihsim.term import parse

GOLDEN = Path(__file__).parent / "golden"


def weihsim(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "weihsim", *args], input=stdin,
                          capture_output=True, text=True)


def test_decide_prints_valid(capsys):
    assert run(["decide", "--mode", "extended", "(b*a)|(c*a) <= (b|c)*a"]) == 0
    assert capsys.readouterr().out.startswith("VALID")


def test_parse_error_exit_code(capsys):
    assert run(["decide", "a <="]) == 2
    err = capsys.readouterr().err
    assert "<arg>:1" in err and "right-hand side" in err


def test_fail_on_invalid(capsys):
    assert run(["decide", "(b|c)*a <= b*a|c*a"]) == 0
    assert run(["decide", "--fail-on-invalid", "(b|c)*a <= b*a|c*a"]) == 10
    assert "INVALID" in capsys.readouterr().out


def test_budget_exit_code(capsys):
    assert run(["decide", "--mode", "pointed", "--max-positions", "10", "a^&b^ <= (a&b)^"]) == 3


def test_pointed_top_is_input_error(capsys):
    assert run(["decide", "--mode", "pointed", "T <= a"]) == 2


def test_query_file_parsing():
    text = "# header\nmode: pointed\n1 <= a  # trailing\n\na == a*1\n"
    qs = parse_query_file(text)
    assert [q.lineno for q in qs] == [3, 5, 5]
    assert all(q.query.mode is Mode.POINTED for q in qs)
    assert qs[1].query.converse() == qs[2].query


@pytest.mark.parametrize("text, line", [("a <= b\nb\n", 2), ("a <= b\nmode: weird\n", 2),
                                        ("\n\na <= (b\n", 3)])
def test_query_file_diagnostics_are_line_anchored(text, line):
    with pytest.raises(InputError, match=f"f:{line}:"):
        parse_query_file(text, origin="f")


def test_json_golden(capsys):
    assert run(["decide", "--json", "-f", str(GOLDEN / "queries.txt")]) == 0
    got = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    for rec in got:
        assert set(rec) == {"lhs", "rhs", "mode", "valid", "positions_explored", "elapsed_ms"}
        assert rec["elapsed_ms"] >= 0
        rec["elapsed_ms"] = 0
    want = [json.loads(l) for l in (GOLDEN / "queries.jsonl").read_text().splitlines()]
    assert got == want


def test_jobs_keep_order(capsys):
    assert run(["decide", "--json", "--jobs", "2", "-f", str(GOLDEN / "queries.txt")]) == 0
    got = [json.loads(l)["lhs"] for l in capsys.readouterr().out.splitlines()]
    want = [json.loads(l)["lhs"] for l in (GOLDEN / "queries.jsonl").read_text().splitlines()]
    assert got == want


def test_cert_round_trip_in_fresh_process(tmp_path):
    cert = tmp_path / "out.dot"
    r = weihsim("decide", "--mode", "pointed", "--json", "--cert", str(cert), "a^&b^ <= (a&b)^")
    assert r.returncode == 0
    rec = json.loads(r.stdout)
    assert rec["valid"] and rec["cert_path"] == str(cert)
    r = weihsim("check-cert", str(cert))
    assert r.returncode == 0 and r.stdout.strip() == "ACCEPTED"


def test_spoiler_cert_round_trip(tmp_path):
    cert = tmp_path / "out.dot"
    assert run(["decide", "--cert", str(cert), "(b|c)*a <= b*a|c*a"]) == 0
    assert parse_dot(cert.read_text()).graph["winner"] == "spoiler"
    assert check_dot(cert.read_text()) == []


def test_several_certs_are_numbered(tmp_path, capsys):
    assert run(["decide", "--cert", str(tmp_path / "c.dot"), "a <= a", "a <= b"]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["c-1.dot", "c-2.dot"]


def test_tampered_cert_is_rejected():
    v = decide_pointed("a^&b^", "(a&b)^")
    text = emit_dot(v.game, v.certificate)
    lines = text.splitlines()
    edge = next(i for i, l in enumerate(lines) if 'label="fork"' in l)
    del lines[edge]
    assert check_dot("\n".join(lines)) != []
    # the same graph does not certify a Spoiler win
    assert check_dot(text.replace('winner="duplicator"', 'winner="spoiler"')) != []


def decide_pointed(lhs, rhs):
    from weihsim.decide import Query
    return decide(Query(parse(lhs), parse(rhs), Mode.POINTED))


def test_dot_styles():
    v = decide_pointed("a^&b^", "(a&b)^")
    cert = parse_dot(emit_dot(v.game, v.certificate))
    assert len(cert.nodes) == len(induced_nodes(v.game, v.certificate))
    owners = {n["owner"] for n in cert.nodes.values()}
    assert owners == {"duplicator", "spoiler"}
    assert {n["color"] for n in cert.nodes.values() if n["owner"] == "duplicator"} == {"violet"}
    assert any(n.get("peripheries") == "2" for n in cert.nodes.values())
    assert {e[2]["label"] for e in cert.edges} <= {"explore", "fork", "alea", "choose", "junk", "fill"}


def test_single_node_dot():
    from weihsim.decide import Query
    v = decide(Query(parse("1"), parse("1")))
    cert = parse_dot(emit_dot(v.game, v.certificate))
    assert len(cert.nodes) == 1 and cert.edges == []
    assert check_dot(emit_dot(v.game, v.certificate)) == []


def test_gen_round_trips_through_decide(tmp_path, capsys):
    qbf = tmp_path / "f.qbf"
    qbf.write_text("c forall x1 exists x2\n1 2 0\n-1 -2 0\n")
    for kind in ("qbf-pointed", "qbf-extended"):
        out = tmp_path / f"{kind}.txt"
        assert run(["gen", kind, str(qbf), "-o", str(out)]) == 0
        assert run(["decide", "-f", str(out), "--fail-on-invalid"]) == 0
    out = tmp_path / "dd.txt"
    assert run(["gen", "qbf-pointed", str(qbf), "--dediamond", "-o", str(out)]) == 0
    assert "^" not in out.read_text().splitlines()[-1]
    assert run(["gen", "expfamily", "1", "-o", str(tmp_path / "e.txt")]) == 0
    assert run(["decide", "-f", str(tmp_path / "e.txt"), "--fail-on-invalid"]) == 0
    assert run(["gen", "expfamily", "zero"]) == 2
    assert run(["gen", "qbf-pointed", str(tmp_path / "missing")]) == 2


def test_gen_axioms_corpus_is_valid(tmp_path, capsys):
    out = tmp_path / "ax.txt"
    assert run(["gen", "axioms", "--per-axiom", "2", "-o", str(out)]) == 0
    assert run(["decide", "-f", str(out), "--fail-on-invalid"]) == 0


def test_oracle_compare(capsys):
    assert run(["oracle-compare", "--count", "50"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_stdin_queries():
    r = weihsim("decide", stdin="a <= a | b\n")
    assert r.returncode == 0 and r.stdout.startswith("VALID")
