from __future__ import annotations

import json
import subprocess
import sys

from watjs.misconceptions import by_id

from corpus import C_IDX


def run_repl(lines: list[str], *args: str) -> str:
    proc = subprocess.run(
        [sys.executable, "-m", "watjs.cli", *args],
        input="\n".join(lines) + "\n",
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_eval_then_wat_then_pick():
    out = run_repl(["[2,7,1,8].sort()[1]", ":wat", "1"])
    assert "2" in out.splitlines()[0]
    assert "Did you expect 1?" in out
    assert by_id(11).message in out
    assert "So [2, 7, 1, 8].sort()[1] gives 2." in out


def test_wat_lists_numbered_expectations():
    out = run_repl(["[3,4,11,10].sort()[1]", ":wat", "2"])
    assert "Did you expect 10, 3 or 4?" in out
    assert "1) 10" in out and "2) 3" in out and "3) 4" in out
    assert by_id(14).message in out


def test_wat_without_expression_hints():
    out = run_repl([":wat"])
    assert "enter an expression first" in out


def test_diag_command():
    out = run_repl([":diag 23"])
    assert "true output: 0" in out
    assert "NaN" in out


def test_diag_usage_hint():
    out = run_repl([":diag nope"])
    assert "usage: :diag" in out


def test_parse_error_shows_caret_and_loop_survives():
    out = run_repl(["1 *", "2 - 1"])
    lines = out.splitlines()
    caret = next(i for i, line in enumerate(lines) if line.strip() == "^")
    assert lines[caret].index("^") == 2
    assert "1" in lines[caret + 1]


def test_json_mode_emits_line_delimited_events():
    out = run_repl(["[] + []", ":wat"], "--json")
    events = [json.loads(line) for line in out.strip().splitlines()]
    assert events[0]["event"] == "result"
    assert events[0]["display"] == '""'
    assert events[1]["event"] == "wat"
    assert {c["expected_display"] for c in events[1]["candidates"]} >= {"[]", "(error)"}


def test_flags_override_defaults():
    # kappa=1 keeps only singleton mental models: the pair {5, 22} vanishes.
    out = run_repl(
        ['console.log(f("x"));'.replace("f(\"x\")", "\"\" + [2,undefined,2]"), ":wat"],
        "--kappa",
        "1",
        "--json",
    )
    events = [json.loads(line) for line in out.strip().splitlines()]
    shown = {c["expected_display"] for c in events[1]["candidates"]}
    assert '"[2,undefined,2]"' not in shown
    assert '"2,undefined,2"' in shown
