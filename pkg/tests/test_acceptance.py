"""Acceptance suite: one test per criterion, timed where the bar says so.

`test_criterion_3_stated_b_program_value` is expected to fail: the stated
expected-value pair for the four-argument comparison program is not
producible by any flag set (see notes in the repository root README and
the test docstring); the rest of criterion 3 lives in its own test.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ThreadPoolExecutor

import pytest

from watjs.diagnostics import build_inventory, verify_diagnostic
from watjs.explain import explain
from watjs.inference import infer_all, infer_map, resolve_display
from watjs.misconceptions import EMPTY, MisconceptionSet, by_id
from watjs.parser import parse
from watjs.semantics import consulted_closure, evaluate, subsets_of
from watjs.values import display, same_value

from corpus import (
    A_STR,
    A_TRUTHY,
    B_PROG,
    C_IDX,
    C_LEX,
    C_VAR,
    C_VAR_SORT,
    DIAG_ROWS,
    GOLDEN_SCENARIOS,
)
from genprog import random_program


def test_criterion_1_golden_semantics_suite():
    """Standard semantics matches every published output value, < 1 s."""
    t0 = time.perf_counter()
    for source, want in GOLDEN_SCENARIOS:
        assert display(evaluate(parse(source)).result) == want, source
    for row in DIAG_ROWS:
        got = display(evaluate(parse(row.source)).result)
        assert got == row.true_display, f"row {row.mid}: {got}"
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_misinterpreter_suite():
    """Singleton flags reproduce the first distractor of every quiz row and
    the extra distractors all arise within two simultaneous flags, < 5 s."""
    t0 = time.perf_counter()
    for row in DIAG_ROWS:
        p = parse(row.source)
        got = display(evaluate(p, MisconceptionSet.of(row.mid)).result)
        assert got == row.distractor_display, f"row {row.mid}: {got}"
        if not row.extras:
            continue
        observed = {
            display(evaluate(p, m).result)
            for m in subsets_of(consulted_closure(p), 2)
        }
        for flags, want in row.extras:
            assert display(evaluate(p, MisconceptionSet.of(*flags)).result) == want
            assert want in observed, f"row {row.mid} extra {want}"
    assert time.perf_counter() - t0 < 5.0


def _timed_candidates(source):
    t0 = time.perf_counter()
    cands = infer_all(parse(source))
    assert time.perf_counter() - t0 < 1.0, "inference over budget"
    return cands


def test_criterion_3_inference_scenarios():
    # (a) the sorted-index warm-up has exactly one mental model.
    cands = _timed_candidates(C_IDX)
    assert len(cands) == 1
    assert cands[0].m == MisconceptionSet.of(11)
    assert cands[0].expected_display == "1"

    # (b) the index-1 variant offers exactly the three expected values.
    cands = _timed_candidates(C_LEX)
    assert {c.expected_display for c in cands} == {"10", "3", "4"}

    # (c) the comparison program: structural equality explains "hello",
    # the typeof flag explains the other expectation.
    cands = _timed_candidates(B_PROG)
    by_value = {c.expected_display: c.m for c in cands}
    assert by_value['"hello"'] == MisconceptionSet.of(31)
    assert set(by_value) == {'"hello"', '"null/undefined"'}
    assert by_value['"null/undefined"'] == MisconceptionSet.of(1)

    # (d) the concatenation program surfaces the three published
    # expectations with the published flag sets.
    cands = _timed_candidates(A_STR)
    by_value = {c.expected_display: c.m for c in cands}
    assert by_value['"Answers:[true,null][false]"'] == MisconceptionSet.of(6, 22)
    assert by_value['"Answers:true,nullfalse"'] == MisconceptionSet.of(6)
    assert by_value['"Answers:[true,][false]"'] == MisconceptionSet.of(22)

    # (e) the truthiness program includes the false expectation, and its
    # string expectations never carry the truthiness message.
    cands = _timed_candidates(A_TRUTHY)
    by_value = {c.expected_display: c.m for c in cands}
    assert by_value["false"] == MisconceptionSet.of(4)
    for shown in ('"[2,undefined,2]"', '"2,undefined,2"', '"[2,,2]"'):
        assert shown in by_value
        ex = explain(parse(A_TRUTHY), resolve_display(cands, shown))
        assert by_id(4).message not in ex.messages


def test_criterion_3_stated_b_program_value():
    """KNOWN RED: the stated pair {"hello", "null/object"}, verbatim.

    Flag 1 rewrites typeof(null) only, and the worked explanation for this
    very program ends with "object/undefined", so its contrastive
    counterfactual is "null/undefined". "null/object" would need a flag
    that rewrites typeof(undefined), which none of the 32 defines. The
    stated pair is therefore unattainable; this test records the gap
    honestly instead of bending the engine to it (see README, Known
    divergences).
    """
    cands = infer_all(parse(B_PROG))
    assert {c.expected_display for c in cands} == {'"hello"', '"null/object"'}


def test_criterion_4_distinctness_against_brute_force():
    """On 200 random programs the search equals the filtered brute force."""

    def oracle(program):
        base = evaluate(program).result
        ids = consulted_closure(program).ids()
        accepted = []
        for k in range(1, 4):
            for combo in itertools.combinations(ids, k):
                m = MisconceptionSet.of(*combo)
                r = evaluate(program, m).result
                if same_value(r, base):
                    continue
                fresh = all(not same_value(r, rv) for _, rv in accepted)
                nonsuper = all(not pm.issubset(m) for pm, _ in accepted)
                if fresh or nonsuper:
                    accepted.append((m, r))
        return [(m.ids(), display(r)) for m, r in accepted]

    rng = random.Random(20240817)
    mismatches = 0
    for _ in range(200):
        program = random_program(rng, max_size=9)
        got = [
            (c.m.ids(), c.expected_display)
            for c in infer_all(program, max_candidates=None)
        ]
        if got != oracle(program):
            mismatches += 1
    assert mismatches == 0


def test_criterion_5_selectivity():
    # The null-expectation explanation never touches reference equality.
    p = parse(B_PROG)
    cands = infer_all(p)
    ex = explain(p, resolve_display(cands, '"null/undefined"'))
    joined = " ".join(ex.lines)
    assert "{} == {}" not in joined
    assert by_id(31).message not in ex.messages
    assert "reference" not in joined

    # String expectations for the truthiness program never mention it.
    p = parse(A_TRUTHY)
    cands = infer_all(p)
    for shown in ('"[2,undefined,2]"', '"2,undefined,2"', '"[2,,2]"'):
        ex = explain(p, resolve_display(cands, shown))
        assert "truthy" not in " ".join(ex.lines).lower()
        assert by_id(4).message not in ex.messages


def test_criterion_6_diagnostics():
    """Verification catches the false positive, passes the fixed program,
    and synthesis covers at least 28 of 32 flags within ten minutes."""
    counterexample = verify_diagnostic(parse("([] || true)"), 4)
    assert counterexample is not None
    assert 18 in counterexample and 4 not in counterexample
    assert verify_diagnostic(parse('([] ? [] : "abc")'), 4, kappa_v=3) is None

    t0 = time.perf_counter()
    report = build_inventory(budget=7, kappa_v=3)
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0
    assert len(report.succeeded) >= 28
    for entry in report.failed:
        assert entry.reason, f"failure for {entry.target} carries no reason"
    for entry in report.succeeded:
        q = entry.question
        assert verify_diagnostic(q.program, q.target, q.verified_bound) is None


def test_criterion_7_engine_purity():
    """1000 evaluations of each golden program across 8 threads agree."""
    programs = [parse(s) for s, _ in GOLDEN_SCENARIOS]
    programs += [parse(r.source) for r in DIAG_ROWS]

    def check(program, reference):
        out = evaluate(program)
        return (
            same_value(out.result, reference.result)
            and out.trace == reference.trace
            and out.consulted == reference.consulted
        )

    with ThreadPoolExecutor(max_workers=8) as pool:
        for program in programs:
            reference = evaluate(program)
            results = list(
                pool.map(lambda _: check(program, reference), range(1000))
            )
            assert all(results)
