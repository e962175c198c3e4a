"""Synthesis and verification of diagnostic programs.

A diagnostic program for flag m is one where answering the misinterpreter
output implies holding m and vice versa, checked over all subsets of the
program's consulted closure up to a bound. Synthesis enumerates the
expression grammar in increasing AST size from a fixed literal pool and
returns the first verified program.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .misconceptions import EMPTY, MisconceptionSet, registry
from .semantics import consulted_closure, evaluate, subsets_of
from .syntax import (
    ArrayLit,
    Binary,
    Expr,
    Index,
    Lit,
    ObjectLit,
    Program,
    SortCall,
    Ternary,
    Unary,
    clone,
    renumber,
    unparse,
)
from .values import (
    FALSE,
    NULL,
    TRUE,
    UNDEFINED,
    JsNumber,
    JsString,
    JsValue,
    display,
    same_value,
)

DEFAULT_KAPPA_V = 3
DEFAULT_BUDGET = 7

# Fixed literal pool: the smallest set covering the quiz-table programs
# (the digit strings show up there as subscripts and comparison operands).
LITERAL_POOL: tuple[Expr, ...] = (
    Lit(value=UNDEFINED),
    Lit(value=NULL),
    Lit(value=TRUE),
    Lit(value=FALSE),
    Lit(value=JsNumber(0.0)),
    Lit(value=JsNumber(1.0)),
    Lit(value=JsNumber(2.0)),
    Lit(value=JsNumber(10.0)),
    Lit(value=JsString("")),
    Lit(value=JsString("0")),
    Lit(value=JsString("1")),
    Lit(value=JsString("2")),
    Lit(value=JsString("10")),
    Lit(value=JsString("abc")),
    Lit(value=JsString(",")),
    Lit(value=JsString("[")),
    ArrayLit(elems=()),
    ObjectLit(pairs=()),
)

_UNARY_OPS = ("typeof", "!", "+", "-")
_BINARY_OPS = ("===", "==", "+", "-", "<", ">=", "&&", "||", "??")

_MEMO_MAX = 4
_memo: dict[int, list[Expr]] = {}


def _gen(size: int) -> Iterator[Expr]:
    """Deterministic enumeration of all pool expressions of exactly `size`."""
    if size < 1:
        return
    if size in _memo:
        yield from _memo[size]
        return
    if size <= _MEMO_MAX:
        _memo[size] = list(_gen_fresh(size))
        yield from _memo[size]
        return
    yield from _gen_fresh(size)


def _gen_fresh(size: int) -> Iterator[Expr]:
    # Operator-rich shapes come first within a size; unary wrappers around
    # smaller programs mostly rediscover the same decision sites.
    if size == 1:
        yield from LITERAL_POOL
        return
    for op in _BINARY_OPS:
        for a in range(1, size - 1):
            for left in _gen(a):
                for right in _gen(size - 1 - a):
                    yield Binary(op=op, left=left, right=right)
    for a in range(1, size - 1):
        for left in _gen(a):
            for right in _gen(size - 1 - a):
                yield Index(target=left, subscript=right)
    for a in range(1, size - 1):
        for left in _gen(a):
            for right in _gen(size - 1 - a):
                yield ArrayLit(elems=(left, right))
    for a in range(1, size - 2):
        for b in range(1, size - 1 - a):
            c = size - 1 - a - b
            for ca in _gen(a):
                for cb in _gen(b):
                    for cc in _gen(c):
                        yield Ternary(cond=ca, then=cb, other=cc)
    for op in _UNARY_OPS:
        for sub in _gen(size - 1):
            yield Unary(op=op, operand=sub)
    for sub in _gen(size - 1):
        yield SortCall(target=sub)
    for sub in _gen(size - 1):
        yield ArrayLit(elems=(sub,))


def enumerate_programs(max_size: int) -> Iterator[Expr]:
    """All pool expressions with AST size up to `max_size`, smallest first."""
    for size in range(1, max_size + 1):
        yield from _gen(size)


@dataclass(frozen=True)
class DiagnosticQuestion:
    target: int
    program: Program
    source: str
    true_output: JsValue
    distractor: JsValue
    extras: tuple[tuple[MisconceptionSet, JsValue], ...]
    verified_bound: int
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "misconception": self.target,
            "program_source": self.source,
            "true_output": display(self.true_output),
            "distractors": [
                {"set": [self.target], "value": display(self.distractor)},
                *(
                    {"set": list(m), "value": display(v)}
                    for m, v in self.extras
                ),
            ],
            "verified_bound": self.verified_bound,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def verify_diagnostic(
    p: Program | Expr,
    mid: int,
    kappa_v: int = DEFAULT_KAPPA_V,
    excluded: MisconceptionSet = EMPTY,
) -> MisconceptionSet | None:
    """None when the diagnostic is sound to the bound, else a counterexample.

    A counterexample M violates the equivalence "answers the distractor iff
    the mental model contains the target": one containing the target is a
    false negative (masking), one without it a false positive. `excluded`
    drops flags the respondent is assumed not to hold.
    """
    if mid in excluded:
        raise ValueError("cannot exclude the target misconception")
    r = evaluate(p).result
    r_tilde = evaluate(p, MisconceptionSet.of(mid)).result
    if same_value(r, r_tilde):
        # No diagnostic power: holding the target never changes the answer.
        return MisconceptionSet.of(mid)
    closure = consulted_closure(p, MisconceptionSet.of(mid), kappa_v)
    for m in subsets_of(closure - excluded, kappa_v):
        got = same_value(evaluate(p, m).result, r_tilde)
        if got != (mid in m):
            return m
    return None


def _collect_extras(
    p: Program | Expr,
    mid: int,
    r: JsValue,
    r_tilde: JsValue,
    kappa_v: int,
    excluded: MisconceptionSet,
) -> tuple[tuple[MisconceptionSet, JsValue], ...]:
    closure = consulted_closure(p, MisconceptionSet.of(mid), kappa_v)
    extras: list[tuple[MisconceptionSet, JsValue]] = []
    for m in subsets_of(closure - excluded, kappa_v):
        if not m:
            continue
        v = evaluate(p, m).result
        if same_value(v, r) or same_value(v, r_tilde):
            continue
        if any(same_value(v, seen) for _, seen in extras):
            continue
        extras.append((m, v))
    return tuple(extras)


@dataclass(frozen=True)
class SynthesisReport:
    target: int
    question: DiagnosticQuestion | None
    reason: str | None
    elapsed_ms: float
    candidates: int
    divergent: int


# Stop after this many divergent candidates all fail verification: some
# other flag keeps masking or mimicking the target, and larger programs
# only add the same coercion sites.
_ENTANGLEMENT_LIMIT = 400
_CANDIDATE_CAP = 500_000


def synthesize_diagnostic(
    mid: int,
    budget: int = DEFAULT_BUDGET,
    kappa_v: int = DEFAULT_KAPPA_V,
    excluded: MisconceptionSet = EMPTY,
) -> DiagnosticQuestion | None:
    """First verified diagnostic for the target, or None within the budget."""
    return _synthesize(mid, budget, kappa_v, excluded).question


def _synthesize(
    mid: int,
    budget: int,
    kappa_v: int,
    excluded: MisconceptionSet,
) -> SynthesisReport:
    if budget < 1:
        return SynthesisReport(mid, None, "budget exhausted: empty grammar", 0.0, 0, 0)
    t0 = time.perf_counter()
    target = MisconceptionSet.of(mid)
    scanned = divergent = 0
    blockers: Counter[int] = Counter()
    for expr in enumerate_programs(budget):
        scanned += 1
        if scanned > _CANDIDATE_CAP:
            break
        renumber(expr)
        out_m = evaluate(expr, target)
        if mid not in out_m.consulted:
            continue
        r = evaluate(expr).result
        if same_value(r, out_m.result):
            continue
        divergent += 1
        counterexample = verify_diagnostic(expr, mid, kappa_v, excluded)
        if counterexample is None:
            chosen = clone(expr)
            renumber(chosen)
            program = Program(entry=chosen, source=unparse(chosen))
            extras = _collect_extras(
                program, mid, r, out_m.result, kappa_v, excluded
            )
            elapsed = (time.perf_counter() - t0) * 1000
            question = DiagnosticQuestion(
                target=mid,
                program=program,
                source=program.source,
                true_output=r,
                distractor=out_m.result,
                extras=extras,
                verified_bound=kappa_v,
                elapsed_ms=elapsed,
            )
            return SynthesisReport(mid, question, None, elapsed, scanned, divergent)
        for blocker in counterexample:
            if blocker != mid:
                blockers[blocker] += 1
        if divergent >= _ENTANGLEMENT_LIMIT:
            elapsed = (time.perf_counter() - t0) * 1000
            worst = blockers.most_common(1)
            reason = "inherent entanglement"
            if worst:
                reason += f": counterexamples keep involving flag {worst[0][0]}"
            return SynthesisReport(mid, None, reason, elapsed, scanned, divergent)
    elapsed = (time.perf_counter() - t0) * 1000
    reason = f"budget exhausted at AST size {budget}"
    if divergent:
        worst = blockers.most_common(1)
        if worst:
            reason = (
                "inherent entanglement"
                f": counterexamples keep involving flag {worst[0][0]}"
            )
    return SynthesisReport(mid, None, reason, elapsed, scanned, divergent)


@dataclass(frozen=True)
class InventoryReport:
    entries: tuple[SynthesisReport, ...]
    elapsed_ms: float

    @property
    def succeeded(self) -> tuple[SynthesisReport, ...]:
        return tuple(e for e in self.entries if e.question is not None)

    @property
    def failed(self) -> tuple[SynthesisReport, ...]:
        return tuple(e for e in self.entries if e.question is None)

    def to_markdown(self) -> str:
        lines = [
            "| # | Program | True output | Distractor(s) | Time |",
            "|---|---------|-------------|----------------|------|",
        ]
        for e in self.entries:
            if e.question is None:
                lines.append(
                    f"| {e.target} | (none: {e.reason}) | | |"
                    f" {e.elapsed_ms:.0f} ms |"
                )
                continue
            q = e.question
            others = ", ".join(display(v) for _, v in q.extras)
            distractors = display(q.distractor) + (f", {others}" if others else "")
            lines.append(
                f"| {q.target} | `{q.source}` | {display(q.true_output)} |"
                f" {distractors} | {e.elapsed_ms:.0f} ms |"
            )
        return "\n".join(lines)


def build_inventory(
    budget: int = DEFAULT_BUDGET,
    kappa_v: int = DEFAULT_KAPPA_V,
    excluded: dict[int, MisconceptionSet] | None = None,
) -> InventoryReport:
    """Synthesize a diagnostic for every registry flag; failures keep reasons."""
    t0 = time.perf_counter()
    entries = []
    for m in registry():
        excl = (excluded or {}).get(m.id, EMPTY)
        entries.append(_synthesize(m.id, budget, kappa_v, excl))
    return InventoryReport(
        entries=tuple(entries), elapsed_ms=(time.perf_counter() - t0) * 1000
    )
