"""Recover misconception sets that explain a surprising result.

The search enumerates subsets of the consulted closure in descending prior
order (for a uniform prior: increasing cardinality, ties broken by
ascending flag indices) and keeps candidates whose result diverges from
the standard one, subject to the distinctness rule: a new set must either
produce a fresh expected output or not be a superset of an accepted set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .misconceptions import EMPTY, MisconceptionSet, PriorModel
from .semantics import consulted_closure, evaluate, subsets_of
from .syntax import Program
from .values import JsValue, display, same_value

DEFAULT_KAPPA = 3
DEFAULT_MAX_CANDIDATES = 8


@dataclass(frozen=True)
class Candidate:
    """One admissible erroneous mental model for the asked-about program."""

    m: MisconceptionSet
    expected: JsValue
    prior: float
    rank: int

    @property
    def expected_display(self) -> str:
        return display(self.expected)


@dataclass(frozen=True)
class ClarificationSet:
    """Distinct expected values with the best candidate for each."""

    entries: tuple[tuple[JsValue, Candidate], ...]
    question: str


class UnknownExpectationError(LookupError):
    """The chosen expected value matches no candidate group."""


def _search_order(
    closure: MisconceptionSet, pm: PriorModel, kappa: int
) -> list[MisconceptionSet]:
    sets = [m for m in subsets_of(closure, kappa) if m]
    # Descending prior; cardinality then index order breaks exact ties so
    # results never depend on dict/hash order.
    sets.sort(key=lambda m: (-pm.log_prior(m), len(m), m.ids()))
    return sets


def _admit(
    accepted: list[Candidate], m: MisconceptionSet, result: JsValue
) -> bool:
    fresh = all(not same_value(result, c.expected) for c in accepted)
    non_superset = all(not c.m.issubset(m) for c in accepted)
    return fresh or non_superset


def infer_all(
    p: Program,
    pm: PriorModel | None = None,
    kappa: int = DEFAULT_KAPPA,
    max_candidates: int | None = DEFAULT_MAX_CANDIDATES,
) -> list[Candidate]:
    """All admissible candidates in search order, up to `max_candidates`."""
    pm = pm or PriorModel.uniform()
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    base = evaluate(p).result
    closure = consulted_closure(p, EMPTY, kappa)
    accepted: list[Candidate] = []
    for m in _search_order(closure, pm, kappa):
        if max_candidates is not None and len(accepted) >= max_candidates:
            break
        result = evaluate(p, m).result
        if same_value(result, base):
            continue
        if not _admit(accepted, m, result):
            continue
        accepted.append(
            Candidate(m=m, expected=result, prior=pm.prior(m), rank=len(accepted) + 1)
        )
    return accepted


def infer_map(
    p: Program,
    pm: PriorModel | None = None,
    kappa: int = DEFAULT_KAPPA,
) -> Candidate | None:
    """The maximum-prior misconception set whose result diverges, if any."""
    found = infer_all(p, pm, kappa, max_candidates=1)
    return found[0] if found else None


def clarify(cands: list[Candidate]) -> ClarificationSet:
    """Group candidates by expected value and render the question.

    Each group keeps its best (first-searched, hence highest-prior)
    candidate. Groups are listed in ascending display-text order, which is
    deterministic and independent of the search tie-breaking.
    """
    if not cands:
        raise ValueError("clarify needs at least one candidate")
    groups: list[tuple[JsValue, Candidate]] = []
    for cand in cands:
        if any(same_value(cand.expected, v) for v, _ in groups):
            continue
        groups.append((cand.expected, cand))
    groups.sort(key=lambda pair: display(pair[0]))
    shown = [display(v) for v, _ in groups]
    if len(shown) == 1:
        question = f"Did you expect {shown[0]}?"
    else:
        question = f"Did you expect {', '.join(shown[:-1])} or {shown[-1]}?"
    return ClarificationSet(entries=tuple(groups), question=question)


def resolve(cands: list[Candidate], chosen_expected: JsValue) -> Candidate:
    """Best candidate whose expected value structurally equals the choice."""
    best: Candidate | None = None
    for cand in cands:
        if same_value(cand.expected, chosen_expected):
            if best is None or cand.rank < best.rank:
                best = cand
    if best is None:
        raise UnknownExpectationError(
            f"unknown expectation: {display(chosen_expected)}"
        )
    return best


def resolve_display(cands: list[Candidate], expected_display: str) -> Candidate:
    """Resolve by rendered expected value (the wire format of the service)."""
    for cand in cands:
        if cand.expected_display == expected_display:
            return resolve(cands, cand.expected)
    raise UnknownExpectationError(f"unknown expectation: {expected_display}")


def brute_force_candidates(
    p: Program, kappa: int = DEFAULT_KAPPA
) -> list[tuple[MisconceptionSet, JsValue]]:
    """Oracle enumeration: all divergent subsets of the closure, unfiltered.

    Plain exhaustive evaluation in (cardinality, index) order; used by
    tests to cross-check the search path.
    """
    base = evaluate(p).result
    out = []
    for m in subsets_of(consulted_closure(p, EMPTY, kappa), kappa):
        if not m:
            continue
        r = evaluate(p, m).result
        if not same_value(r, base):
            out.append((m, r))
    return out
