"""Selective, contrastive explanations for a resolved candidate.

The renderer diffs the standard trace against the misinterpreter trace and
reports only the spine of affected steps: corrective messages first, then
"So <expr> gives <value>." lines for the relevant nodes on the path from
the first affected step up to the program result.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import misconceptions
from .inference import Candidate
from .misconceptions import EMPTY, MisconceptionSet
from .semantics import EvalOutcome, TraceStep, evaluate
from .syntax import Expr, Program, SortCall, children, unparse, walk
from .values import JsNumber, JsValue, display, same_value


@dataclass(frozen=True)
class Explanation:
    messages: tuple[str, ...]
    steps: tuple[str, ...]
    final: str

    @property
    def lines(self) -> tuple[str, ...]:
        out = self.messages + self.steps
        if self.final:
            out = out + (self.final,)
        return out

    def as_text(self) -> str:
        return "\n".join(self.lines)

    def to_json(self) -> dict:
        return {
            "messages": list(self.messages),
            "steps": list(self.steps),
            "final": self.final,
        }


EMPTY_EXPLANATION = Explanation((), (), "")


def _step_map(out: EvalOutcome) -> dict[tuple[int, str], TraceStep]:
    return {(s.node_id, s.kind): s for s in out.trace}


def _parent_map(root: Expr) -> dict[int, int]:
    parents: dict[int, int] = {}
    for node in walk(root):
        for child in children(node):
            parents[child.node_id] = node.node_id
    return parents


def _companion_messages(m: MisconceptionSet, sigma: EvalOutcome) -> list[int]:
    """Message order: ascending flag ids, companions right after their owner.

    The sort companion (how string comparison orders numeric strings) is
    only worth stating when the surprising sort actually ordered numbers.
    """
    numeric_sort_seen = any(
        s.kind == "value"
        and s.coercions
        and "SortCompare" in s.coercions
        and s.inputs
        and all(isinstance(e, JsNumber) for e in getattr(s.inputs[0], "elems", ()))
        and len(getattr(s.inputs[0], "elems", ())) >= 2
        for s in sigma.trace
    )
    order: list[int] = []
    for mid in m:
        order.append(mid)
        for cid in misconceptions.by_id(mid).companion_ids:
            if cid in order or cid in m:
                continue
            if cid == 28 and not numeric_sort_seen:
                continue
            order.append(cid)
    return order


def explain(p: Program, cand: Candidate) -> Explanation:
    """Render the explanation for a candidate produced by inference on p."""
    if not cand.m:
        return EMPTY_EXPLANATION
    sigma = evaluate(p, EMPTY)
    counter = evaluate(p, cand.m)
    if not same_value(counter.result, cand.expected):
        raise ValueError(
            "candidate premise failed: program does not produce"
            f" {display(cand.expected)} under {cand.m}"
        )

    messages = tuple(
        misconceptions.by_id(mid).message
        for mid in _companion_messages(cand.m, sigma)
    )

    sigma_steps = _step_map(sigma)
    counter_steps = _step_map(counter)
    nodes = {node.node_id: node for node in walk(p.entry)}
    root_id = p.entry.node_id

    def relevant(key: tuple[int, str]) -> bool:
        s = sigma_steps.get(key)
        c = counter_steps.get(key)
        if c is not None and c.fired:
            return True
        if s is not None and c is not None:
            return not same_value(s.output, c.output)
        return False

    relevant_keys = [
        (s.node_id, s.kind) for s in sigma.trace if relevant((s.node_id, s.kind))
    ]
    # Fired flags can sit on nodes the standard trace never reaches (the
    # divergence then surfaces at the branch point), so only steps present
    # under the standard semantics are printable.
    if relevant_keys:
        start_node = relevant_keys[0][0]
    else:
        start_node = root_id

    parents = _parent_map(p.entry)
    spine = {start_node}
    cursor = start_node
    while cursor != root_id:
        cursor = parents[cursor]
        spine.add(cursor)

    steps: list[str] = []
    last_shown: str | None = None
    for s in sigma.trace:
        key = (s.node_id, s.kind)
        if s.node_id == root_id or s.node_id not in spine:
            continue
        if key not in relevant_keys:
            continue
        shown = display(s.output)
        fired_here = key in counter_steps and bool(counter_steps[key].fired)
        if not fired_here and shown == last_shown:
            continue  # agreeing ancestor of an already-printed value
        steps.append(f"So {unparse(nodes[s.node_id])} gives {shown}.")
        last_shown = shown

    final_value = display(sigma.result)
    if p.header is not None:
        final = f"So your program gives {final_value}."
    else:
        final = f"So {unparse(p.entry)} gives {final_value}."
    return Explanation(messages=messages, steps=tuple(steps), final=final)
