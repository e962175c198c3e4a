"""Evaluation of programs under any misconception set.

`evaluate(p, M)` runs the interpreter whose decision sites are switched by
the flags in M; the empty set gives standard semantics for the subset.
Every consulted decision site is recorded, which makes the bounded search
space of the inference and diagnostics modules exact.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass, field

from . import syntax
from .misconceptions import EMPTY, MisconceptionSet
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
)
from .values import (
    FALSE,
    NULL,
    TRUE,
    UNDEFINED,
    JsArray,
    JsBoolean,
    JsError,
    JsNull,
    JsNumber,
    JsObject,
    JsString,
    JsUndefined,
    JsValue,
    boolean,
    display,
    is_empty_composite,
    is_nan,
    number,
    number_to_string,
    same_value,
    string,
)


@dataclass(frozen=True)
class TraceStep:
    """One recorded evaluation event, in post-order.

    `kind` is "value" for an operator node's own result and "coerced" for a
    string coercion of an operand, attributed to the operand's node.
    """

    node_id: int
    span: tuple[int, int]
    kind: str
    coercions: tuple[str, ...]
    inputs: tuple[JsValue, ...]
    output: JsValue
    fired: MisconceptionSet


@dataclass(frozen=True)
class EvalOutcome:
    result: JsValue
    trace: tuple[TraceStep, ...]
    consulted: MisconceptionSet

    @property
    def is_error(self) -> bool:
        return isinstance(self.result, JsError)


class _LangError(Exception):
    def __init__(self, kind: str):
        self.kind = kind


class _NodeRecord:
    __slots__ = ("coercions", "fired")

    def __init__(self):
        self.coercions: list[str] = []
        self.fired = 0


class _Ctx:
    """Mutable evaluation state: active set, trace, consulted sites."""

    __slots__ = ("mbits", "steps", "consulted_bits", "_oid", "_stack")

    def __init__(self, m: MisconceptionSet):
        self.mbits = m.bits
        self.steps: list[TraceStep] = []
        self.consulted_bits = 0
        self._oid = 0
        self._stack: list[_NodeRecord] = []

    def active(self, mid: int) -> bool:
        """Record that decision site `mid` was consulted; report membership."""
        bit = 1 << (mid - 1)
        self.consulted_bits |= bit
        if self.mbits & bit:
            if self._stack:
                self._stack[-1].fired |= bit
            return True
        return False

    def coerced(self, op: str) -> None:
        if self._stack:
            self._stack[-1].coercions.append(op)

    def fresh_oid(self) -> int:
        self._oid += 1
        return self._oid


_NUMERIC = re.compile(
    r"^[+-]?(?:Infinity|\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)$"
)

_JS_WS = " \t\n\r\f\v "


def _parse_number(s: str) -> float:
    s = s.strip(_JS_WS)
    if s == "":
        return 0.0
    if not _NUMERIC.match(s):
        return float("nan")
    if s.endswith("Infinity"):
        return float("-inf") if s.startswith("-") else float("inf")
    return float(s)


# -- coercion abstract operations -------------------------------------------


def to_boolean(ctx: _Ctx, v: JsValue) -> bool:
    if isinstance(v, (JsUndefined, JsNull)):
        return False
    if isinstance(v, JsBoolean):
        return v.value
    if isinstance(v, JsNumber):
        return not (v.value == 0 or math.isnan(v.value))
    if isinstance(v, JsString):
        return v.value != ""
    # Objects and arrays are truthy; flag 4 makes the empty ones test false.
    if is_empty_composite(v) and ctx.active(4):
        return False
    return True


def to_number(ctx: _Ctx, v: JsValue) -> float:
    if isinstance(v, JsUndefined):
        return 0.0 if ctx.active(12) else float("nan")
    if isinstance(v, JsNull):
        return float("nan") if ctx.active(13) else 0.0
    if isinstance(v, JsBoolean):
        return 1.0 if v.value else 0.0
    if isinstance(v, JsNumber):
        return v.value
    if isinstance(v, JsString):
        if v.value.strip(_JS_WS) == "" and ctx.active(23):
            return float("nan")
        return _parse_number(v.value)
    if isinstance(v, JsObject) and ctx.active(10):
        return 0.0
    return to_number(ctx, string(to_string(ctx, v)))


def to_string(ctx: _Ctx, v: JsValue) -> str:
    if isinstance(v, JsUndefined):
        return "" if ctx.active(9) else "undefined"
    if isinstance(v, JsNull):
        return "" if ctx.active(8) else "null"
    if isinstance(v, JsBoolean):
        return "true" if v.value else "false"
    if isinstance(v, JsNumber):
        if math.isnan(v.value) and ctx.active(7):
            return ""
        return number_to_string(v.value)
    if isinstance(v, JsString):
        return v.value
    if isinstance(v, JsArray):
        return _join_string(ctx, v)
    if isinstance(v, JsObject):
        if ctx.active(21):
            return display(v)
        return "[object Object]"
    raise TypeError(f"ToString of {v!r}")


def _join_string(ctx: _Ctx, arr: JsArray) -> str:
    parts = []
    for e in arr.elems:
        if isinstance(e, JsUndefined):
            parts.append("undefined" if ctx.active(5) else "")
        elif isinstance(e, JsNull):
            parts.append("null" if ctx.active(6) else "")
        else:
            parts.append(to_string(ctx, e))
    joined = ",".join(parts)
    if ctx.active(22):
        return "[" + joined + "]"
    return joined


def to_primitive(ctx: _Ctx, v: JsValue) -> JsValue:
    if isinstance(v, (JsObject, JsArray)):
        return string(to_string(ctx, v))
    return v


# -- string ordering ---------------------------------------------------------


def _char_rank(ctx: _Ctx, ch: str) -> int:
    r = ord(ch)
    if ch in "[]" and ctx.active(29):
        r += 0x40  # lands after "z"
    if ch == "," and ctx.active(30):
        r += 0x10000  # after every BMP letter, number, and delimiter
    return r


def _lex_less(ctx: _Ctx, a: str, b: str) -> bool:
    for ca, cb in zip(a, b):
        ra, rb = _char_rank(ctx, ca), _char_rank(ctx, cb)
        if ra != rb:
            return ra < rb
    return len(a) < len(b)


def _string_less(ctx: _Ctx, a: str, b: str) -> bool:
    """The two-string branch of <; flag 28 site."""
    if ctx.active(28):
        na, nb = to_number(ctx, string(a)), to_number(ctx, string(b))
        if not (math.isnan(na) or math.isnan(nb)):
            return na < nb
        # Not number-like on both sides: even under the misconception the
        # comparison stays lexicographic.
    return _lex_less(ctx, a, b)


def js_less_than(ctx: _Ctx, l: JsValue, r: JsValue) -> bool:
    lp, rp = to_primitive(ctx, l), to_primitive(ctx, r)
    if isinstance(lp, JsString) and isinstance(rp, JsString):
        return _string_less(ctx, lp.value, rp.value)
    ln, rn = to_number(ctx, lp), to_number(ctx, rp)
    if math.isnan(ln) or math.isnan(rn):
        return False
    return ln < rn


# -- equality ----------------------------------------------------------------


def _tag(v: JsValue) -> str:
    if isinstance(v, JsUndefined):
        return "undefined"
    if isinstance(v, JsNull):
        return "null"
    if isinstance(v, JsBoolean):
        return "boolean"
    if isinstance(v, JsNumber):
        return "number"
    if isinstance(v, JsString):
        return "string"
    return "object"


def strict_equals(ctx: _Ctx, l: JsValue, r: JsValue) -> bool:
    if _tag(l) != _tag(r):
        return False
    if isinstance(l, JsNumber) and isinstance(r, JsNumber):
        if math.isnan(l.value) and math.isnan(r.value):
            return ctx.active(3)
        return l.value == r.value
    if isinstance(l, (JsObject, JsArray)):
        if ctx.active(31):
            return same_value(l, r)
        return l.oid == r.oid  # type: ignore[union-attr]
    return l == r


def abstract_equals(ctx: _Ctx, l: JsValue, r: JsValue) -> bool:
    tl, tr = _tag(l), _tag(r)
    if tl == tr:
        return strict_equals(ctx, l, r)
    # Boolean-side coercion beats ==-is-strict when both are held, so the
    # boolean misconception stays observable in combination.
    if (tl == "boolean" or tr == "boolean") and ctx.active(26):
        return to_boolean(ctx, l) == to_boolean(ctx, r)
    if ctx.active(19):
        return strict_equals(ctx, l, r)
    if {tl, tr} == {"null", "undefined"}:
        return True
    if tl == "boolean":
        return abstract_equals(ctx, number(to_number(ctx, l)), r)
    if tr == "boolean":
        return abstract_equals(ctx, l, number(to_number(ctx, r)))
    if tl == "number" and tr == "string":
        return abstract_equals(ctx, l, number(to_number(ctx, r)))
    if tl == "string" and tr == "number":
        return abstract_equals(ctx, number(to_number(ctx, l)), r)
    if tl in ("number", "string") and tr == "object":
        return abstract_equals(ctx, l, to_primitive(ctx, r))
    if tl == "object" and tr in ("number", "string"):
        return abstract_equals(ctx, to_primitive(ctx, l), r)
    return False


# -- operators ---------------------------------------------------------------


def _binary_plus(ctx: _Ctx, node: Binary, l: JsValue, r: JsValue) -> JsValue:
    if isinstance(l, JsArray) and isinstance(r, JsArray):
        if ctx.active(17):
            return JsArray(ctx.fresh_oid(), l.elems + r.elems)
    if _tag(l) not in ("number", "string") and _tag(r) not in ("number", "string"):
        if ctx.active(20):
            raise _LangError("unsupported-operands")
    lp = _coerce_operand(ctx, node.left, l)
    rp = _coerce_operand(ctx, node.right, r)
    l_num, r_num = isinstance(lp, JsNumber), isinstance(rp, JsNumber)
    if (l_num or r_num) and not (l_num and r_num):
        if ctx.active(24):
            ctx.coerced("ToNumber")
            return number(to_number(ctx, lp) + to_number(ctx, rp))
    if isinstance(lp, JsString) or isinstance(rp, JsString):
        ctx.coerced("ToString")
        return string(to_string(ctx, lp) + to_string(ctx, rp))
    ctx.coerced("ToNumber")
    return number(to_number(ctx, lp) + to_number(ctx, rp))


def _coerce_operand(ctx: _Ctx, child: Expr, v: JsValue) -> JsValue:
    """ToPrimitive an operand; composites get a trace step on their node."""
    if not isinstance(v, (JsObject, JsArray)):
        return v
    rec = _NodeRecord()
    ctx._stack.append(rec)
    try:
        prim = string(to_string(ctx, v))
    finally:
        ctx._stack.pop()
    ctx.steps.append(
        TraceStep(
            node_id=child.node_id,
            span=child.span,
            kind="coerced",
            coercions=("ToPrimitive", "ToString", *rec.coercions),
            inputs=(v,),
            output=prim,
            fired=MisconceptionSet(rec.fired),
        )
    )
    return prim


def _sort(ctx: _Ctx, arr: JsArray) -> JsArray:
    elems = list(arr.elems)
    if len(elems) >= 2:
        numeric = ctx.active(14)
    else:
        numeric = False
    rest = [e for e in elems if not isinstance(e, JsUndefined)]
    tail = [e for e in elems if isinstance(e, JsUndefined)]
    if numeric:
        keyed = [(to_number(ctx, e), e) for e in rest]

        def less(a, b):
            if math.isnan(a[0]) or math.isnan(b[0]):
                return False
            return a[0] < b[0]

    else:
        ctx.coerced("ToString")
        keyed = [(to_string(ctx, e), e) for e in rest]

        def less(a, b):
            return _lex_less(ctx, a[0], b[0])

    def cmp(a, b):
        if less(a, b):
            return -1
        if less(b, a):
            return 1
        return 0

    keyed.sort(key=functools.cmp_to_key(cmp))  # timsort is stable
    return JsArray(ctx.fresh_oid(), tuple(e for _, e in keyed) + tuple(tail))


_CANONICAL_INDEX = re.compile(r"^(?:0|[1-9]\d*)$")


def _index(ctx: _Ctx, target: JsValue, subscript: JsValue) -> JsValue:
    if isinstance(target, (JsBoolean, JsNumber)):
        if ctx.active(25):
            raise _LangError("not-subscriptable")
        # Implicit wrapper objects with no own properties.
        return UNDEFINED
    if isinstance(target, (JsUndefined, JsNull)):
        return UNDEFINED
    ctx.coerced("ToString")
    key = to_string(ctx, subscript)
    if isinstance(target, JsObject):
        got = target.get(key)
        return got if got is not None else UNDEFINED
    # Arrays and strings: canonical numeric strings address positions.
    if _CANONICAL_INDEX.match(key) is None:
        return UNDEFINED
    if not isinstance(subscript, JsNumber) and ctx.active(32):
        return UNDEFINED
    idx = int(key)
    # A 1-indexed mental model shifts positive subscripts; subscript 0 has
    # no position before it and keeps the first element.
    if idx >= 1 and ctx.active(11):
        idx -= 1
    if isinstance(target, JsArray):
        if 0 <= idx < len(target.elems):
            return target.elems[idx]
        return UNDEFINED
    assert isinstance(target, JsString)
    if 0 <= idx < len(target.value):
        return string(target.value[idx])
    return UNDEFINED


# -- the evaluator -----------------------------------------------------------


def _eval(ctx: _Ctx, node: Expr) -> JsValue:
    rec = _NodeRecord()
    ctx._stack.append(rec)
    try:
        out, inputs = _eval_inner(ctx, node)
    finally:
        ctx._stack.pop()
    if not isinstance(node, Lit):
        ctx.steps.append(
            TraceStep(
                node_id=node.node_id,
                span=node.span,
                kind="value",
                coercions=tuple(rec.coercions),
                inputs=inputs,
                output=out,
                fired=MisconceptionSet(rec.fired),
            )
        )
    return out


def _eval_inner(ctx: _Ctx, node: Expr) -> tuple[JsValue, tuple[JsValue, ...]]:
    if isinstance(node, Lit):
        return node.value, ()
    if isinstance(node, ArrayLit):
        elems = tuple(_eval(ctx, c) for c in node.elems)
        return JsArray(ctx.fresh_oid(), elems), elems
    if isinstance(node, ObjectLit):
        props = tuple((k, _eval(ctx, v)) for k, v in node.pairs)
        return JsObject(ctx.fresh_oid(), props), tuple(v for _, v in props)
    if isinstance(node, Unary):
        v = _eval(ctx, node.operand)
        if node.op == "typeof":
            return _typeof(ctx, v), (v,)
        if node.op == "!":
            ctx.coerced("ToBoolean")
            return boolean(not to_boolean(ctx, v)), (v,)
        ctx.coerced("ToNumber")
        n = to_number(ctx, v)
        return number(n if node.op == "+" else -n), (v,)
    if isinstance(node, Binary):
        return _eval_binary(ctx, node)
    if isinstance(node, Ternary):
        c = _eval(ctx, node.cond)
        ctx.coerced("ToBoolean")
        branch = node.then if to_boolean(ctx, c) else node.other
        v = _eval(ctx, branch)
        return v, (c, v)
    if isinstance(node, Index):
        t = _eval(ctx, node.target)
        s = _eval(ctx, node.subscript)
        ctx.coerced("IndexLookup")
        return _index(ctx, t, s), (t, s)
    if isinstance(node, SortCall):
        t = _eval(ctx, node.target)
        if not isinstance(t, JsArray):
            # .sort() on a non-array is outside the modeled semantics; the
            # subset never throws, so it passes the value through.
            return t, (t,)
        ctx.coerced("SortCompare")
        return _sort(ctx, t), (t,)
    raise TypeError(f"not an Expr: {node!r}")


def _typeof(ctx: _Ctx, v: JsValue) -> JsValue:
    if isinstance(v, JsNull):
        if ctx.active(1):
            return string("null")
        return string("object")
    if isinstance(v, JsUndefined):
        return string("undefined")
    if isinstance(v, JsBoolean):
        return string("boolean")
    if isinstance(v, JsNumber):
        return string("number")
    if isinstance(v, JsString):
        return string("string")
    if isinstance(v, JsArray):
        if ctx.active(2):
            return string("array")
        return string("object")
    return string("object")


def _eval_binary(ctx: _Ctx, node: Binary) -> tuple[JsValue, tuple[JsValue, ...]]:
    op = node.op
    if op == "&&":
        l = _eval(ctx, node.left)
        ctx.coerced("ToBoolean")
        if not to_boolean(ctx, l):
            result = l
            if is_empty_composite(l) and ctx.active(4):
                result = FALSE
        else:
            result = _eval(ctx, node.right)
        if ctx.active(18):
            result = boolean(to_boolean(ctx, result))
        return result, (l,)
    if op == "||":
        l = _eval(ctx, node.left)
        ctx.coerced("ToBoolean")
        if to_boolean(ctx, l):
            result = l
        else:
            result = _eval(ctx, node.right)
        if ctx.active(18):
            result = boolean(to_boolean(ctx, result))
        return result, (l,)
    if op == "??":
        l = _eval(ctx, node.left)
        nullish = isinstance(l, (JsNull, JsUndefined))
        if l == FALSE and ctx.active(15):
            nullish = True
        if is_nan(l) and ctx.active(16):
            nullish = True
        result = _eval(ctx, node.right) if nullish else l
        return result, (l,)

    l = _eval(ctx, node.left)
    r = _eval(ctx, node.right)
    if op == "+":
        return _binary_plus(ctx, node, l, r), (l, r)
    if op == "-":
        ctx.coerced("ToNumber")
        return number(to_number(ctx, l) - to_number(ctx, r)), (l, r)
    if op == "===":
        return boolean(strict_equals(ctx, l, r)), (l, r)
    if op == "==":
        ctx.coerced("AbstractEquality")
        return boolean(abstract_equals(ctx, l, r)), (l, r)
    if op == "<":
        ctx.coerced("RelationalComparison")
        return boolean(js_less_than(ctx, l, r)), (l, r)
    if op == ">=":
        ctx.coerced("RelationalComparison")
        if ctx.active(27):
            gt = js_less_than(ctx, r, l)
            return boolean(gt or abstract_equals(ctx, l, r)), (l, r)
        return boolean(not js_less_than(ctx, l, r)), (l, r)
    raise TypeError(f"unknown operator {op!r}")


def evaluate(p: Program | Expr, m: MisconceptionSet = EMPTY) -> EvalOutcome:
    """Evaluate a closed program under the semantics selected by `m`."""
    entry = p.entry if isinstance(p, Program) else p
    ctx = _Ctx(m)
    try:
        result: JsValue = _eval(ctx, entry)
    except _LangError as err:
        result = JsError(err.kind)
    return EvalOutcome(
        result=result,
        trace=tuple(ctx.steps),
        consulted=MisconceptionSet(ctx.consulted_bits),
    )


def consulted_closure(
    p: Program | Expr, seed: MisconceptionSet = EMPTY, kappa: int = 3
) -> MisconceptionSet:
    """Least fixpoint of consulted sites over subsets up to size `kappa`.

    A flag outside the closure cannot affect evaluation in combination with
    at most `kappa` flags inside it.
    """
    closure = evaluate(p, seed).consulted | seed
    while True:
        grown = closure
        ids = closure.ids()
        for k in range(1, min(kappa, len(ids)) + 1):
            for combo in itertools.combinations(ids, k):
                grown = grown | evaluate(p, MisconceptionSet.of(*combo)).consulted
        if grown == closure:
            return closure
        closure = grown


def subsets_of(m: MisconceptionSet, max_size: int) -> list[MisconceptionSet]:
    """All subsets of `m` up to `max_size`, by cardinality then index order."""
    ids = m.ids()
    out = [EMPTY]
    for k in range(1, min(max_size, len(ids)) + 1):
        for combo in itertools.combinations(ids, k):
            out.append(MisconceptionSet.of(*combo))
    return out
