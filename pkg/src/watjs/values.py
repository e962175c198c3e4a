"""Runtime value model for the modeled JavaScript subset.

Values are immutable after construction. Objects and arrays carry an
identity handle (`oid`) allocated per evaluation; structural equality
ignores it, reference equality inside the language uses it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field


class JsValue:
    """Base class for all runtime values."""

    __slots__ = ()


@dataclass(frozen=True)
class JsUndefined(JsValue):
    def __repr__(self) -> str:
        return "undefined"


@dataclass(frozen=True)
class JsNull(JsValue):
    def __repr__(self) -> str:
        return "null"


@dataclass(frozen=True)
class JsBoolean(JsValue):
    value: bool

    def __repr__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True, eq=False)
class JsNumber(JsValue):
    value: float

    # Reflexive even for NaN, so equal evaluations compare equal.
    def __eq__(self, other) -> bool:
        if not isinstance(other, JsNumber):
            return NotImplemented
        if math.isnan(self.value) and math.isnan(other.value):
            return True
        return self.value == other.value

    def __hash__(self) -> int:
        if math.isnan(self.value):
            return hash(("JsNumber", "NaN"))
        return hash(("JsNumber", self.value))

    def __repr__(self) -> str:
        return number_to_string(self.value)


@dataclass(frozen=True)
class JsString(JsValue):
    value: str

    def __repr__(self) -> str:
        return quote_string(self.value)


@dataclass(frozen=True)
class JsObject(JsValue):
    oid: int
    props: tuple[tuple[str, JsValue], ...] = ()

    def get(self, key: str) -> JsValue | None:
        for k, v in self.props:
            if k == key:
                return v
        return None

    def __repr__(self) -> str:
        return display(self)


@dataclass(frozen=True)
class JsArray(JsValue):
    oid: int
    elems: tuple[JsValue, ...] = ()

    def __repr__(self) -> str:
        return display(self)


@dataclass(frozen=True)
class JsError(JsValue):
    """A language-level error outcome (only misinterpreter semantics raise).

    Compared like any other result; errors are equal only to errors of the
    same kind.
    """

    kind: str

    def __repr__(self) -> str:
        return "(error)"


UNDEFINED = JsUndefined()
NULL = JsNull()
TRUE = JsBoolean(True)
FALSE = JsBoolean(False)
NAN = JsNumber(float("nan"))


def number(x: float) -> JsNumber:
    return JsNumber(float(x))


def string(s: str) -> JsString:
    return JsString(s)


def boolean(b: bool) -> JsBoolean:
    return TRUE if b else FALSE


_EXP_FIX = re.compile(r"e([+-])0*(\d)")


def number_to_string(x: float) -> str:
    """Shortest round-trip decimal rendering, JS flavored.

    Small integers render without a fractional part; negative zero renders
    as "0"; NaN/Infinity render by name.
    """
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0:
        return "0"
    if x == int(x) and abs(x) < 1e21:
        return str(int(x))
    out = repr(x)
    # JS writes exponents without leading zeros: 1e-07 -> 1e-7.
    return _EXP_FIX.sub(lambda m: "e" + m.group(1) + m.group(2), out)


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def quote_string(s: str) -> str:
    return '"' + "".join(_ESCAPES.get(ch, ch) for ch in s) + '"'


def display(v: JsValue) -> str:
    """REPL rendering of a value (distinct from in-language ToString).

    Strings are quoted, arrays show bracketed comma-space separated
    elements, objects show literal syntax, errors show "(error)".
    """
    if isinstance(v, JsUndefined):
        return "undefined"
    if isinstance(v, JsNull):
        return "null"
    if isinstance(v, JsBoolean):
        return "true" if v.value else "false"
    if isinstance(v, JsNumber):
        return number_to_string(v.value)
    if isinstance(v, JsString):
        return quote_string(v.value)
    if isinstance(v, JsArray):
        return "[" + ", ".join(display(e) for e in v.elems) + "]"
    if isinstance(v, JsObject):
        if not v.props:
            return "{}"
        return "{" + ", ".join(f"{k}: {display(val)}" for k, val in v.props) + "}"
    if isinstance(v, JsError):
        return "(error)"
    raise TypeError(f"not a JsValue: {v!r}")


def same_value(a: JsValue, b: JsValue) -> bool:
    """Deep structural equality on results.

    Ignores object identity; NaN equals NaN here (this is the comparison
    used to decide whether two evaluation results differ, not the
    language's own equality).
    """
    if isinstance(a, JsNumber) and isinstance(b, JsNumber):
        if math.isnan(a.value) and math.isnan(b.value):
            return True
        return a.value == b.value
    if isinstance(a, JsArray) and isinstance(b, JsArray):
        return len(a.elems) == len(b.elems) and all(
            same_value(x, y) for x, y in zip(a.elems, b.elems)
        )
    if isinstance(a, JsObject) and isinstance(b, JsObject):
        if len(a.props) != len(b.props):
            return False
        return all(
            ka == kb and same_value(va, vb)
            for (ka, va), (kb, vb) in zip(a.props, b.props)
        )
    if isinstance(a, JsError) and isinstance(b, JsError):
        return a.kind == b.kind
    return a == b


def is_nan(v: JsValue) -> bool:
    return isinstance(v, JsNumber) and math.isnan(v.value)


def is_empty_composite(v: JsValue) -> bool:
    if isinstance(v, JsArray):
        return not v.elems
    if isinstance(v, JsObject):
        return not v.props
    return False
