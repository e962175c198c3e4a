"""AST for the modeled JavaScript subset, plus the canonical printer.

Each node carries a stable `node_id` (unique within a program, assigned in
pre-order) and a source span. Explanations quote the canonical printed
form, which parenthesizes every operator node the way the tool's output
does, so inlined function arguments print correctly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .values import JsValue, JsBoolean, JsNull, JsNumber, JsString, JsUndefined
from .values import number_to_string, quote_string

UNARY_OPS = ("typeof", "!", "+", "-")
BINARY_OPS = ("===", "==", "+", "-", "<", ">=", "&&", "||", "??")


@dataclass
class Expr:
    node_id: int = field(default=-1, compare=False)
    span: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Lit(Expr):
    value: JsValue = None  # type: ignore[assignment]


@dataclass
class ArrayLit(Expr):
    elems: tuple[Expr, ...] = ()


@dataclass
class ObjectLit(Expr):
    pairs: tuple[tuple[str, Expr], ...] = ()


@dataclass
class Unary(Expr):
    op: str = ""
    operand: Expr = None  # type: ignore[assignment]


@dataclass
class Binary(Expr):
    op: str = ""
    left: Expr = None  # type: ignore[assignment]
    right: Expr = None  # type: ignore[assignment]


@dataclass
class Ternary(Expr):
    cond: Expr = None  # type: ignore[assignment]
    then: Expr = None  # type: ignore[assignment]
    other: Expr = None  # type: ignore[assignment]


@dataclass
class Index(Expr):
    target: Expr = None  # type: ignore[assignment]
    subscript: Expr = None  # type: ignore[assignment]


@dataclass
class SortCall(Expr):
    target: Expr = None  # type: ignore[assignment]


@dataclass
class FunctionHeader:
    name: str
    params: tuple[str, ...]


@dataclass
class Program:
    """A closed expression, optionally born from a one-function program.

    When a function header is present the entry expression is the function
    body with the literal call arguments substituted for the parameters.
    """

    entry: Expr
    header: FunctionHeader | None = None
    source: str = ""


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, ArrayLit):
        return e.elems
    if isinstance(e, ObjectLit):
        return tuple(v for _, v in e.pairs)
    if isinstance(e, Unary):
        return (e.operand,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    if isinstance(e, Ternary):
        return (e.cond, e.then, e.other)
    if isinstance(e, Index):
        return (e.target, e.subscript)
    if isinstance(e, SortCall):
        return (e.target,)
    return ()


def walk(e: Expr):
    yield e
    for c in children(e):
        yield from walk(c)


def ast_size(e: Expr) -> int:
    return 1 + sum(ast_size(c) for c in children(e))


def renumber(e: Expr) -> None:
    """Assign pre-order node ids; unique and stable across re-evaluations."""
    counter = 0
    for node in walk(e):
        node.node_id = counter
        counter += 1


def clone(e: Expr) -> Expr:
    if isinstance(e, Lit):
        return Lit(e.node_id, e.span, e.value)
    if isinstance(e, ArrayLit):
        return ArrayLit(e.node_id, e.span, tuple(clone(c) for c in e.elems))
    if isinstance(e, ObjectLit):
        return ObjectLit(e.node_id, e.span, tuple((k, clone(v)) for k, v in e.pairs))
    if isinstance(e, Unary):
        return Unary(e.node_id, e.span, e.op, clone(e.operand))
    if isinstance(e, Binary):
        return Binary(e.node_id, e.span, e.op, clone(e.left), clone(e.right))
    if isinstance(e, Ternary):
        return Ternary(e.node_id, e.span, clone(e.cond), clone(e.then), clone(e.other))
    if isinstance(e, Index):
        return Index(e.node_id, e.span, clone(e.target), clone(e.subscript))
    if isinstance(e, SortCall):
        return SortCall(e.node_id, e.span, clone(e.target))
    raise TypeError(f"not an Expr: {e!r}")


def same_ast(a: Expr, b: Expr) -> bool:
    """Structural AST equality, ignoring node ids and spans."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Lit):
        from .values import same_value

        return same_value(a.value, b.value)
    if isinstance(a, Unary) and a.op != b.op:
        return False
    if isinstance(a, Binary) and a.op != b.op:
        return False
    if isinstance(a, ObjectLit):
        if tuple(k for k, _ in a.pairs) != tuple(k for k, _ in b.pairs):
            return False
    ca, cb = children(a), children(b)
    return len(ca) == len(cb) and all(same_ast(x, y) for x, y in zip(ca, cb))


_IDENT_KEY = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")


def _literal_token(v: JsValue) -> str:
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
    raise TypeError(f"not a literal value: {v!r}")


def unparse(e: Expr) -> str:
    """Canonical concrete form: operator nodes parenthesized, postfix bare."""
    if isinstance(e, Lit):
        return _literal_token(e.value)
    if isinstance(e, ArrayLit):
        return "[" + ", ".join(unparse(c) for c in e.elems) + "]"
    if isinstance(e, ObjectLit):
        if not e.pairs:
            return "{}"
        parts = []
        for k, v in e.pairs:
            key = k if _IDENT_KEY.match(k) else quote_string(k)
            parts.append(f"{key}: {unparse(v)}")
        return "{" + ", ".join(parts) + "}"
    if isinstance(e, Unary):
        if e.op == "typeof":
            return f"typeof({unparse(e.operand)})"
        return f"({e.op}{unparse(e.operand)})"
    if isinstance(e, Binary):
        return f"({unparse(e.left)} {e.op} {unparse(e.right)})"
    if isinstance(e, Ternary):
        return f"({unparse(e.cond)} ? {unparse(e.then)} : {unparse(e.other)})"
    if isinstance(e, Index):
        return f"{_postfix_target(e.target)}[{unparse(e.subscript)}]"
    if isinstance(e, SortCall):
        return f"{_postfix_target(e.target)}.sort()"
    raise TypeError(f"not an Expr: {e!r}")


def _postfix_target(t: Expr) -> str:
    # A bare number before ".sort" would lex as part of the number, and
    # typeof prints without outer parens although postfix binds tighter.
    if isinstance(t, Lit) and isinstance(t.value, JsNumber):
        return f"({unparse(t)})"
    if isinstance(t, Unary) and t.op == "typeof":
        return f"({unparse(t)})"
    return unparse(t)


def unparse_program(p: Program) -> str:
    return unparse(p.entry)
