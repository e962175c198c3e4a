"""Parser for the modeled JavaScript subset.

Accepts a bare expression, a `console.log(expr)` wrapper, or a single
function declaration followed by one `console.log(f(...))` call with
literal-only arguments; the call is inlined by capture-free substitution,
yielding a closed expression.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax
from .syntax import (
    ArrayLit,
    Binary,
    Expr,
    FunctionHeader,
    Index,
    Lit,
    ObjectLit,
    Program,
    SortCall,
    Ternary,
    Unary,
)
from .values import FALSE, NULL, TRUE, UNDEFINED, JsNumber, JsString


class JsSyntaxError(ValueError):
    """Syntax error with a character offset into the source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.message = message
        self.position = position


class UnsupportedConstructError(JsSyntaxError):
    """A construct outside the modeled subset; names the construct."""

    def __init__(self, construct: str, position: int):
        super().__init__(f"unsupported construct: {construct}", position)
        self.construct = construct


@dataclass(frozen=True)
class Token:
    kind: str  # num | str | ident | punct | eof
    text: str
    pos: int
    value: object = None


_PUNCT3 = ("===",)
_PUNCT2 = ("==", ">=", "&&", "||", "??")
_PUNCT1 = "()[]{},:;?.!+-<"
_UNSUPPORTED1 = {
    "*": "operator '*'",
    "/": "operator '/'",
    "%": "operator '%'",
    ">": "operator '>'",
    "=": "assignment",
    "&": "operator '&'",
    "|": "operator '|'",
}

_NUM = re.compile(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f\v":
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise JsSyntaxError("unterminated comment", i)
            i = j + 2
            continue
        if ch in "'\"":
            s, j = _read_string(source, i)
            tokens.append(Token("str", source[i:j], i, s))
            i = j
            continue
        if ch.isdigit():
            m = _NUM.match(source, i)
            assert m is not None
            tokens.append(Token("num", m.group(), i, float(m.group())))
            i = m.end()
            continue
        if _IDENT.match(ch):
            m = _IDENT.match(source, i)
            assert m is not None
            tokens.append(Token("ident", m.group(), i))
            i = m.end()
            continue
        matched = False
        for p in _PUNCT3 + _PUNCT2:
            if source.startswith(p, i):
                tokens.append(Token("punct", p, i))
                i += len(p)
                matched = True
                break
        if matched:
            continue
        if ch in _UNSUPPORTED1:
            raise UnsupportedConstructError(_UNSUPPORTED1[ch], i)
        if ch in _PUNCT1:
            tokens.append(Token("punct", ch, i))
            i += 1
            continue
        raise JsSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(Token("eof", "", n))
    return tokens


_STR_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "b": "\b", "f": "\f"}


def _read_string(source: str, start: int) -> tuple[str, int]:
    quote = source[start]
    out: list[str] = []
    i = start + 1
    while i < len(source):
        ch = source[i]
        if ch == quote:
            return "".join(out), i + 1
        if ch == "\\":
            if i + 1 >= len(source):
                break
            esc = source[i + 1]
            out.append(_STR_ESCAPES.get(esc, esc))
            i += 2
            continue
        if ch == "\n":
            raise JsSyntaxError("unterminated string literal", start)
        out.append(ch)
        i += 1
    raise JsSyntaxError("unterminated string literal", start)


_KEYWORD_LITERALS = {
    "undefined": UNDEFINED,
    "null": NULL,
    "true": TRUE,
    "false": FALSE,
}

_RESERVED_UNSUPPORTED = {
    "var", "let", "const", "if", "else", "for", "while", "new", "this",
    "class", "delete", "in", "instanceof", "void", "switch", "do", "try",
}


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            raise JsSyntaxError(f"expected {text!r}", t.pos)
        return self.next()

    def at(self, text: str) -> bool:
        return self.peek().text == text

    # -- program forms ----------------------------------------------------

    def parse_program(self) -> Program:
        header = None
        params: dict[str, Expr] = {}
        if self.peek().kind == "ident" and self.peek().text == "function":
            header, body, param_names = self._parse_function()
            args = self._parse_wrapped_call(header.name)
            if len(args) != len(param_names):
                raise JsSyntaxError(
                    f"{header.name} takes {len(param_names)} arguments,"
                    f" got {len(args)}",
                    self.peek().pos,
                )
            params = dict(zip(param_names, args))
            entry = _substitute(body, params)
        else:
            entry = self._parse_entry()
        self._expect_end()
        _check_closed(entry)
        syntax.renumber(entry)
        return Program(entry=entry, header=header, source=self.source)

    def _parse_function(self) -> tuple[FunctionHeader, Expr, tuple[str, ...]]:
        self.expect("function")
        name_tok = self.next()
        if name_tok.kind != "ident":
            raise JsSyntaxError("expected function name", name_tok.pos)
        self.expect("(")
        names: list[str] = []
        if not self.at(")"):
            while True:
                tok = self.next()
                if tok.kind != "ident":
                    raise JsSyntaxError("expected parameter name", tok.pos)
                names.append(tok.text)
                if self.at(","):
                    self.next()
                    continue
                break
        self.expect(")")
        self.expect("{")
        if not (self.peek().kind == "ident" and self.peek().text == "return"):
            raise UnsupportedConstructError(
                "function body other than a single return", self.peek().pos
            )
        self.next()
        body = self.parse_expr()
        if self.at(";"):
            self.next()
        self.expect("}")
        return FunctionHeader(name_tok.text, tuple(names)), body, tuple(names)

    def _parse_wrapped_call(self, fname: str) -> list[Expr]:
        wrapped = self._strip_console_log()
        tok = self.next()
        if tok.kind != "ident" or tok.text != fname:
            raise JsSyntaxError(f"expected a call of {fname!r}", tok.pos)
        self.expect("(")
        args: list[Expr] = []
        if not self.at(")"):
            while True:
                arg = self.parse_expr()
                _check_literal_only(arg)
                args.append(arg)
                if self.at(","):
                    self.next()
                    continue
                break
        self.expect(")")
        if wrapped:
            self.expect(")")
        if self.at(";"):
            self.next()
        return args

    def _parse_entry(self) -> Expr:
        wrapped = self._strip_console_log()
        entry = self.parse_expr()
        if wrapped:
            self.expect(")")
        if self.at(";"):
            self.next()
        return entry

    def _strip_console_log(self) -> bool:
        if (
            self.peek().kind == "ident"
            and self.peek().text == "console"
            and self.peek(1).text == "."
            and self.peek(2).text == "log"
            and self.peek(3).text == "("
        ):
            self.i += 4
            return True
        return False

    def _expect_end(self) -> None:
        t = self.peek()
        if t.kind != "eof":
            raise JsSyntaxError("unexpected trailing input", t.pos)

    # -- expressions (precedence climbing) ---------------------------------

    def parse_expr(self) -> Expr:
        return self._ternary()

    def _ternary(self) -> Expr:
        start = self.peek().pos
        cond = self._nullish_or()
        if self.at("?"):
            self.next()
            then = self.parse_expr()
            self.expect(":")
            other = self.parse_expr()
            return Ternary(-1, (start, self._end()), cond, then, other)
        return cond

    def _binary_level(self, ops: tuple[str, ...], next_level) -> Expr:
        start = self.peek().pos
        left = next_level()
        while self.peek().text in ops:
            op = self.next().text
            right = next_level()
            left = Binary(-1, (start, self._end()), op, left, right)
        return left

    def _nullish_or(self) -> Expr:
        return self._binary_level(("||", "??"), self._and)

    def _and(self) -> Expr:
        return self._binary_level(("&&",), self._equality)

    def _equality(self) -> Expr:
        return self._binary_level(("===", "=="), self._relational)

    def _relational(self) -> Expr:
        return self._binary_level(("<", ">="), self._additive)

    def _additive(self) -> Expr:
        return self._binary_level(("+", "-"), self._unary)

    def _unary(self) -> Expr:
        t = self.peek()
        if t.text in ("!", "+", "-") or (t.kind == "ident" and t.text == "typeof"):
            self.next()
            operand = self._unary()
            op = "typeof" if t.text == "typeof" else t.text
            return Unary(-1, (t.pos, self._end()), op, operand)
        return self._postfix()

    def _postfix(self) -> Expr:
        start = self.peek().pos
        e = self._primary()
        while True:
            if self.at("["):
                self.next()
                sub = self.parse_expr()
                self.expect("]")
                e = Index(-1, (start, self._end()), e, sub)
                continue
            if self.at("."):
                dot = self.next()
                name = self.next()
                if name.kind != "ident":
                    raise JsSyntaxError("expected property name after '.'", name.pos)
                if name.text != "sort":
                    raise UnsupportedConstructError(
                        f"property access '.{name.text}'", dot.pos
                    )
                self.expect("(")
                self.expect(")")
                e = SortCall(-1, (start, self._end()), e)
                continue
            return e

    def _primary(self) -> Expr:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Lit(-1, (t.pos, self._end()), JsNumber(t.value))
        if t.kind == "str":
            self.next()
            return Lit(-1, (t.pos, self._end()), JsString(t.value))
        if t.kind == "ident":
            if t.text in _KEYWORD_LITERALS:
                self.next()
                return Lit(-1, (t.pos, self._end()), _KEYWORD_LITERALS[t.text])
            if t.text == "NaN":
                self.next()
                return Lit(-1, (t.pos, self._end()), JsNumber(float("nan")))
            if t.text == "Infinity":
                self.next()
                return Lit(-1, (t.pos, self._end()), JsNumber(float("inf")))
            if t.text in _RESERVED_UNSUPPORTED:
                raise UnsupportedConstructError(f"keyword '{t.text}'", t.pos)
            # Free identifiers become parameters during inlining; anywhere
            # else they violate the closed-program invariant.
            self.next()
            return _Ident(-1, (t.pos, self._end()), t.text)
        if t.text == "(":
            self.next()
            e = self.parse_expr()
            self.expect(")")
            return e
        if t.text == "[":
            self.next()
            elems: list[Expr] = []
            if not self.at("]"):
                while True:
                    elems.append(self.parse_expr())
                    if self.at(","):
                        self.next()
                        if self.at("]"):
                            break
                        continue
                    break
            end = self.expect("]")
            return ArrayLit(-1, (t.pos, end.pos + 1), tuple(elems))
        if t.text == "{":
            self.next()
            pairs: list[tuple[str, Expr]] = []
            if not self.at("}"):
                while True:
                    key = self.next()
                    if key.kind == "ident":
                        key_text = key.text
                    elif key.kind == "str":
                        key_text = key.value  # type: ignore[assignment]
                    else:
                        raise JsSyntaxError("expected property key", key.pos)
                    self.expect(":")
                    pairs.append((key_text, self.parse_expr()))
                    if self.at(","):
                        self.next()
                        if self.at("}"):
                            break
                        continue
                    break
            end = self.expect("}")
            return ObjectLit(-1, (t.pos, end.pos + 1), tuple(pairs))
        raise JsSyntaxError(f"unexpected token {t.text!r}", t.pos)

    def _end(self) -> int:
        return self.tokens[max(self.i - 1, 0)].pos + len(self.tokens[max(self.i - 1, 0)].text)


@dataclass
class _Ident(Expr):
    """Parameter reference; only legal inside a function body pre-inlining."""

    name: str = ""


def _substitute(body: Expr, params: dict[str, Expr]) -> Expr:
    """Capture-free substitution of literal arguments for parameters.

    Each occurrence clones the argument expression, so every substituted
    object/array literal evaluates to a fresh identity.
    """
    if isinstance(body, _Ident):
        if body.name in params:
            return syntax.clone(params[body.name])
        raise UnsupportedConstructError(f"identifier '{body.name}'", body.span[0])
    if isinstance(body, Lit):
        return body
    if isinstance(body, ArrayLit):
        return ArrayLit(
            body.node_id, body.span, tuple(_substitute(c, params) for c in body.elems)
        )
    if isinstance(body, ObjectLit):
        return ObjectLit(
            body.node_id,
            body.span,
            tuple((k, _substitute(v, params)) for k, v in body.pairs),
        )
    if isinstance(body, Unary):
        return Unary(body.node_id, body.span, body.op, _substitute(body.operand, params))
    if isinstance(body, Binary):
        return Binary(
            body.node_id,
            body.span,
            body.op,
            _substitute(body.left, params),
            _substitute(body.right, params),
        )
    if isinstance(body, Ternary):
        return Ternary(
            body.node_id,
            body.span,
            _substitute(body.cond, params),
            _substitute(body.then, params),
            _substitute(body.other, params),
        )
    if isinstance(body, Index):
        return Index(
            body.node_id,
            body.span,
            _substitute(body.target, params),
            _substitute(body.subscript, params),
        )
    if isinstance(body, SortCall):
        return SortCall(body.node_id, body.span, _substitute(body.target, params))
    raise TypeError(f"not an Expr: {body!r}")


def _check_literal_only(e: Expr) -> None:
    if isinstance(e, Lit):
        return
    if isinstance(e, ArrayLit):
        for c in e.elems:
            _check_literal_only(c)
        return
    if isinstance(e, ObjectLit):
        for _, v in e.pairs:
            _check_literal_only(v)
        return
    raise UnsupportedConstructError("non-literal call argument", e.span[0])


def _check_closed(e: Expr) -> None:
    for node in syntax.walk(e):
        if isinstance(node, _Ident):
            raise UnsupportedConstructError(f"identifier '{node.name}'", node.span[0])


def parse(source: str) -> Program:
    """Parse source text into a closed Program."""
    return _Parser(source).parse_program()


def parse_expr(source: str) -> Expr:
    """Parse a bare expression (no wrappers); mostly for tests."""
    return parse(source).entry


def caret_diagnostic(source: str, err: JsSyntaxError) -> str:
    """Render a parse error with a caret under the offending position."""
    line_start = source.rfind("\n", 0, err.position) + 1
    line_end = source.find("\n", err.position)
    if line_end < 0:
        line_end = len(source)
    line = source[line_start:line_end]
    caret = " " * (err.position - line_start) + "^"
    return f"{err.message}\n{line}\n{caret}"
