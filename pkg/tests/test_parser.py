from __future__ import annotations

import pytest

from watjs.parser import (
    JsSyntaxError,
    UnsupportedConstructError,
    caret_diagnostic,
    parse,
)
from watjs.syntax import (
    ArrayLit,
    Binary,
    Index,
    Lit,
    ObjectLit,
    SortCall,
    same_ast,
    unparse,
    unparse_program,
    walk,
)
from watjs.values import UNDEFINED, JsNumber, JsString

from corpus import ALL_GOLDEN_SOURCES, B_PROG, C_IDX


def num(x):
    return Lit(value=JsNumber(float(x)))


def test_sort_index_program_shape():
    p = parse(C_IDX)
    expected = Index(
        target=SortCall(target=ArrayLit(elems=(num(2), num(7), num(1), num(8)))),
        subscript=num(1),
    )
    assert same_ast(p.entry, expected)


def test_bare_undefined_literal():
    p = parse("undefined")
    assert same_ast(p.entry, Lit(value=UNDEFINED))


def test_function_inlining_substitutes_each_argument():
    src = "function f(x){ return x && ('' + x); } console.log(f({}));"
    p = parse(src)
    # Manual substitution of the single argument into the body.
    expected = Binary(
        op="&&",
        left=ObjectLit(pairs=()),
        right=Binary(op="+", left=Lit(value=JsString("")), right=ObjectLit(pairs=())),
    )
    assert same_ast(p.entry, expected)
    assert p.header is not None and p.header.name == "f"


def test_function_arguments_must_be_literal():
    src = "function f(x){ return x; } console.log(f(1 + 2));"
    with pytest.raises(UnsupportedConstructError, match="non-literal"):
        parse(src)


def test_free_identifiers_are_rejected():
    with pytest.raises(UnsupportedConstructError, match="identifier 'x'"):
        parse("x + 1")


def test_b_program_parses_closed():
    p = parse(B_PROG)
    assert p.header is not None
    assert p.header.params == ("x", "y", "t", "u")


@pytest.mark.parametrize("source", ALL_GOLDEN_SOURCES)
def test_unparse_reparse_is_fixpoint(source):
    p1 = parse(source)
    text1 = unparse_program(p1)
    p2 = parse(text1)
    assert same_ast(p1.entry, p2.entry)
    assert unparse_program(p2) == text1


@pytest.mark.parametrize("source", ALL_GOLDEN_SOURCES)
def test_node_ids_unique_and_preorder(source):
    p = parse(source)
    ids = [n.node_id for n in walk(p.entry)]
    assert ids == list(range(len(ids)))


@pytest.mark.parametrize(
    "source, construct",
    [
        ("1 * 2", "operator '*'"),
        ("a.b", "property access '.b'"),
        ("[].map()", "property access '.map'"),
        ("x = 1", "assignment"),
        ("1 > 2", "operator '>'"),
        ("new Date", "keyword 'new'"),
    ],
)
def test_unsupported_constructs_are_named(source, construct):
    with pytest.raises(UnsupportedConstructError) as exc:
        parse(source)
    assert construct in str(exc.value)


def test_syntax_error_carries_position():
    with pytest.raises(JsSyntaxError) as exc:
        parse("[1, 2")
    err = exc.value
    assert err.position == 5
    diag = caret_diagnostic("[1, 2", err)
    assert diag.splitlines()[-1].index("^") == 5


def test_console_log_wrapper_is_stripped():
    assert same_ast(parse("console.log(1);").entry, parse("1").entry)


def test_nan_and_infinity_literals():
    p = parse("NaN")
    assert isinstance(p.entry, Lit)
    value = p.entry.value
    assert isinstance(value, JsNumber) and value.value != value.value
    assert unparse(parse("Infinity").entry) == "Infinity"


def test_string_quotes_and_escapes():
    p = parse("'a\"b' + \"c\\nd\"")
    left, right = p.entry.left, p.entry.right
    assert left.value == JsString('a"b')
    assert right.value == JsString("c\nd")


def test_spans_cover_source_text():
    src = "[2, 7, 1, 8].sort()[1]"
    p = parse(src)
    start, end = p.entry.span
    assert src[start:end] == src
    sort_node = p.entry.target
    assert src[sort_node.span[0] : sort_node.span[1]] == "[2, 7, 1, 8].sort()"
