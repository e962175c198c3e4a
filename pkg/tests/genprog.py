"""Seeded random program generator over the diagnostics literal pool."""

from __future__ import annotations

import random

from watjs.diagnostics import LITERAL_POOL
from watjs.syntax import (
    ArrayLit,
    Binary,
    Expr,
    Index,
    Program,
    SortCall,
    Ternary,
    Unary,
    clone,
    renumber,
    unparse,
)

_UNARY = ("typeof", "!", "+", "-")
_BINARY = ("===", "==", "+", "-", "<", ">=", "&&", "||", "??")


def random_expr(rng: random.Random, size: int) -> Expr:
    """A uniformly-shaped random expression with exactly `size` nodes."""
    if size <= 1:
        return clone(rng.choice(LITERAL_POOL))
    shapes = ["unary", "sort", "array1"]
    if size >= 3:
        shapes += ["binary", "index", "array2"]
    if size >= 4:
        shapes.append("ternary")
    shape = rng.choice(shapes)
    if shape == "unary":
        return Unary(op=rng.choice(_UNARY), operand=random_expr(rng, size - 1))
    if shape == "sort":
        return SortCall(target=random_expr(rng, size - 1))
    if shape == "array1":
        return ArrayLit(elems=(random_expr(rng, size - 1),))
    if shape == "ternary":
        budget = size - 1
        a = rng.randint(1, budget - 2)
        b = rng.randint(1, budget - a - 1)
        return Ternary(
            cond=random_expr(rng, a),
            then=random_expr(rng, b),
            other=random_expr(rng, budget - a - b),
        )
    budget = size - 1
    a = rng.randint(1, budget - 1)
    left, right = random_expr(rng, a), random_expr(rng, budget - a)
    if shape == "binary":
        return Binary(op=rng.choice(_BINARY), left=left, right=right)
    if shape == "index":
        return Index(target=left, subscript=right)
    return ArrayLit(elems=(left, right))


def random_program(rng: random.Random, max_size: int = 9) -> Program:
    expr = random_expr(rng, rng.randint(1, max_size))
    renumber(expr)
    return Program(entry=expr, source=unparse(expr))
