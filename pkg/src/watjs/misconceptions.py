"""Registry of the 32 misconception flags, flag sets, and the prior model.

Each flag switches exactly one decision site in the interpreter from the
standard behavior to the erroneous behavior a user holding that
misconception would expect. `message` is the corrective statement shown to
the user; `behavior` is the erroneous semantics the flag turns on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

N_FLAGS = 32


@dataclass(frozen=True)
class Misconception:
    id: int
    name: str
    message: str
    behavior: str
    # Flags whose corrective message is co-reported whenever this flag is
    # explained (sort explanations also state how string comparison works).
    companion_ids: tuple[int, ...] = ()


def _m(mid, name, message, behavior, companions=()):
    return Misconception(mid, name, message, behavior, tuple(companions))


REGISTRY: tuple[Misconception, ...] = (
    _m(
        1,
        "typeof_null_is_null",
        'For historical reasons, null has type "object" (not "null", as you'
        " might expect).",
        'typeof(null) evaluates to "null"',
    ),
    _m(
        2,
        "typeof_array_is_array",
        'Arrays have type "object" (not "array", as you might expect).',
        'typeof of an array evaluates to "array"',
    ),
    _m(
        3,
        "nan_equals_nan",
        "As a special case, NaN is never equal to anything (even NaN itself).",
        "NaN == NaN and NaN === NaN evaluate to true",
    ),
    _m(
        4,
        "empty_objects_falsey",
        "Empty objects ({} and []) are truthy.",
        "{} and [] test false in boolean contexts, and && / || yield false"
        " when such an operand decides them",
    ),
    _m(
        5,
        "array_join_shows_undefined",
        "undefined is printed as empty string when arrays are cast to string.",
        'undefined elements render as "undefined" inside array-to-string joins',
    ),
    _m(
        6,
        "array_join_shows_null",
        "null is printed as empty string when arrays are cast to string.",
        'null elements render as "null" inside array-to-string joins',
    ),
    _m(
        7,
        "nan_tostring_empty",
        'NaN prints as the string "NaN" (not "", as you might expect).',
        'ToString(NaN) yields ""',
    ),
    _m(
        8,
        "null_tostring_empty",
        'null casts to the string "null", not the empty string.',
        'ToString(null) yields "" outside array joins',
    ),
    _m(
        9,
        "undefined_tostring_empty",
        'undefined casts to the string "undefined" (not "", as you might'
        " expect).",
        'ToString(undefined) yields "" outside array joins',
    ),
    _m(
        10,
        "object_tonumber_zero",
        "{} is NaN (not 0) when cast to number.",
        "ToNumber of a plain object yields 0",
    ),
    _m(
        11,
        "zero_indexed",
        "JavaScript is 0-indexed, not 1-indexed.",
        "subscript n >= 1 reads the element at position n-1 (a[1] is the"
        " first element)",
    ),
    _m(
        12,
        "undefined_tonumber_zero",
        "undefined casts to number as NaN (not 0, as you might expect).",
        "ToNumber(undefined) yields 0",
    ),
    _m(
        13,
        "null_tonumber_nan",
        "null casts to number as 0 (not NaN, as you might expect).",
        "ToNumber(null) yields NaN",
    ),
    _m(
        14,
        "sort_is_numeric",
        "Array.prototype.sort() casts elements (including numbers) to string"
        " and compares them lexicographically.",
        "sort() orders elements by ascending numeric value",
        companions=(28,),
    ),
    _m(
        15,
        "nullish_false",
        "?? does not treat false as null-ish.",
        "?? falls through to its right operand on false",
    ),
    _m(
        16,
        "nullish_nan",
        "?? does not treat NaN as null-ish.",
        "?? falls through to its right operand on NaN",
    ),
    _m(
        17,
        "plus_concatenates_arrays",
        "The + operator does not concatenate arrays; instead, it casts them"
        " to strings.",
        "array + array yields the element-wise concatenated array",
    ),
    _m(
        18,
        "logical_ops_return_boolean",
        "Short-circuiting boolean operators like && and || return the"
        " determining operand (rather than a boolean value).",
        "&& and || pass their result through ToBoolean",
    ),
    _m(
        19,
        "loose_equals_is_strict",
        "The == operator, unlike the === operator, attempts a series of type"
        " coercions that can cause unexpected results.",
        "== behaves exactly like === (no coercions)",
    ),
    _m(
        20,
        "plus_requires_number_or_string",
        "When given operands that are neither numbers nor strings, + tries to"
        " cast them to numbers (if possible) or else strings.",
        "+ raises an error when neither operand is a number or a string",
    ),
    _m(
        21,
        "object_tostring_literal",
        'Objects cast to the string "[object Object]".',
        "ToString of a plain object renders literal syntax such as \"{}\"",
    ),
    _m(
        22,
        "array_tostring_has_brackets",
        "When converted to string, arrays don't have the square brackets"
        " around them.",
        'array-to-string wraps the joined elements in "[" and "]"',
    ),
    _m(
        23,
        "empty_string_tonumber_nan",
        "The empty string by definition casts to 0 (not NaN, as you might"
        " expect).",
        'ToNumber("") yields NaN',
    ),
    _m(
        24,
        "plus_prefers_numeric_addition",
        "The + operator only attempts to add if both sides are numbers."
        " Otherwise, it casts its operands to string and concatenates.",
        "when either operand is already a number, + converts both with"
        " ToNumber and adds (even through NaN)",
    ),
    _m(
        25,
        "primitive_subscript_errors",
        "When subscripted, primitive booleans and numbers are implicitly"
        " converted to Boolean and Number objects.",
        "subscripting a primitive boolean or number raises an error",
    ),
    _m(
        26,
        "equals_coerces_to_boolean",
        "When one side of an == is a boolean, JS does not attempt to convert"
        " the other side to a boolean as well. Instead, the boolean is"
        " converted to a number (0 or 1) and the comparison is tried again.",
        "== with one boolean side converts the other side to boolean and"
        " compares the booleans",
    ),
    _m(
        27,
        "gte_is_gt_or_equal",
        "The >= operator is defined as the negation of <, rather than the"
        " disjunction of > and ==.",
        ">= evaluates as (> or ==) instead of not-<",
    ),
    _m(
        28,
        "string_comparison_is_numeric",
        "If neither operand is a number, then < compares string"
        " representations of the operands lexicographically.",
        "< on two strings compares them numerically when both parse as"
        " numbers",
    ),
    _m(
        29,
        "brackets_sort_after_lowercase",
        'The characters "[" and "]" sort after capital letters but before'
        " lowercase letters.",
        '"[" and "]" order after lowercase letters in string comparison',
    ),
    _m(
        30,
        "comma_sorts_after_letters",
        'The comma character (",") sorts before all letters, numbers, and'
        " delimiters.",
        '"," orders after letters, numbers, and delimiters in string'
        " comparison",
    ),
    _m(
        31,
        "equality_is_structural",
        "== and === compare objects and arrays by reference, not by value.",
        "== and === compare objects and arrays by deep structural value",
    ),
    _m(
        32,
        "non_number_subscripts_miss",
        "JavaScript casts all indices to string. When indexing arrays and"
        " strings, it checks if the indices represent numbers.",
        "string subscripts that are not already numbers never index arrays"
        " or strings (the lookup misses)",
    ),
)

_BY_ID = {m.id: m for m in REGISTRY}
_BY_NAME = {m.name: m for m in REGISTRY}

assert len(REGISTRY) == N_FLAGS
assert [m.id for m in REGISTRY] == list(range(1, N_FLAGS + 1))
assert len(_BY_NAME) == N_FLAGS


def registry() -> tuple[Misconception, ...]:
    """All 32 entries in table order."""
    return REGISTRY


def by_id(mid: int) -> Misconception:
    return _BY_ID[mid]


def by_name(name: str) -> Misconception:
    return _BY_NAME[name]


class MisconceptionSet:
    """Immutable set of misconception flags, stored as a 32-bit field."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0 or bits >> N_FLAGS:
            raise ValueError(f"bits out of range: {bits:#x}")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("MisconceptionSet is immutable")

    @classmethod
    def of(cls, *ids: int) -> "MisconceptionSet":
        bits = 0
        for mid in ids:
            if not 1 <= mid <= N_FLAGS:
                raise ValueError(f"misconception id out of range: {mid}")
            bits |= 1 << (mid - 1)
        return cls(bits)

    @classmethod
    def from_iter(cls, ids: Iterable[int]) -> "MisconceptionSet":
        return cls.of(*ids)

    def __contains__(self, mid: int) -> bool:
        return bool(self.bits >> (mid - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        for mid in range(1, N_FLAGS + 1):
            if mid in self:
                yield mid

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, MisconceptionSet) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("MisconceptionSet", self.bits))

    def __or__(self, other: "MisconceptionSet") -> "MisconceptionSet":
        return MisconceptionSet(self.bits | other.bits)

    def __and__(self, other: "MisconceptionSet") -> "MisconceptionSet":
        return MisconceptionSet(self.bits & other.bits)

    def __sub__(self, other: "MisconceptionSet") -> "MisconceptionSet":
        return MisconceptionSet(self.bits & ~other.bits)

    def add(self, mid: int) -> "MisconceptionSet":
        return self | MisconceptionSet.of(mid)

    def issubset(self, other: "MisconceptionSet") -> bool:
        return self.bits & ~other.bits == 0

    def ids(self) -> tuple[int, ...]:
        return tuple(self)

    def names(self) -> tuple[str, ...]:
        return tuple(_BY_ID[mid].name for mid in self)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(mid) for mid in self) + "}"


EMPTY = MisconceptionSet(0)


@dataclass(frozen=True)
class PriorModel:
    """Independent per-flag presence probabilities: P(M) = prod q_i.

    All q_i default to the same value; with a uniform q the prior ordering
    of sets is exactly the ordering by cardinality.
    """

    q: tuple[float, ...] = field(default=(0.1,) * N_FLAGS)

    def __post_init__(self):
        if len(self.q) != N_FLAGS:
            raise ValueError(f"need {N_FLAGS} probabilities, got {len(self.q)}")
        for qi in self.q:
            if not 0.0 < qi < 1.0:
                raise ValueError(f"q_i must lie in (0, 1), got {qi}")

    @classmethod
    def uniform(cls, q: float = 0.1) -> "PriorModel":
        return cls((q,) * N_FLAGS)

    def with_overrides(self, overrides: dict[int, float]) -> "PriorModel":
        qs = list(self.q)
        for mid, qi in overrides.items():
            if not 1 <= mid <= N_FLAGS:
                raise ValueError(f"misconception id out of range: {mid}")
            qs[mid - 1] = qi
        return PriorModel(tuple(qs))

    def log_prior(self, m: MisconceptionSet) -> float:
        return sum(math.log(self.q[mid - 1]) for mid in m)

    def prior(self, m: MisconceptionSet) -> float:
        # Accumulated in log space; the empty product is exactly 1.
        return math.exp(self.log_prior(m)) if m else 1.0


def registry_json() -> list[dict]:
    """Registry as plain dicts for the service layer."""
    return [
        {
            "id": m.id,
            "name": m.name,
            "message": m.message,
            "behavior": m.behavior,
        }
        for m in REGISTRY
    ]
