#!/usr/bin/env python3
"""Walk the bundled surprise scenarios end to end: evaluate, ask what the
user expected, and print the explanation for every candidate expectation."""

from __future__ import annotations

from watjs.explain import explain
from watjs.inference import clarify, infer_all, resolve
from watjs.parser import parse
from watjs.semantics import evaluate
from watjs.values import display

SCENARIOS = [
    ("array plus array", "[] + []"),
    ("sorted index warm-up", "console.log( [2, 7, 1, 8].sort()[1] );"),
    ("numeric-looking sort", "console.log( [3, 4, 11, 10].sort()[0] );"),
    ("three-way clarification", "console.log( [3, 4, 11, 10].sort()[1] );"),
    (
        "equality vs typeof",
        'function f(x, y, t, u) {\n  return (\n    t == u ? "hello" :'
        ' typeof(x)+"/"+typeof(y)\n  );\n}\nconsole.log( f(null, undefined,'
        " {}, {}) );",
    ),
    ("vanishing null", 'console.log("Answers:" + [true, null] + [false]);'),
    (
        "truthy red herring",
        'function f(x, y) { return x && ("" + y); }\n'
        "console.log( f({}, [2,undefined,2]) );",
    ),
]


def main() -> None:
    for title, source in SCENARIOS:
        program = parse(source)
        result = evaluate(program).result
        print("=" * 72)
        print(f"## {title}")
        print(source)
        print(f"=> {display(result)}")
        cands = infer_all(program)
        if not cands:
            print("   (no surprising reading found)")
            continue
        print(f"WAT? {clarify(cands).question}")
        for value, _ in clarify(cands).entries:
            best = resolve(cands, value)
            print(f"\n-- if you expected {display(value)}"
                  f" (misconceptions {best.m}):")
            for line in explain(program, best).lines:
                print(f"   {line}")
        print()


if __name__ == "__main__":
    main()
