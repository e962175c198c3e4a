#!/usr/bin/env python3
"""Synthesize the full diagnostic inventory and print it.

Usage:
    python scripts/run_inventory.py [--budget 7] [--kappa-v 3]
                                    [--markdown | --json]
"""

from __future__ import annotations

import argparse
import json
import sys

from watjs.diagnostics import build_inventory
from watjs.values import display


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=7, help="max AST size")
    ap.add_argument("--kappa-v", type=int, default=3, help="verification bound")
    ap.add_argument("--markdown", action="store_true", help="render a quiz table")
    ap.add_argument("--json", action="store_true", help="emit JSON records")
    args = ap.parse_args()

    report = build_inventory(budget=args.budget, kappa_v=args.kappa_v)

    if args.markdown:
        print(report.to_markdown())
    elif args.json:
        records = []
        for entry in report.entries:
            if entry.question is not None:
                records.append(entry.question.to_json())
            else:
                records.append(
                    {
                        "misconception": entry.target,
                        "ok": False,
                        "reason": entry.reason,
                        "elapsed_ms": round(entry.elapsed_ms, 3),
                    }
                )
        json.dump(records, sys.stdout, indent=2)
        print()
    else:
        for entry in report.entries:
            if entry.question is not None:
                q = entry.question
                extras = ", ".join(display(v) for _, v in q.extras)
                line = (
                    f"{q.target:2d}  {q.source}"
                    f"  ->  {display(q.true_output)} / {display(q.distractor)}"
                )
                if extras:
                    line += f" (also: {extras})"
                print(f"{line}  [{entry.elapsed_ms:.0f} ms]")
            else:
                print(f"{entry.target:2d}  FAILED: {entry.reason}"
                      f"  [{entry.elapsed_ms:.0f} ms]")
    ok = len(report.succeeded)
    print(f"\n{ok}/32 verified diagnostics in {report.elapsed_ms / 1000:.1f} s",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
