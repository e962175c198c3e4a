"""Interactive REPL and service launcher.

Expressions evaluate under standard semantics; `:wat` infers what the user
might have expected from the last expression and, after they pick an
expectation, prints the corrective explanation. `:diag <id>` synthesizes a
diagnostic question. `--serve` starts the HTTP API instead.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import service
from .config import Config, from_sources
from .inference import Candidate
from .parser import JsSyntaxError, caret_diagnostic
from .service import ApiError, Engine


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="watjs",
        description="REPL that explains surprising JavaScript type-coercion"
        " results by inferring the misconceptions behind them.",
    )
    ap.add_argument("--kappa", type=int, help="max simultaneous misconceptions")
    ap.add_argument(
        "--max-candidates", type=int, dest="max_candidates", help="max expectations"
    )
    ap.add_argument("--q", type=float, help="uniform per-misconception prior")
    ap.add_argument("--json", action="store_true", help="line-delimited JSON output")
    ap.add_argument(
        "--serve",
        nargs="?",
        const="",
        default=None,
        metavar="ADDR",
        help="run the HTTP service, optionally binding ADDR",
    )
    ap.add_argument("--port", type=int, help="port for --serve")
    ap.add_argument("--config", help="TOML or JSON config file")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    cli_values = {
        "kappa": args.kappa,
        "max_candidates": args.max_candidates,
        "q": args.q,
        "host": args.serve or None,
        "port": args.port,
    }
    config = from_sources(cli=cli_values, config_path=args.config)
    if args.json:
        config = Config(**{**config.__dict__, "json_output": True})
    if args.serve is not None:
        service.serve(config)
        return 0
    return repl(config)


class Repl:
    def __init__(self, config: Config, out=None):
        self.engine = Engine(config)
        self.config = config
        self.out = out or sys.stdout
        self.last_source: str | None = None
        self.pending: list[dict] | None = None

    # -- output helpers -----------------------------------------------------

    def emit(self, kind: str, text: str, **payload) -> None:
        if self.config.json_output:
            self.out.write(json.dumps({"event": kind, **payload}) + "\n")
        elif text:
            self.out.write(text + "\n")
        self.out.flush()

    # -- one REPL interaction ------------------------------------------------

    def handle(self, line: str) -> bool:
        """Process one input line; False means quit."""
        line = line.strip()
        if not line:
            return True
        if line in (":quit", ":q", ":exit"):
            return False
        if line == ":help":
            self.emit(
                "help",
                "enter an expression to evaluate it; :wat to ask about the"
                " last result; :diag <id> for a diagnostic; :quit to leave",
            )
            return True
        if line == ":wat":
            self._wat()
            return True
        if line.startswith(":diag"):
            self._diag(line)
            return True
        if self.pending is not None and line.isdigit():
            self._choose(int(line))
            return True
        self._eval(line)
        return True

    def _eval(self, source: str) -> None:
        self.pending = None
        try:
            payload = self.engine.eval_source(source)
        except ApiError as err:
            if err.code == "parse_error":
                try:
                    from .parser import parse

                    parse(source)
                except JsSyntaxError as js_err:
                    self.emit(
                        "error",
                        caret_diagnostic(source, js_err),
                        code=err.code,
                        message=err.message,
                    )
                    return
            self.emit("error", f"error: {err.message}", code=err.code,
                      message=err.message)
            return
        self.last_source = source
        self.emit("result", payload["display"], source=source, **payload)

    def _wat(self) -> None:
        if self.last_source is None:
            self.emit("hint", "nothing to explain yet: enter an expression first")
            return
        payload = self.engine.wat(self.last_source)
        if not payload["candidates"]:
            self.emit(
                "wat",
                "no surprise found: no small misconception set changes this"
                " result",
                **payload,
            )
            return
        self.pending = payload["candidates"]
        lines = [payload["question"]]
        for i, cand in enumerate(payload["candidates"], 1):
            lines.append(f"  {i}) {cand['expected_display']}")
        lines.append("pick a number to see the explanation")
        self.emit("wat", "\n".join(lines), **payload)

    def _choose(self, pick: int) -> None:
        assert self.pending is not None
        if not 1 <= pick <= len(self.pending):
            self.emit("error", f"pick 1..{len(self.pending)}")
            return
        chosen = self.pending[pick - 1]["expected_display"]
        self.pending = None
        payload = self.engine.explain_source(self.last_source, chosen)
        text = "\n".join([*payload["messages"], *payload["steps"], payload["final"]])
        self.emit("explanation", text, **payload)

    def _diag(self, line: str) -> None:
        parts = line.split()
        if len(parts) != 2 or not parts[1].isdigit():
            self.emit("hint", "usage: :diag <misconception id 1..32>")
            return
        try:
            payload = self.engine.diagnose(int(parts[1]))
        except ApiError as err:
            self.emit("error", f"error: {err.message}", code=err.code)
            return
        if not payload["ok"]:
            self.emit("diagnostic", f"no diagnostic found: {payload['reason']}",
                      **payload)
            return
        first = payload["distractors"][0]["value"]
        self.emit(
            "diagnostic",
            f"{payload['program_source']}\n  true output: {payload['true_output']}"
            f"\n  answered by a holder of #{payload['misconception']}: {first}",
            **payload,
        )


def repl(config: Config) -> int:
    r = Repl(config)
    interactive = sys.stdin.isatty() and not config.json_output
    if interactive:
        print("watjs repl; :help for commands")
    while True:
        try:
            line = input("> " if interactive else "")
        except EOFError:
            return 0
        except KeyboardInterrupt:
            print()
            return 0
        if not r.handle(line):
            return 0


if __name__ == "__main__":
    sys.exit(main())
