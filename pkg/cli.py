"""
Command-line front end.

    python cli.py solve program.lp --format json
    python cli.py check - < other.lp
    python cli.py graph program.lp --kind edg --format dot

Exit codes: 0 success, 1 verification mismatch, 2 usage/parse/config error,
3 budget exceeded.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO, Tuple

from audit import AuditLogger
from config import HEURISTICS, METHODS, StableConfig
from engine import StableModelEngine
from errors import ConfigError, StableGraphError
from graphs import build_dg, build_edg, to_dot, to_json
from lp_parser import parse_program, read_program_text
from program import Program, pretty_print

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", nargs="?", default="-", help="program file, '-' for stdin (default)")
    common.add_argument("--max-models", type=int, help="stop after this many models")
    common.add_argument("--max-cycles", type=int, help="cap on enumerated elementary cycles")
    common.add_argument("--atom-cap", type=int, help="largest program brute force will enumerate")
    common.add_argument("--unfold-cap", type=int, help="cap on rules generated by positive unfolding")
    common.add_argument("--hypothesis-budget", type=int, help="cap on decomposition hypothesis tuples")
    common.add_argument("--heuristic", choices=HEURISTICS, help="coloring branch order")
    common.add_argument("--method", choices=METHODS, help="solver for solve/verify")
    common.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")
    common.add_argument("--audit-log", metavar="PATH", help="append a JSON line per run to PATH")

    text_or_json = argparse.ArgumentParser(add_help=False)
    text_or_json.add_argument("--format", choices=["text", "json"], default="text")

    parser = _ArgumentParser(prog="stablegraph",
                             description="Stable-model analysis of ground normal logic programs")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_ArgumentParser)
    sub.required = True
    sub.add_parser("parse", parents=[common, text_or_json], help="echo the canonical program")
    sub.add_parser("kernel", parents=[common, text_or_json], help="kernel program and transform log")
    graph = sub.add_parser("graph", parents=[common], help="EDG or DG as DOT or JSON")
    graph.add_argument("--kind", choices=["edg", "dg"], default="edg")
    graph.add_argument("--format", choices=["dot", "json"], default="dot")
    sub.add_parser("analyze", parents=[common, text_or_json], help="cycles, handles, extended cycles")
    sub.add_parser("check", parents=[common, text_or_json], help="structural existence verdict")
    sub.add_parser("solve", parents=[common, text_or_json], help="all stable models")
    sub.add_parser("verify", parents=[common, text_or_json], help="compare a solver with brute force")
    return parser


def _config_from_args(args) -> StableConfig:
    return StableConfig.from_env().with_overrides(
        max_models=args.max_models,
        max_cycles=args.max_cycles,
        atom_cap=args.atom_cap,
        unfold_cap=args.unfold_cap,
        hypothesis_budget=args.hypothesis_budget,
        heuristic=args.heuristic,
        method=args.method,
        audit_log_file=args.audit_log,
        enable_audit_logging=True if args.audit_log else None,
    )


# === SUBCOMMANDS ===
def _cmd_parse(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    if args.format == "json":
        return _dumps({"atoms": list(program.atom_names),
                       "rules": [r.to_text() for r in program.rules]}), EXIT_OK
    return pretty_print(program), EXIT_OK


def _cmd_kernel(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    kernel, log = engine.kernel(program)
    if args.format == "json":
        return _dumps({"kernel": pretty_print(kernel.program), "log": log.to_dict()}), EXIT_OK
    return pretty_print(kernel.program) + f"% log: {log.to_json()}\n", EXIT_OK


def _cmd_graph(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    g = build_edg(program) if args.kind == "edg" else build_dg(program)
    if args.format == "json":
        return _dumps(to_json(g)), EXIT_OK
    return to_dot(g), EXIT_OK


def _cmd_analyze(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    report = engine.analyze(program)
    if args.format == "json":
        return _dumps(report.to_dict()), EXIT_OK
    if not report.cycles:
        lines = ["no negative cycles"]
    else:
        lines = [report.to_frame().to_string(index=False)]
    for bridge in report.decomposition.bridges:
        sources = ", ".join(f"C{n}" for n in bridge.source_cycles) or "-"
        targets = ", ".join(f"C{n}" for n in bridge.target_cycles)
        lines.append(f"bridge {bridge.describe()}: {sources} => {targets}")
    for rule in report.decomposition.bridge_rules:
        lines.append(f"bridge rule {rule.to_text()}")
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_check(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    verdict = engine.check(program)
    if args.format == "json":
        return _dumps(verdict.to_dict()), EXIT_OK
    lines = [f"status: {verdict.status}"] + [f"  - {reason}" for reason in verdict.reasons]
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_solve(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    result = engine.solve(program)
    if args.format == "json":
        return _dumps(result.to_dict()), EXIT_OK
    lines = [str(model) for model in result.models]
    noun = "model" if result.count == 1 else "models"
    summary = f"% {result.count} {noun} ({result.method})"
    if result.truncated:
        summary += ", truncated"
    lines.append(summary)
    return "\n".join(lines) + "\n", EXIT_OK


def _cmd_verify(engine: StableModelEngine, program: Program, args) -> Tuple[str, int]:
    result = engine.verify(program)
    code = EXIT_OK if result.matches else EXIT_MISMATCH
    if args.format == "json":
        return _dumps({
            "method": result.method,
            "match": result.matches,
            "brute": [m.sorted_names() for m in result.expected],
            "models": [m.sorted_names() for m in result.actual],
        }), code
    out = result.summary() + "\n"
    if not result.matches:
        out += result.to_frame().to_string(index=False) + "\n"
    return out, code


COMMANDS = {
    "parse": _cmd_parse,
    "kernel": _cmd_kernel,
    "graph": _cmd_graph,
    "analyze": _cmd_analyze,
    "check": _cmd_check,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
}


def _wants_json(argv: Optional[List[str]]) -> bool:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--format=json" in argv:
        return True
    return any(a == "--format" and b == "json" for a, b in zip(argv, argv[1:]))


def _report_error(error: StableGraphError, as_json: bool, stderr: TextIO):
    if as_json:
        stderr.write(_dumps({"error": error.to_dict()}))
    else:
        stderr.write(f"error: {error}\n")


def run(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None,
        stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Run one subcommand; returns the exit code."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    as_json = _wants_json(argv)

    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        _report_error(e, as_json, stderr)
        return e.exit_code
    except SystemExit as e:
        # --help
        return e.code or 0

    as_json = args.format == "json"
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=stderr,
                        format="%(levelname)s %(name)s: %(message)s", force=True)

    text = ""
    audit = None
    try:
        config = _config_from_args(args)
        audit = AuditLogger(config.audit_log_file, config.enable_audit_logging)
        text = read_program_text(args.path, stdin)
        program = parse_program(text)
        output, code = COMMANDS[args.command](StableModelEngine(config), program, args)
    except StableGraphError as e:
        _report_error(e, as_json, stderr)
        if audit:
            audit.log_run(args.command, text, e.kind, str(e))
        return e.exit_code

    stdout.write(output)
    if audit:
        audit.log_run(args.command, text, output.strip().splitlines()[-1] if output.strip() else "")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
