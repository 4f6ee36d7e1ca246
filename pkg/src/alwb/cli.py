"""Command-line front end: parse, run, eval, validate, check, demo, suite.

Exit codes: 0 success or PASS, 1 false, refuted, exhausted or FAIL,
2 usage or syntax error.  ``@NAME`` stands for a built-in artifact.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources

from .euclid import DEMOS, UnknownArtifact, artifact_source, demo_standard
from .models import STRUCTURES, structure
from .parser import ParseError, parse
from .printer import render
from .proof import check_proof, load_script, parse_script
from .proof.script import ScriptError
from .semantics import (
    BudgetExhausted, EvalConfig, Halted, Inconclusive, Refuted, T, UnboundVariable,
    UnsupportedOperation, ValidUpToBound, Valuation, bounded_validate, evaluate,
    format_outcome, format_validation, run_program,
)
from .suites import SUITES

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    model: str = "standard"
    step_budget: int = 10000
    iter_bound: int = 64
    carrier_bound: int = 6
    var_bound: int = 4
    trace: bool = False
    output: str = "text"

    def __post_init__(self):
        for name in ("step_budget", "iter_bound", "carrier_bound", "var_bound"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be at least 1")

    def eval_config(self) -> EvalConfig:
        return EvalConfig(self.step_budget, self.iter_bound, self.carrier_bound, self.trace)


def _source(sort: str, text: str):
    """Parse ``text`` as ``sort``, resolving ``@NAME`` artifacts."""
    if text.startswith("@"):
        try:
            art_sort, body = artifact_source(text[1:])
        except UnknownArtifact:
            raise UsageError(f"unknown artifact {text}") from None
        if sort != art_sort and not (sort == "formula" and art_sort == "open"):
            raise UsageError(f"artifact {text} is a {art_sort}, not a {sort}")
        text = body
    return parse(sort, text)


def _valuation(assignments, s) -> Valuation:
    nums, bools = {}, {}
    for item in assignments or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"--set expects NAME=VALUE, got {item!r}")
        if name.startswith("?"):
            if value.strip() not in ("true", "false"):
                raise UsageError(f"boolean {name} must be true or false")
            bools[name[1:]] = value.strip() == "true"
            continue
        try:
            nums[name] = s.parse_value(value)
        except ValueError as err:
            raise UsageError(str(err)) from None
    return Valuation(nums, bools)


def _emit(cfg: CliConfig, text: str, data: dict) -> None:
    if cfg.output == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _trace_rows(outcome, s) -> list:
    return [{c: (s.format(snap.nums[c]) if c in snap.nums else None) for c in outcome.columns}
            for snap in outcome.trace]


# --------------------------------------------------------------- commands

def cmd_parse(args, cfg: CliConfig) -> int:
    tree = _source(args.sort, args.text)
    text = render(tree)
    _emit(cfg, text, {"sort": args.sort, "text": text})
    return EXIT_OK


def cmd_run(args, cfg: CliConfig) -> int:
    s = structure(cfg.model)
    k = _source("program", args.program)
    out = run_program(k, s, _valuation(args.set, s), cfg.eval_config())
    data = {"outcome": type(out).__name__}
    if isinstance(out, Halted):
        data.update(steps=out.steps, final={k: s.format(v) for k, v in out.final.nums.items()})
        data["final"].update({"?" + k: v for k, v in out.final.bools.items()})
    elif isinstance(out, BudgetExhausted):
        data.update(steps=out.steps)
    else:
        data.update(reason=out.reason)
    if cfg.trace and hasattr(out, "trace"):
        data["trace"] = _trace_rows(out, s)
    _emit(cfg, format_outcome(out, s), data)
    return EXIT_OK if isinstance(out, Halted) else EXIT_FALSE


def cmd_eval(args, cfg: CliConfig) -> int:
    s = structure(cfg.model)
    f = _source("formula", args.formula)
    verdict = evaluate(f, s, _valuation(args.set, s), cfg.eval_config())
    text = str(verdict.value)
    if verdict.witness:
        text += f" (witness {verdict.witness})"
    _emit(cfg, text, {"value": str(verdict.value), "witness": verdict.witness})
    return EXIT_OK if verdict.value is T else EXIT_FALSE


def cmd_validate(args, cfg: CliConfig) -> int:
    s = structure(cfg.model)
    f = _source("formula", args.formula)
    result = bounded_validate(f, s, cfg.eval_config(), cfg.var_bound, collect_all=args.all)
    data = {"result": type(result).__name__}
    if isinstance(result, Refuted):
        data["valuation"] = result.valuation.format(s)
        data["others"] = [v.format(s) for v in result.others]
    elif isinstance(result, Inconclusive):
        data["unknown_at"] = result.unknown_at.format(s)
        data["checked"] = result.checked
    else:
        data["checked"] = result.checked
    text = format_validation(result, s)
    if isinstance(result, Refuted) and result.others:
        text += f" and {len(result.others)} more"
    _emit(cfg, text, data)
    return EXIT_OK if isinstance(result, ValidUpToBound) else EXIT_FALSE


def _load(path: str):
    if path.startswith("@"):
        name = path[1:]
        data = resources.files("alwb") / "data" / f"{name}.proof"
        if not data.is_file():
            raise UsageError(f"no shipped proof script {path}")
        return parse_script(data.read_text(encoding="utf-8"))
    try:
        return load_script(path)
    except OSError as err:
        raise UsageError(str(err)) from None


def cmd_check(args, cfg: CliConfig) -> int:
    report = check_proof(_load(args.script), structure(cfg.model))
    data = {
        "steps": [{"id": v.id, "verdict": v.kind, "note": v.note, "detail": v.detail}
                  for v in report.steps],
        "accepted": report.accepted,
        "trusted": list(report.trusted),
        "rejected_at": report.failed_at,
    }
    _emit(cfg, report.render(), data)
    return EXIT_OK if report.accepted else EXIT_FALSE


def cmd_demo(args, cfg: CliConfig) -> int:
    if args.name == "standard":
        s = structure("standard")
        v = _valuation(args.set, s)
        if set(v.nums) != {"n", "m"}:
            raise UsageError("demo standard needs --set n=N --set m=M")
        n, m = v.nums["n"], v.nums["m"]
        if n < 1 or m < 1:
            raise UsageError("demo standard needs positive n and m")
        report = demo_standard(n, m, cfg.eval_config())
    else:
        report = DEMOS[args.name](cfg.eval_config())
    _emit(cfg, report.render(), {"name": report.name, "lines": list(report.lines),
                                 "passed": report.passed})
    return EXIT_OK if report.passed else EXIT_FALSE


def cmd_suite(args, cfg: CliConfig) -> int:
    names = list(SUITES) if args.name == "all" else [args.name]
    results = [SUITES[n]() for n in names]
    text = "\n".join(r.render() for r in results)
    data = {"suites": [{"name": r.name, "checked": r.checked, "passed": r.passed,
                        "failures": list(r.failures), "notes": list(r.notes)} for r in results]}
    _emit(cfg, text, data)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=sorted(STRUCTURES), default="standard")
    common.add_argument("--budget", type=int, default=None,
                        help="program step budget (default 10000; 1000 for demo nsn-diverge)")
    common.add_argument("--iter-bound", type=int, default=64)
    common.add_argument("--carrier-bound", type=int, default=6)
    common.add_argument("--var-bound", type=int, default=4)
    common.add_argument("--trace", action="store_true")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--set", action="append", metavar="NAME=VALUE",
                        help="initial value, e.g. n=12, n=NSN(12,0,1) or ?q=true")

    p = argparse.ArgumentParser(prog="alwb", description="Algorithmic logic workbench.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common], help="parse and pretty-print")
    sp.add_argument("sort", choices=("term", "open", "program", "formula"))
    sp.add_argument("text")
    sp.set_defaults(fn=cmd_parse)

    sp = sub.add_parser("run", parents=[common], help="run a program")
    sp.add_argument("program")
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("eval", parents=[common], help="evaluate a formula at a valuation")
    sp.add_argument("formula")
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("validate", parents=[common], help="bounded validation of a formula")
    sp.add_argument("formula")
    sp.add_argument("--all", action="store_true", help="collect every counterexample")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("check", parents=[common], help="check a proof script (@name for shipped ones)")
    sp.add_argument("script")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("demo", parents=[common], help="run a demo")
    sp.add_argument("name", choices=sorted(DEMOS) + ["standard"])
    sp.set_defaults(fn=cmd_demo)

    sp = sub.add_parser("suite", parents=[common], help="run a property suite")
    sp.add_argument("name", choices=sorted(SUITES) + ["all"])
    sp.set_defaults(fn=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        budget = args.budget
        if budget is None:
            budget = 1000 if getattr(args, "name", None) == "nsn-diverge" else 10000
        cfg = CliConfig(args.model, budget, args.iter_bound, args.carrier_bound,
                        args.var_bound, args.trace, args.output)
        return args.fn(args, cfg)
    except (UsageError, ScriptError) as err:
        parser.print_usage(sys.stderr)
        print(f"alwb: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"alwb: syntax error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (UnboundVariable, UnsupportedOperation) as err:
        print(f"alwb: error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
