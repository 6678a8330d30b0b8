"""Command-line driver.

Exit codes: 0 every check passed, 1 a check failed or an audit raised,
2 the input file is missing or does not parse/elaborate, 3 bad usage.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import audit, diagdsl
from .errors import DiagramError, SourceError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3
REPORT_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is taken by input errors here
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    path: str | None
    seed: int
    trials: int
    max_dim: int
    json: bool
    out: str | None
    mode: str | None = None

    def validate(self) -> None:
        if self.trials < 1:
            raise UsageError("--trials must be at least 1")
        if not 1 <= self.max_dim <= 12:
            raise UsageError("--max-dim must lie in [1, 12]")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report on stdout")
    common.add_argument("--out", help="write the JSON report to this path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--max-dim", dest="max_dim", type=int, default=5)

    p = _Parser(prog="preab", description="Exact checks for diagrams of vector-space pairs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, text in (
        ("check", "run the checks declared in a .pad file"),
        ("two-square", "run the two-square pipeline on every two-row diagram in a .pad file"),
        ("snake", "run the snake pipeline on every two-row diagram in a .pad file"),
    ):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("path", metavar="FILE")
    sub.add_parser("probe", parents=[common], help="push random kernels out along random maps")
    fz = sub.add_parser("fuzz", parents=[common], help="randomized audit")
    fz.add_argument("--mode", choices=audit.MODES, required=True)
    return p


def make_report(cfg: RunConfig, checks: list[dict], failures: list[dict]) -> dict[str, Any]:
    return {
        "version": REPORT_VERSION,
        "command": cfg.command,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "checks": checks,
        "failures": failures,
    }


def _input_failure(exc: Exception) -> dict[str, Any]:
    details: dict[str, Any] = {"message": str(exc)}
    if isinstance(exc, SourceError):
        details.update(line=exc.line, column=exc.column)
        if exc.kind:
            details["validation"] = exc.kind
    return {"kind": type(exc).__name__, "dsl_text": "", "details": details}


def _run_file(cfg: RunConfig) -> tuple[list[dict], list[dict], int | None]:
    try:
        text = Path(cfg.path).read_text(encoding="utf-8")
    except OSError as exc:
        return [], [{"kind": "FileError", "dsl_text": "", "details": {"message": str(exc)}}], EXIT_INPUT
    try:
        plan = diagdsl.load(text)
        force = {"two-square": "two_square", "snake": "snake"}.get(cfg.command)
        if force is not None:
            if not any(pc.kind in ("two_square", "snake") for pc in plan.checks):
                raise diagdsl.ElabError("no two-row diagram check in file", 1, 1, "MissingBinding")
            if force == "snake":
                _revalidate_as_snake(plan)
    except SourceError as exc:
        return [], [_input_failure(exc)], EXIT_INPUT
    try:
        checks = audit.run_plan(plan, cfg.seed, force)
    except DiagramError as exc:
        return [], [{"kind": type(exc).__name__, "dsl_text": text, "details": {"error": str(exc)}}], None
    failures = []
    if not all(c["pass"] for c in checks):
        bad = sorted({c["name"] for c in checks if not c["pass"]})
        failures.append({"kind": "CheckFailed", "dsl_text": text, "details": {"failed_checks": bad}})
    return checks, failures, None


def _revalidate_as_snake(plan: diagdsl.CheckPlan) -> None:
    for pc in plan.checks:
        if pc.kind == "two_square":
            inp = audit.SnakeInput(**{k: getattr(pc.payload, k) for k in diagdsl.DIAGRAM_BINDINGS})
            bad = inp.failed_preconditions()
            if bad:
                raise diagdsl.ElabError(f"snake: {bad[0]}", pc.line, 1, "RowCondition")


def _run_fuzz(cfg: RunConfig, mode: str) -> tuple[list[dict], list[dict]]:
    res = audit.fuzz(mode, cfg.trials, cfg.seed, cfg.max_dim)
    if cfg.out and (res.findings or res.exploratory):
        where = Path(cfg.out).resolve().parent
        where.mkdir(parents=True, exist_ok=True)
        stem = Path(cfg.out).stem
        for trial, pad in res.findings:
            (where / f"{stem}.{mode}.{trial:05d}.pad").write_text(pad, encoding="utf-8")
        for trial, pad in res.exploratory:
            (where / f"{stem}.{mode}.{trial:05d}.exploratory.pad").write_text(pad, encoding="utf-8")
    return res.checks, res.failures


def execute(cfg: RunConfig) -> tuple[dict[str, Any], int]:
    code = None
    if cfg.command in ("check", "two-square", "snake"):
        checks, failures, code = _run_file(cfg)
    else:
        mode = "probe" if cfg.command == "probe" else cfg.mode
        checks, failures = _run_fuzz(cfg, mode)
    if code is None:
        code = EXIT_OK if not failures and all(c["pass"] for c in checks) else EXIT_FAIL
    return make_report(cfg, checks, failures), code


def _summary(report: dict[str, Any]) -> str:
    lines = []
    for c in report["checks"]:
        src = c["details"].get("source")
        lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}" + (f"  ({src})" if src else ""))
    for f in report["failures"]:
        msg = f["details"].get("message") or f["details"].get("error") or ", ".join(f["details"].get("failed_checks", []))
        lines.append(f"failure: {f['kind']}: {msg}")
    lines.append(f"{len(report['checks'])} checks, {len(report['failures'])} failures")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        cfg = RunConfig(
            command=args.command,
            path=getattr(args, "path", None),
            seed=args.seed,
            trials=args.trials,
            max_dim=args.max_dim,
            json=args.json,
            out=args.out,
            mode=getattr(args, "mode", None),
        )
        cfg.validate()
    except UsageError as exc:
        print(f"preab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    report, code = execute(cfg)
    text = diagdsl.emit(report)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n", encoding="utf-8")
    if cfg.json:
        sys.stdout.write(text + "\n")
    else:
        print(_summary(report))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
