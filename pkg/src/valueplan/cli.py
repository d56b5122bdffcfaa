"""Command-line interface: validate, influence, solve, export-lp, serve.

Exit codes: 0 success, 1 infeasible plan or validation violations, 2 usage
or parse errors. VALUEPLAN_TIMEOUT sets the default solve timeout.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .document import (
    DocumentError,
    ParseError,
    ValidationFailure,
    machine_json,
    parse_project,
)
from .model import Project, validate_project
from .planner import (
    INFEASIBLE,
    OPTIMAL,
    TIMEOUT_NO_INCUMBENT,
    project_influences,
    solve_exact,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2

TABLE = "table"
MACHINE = "machine-readable"


def _default_timeout() -> float:
    raw = os.environ.get("VALUEPLAN_TIMEOUT")
    if raw:
        try:
            return float(raw)
        except ValueError:
            pass
    return 60.0


def _read_project(path: str) -> Project:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}")
    return parse_project(text)


def _parse_beta(raw: str) -> tuple[int, Decimal]:
    try:
        key, _, value = raw.partition("=")
        return int(key), Decimal(value)
    except (ValueError, InvalidOperation):
        raise argparse.ArgumentTypeError(
            f"beta override must look like t=value, got {raw!r}"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valueplan",
        description="Plan software releases around value dependencies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a project document")
    p_validate.add_argument("file")

    p_influence = sub.add_parser(
        "influence", help="print influence matrices for a project"
    )
    p_influence.add_argument("file")
    p_influence.add_argument("--type", type=int, default=None,
                             help="value type index (default: all)")
    p_influence.add_argument("--format", choices=(TABLE, MACHINE),
                             default=TABLE)

    p_solve = sub.add_parser("solve", help="find the optimal release plan")
    p_solve.add_argument("file")
    p_solve.add_argument("--budget", type=Decimal, default=None)
    p_solve.add_argument("--beta", action="append", type=_parse_beta,
                         default=[], metavar="T=VALUE",
                         help="override the bound for one value type")
    p_solve.add_argument("--timeout", type=float, default=None,
                         help="seconds before returning the incumbent")
    p_solve.add_argument("--format", choices=(TABLE, MACHINE), default=TABLE)

    p_export = sub.add_parser("export-lp", help="write the model in LP format")
    p_export.add_argument("file")
    p_export.add_argument("-o", "--output", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data-dir", default=None,
                         help="directory for write-through project documents")

    return parser


def _cmd_validate(args) -> int:
    project = _read_project(args.file)
    # parse_project already validates; reaching here means clean.
    violations = validate_project(project)
    if violations:
        for v in violations:
            print(v.message, file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"ok: {project.n} requirements, {project.type_count} value types")
    return EXIT_OK


def _cmd_influence(args) -> int:
    from .service import influence_payload

    project = _read_project(args.file)
    influences = project_influences(project)
    types = (
        range(1, project.type_count + 1) if args.type is None else [args.type]
    )
    for t in types:
        if not 1 <= t <= project.type_count:
            print(f"value type {t} is out of range 1..{project.type_count}",
                  file=sys.stderr)
            return EXIT_USAGE
    if args.format == MACHINE:
        payloads = [influence_payload(influences, t) for t in types]
        print(machine_json(payloads if args.type is None else payloads[0]))
        return EXIT_OK
    for t in types:
        name = project.value_types[t - 1].name
        print(f"type {t} ({name}):")
        for i in range(project.n):
            row = " ".join(f"{v:7.3f}" for v in influences[t - 1][i])
            print(f"  r{i + 1}: {row}")
    return EXIT_OK


def _apply_overrides(project: Project, args) -> Project:
    changes = {}
    if args.budget is not None:
        changes["budget"] = args.budget
    if args.beta:
        betas = dict(project.betas)
        betas.update(args.beta)
        changes["betas"] = betas
    if not changes:
        return project
    candidate = replace(project, **changes)
    violations = validate_project(candidate)
    if violations:
        raise ValidationFailure(violations)
    return candidate


def _cmd_solve(args) -> int:
    from .service import report_payload

    project = _apply_overrides(_read_project(args.file), args)
    influences = project_influences(project)
    timeout = args.timeout if args.timeout is not None else _default_timeout()
    report = solve_exact(project, influences, timeout=timeout)

    if args.format == MACHINE:
        print(machine_json(report_payload(report, project)))
    else:
        print(f"status: {report.status}")
        if report.plan is not None:
            plan = report.plan
            selected = plan.selected_ids()
            print(f"objective: {plan.objective:g}")
            print("selected: " + (" ".join(str(i) for i in selected) or "(none)"))
            print(f"{'id':>4} {'sel':>4} {'cost':>10} {'value':>10} {'max penalty':>12}")
            for req in project.requirements:
                worst = plan.penalties[req.id - 1].max() if project.type_count else 0.0
                mark = "yes" if plan.selection[req.id - 1] else "no"
                print(f"{req.id:>4} {mark:>4} {req.cost!s:>10} "
                      f"{req.expected_value(1)!s:>10} {worst:>12.3f}")
            print("delivered per type:")
            for vt in project.value_types:
                bound = project.betas.get(vt.index)
                suffix = f" (bound {bound})" if bound is not None else ""
                print(f"  {vt.index} {vt.name}: "
                      f"{plan.delivered[vt.index - 1]:g}{suffix}")
        print(f"nodes: {report.nodes_explored}, "
              f"time: {report.wall_time:.3f}s")
    if report.status in (INFEASIBLE, TIMEOUT_NO_INCUMBENT):
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_export_lp(args) -> int:
    from .lp import export_lp

    project = _read_project(args.file)
    text = export_lp(project, project_influences(project))
    Path(args.output).write_text(text)
    print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(data_dir=args.data_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "influence": _cmd_influence,
    "solve": _cmd_solve,
    "export-lp": _cmd_export_lp,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationFailure as exc:
        for violation in exc.violations:
            print(violation.message, file=sys.stderr)
        return EXIT_INFEASIBLE
    except ParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except DocumentError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
