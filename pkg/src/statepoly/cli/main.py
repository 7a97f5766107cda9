"""``spo`` command-line interface."""
from __future__ import annotations

import argparse
import os
import re
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from ..apps import (Graph, Permutation, SolverFailure, code_theta_check, confusability_graph,
                    delsarte_feasible, delsarte_problem, independence_number, odd_holes,
                    theta_problem, uncertainty_relaxation, werner_relaxation)
from ..hierarchy import DEFAULT_MAX_SIZE, CapacityError, DegreeError, assemble_relaxation
from ..solver import ProblemTooLarge, check_size, export_sdpa, solve
from .problem import REGIMES, ProblemError, ProblemSemanticError, parse_problem_file
from .report import EXIT_SEMANTIC, EXIT_SYNTAX, Report, emit_report

SOLVER_MODES = ("internal", "export-only")
_RESIDUAL_KEYS = ("pres", "dres", "gap", "rel_gap", "min_eig", "eq_residual")


class UsageError(Exception):
    """Bad command-line input (exit code 2)."""


def solver_mode() -> str:
    mode = os.environ.get("SPO_SOLVER", "internal").strip() or "internal"
    if mode not in SOLVER_MODES:
        raise UsageError(f"SPO_SOLVER must be one of {', '.join(SOLVER_MODES)}, got {mode!r}")
    return mode


def _solver_options(args, extra=None) -> dict:
    opts = dict(extra or {})
    if getattr(args, "tol", None) is not None:
        opts.update(tol_gap=args.tol, tol_feas=args.tol)
    return opts


def _run_cone(cone, report: Report, args, default_export: str, sign: float = 1.0,
              options=None) -> Report:
    """Export and/or solve ``cone``, filling ``report`` in place."""
    export = getattr(args, "export", None)
    export_only = args.command == "export" or solver_mode() == "export-only"
    if export_only and export is None:
        export = default_export
    if export is not None:
        path = export_sdpa(cone, export)
        report.artifacts["sdpa"] = str(path)
    if export_only:
        report.status = "exported"
        return report
    try:
        check_size(cone)
    except ProblemTooLarge as exc:
        report.status = "too_large"
        report.message = str(exc)
        return report
    sol = solve(cone, **_solver_options(args, options))
    report.status = sol.status
    report.residuals = {k: sol.residuals[k] for k in _RESIDUAL_KEYS if k in sol.residuals}
    report.detail["iterations"] = sol.iterations
    if sol.message:
        report.message = sol.message
    if sol.status == "optimal":
        report.bound = sign * sol.objective
    return report


# solve / export ------------------------------------------------------------------
def _archimedean(value):
    if value is None:
        return None
    if value == "auto":
        return True
    try:
        radius = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive number or 'auto'") from None
    if not radius > 0:
        raise argparse.ArgumentTypeError("expected a positive number or 'auto'")
    return radius


def _assemble(args, report: Report):
    problem = parse_problem_file(args.problem)
    regime = args.regime or problem.regime
    spec, constraints, objective = problem.build(regime)
    level = args.level if args.level is not None else problem.level
    if level is None:
        level = problem.minimal_level(objective, constraints)
    task = args.task or problem.task
    archimedean = args.archimedean if args.archimedean is not None else problem.archimedean
    try:
        relax = assemble_relaxation(spec, constraints, objective, level, task=task,
                                    archimedean=archimedean, max_size=args.max_size)
    except DegreeError as exc:
        raise ProblemSemanticError(str(exc), problem.objective.line,
                                   problem.objective.column, problem.path) from None
    except ValueError as exc:
        raise ProblemSemanticError(str(exc), path=problem.path) from None
    report.level = level
    report.task = task
    report.regime = regime
    report.n_moment_vars = relax.n_vars
    report.pencil_sizes = [pc.size for pc in relax.pencils]
    return problem, relax


def cmd_solve(args, report: Report) -> Report:
    problem, relax = _assemble(args, report)
    if args.dump_relaxation:
        relax.dump_json(args.dump_relaxation)
        report.artifacts["relaxation"] = str(args.dump_relaxation)
    default = Path(args.problem).with_suffix(".dat-s").name
    return _run_cone(relax.to_cone(), report, args, default, options=problem.solver_options)


cmd_export = cmd_solve


# graph commands ----------------------------------------------------------------------
def _read_graph(path) -> Graph:
    try:
        return Graph.parse(Path(path).read_text())
    except ValueError as exc:
        raise ProblemError(str(exc), path=str(path)) from None


def _graph_detail(g: Graph, report: Report):
    report.detail["vertices"] = g.n_vertices
    report.detail["edges"] = len(g.edges)
    if g.n_vertices <= 24:
        report.detail["independence_number"] = independence_number(g)


def cmd_theta(args, report: Report) -> Report:
    g = _read_graph(args.graph)
    pruned = g.pruned()
    _graph_detail(pruned, report)
    if g.loops:
        report.detail["looped_vertices_removed"] = len(g.loops)
    cone = theta_problem(pruned)
    report.task = "max"
    report.n_moment_vars = cone.n_vars
    report.pencil_sizes = [b.size for b in cone.blocks]
    return _run_cone(cone, report, args, "theta.dat-s")


def cmd_uncertainty(args, report: Report) -> Report:
    g = _read_graph(args.graph)
    holes = odd_holes(g) if args.odd_holes else ()
    relax = uncertainty_relaxation(g, args.level, holes, max_size=args.max_size)
    _graph_detail(g, report)
    report.detail["odd_hole_cuts"] = len(holes)
    report.level = args.level
    report.task = "max"
    report.regime = "state"
    report.n_moment_vars = relax.n_vars
    report.pencil_sizes = [pc.size for pc in relax.pencils]
    return _run_cone(relax.to_cone(), report, args, "uncertainty.dat-s")


# quantum codes -----------------------------------------------------------------------
def cmd_qcode(args, report: Report) -> Report:
    n, delta = args.n, args.delta
    report.detail["params"] = [n, 1, delta]
    if args.method == "delsarte":
        report.detail["method"] = "delsarte_lp"
        if solver_mode() == "export-only":
            return _run_cone(delsarte_problem(n, delta), report, args,
                             f"delsarte_{n}_1_{delta}.dat-s")
        res = delsarte_feasible(n, delta, **_solver_options(args))
        if res.feasible:
            report.status = "feasible"
        elif res.status == "primal_infeasible":
            report.status = "infeasible"
            report.message = f"the Delsarte LP rules out (({n},1,{delta}))"
        else:
            report.status = res.status
        if res.point is not None:
            report.detail["point"] = [float(v) for v in res.point]
        if res.solution is not None:
            report.residuals = {k: res.solution.residuals[k] for k in _RESIDUAL_KEYS
                                if k in res.solution.residuals}
        return report
    report.detail["method"] = "lovasz_theta"
    if solver_mode() == "export-only":
        g = confusability_graph(n, delta).pruned()
        report.detail["vertices"] = g.n_vertices
        return _run_cone(theta_problem(g), report, args, f"theta_{n}_1_{delta}.dat-s")
    cb = code_theta_check(n, delta, export_path=args.export, **_solver_options(args))
    report.status = cb.status
    report.detail.update(method=cb.method, value=cb.value)
    for key, value in cb.detail.items():
        report.detail[key] = value
    if cb.certificate_path:
        report.artifacts["sdpa"] = cb.certificate_path
    report.message = {
        "excluded": f"2^{n} > theta + 1: no (({n},1,{delta})) code exists",
        "not_excluded": f"the theta test does not rule out (({n},1,{delta}))",
    }.get(cb.status, "the theta SDP was exported for an external solver")
    return report


# Werner witnesses ------------------------------------------------------------------
_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*\*?\s*"
                   r"((?:\([^()]*\)\s*)+|id\b)")


def parse_combination(text: str, degree: int | None = None) -> list:
    """``"(1 2) - 0.5*(1 2 3)"`` -> ``[(1.0, Permutation), (-0.5, Permutation)]``."""
    pos, raw = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or (raw and m.group(1) is None):
            raise UsageError(f"cannot parse permutation combination at {text[pos:]!r}")
        coeff = float(m.group(2)) if m.group(2) else 1.0
        if m.group(1) == "-":
            coeff = -coeff
        try:
            raw.append((coeff, Permutation.parse(m.group(3))))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        pos = m.end()
    if not raw:
        raise UsageError("empty permutation combination")
    top = max([p.degree for _, p in raw] + [degree or 0])
    if top == 0:
        raise UsageError("give --degree for a combination of identities only")
    return [(c, Permutation(top, p.cycles)) for c, p in raw]


def format_combination(combo) -> str:
    parts = []
    for c, p in combo:
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c):g}*"
        parts.append(f"{sign} {mag}{p}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def cmd_werner(args, report: Report) -> Report:
    combo = parse_combination(args.combination, args.degree)
    try:
        relax = werner_relaxation(combo, args.level)
    except DegreeError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report.level = args.level
    report.task = "min"
    report.regime = "trace"
    report.detail["combination"] = format_combination(combo)
    report.detail["degree"] = combo[0][1].degree
    report.n_moment_vars = relax.n_vars
    report.pencil_sizes = [pc.size for pc in relax.pencils]
    return _run_cone(relax.to_cone(), report, args, "werner.dat-s")


# argument parsing ----------------------------------------------------------------------
def _common(p: argparse.ArgumentParser, export=True):
    p.add_argument("--tol", type=float, help="gap and feasibility tolerance")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH")
    p.add_argument("--no-timestamps", action="store_true",
                   help="omit wall time and timestamp (byte-stable reports)")
    if export:
        p.add_argument("--export", metavar="PATH", help="write the SDP in SDPA sparse format")


def _relaxation_flags(p: argparse.ArgumentParser):
    p.add_argument("problem", help="problem file (.spo)")
    p.add_argument("--level", "-d", type=int, help="relaxation level (overrides the file)")
    p.add_argument("--regime", choices=REGIMES)
    p.add_argument("--task", choices=("min", "max"))
    p.add_argument("--archimedean", type=_archimedean, metavar="N",
                   help="add the ball constraint N - sum x_i^2 >= 0 ('auto': N = n)")
    p.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE, metavar="CAP",
                   help="largest allowed Hankel basis")
    p.add_argument("--dump-relaxation", metavar="PATH",
                   help="write the assembled relaxation as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spo", description="Bounds for state, trace and moment polynomial problems.",
        epilog="Exit codes: 0 answer found, 2 syntax/usage error, 3 semantic error, "
               "4 infeasible or excluded, 5 solver failure.  SPO_SOLVER=export-only "
               "writes SDPA files instead of solving.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file")
    _relaxation_flags(p)
    _common(p)

    p = sub.add_parser("export", help="write a problem file's relaxation in SDPA format")
    _relaxation_flags(p)
    _common(p)

    p = sub.add_parser("theta", help="Lovasz theta number of a graph")
    p.add_argument("graph", help="edge-list file")
    _common(p)

    p = sub.add_parser("uncertainty", help="uncertainty bound for an anticommutation graph")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--level", "-d", type=int, default=1)
    p.add_argument("--odd-holes", action="store_true", help="add all odd-hole cuts")
    p.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE, metavar="CAP")
    _common(p)

    p = sub.add_parser("qcode", help="existence checks for ((n,1,delta)) codes")
    p.add_argument("method", choices=("theta", "delsarte"))
    p.add_argument("n", type=int)
    p.add_argument("delta", type=int)
    _common(p)

    p = sub.add_parser("werner", help="trace-polynomial bound for a permutation combination")
    p.add_argument("combination", help="e.g. \"(1 2)\" or \"() - 0.5*(1 2 3)\"")
    p.add_argument("--level", "-d", type=int, default=2)
    p.add_argument("--degree", type=int, help="number of tensor factors")
    _common(p)
    return parser


COMMANDS = {"solve": cmd_solve, "export": cmd_export, "theta": cmd_theta,
            "uncertainty": cmd_uncertainty, "qcode": cmd_qcode, "werner": cmd_werner}


def run(command: str, args: argparse.Namespace) -> tuple:
    """Execute ``command``; returns ``(report or None, exit code)``."""
    report = Report(command=command, status="numerical_failure")
    start = time.perf_counter()
    try:
        solver_mode()
        COMMANDS[command](args, report)
    except ProblemError as exc:
        print(exc.describe(), file=sys.stderr)
        return None, exc.exit_code
    except (UsageError, OSError) as exc:
        print(f"spo {command}: {exc}", file=sys.stderr)
        return None, EXIT_SYNTAX
    except (CapacityError, ProblemTooLarge) as exc:
        report.status = "too_large"
        report.message = str(exc)
    except SolverFailure as exc:
        sol = exc.solution
        report.status = sol.status if sol is not None else "numerical_failure"
        report.message = str(exc)
    except ValueError as exc:
        print(f"spo {command}: {exc}", file=sys.stderr)
        return None, EXIT_SEMANTIC
    report.bound = report.bound if report.status == "optimal" else None
    report.wall_time = time.perf_counter() - start
    report.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report, report.exit_code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report, code = run(args.command, args)
    if report is not None:
        stamps = not args.no_timestamps
        emit_report(report, "text", stream=sys.stdout, timestamps=stamps)
        if args.json:
            emit_report(report, "json", path=args.json, timestamps=stamps)
    return code


__all__ = ["COMMANDS", "build_parser", "main", "parse_combination", "run", "solver_mode"]
