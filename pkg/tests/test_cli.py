import json
import re
import subprocess
import sys
import time
from pathlib import Path

import pytest

from statepoly.cli import (ProblemSemanticError, ProblemSyntaxError, Report, load_schema, main,
                           parse_combination, parse_problem_file, parse_problem_text,
                           report_text)
from statepoly.cli.main import UsageError

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "demos" / "problems"
GRAPHS = ROOT / "demos" / "graphs"

SMALL = """\
variables x y
projection x y
regime state
objective 1/2*s(x*y*x*y) + 1/2 s(y*x*y*x) - s(x*y*x)*s(y) + 3
task min
level 3
"""


@pytest.fixture
def internal(monkeypatch):
    monkeypatch.delenv("SPO_SOLVER", raising=False)


def run_cli(argv, tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(list(argv) + ["--json", str(out), "--no-timestamps"])
    text = capsys.readouterr().out
    data = json.loads(out.read_text()) if out.exists() else None
    return code, text, data


def write(tmp_path, text, name="p.spo"):
    path = tmp_path / name
    path.write_text(text)
    return path


# -- parsing ---------------------------------------------------------------------------

def test_shipped_state_problem_parses():
    prob = parse_problem_file(PROBLEMS / "comparative_state.spo")
    assert prob.regime == "state" and prob.level == 5
    assert prob.variables == ["x", "y"]


def test_moment_with_anticommute_is_semantic_error():
    text = "variables a b\ninvolution a b\nanticommute a b\nregime moment\nobjective s(a)\n"
    with pytest.raises(ProblemSemanticError) as err:
        parse_problem_text(text, "p.spo")
    assert err.value.exit_code == 3 and err.value.line == 3


def test_empty_file_is_syntax_error():
    with pytest.raises(ProblemSyntaxError) as err:
        parse_problem_text("# nothing here\n", "p.spo")
    assert err.value.exit_code == 2
    assert err.value.describe().startswith("p.spo:1:1:")


@pytest.mark.parametrize("text, kind, line", [
    ("variables x\nobjective s(x\n", ProblemSyntaxError, 2),
    ("variables x\nobjective s(z)\n", ProblemSemanticError, 2),
    ("variables x\nregime weird\nobjective s(x)\n", ProblemSyntaxError, 2),
    ("objective s(x)\nvariables x\n", ProblemSyntaxError, 1),
    ("variables x\nobjective s(x)\nobjective s(x)\n", ProblemSyntaxError, 3),
    ("variables x\nobjective s(x)\nconstraint x <= 1\n", ProblemSyntaxError, 3),
    ("variables x\nfrobnicate\nobjective s(x)\n", ProblemSyntaxError, 2),
    ("variables x\nobjective s(x)\nlevel -1\n", ProblemSyntaxError, 3),
])
def test_error_locations(text, kind, line):
    with pytest.raises(kind) as err:
        parse_problem_text(text, "p.spo")
    assert err.value.line == line


def test_unknown_variable_column():
    with pytest.raises(ProblemSemanticError) as err:
        parse_problem_text("variables x\nobjective s(x) + s(q)\n", "p.spo")
    assert (err.value.line, err.value.column) == (2, 20)


def test_constraints_and_options():
    text = ("variables x y\nfree x y\nobjective s(x*x)\nconstraint 1 - x*x >= 0\n"
            "constraint s(y) = 0\narchimedean 4\ntol 1e-7\n")
    prob = parse_problem_text(text, "p.spo")
    assert [c.kind for c in prob.constraints] == ["psd", "eq_localizing"]
    assert prob.archimedean == 4 and prob.solver_options["tol_gap"] == 1e-7
    _, constraints, objective = prob.build()
    assert prob.minimal_level(objective, constraints) == 1


# -- solve -----------------------------------------------------------------------------

def test_solve_small_problem(tmp_path, capsys, internal):
    code, text, data = run_cli(["solve", str(write(tmp_path, SMALL))], tmp_path, capsys)
    assert code == 0 and data["status"] == "optimal"
    assert data["bound"] == pytest.approx(3 - 1 / 16, abs=1e-3)
    assert data["schema"] == "statepoly.report/1" and data["level"] == 3
    for word in ("level", "bound", "gap"):
        assert word in text


def test_level_zero_gives_constant_term(tmp_path, capsys, internal):
    code, _, data = run_cli(["solve", "--level", "0", str(write(tmp_path, SMALL))],
                            tmp_path, capsys)
    assert code == 0 and data["bound"] == pytest.approx(3)


def test_json_is_deterministic(tmp_path, capsys, internal):
    path = write(tmp_path, SMALL)
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    main(["solve", str(path), "--json", str(first), "--no-timestamps"])
    main(["solve", str(path), "--json", str(second), "--no-timestamps"])
    assert first.read_bytes() == second.read_bytes()
    assert "wall_time" not in json.loads(first.read_text())


def test_report_matches_schema(tmp_path, capsys, internal):
    jsonschema = pytest.importorskip("jsonschema")
    out = tmp_path / "r.json"
    main(["solve", str(write(tmp_path, SMALL)), "--json", str(out)])
    data = json.loads(out.read_text())
    jsonschema.validate(data, load_schema("report"))
    assert "wall_time" in data and "timestamp" in data


def test_export_only_mode(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SPO_SOLVER", "export-only")
    sdpa = tmp_path / "out.dat-s"
    code, _, data = run_cli(["solve", str(write(tmp_path, SMALL)), "--export", str(sdpa)],
                            tmp_path, capsys)
    assert code == 0 and data["status"] == "exported" and data["bound"] is None
    assert sdpa.exists() and str(sdpa) in data["artifacts"].values()


def test_bad_solver_mode(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SPO_SOLVER", "magic")
    assert main(["solve", str(write(tmp_path, SMALL))]) == 2


def test_export_command_writes_file(tmp_path, capsys, internal):
    sdpa = tmp_path / "p.dat-s"
    code, _, data = run_cli(["export", str(write(tmp_path, SMALL)), "--export", str(sdpa)],
                            tmp_path, capsys)
    assert code == 0 and data["bound"] is None and sdpa.exists()


def test_infeasible_problem_exit_four(tmp_path, capsys, internal):
    text = ("variables x\nprojection x\nobjective s(x)\nconstraint s(x) - 2 >= 0\n"
            "level 1\n")
    code, _, data = run_cli(["solve", str(write(tmp_path, text))], tmp_path, capsys)
    assert code == 4 and data["status"] == "primal_infeasible" and data["bound"] is None


def test_syntax_and_semantic_exit_codes(tmp_path, capsys, internal):
    assert main(["solve", str(write(tmp_path, ""))]) == 2
    bad = "variables a b\ninvolution a b\nanticommute a b\nregime moment\nobjective s(a)\n"
    assert main(["solve", str(write(tmp_path, bad))]) == 3
    err = capsys.readouterr().err
    assert re.search(r"p\.spo:3:\d+:", err)


def test_missing_file_is_usage_error(tmp_path, capsys, internal):
    assert main(["solve", str(tmp_path / "nope.spo")]) == 2


def test_degree_too_high_is_semantic(tmp_path, capsys, internal):
    text = "variables x\nfree x\nobjective s(x*x*x)\nlevel 1\n"
    assert main(["solve", str(write(tmp_path, text))]) == 3


def test_guardrail_reports_too_large(tmp_path, capsys, internal):
    text = "variables a b c\nobjective s(a)\nlevel 4\n"
    code, _, data = run_cli(["solve", str(write(tmp_path, text)), "--max-size", "50"],
                            tmp_path, capsys)
    assert code == 5 and data["status"] == "too_large"


# -- application commands ----------------------------------------------------------------

def test_theta_command(tmp_path, capsys, internal):
    code, _, data = run_cli(["theta", str(GRAPHS / "c5.txt")], tmp_path, capsys)
    assert code == 0 and data["bound"] == pytest.approx(5 ** 0.5, abs=1e-4)


def test_uncertainty_command(tmp_path, capsys, internal):
    code, _, data = run_cli(["uncertainty", str(GRAPHS / "k3.txt"), "-d", "2"], tmp_path,
                            capsys)
    assert code == 0 and data["bound"] == pytest.approx(1, abs=1e-4)
    code, _, data = run_cli(["uncertainty", str(GRAPHS / "c5.txt"), "--odd-holes"], tmp_path,
                            capsys)
    assert code == 0 and data["bound"] == pytest.approx(2, abs=1e-4)


def test_qcode_delsarte(tmp_path, capsys, internal):
    code, _, data = run_cli(["qcode", "delsarte", "5", "3"], tmp_path, capsys)
    assert code == 0 and data["status"] == "feasible"
    code, _, data = run_cli(["qcode", "delsarte", "1", "2"], tmp_path, capsys)
    assert code == 4 and data["status"] == "infeasible"


def test_qcode_theta_small(tmp_path, capsys, internal):
    code, _, data = run_cli(["qcode", "theta", "1", "1"], tmp_path, capsys)
    assert code == 0 and data["status"] == "not_excluded"


def test_werner_command(tmp_path, capsys, internal):
    code, _, data = run_cli(["werner", "-(1 2)", "-d", "2"], tmp_path, capsys)
    assert code == 0 and data["bound"] == pytest.approx(-1, abs=1e-4)


def test_parse_combination():
    terms = parse_combination("() - 0.5*(1 2 3)")
    assert [c for c, _ in terms] == [1.0, -0.5]
    assert all(p.degree == 3 for _, p in terms)
    with pytest.raises(UsageError):
        parse_combination("2*")


def test_report_text_for_non_optimal():
    r = Report(command="solve", status="exported", bound=1.0)
    assert r.bound is None
    assert "n/a" in report_text(r)


def test_module_entry_point(tmp_path, internal):
    proc = subprocess.run([sys.executable, "-m", "statepoly", "theta", str(GRAPHS / "k3.txt")],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and "bound" in proc.stdout


# -- shipped problems -------------------------------------------------------------------

@pytest.mark.parametrize("path", sorted(PROBLEMS.glob("*.spo")), ids=lambda p: p.name)
def test_shipped_problem_within_budget(path, tmp_path, capsys, internal):
    budget = re.search(r"Time budget: (\d+) s", path.read_text())
    assert budget, "every shipped problem documents its time budget"
    start = time.perf_counter()
    code, _, data = run_cli(["solve", str(path)], tmp_path, capsys)
    assert time.perf_counter() - start <= float(budget.group(1))
    assert data["status"] == "optimal" and code == 0
