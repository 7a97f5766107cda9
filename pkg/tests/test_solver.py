import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statepoly.algebra import evaluate, parse_polynomial
from statepoly.apps import Graph, theta_problem
from statepoly.hierarchy import assemble_relaxation
from statepoly.solver import (ConeProblem, ProblemTooLarge, check_size, export_sdpa, read_sdpa,
                              read_vector, sdpa_text, solve, verify_solution, write_vector)

from helpers import comparative, random_projection_model


def scalar_problem(task="min"):
    p = ConeProblem(1, [1.0], task=task)
    p.add_psd_block([[0.0]], [(0, 0, 0, 1.0)])
    return p


def reference():
    pytest.importorskip("cvxpy")
    from statepoly.solver.reference import reference_solve
    return reference_solve


def random_sdp(seed, n_vars=4, size=4):
    """Bounded SDP with a strictly feasible point at y = 0."""
    rng = np.random.default_rng(seed)
    p = ConeProblem(n_vars, rng.normal(size=n_vars), task=("min", "max")[seed % 2])
    entries = []
    for k in range(n_vars):
        a = rng.normal(size=(size, size))
        a = a + a.T
        entries += [(k, i, j, a[i, j]) for i in range(size) for j in range(i, size)]
    p.add_psd_block(np.eye(size), entries)
    # box keeps the problem bounded whatever the random data
    box = [(k, 2 * k, 1.0) for k in range(n_vars)] + [(k, 2 * k + 1, -1.0) for k in range(n_vars)]
    p.add_diagonal_block(np.full(2 * n_vars, 3.0), box)
    return p


# -- basic statuses --------------------------------------------------------------------

def test_trivial_minimum():
    s = solve(scalar_problem())
    assert s.status == "optimal" and abs(s.objective) <= 1e-8


def test_contradictory_bounds_infeasible():
    p = ConeProblem(1, [1.0])
    p.add_psd_block([[0.0]], [(0, 0, 0, 1.0)])
    p.add_psd_block([[-1.0]], [(0, 0, 0, -1.0)])
    assert solve(p).status == "primal_infeasible"


def test_unbounded_ray_is_dual_infeasible():
    assert solve(scalar_problem("max")).status == "dual_infeasible"


def test_equality_only_problem():
    p = ConeProblem(2, [1.0, 1.0])
    p.add_diagonal_block([0.0, 0.0], [(0, 0, 1.0), (1, 1, 1.0)])
    p.add_equalities([[1.0, -2.0]], [-1.0])
    s = solve(p)
    assert s.status == "optimal"
    assert s.objective == pytest.approx(1.0, abs=1e-7)
    assert s.residuals["eq_residual"] <= 1e-8


def test_optimal_status_certifies_tolerances():
    s = solve(random_sdp(3))
    assert s.status == "optimal"
    assert s.residuals["rel_gap"] <= 1e-8
    assert s.residuals["pres"] <= 1e-8 and s.residuals["dres"] <= 1e-8
    assert s.residuals["min_eig"] >= -1e-8


def test_c5_theta_matches_sqrt5():
    s = solve(theta_problem(Graph.cycle(5)))
    assert s.status == "optimal" and s.objective == pytest.approx(np.sqrt(5), abs=1e-4)


def test_c5_theta_matches_reference_solver():
    value, _, status = reference()(theta_problem(Graph.cycle(5)))
    assert status == "optimal"
    assert solve(theta_problem(Graph.cycle(5))).objective == pytest.approx(value, abs=1e-4)


@settings(max_examples=15)
@given(st.integers(0, 10_000))
def test_random_sdps_agree_with_reference(seed):
    p = random_sdp(seed)
    ours = solve(p)
    value, _, status = reference()(p)
    assert ours.status == "optimal" and status == "optimal"
    assert ours.objective == pytest.approx(value, abs=1e-5, rel=1e-5)


# -- determinism and scaling -------------------------------------------------------------

def test_repeat_runs_are_bitwise_identical():
    p = random_sdp(11)
    assert solve(p).to_bytes() == solve(p).to_bytes()


@pytest.mark.parametrize("seed", [1, 2, 5])
def test_objective_scaling(seed):
    p = random_sdp(seed)
    base, scaled = solve(p), solve(p.scaled(10.0))
    assert base.status == scaled.status == "optimal"
    assert scaled.objective == pytest.approx(10 * base.objective, abs=1e-6, rel=1e-6)


# -- verification ------------------------------------------------------------------------

def test_verify_trivial_and_perturbed():
    p = scalar_problem()
    s = solve(p)
    rep = verify_solution(p, s)
    assert abs(rep["min_eig"]) <= 1e-10 and rep["eq_residual"] <= 1e-10
    assert rep["gap"] <= 1e-10
    assert verify_solution(p, s.y - 1.0)["min_eig"] < 0


def test_verify_rejects_wrong_length():
    with pytest.raises(ValueError):
        verify_solution(scalar_problem(), np.zeros(3))


def test_state_problem_gap():
    spec, f = comparative("state")
    relax = assemble_relaxation(spec, [], f, 3)
    p = relax.to_cone()
    s = solve(p)
    rep = verify_solution(p, s)
    assert s.status == "optimal"
    assert rep["gap"] <= 1e-6 and rep["min_eig"] >= -1e-7
    # a valid lower bound on the true minimum -1/16, already close at this level
    assert -1 / 16 - 1e-4 <= rep["objective"] <= -1 / 16 + 1e-8


def test_external_vector_round_trip(tmp_path):
    p = random_sdp(4)
    s = solve(p)
    write_vector(s.y, tmp_path / "y.txt")
    y = read_vector(tmp_path / "y.txt")
    np.testing.assert_array_equal(y, s.y)
    assert verify_solution(p, y)["objective"] == pytest.approx(s.objective, abs=1e-12)


# -- SDPA export ---------------------------------------------------------------------------

def test_trivial_export_is_six_stable_lines(tmp_path):
    a, b = tmp_path / "a.dat-s", tmp_path / "b.dat-s"
    export_sdpa(scalar_problem(), a)
    export_sdpa(scalar_problem(), b)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert len(lines) == 6
    assert lines[1:] == ["1", "1", "1", "1", "1 1 1 1 1"]


def test_empty_problem_rejected():
    with pytest.raises(ValueError):
        sdpa_text(ConeProblem(0, []))


def test_export_uses_17_digits():
    p = ConeProblem(1, [1 / 3])
    p.add_psd_block([[0.0]], [(0, 0, 0, 1.0)])
    assert "0.33333333333333331" in sdpa_text(p)


def test_read_back_preserves_problem(tmp_path):
    p = random_sdp(8)
    path = export_sdpa(p, tmp_path / "p.dat-s")
    q = read_sdpa(path)
    assert sdpa_text(q) == sdpa_text(p)
    assert solve(q).objective == pytest.approx(solve(p).objective, abs=1e-9)


def test_exported_state_problem_matches_reference(tmp_path):
    spec, f = comparative("state")
    p = assemble_relaxation(spec, [], f, 3).to_cone()
    q = read_sdpa(export_sdpa(p, tmp_path / "state.dat-s"))
    value, _, status = reference()(q)
    assert status in ("optimal", "optimal_inaccurate")
    assert solve(p).objective == pytest.approx(value, abs=1e-5)


# -- guardrail -----------------------------------------------------------------------------

def test_guardrail_refuses_large_blocks():
    p = ConeProblem(1, [1.0])
    p.add_psd_block(np.eye(401), [(0, 0, 0, 1.0)])
    with pytest.raises(ProblemTooLarge):
        check_size(p)
    with pytest.raises(ProblemTooLarge):
        solve(p)


def test_guardrail_counts_entries():
    p = ConeProblem(1, [1.0])
    for _ in range(2):
        p.add_psd_block(np.eye(250), [(0, 0, 0, 1.0)])
    with pytest.raises(ProblemTooLarge):
        check_size(p)
    check_size(p, max_entries=10**6)


# -- weak duality against models -----------------------------------------------------------

def test_bound_below_model_values():
    spec, f = comparative("trace")
    bound = assemble_relaxation(spec, [], f, 2).solve().bound
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = random_projection_model("trace", rng)
        assert bound <= evaluate(f, m, check=False).real + 1e-7


def test_constraint_text_roundtrip_solves():
    spec, _ = comparative("state")
    f = parse_polynomial("s(x) + s(y)", spec)
    res = assemble_relaxation(spec, [], f, 1, task="max").solve()
    assert res.bound == pytest.approx(2, abs=1e-6)
