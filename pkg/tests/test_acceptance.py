"""Acceptance suite: one test per criterion, summarized at the end of the run."""
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from statepoly.algebra import AlgebraSpec, StateModel, StatePolynomial, evaluate, parse_polynomial
from statepoly.apps import (Graph, Permutation, code_theta_check, connected_graphs,
                            delsarte_constraints, delsarte_feasible, enumerators_oracle,
                            independence_number, krawtchouk, lovasz_theta, macwilliams,
                            ring_code_projector, theta_problem, uncertainty_bound, werner_bound)
from statepoly.hierarchy import assemble_relaxation
from statepoly.solver import export_sdpa, read_sdpa, sdpa_text

from helpers import (comparative, random_density, random_hermitian, random_projection,
                     random_projection_model, random_unitary, random_vector_state,
                     state_minimizer, trace_minimizer)

criterion = pytest.mark.criterion


def reference_solve():
    pytest.importorskip("cvxpy")
    from statepoly.solver.reference import reference_solve as solve
    return solve


def comparative_bound(regime, level):
    spec, f = comparative(regime)
    res = assemble_relaxation(spec, [], f, level).solve()
    assert res.status == "optimal", res.solution.message
    return res.bound


# -- comparative example -------------------------------------------------------------------

@criterion(1, "state regime, level 5, bound -1/16 within 1e-3 in 10 min")
def test_state_regime_level_five():
    start = time.perf_counter()
    bound = comparative_bound("state", 5)
    elapsed = time.perf_counter() - start
    print(f"state level 5: {bound:.10f} in {elapsed:.1f} s")
    assert abs(bound + 1 / 16) <= 1e-3 and elapsed <= 600


@criterion(2, "trace regime, level 4, bound -1/27 within 1e-3 in 5 min")
def test_trace_regime_level_four():
    start = time.perf_counter()
    bound = comparative_bound("trace", 4)
    elapsed = time.perf_counter() - start
    print(f"trace level 4: {bound:.10f} in {elapsed:.1f} s")
    assert abs(bound + 1 / 27) <= 1e-3 and elapsed <= 300


@criterion(3, "moment regime, level 3, bound >= -1e-5")
def test_moment_regime_level_three():
    bound = comparative_bound("moment", 3)
    print(f"moment level 3: {bound:.10f}")
    assert bound >= -1e-5


@criterion(4, "explicit minimizers evaluate to -1/16 and -1/27 within 1e-9")
def test_evaluation_oracle():
    _, f_state = comparative("state")
    _, f_trace = comparative("trace")
    assert abs(evaluate(f_state, state_minimizer()) + 1 / 16) <= 1e-9
    assert abs(evaluate(f_trace, trace_minimizer()) + 1 / 27) <= 1e-9


@criterion(5, "levels 2..5 monotone; state <= trace <= moment at matched levels")
def test_monotonicity_and_nesting():
    state = [comparative_bound("state", d) for d in (2, 3, 4, 5)]
    print("state levels 2..5:", state)
    assert all(b >= a - 1e-6 for a, b in zip(state, state[1:]))
    for d in (2, 3):
        s, t, m = (comparative_bound(r, d) for r in ("state", "trace", "moment"))
        print(f"level {d}: state {s:.8f} trace {t:.8f} moment {m:.8f}")
        assert s <= t + 1e-6 and t <= m + 1e-6


# -- Cauchy-Schwarz ----------------------------------------------------------------------

def cauchy_schwarz():
    spec = AlgebraSpec.build("x y", regime="state")
    f = parse_polynomial("s(x*x)*s(y*y) - s(x*y)*s(y*x)", spec)
    ball = parse_polynomial("2 - x*x - y*y", spec)
    return spec, f, ball


@criterion(6, "Cauchy-Schwarz with ball constraint, level 3, bound >= -1e-5")
def test_cauchy_schwarz_level_three():
    spec, f, ball = cauchy_schwarz()
    res = assemble_relaxation(spec, [ball], f, 3).solve()
    print(f"Cauchy-Schwarz level 3: {res.status} {res.bound}")
    assert res.status == "optimal" and res.bound >= -1e-5


# -- graphs ------------------------------------------------------------------------------

@criterion(7, "theta of K5, empty-5, C5 within 1e-4 of a reference solve of the SDPA export")
def test_theta_against_exported_reference(tmp_path):
    solve_ref = reference_solve()
    for name, g, exact in (("K5", Graph.complete(5), 1.0), ("E5", Graph.empty(5), 5.0),
                           ("C5", Graph.cycle(5), math.sqrt(5))):
        ours = lovasz_theta(g)
        exported = read_sdpa(export_sdpa(theta_problem(g), tmp_path / f"{name}.dat-s"))
        value, _, status = solve_ref(exported)
        print(f"{name}: internal {ours:.8f} reference {value:.8f}")
        assert status == "optimal"
        assert abs(ours - value) <= 1e-4 and abs(ours - exact) <= 1e-4


@criterion(8, "alpha <= theta_2 <= theta + 1e-4 on connected graphs up to 5 vertices; C3 gives 1")
def test_uncertainty_sandwich():
    graphs = [g for n in range(1, 6) for g in connected_graphs(n)]
    assert len(graphs) == 31
    for g in graphs:
        alpha = independence_number(g)
        second = uncertainty_bound(g, 2)
        theta = lovasz_theta(g)
        assert alpha - 1e-6 <= second <= theta + 1e-4, (sorted(g.edges), alpha, second, theta)
    assert abs(uncertainty_bound(Graph.complete(3), 2) - 1) <= 1e-4


# -- codes -------------------------------------------------------------------------------

@criterion(9, "MacWilliams matches the enumerator oracle and is an exact involution")
def test_macwilliams_agreement():
    rng = np.random.default_rng(2024)
    for k in range(20):
        n = 1 + k % 3
        dim = 2 ** n
        pi = random_projection(dim, rng, rank=int(rng.integers(1, dim + 1)))
        enum = enumerators_oracle(pi)
        assert np.max(np.abs(np.array(macwilliams(enum.A).B, dtype=float) - enum.B)) <= 1e-8
    for _ in range(20):
        n = int(rng.integers(1, 8))
        a = [Fraction(int(rng.integers(-99, 100)), int(rng.integers(1, 50))) for _ in range(n + 1)]
        assert list(macwilliams(macwilliams(a).B).B) == a


def krawtchouk_by_generating_function(n):
    """Rows j, columns i: coefficients of (1 + 3z)^(n-i) (1 - z)^i."""
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        poly = [1]
        for factor in [[1, 3]] * (n - i) + [[1, -1]] * i:
            poly = [sum(poly[k - t] * factor[t] for t in range(2) if 0 <= k - t < len(poly))
                    for k in range(len(poly) + 1)]
        for j in range(n + 1):
            table[j][i] = poly[j]
    return table


@criterion(10, "Krawtchouk edge values for n <= 8 and full tables for n <= 6")
def test_krawtchouk_tables():
    for n in range(1, 9):
        for i in range(n + 1):
            assert krawtchouk(n, 0, i) == 1
        for j in range(n + 1):
            assert krawtchouk(n, j, 0) == 3 ** j * math.comb(n, j)
    for n in range(1, 7):
        ours = [[krawtchouk(n, j, i) for i in range(n + 1)] for j in range(n + 1)]
        assert ours == krawtchouk_by_generating_function(n)


@criterion(11, "Delsarte LP feasible for (5, 3) with the ring-code point, under 1 s")
def test_delsarte_five_three():
    start = time.perf_counter()
    res = delsarte_feasible(5, 3)
    elapsed = time.perf_counter() - start
    assert res.feasible and elapsed < 1.0
    ring = enumerators_oracle(ring_code_projector(5))
    print(f"ring-code point {np.round(ring.A, 9).tolist()}, LP {elapsed * 1e3:.0f} ms")
    assert delsarte_constraints(5, 3, ring.A, tol=1e-9) == []


@criterion(12, "theta check excludes ((4,1,3)) on the 189-vertex graph within 30 min")
def test_four_one_three_excluded():
    start = time.perf_counter()
    res = code_theta_check(4, 3)
    elapsed = time.perf_counter() - start
    print(f"((4,1,3)): {res.status}, theta {res.value}, {res.detail}, {elapsed:.0f} s")
    assert res.detail["vertices"] == 189
    assert res.status == "excluded" and 16 > res.value + 1 and elapsed <= 1800


# -- Werner ----------------------------------------------------------------------------

def brute_force_pair_minimum(sign, rng, samples=3000):
    """min of sign * tau(X1 X2) over random projection pairs of dimension <= 4."""
    best = np.inf
    for _ in range(samples):
        k = int(rng.integers(1, 5))
        x1 = random_projection(k, rng)
        x2 = random_projection(k, rng)
        best = min(best, sign * np.trace(x1 @ x2).real / k)
    return best


@criterion(13, "Werner bounds for (1 2) and -(1 2) match brute force")
def test_werner_transposition():
    rng = np.random.default_rng(13)
    swap = Permutation.parse("(1 2)")
    plus = werner_bound(swap, 2)
    minus = werner_bound({swap: -1.0}, 2)
    brute_plus = brute_force_pair_minimum(1, rng)
    brute_minus = brute_force_pair_minimum(-1, rng)
    print(f"(1 2): {plus:.2e} vs {brute_plus:.2e}; -(1 2): {minus:.8f} vs {brute_minus:.8f}")
    assert abs(plus) <= 1e-6 and abs(plus - brute_plus) <= 1e-6
    assert abs(minus + 1) <= 1e-4 and abs(minus - brute_minus) <= 1e-4


# -- sampling oracle ---------------------------------------------------------------------

def ball_model(rng):
    dim = int(rng.integers(1, 5))
    mats = []
    for _ in range(2):
        h = random_hermitian(dim, rng, real=True)
        mats.append(h / max(np.abs(np.linalg.eigvalsh(h)).max(), 1e-12) * rng.uniform(0, 1))
    state = random_vector_state(dim, rng, real=True) if rng.random() < 0.5 else \
        random_density(dim, rng, real=True)
    return StateModel(tuple(mats), state)


def anticommuting_model(rng):
    k = int(rng.integers(1, 3))
    u = random_unitary(2 * k, rng)
    a = u @ np.kron(np.diag([1.0, -1.0]), np.eye(k)) @ u.conj().T
    b = u @ np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(k)) @ u.conj().T
    return StateModel((a, b), random_density(2 * k, rng))


def sampling_problems():
    out = []
    for regime in ("state", "trace", "moment"):
        spec, f = comparative(regime)
        out.append((f"comparative {regime}", spec, [], f, 2, "min",
                    lambda rng, r=regime: random_projection_model(r, rng)))
    spec, f, ball = cauchy_schwarz()
    out.append(("Cauchy-Schwarz", spec, [ball], f, 2, "min", ball_model))
    spec = AlgebraSpec.build("a b", involutions="a b", anticommute=[("a", "b")])
    f = parse_polynomial("s(a)*s(a) + s(b)*s(b)", spec)
    out.append(("anticommuting pair", spec, [], f, 2, "max", anticommuting_model))
    return out


@criterion(14, "moment vectors of 100 exact models satisfy every pencil; bounds hold")
def test_sampling_feasibility():
    rng = np.random.default_rng(14)
    for name, spec, cons, f, level, task, sample in sampling_problems():
        relax = assemble_relaxation(spec, cons, f, level, task=task)
        cone = relax.to_cone()
        res = relax.solve()
        assert res.status == "optimal", name
        worst_eig, worst_gap = np.inf, np.inf
        for _ in range(100):
            model = sample(rng)
            y = relax.moment_vector(model)
            eig = min(b.min_eig(y) for b in cone.blocks)
            if cone.n_eq:
                assert np.abs(cone.eq_matrix @ y + cone.eq_const).max() <= 1e-8, name
            value = evaluate(f, model, check=False).real
            gap = value - res.bound if task == "min" else res.bound - value
            worst_eig, worst_gap = min(worst_eig, eig), min(worst_gap, gap)
        print(f"{name}: bound {res.bound:.8f}, worst eig {worst_eig:.2e}, "
              f"worst slack {worst_gap:.2e}")
        assert worst_eig >= -1e-8 and worst_gap >= -1e-6, name


# -- export fidelity ---------------------------------------------------------------------

def random_relaxation(rng, regime):
    spec = AlgebraSpec.build("x y", projections="x y", regime=regime)
    words = [w for k in (1, 2) for w in itertools.product((0, 1), repeat=k)]
    f = StatePolynomial.zero(spec)
    for _ in range(4):
        picked = [words[int(rng.integers(0, len(words)))] for _ in range(int(rng.integers(1, 3)))]
        f = f + StatePolynomial.from_monomial(spec, picked, (), float(rng.normal()))
    f = (f + f.adjoint()).scale(0.5)
    return assemble_relaxation(spec, [], f, 2, task=("min", "max")[int(rng.integers(0, 2))])


@criterion(15, "5 random relaxations round-trip through SDPA to a reference solver")
def test_export_fidelity(tmp_path):
    solve_ref = reference_solve()
    rng = np.random.default_rng(15)
    for k in range(5):
        relax = random_relaxation(rng, ("state", "trace", "moment")[k % 3])
        cone = relax.to_cone()
        first = export_sdpa(cone, tmp_path / f"r{k}.dat-s")
        again = export_sdpa(relax.to_cone(), tmp_path / f"r{k}b.dat-s")
        assert first.read_bytes() == again.read_bytes()
        assert sdpa_text(read_sdpa(first)) == first.read_text()
        value, _, status = solve_ref(read_sdpa(first))
        ours = relax.solve()
        print(f"relaxation {k} ({relax.spec.regime}): internal {ours.bound:.9f} "
              f"reference {value:.9f} [{status}]")
        assert ours.status == "optimal" and status in ("optimal", "optimal_inaccurate")
        assert abs(ours.bound - value) <= 1e-5
