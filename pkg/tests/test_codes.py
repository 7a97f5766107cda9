import math
from fractions import Fraction
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statepoly.apps import (PauliOperator, code_theta_check, confusability_graph,
                            delsarte_constraints, delsarte_feasible, enumerators_oracle,
                            knill_laflamme_distance, krawtchouk, macwilliams, macwilliams_matrix,
                            ring_code_projector, stabilizer_elements)

from helpers import random_projection


def stabilizer_projector(generators):
    """Code projector prod (1 + g)/2 built from explicit matrices."""
    mats = [PauliOperator.from_label(g).matrix() for g in generators]
    dim = mats[0].shape[0]
    return reduce(lambda acc, g: acc @ (np.eye(dim) + g) / 2, mats, np.eye(dim, dtype=complex))


FIVE_QUBIT = stabilizer_projector(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])
FOUR_TWO_TWO = stabilizer_projector(["XXXX", "ZZZZ"])
REPETITION = stabilizer_projector(["ZZI", "IZZ"])


# -- Krawtchouk -------------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 7))
def test_krawtchouk_edges(n):
    for i in range(n + 1):
        assert krawtchouk(n, 0, i) == 1
    for j in range(n + 1):
        assert krawtchouk(n, j, 0) == 3 ** j * math.comb(n, j)


def test_krawtchouk_small_value_and_range():
    assert krawtchouk(1, 1, 1) == -1
    with pytest.raises(ValueError):
        krawtchouk(2, 3, 0)


@pytest.mark.parametrize("n", range(1, 6))
def test_krawtchouk_generating_function(n):
    # sum_j K_j(i) z^j = (1 + 3z)^(n - i) (1 - z)^i, compared at integer points
    for i in range(n + 1):
        for z in (2, -3, 5):
            lhs = sum(krawtchouk(n, j, i) * z ** j for j in range(n + 1))
            assert lhs == (1 + 3 * z) ** (n - i) * (1 - z) ** i


# -- MacWilliams ------------------------------------------------------------------------

@settings(max_examples=50)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=7))
def test_macwilliams_is_an_involution(coeffs):
    once = macwilliams(coeffs)
    twice = macwilliams(once.B)
    assert list(twice.B) == [Fraction(c) for c in coeffs]


@pytest.mark.parametrize("n", range(1, 7))
def test_macwilliams_matrix_squares_to_identity(n):
    m = macwilliams_matrix(n)
    sq = [[sum(m[i][k] * m[k][j] for k in range(n + 1)) for j in range(n + 1)]
          for i in range(n + 1)]
    assert sq == [[int(i == j) for j in range(n + 1)] for i in range(n + 1)]


def test_macwilliams_small_examples():
    assert macwilliams((4, 0)).B == (2, 6)
    assert macwilliams((1, 1)).B == (1, 1)


# -- oracle -----------------------------------------------------------------------------

def test_oracle_single_qubit():
    full = enumerators_oracle(np.eye(2))
    assert full.A == pytest.approx((4, 0)) and full.B == pytest.approx((2, 6))
    zero = enumerators_oracle(np.diag([1.0, 0.0]))
    assert zero.A == pytest.approx((1, 1)) and zero.B == pytest.approx((1, 1))


def test_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        enumerators_oracle(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        enumerators_oracle(np.array([[1.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("seed", range(20))
def test_macwilliams_matches_oracle_on_random_projectors(seed):
    rng = np.random.default_rng(seed)
    n = 1 + seed % 3
    pi = random_projection(2 ** n, rng, rank=int(rng.integers(1, 2 ** n + 1)))
    enum = enumerators_oracle(pi)
    assert enum.A[0] == pytest.approx(enum.K ** 2)
    np.testing.assert_allclose(macwilliams(enum.A).B, enum.B, atol=1e-8)


@pytest.mark.parametrize("pi, K, distance", [
    (REPETITION, 2, 1), (FOUR_TWO_TWO, 4, 2), (FIVE_QUBIT, 2, 3),
])
def test_enumerator_distance_matches_knill_laflamme(pi, K, distance):
    enum = enumerators_oracle(pi)
    assert enum.K == K
    assert knill_laflamme_distance(pi) == distance == enum.distance()


@pytest.mark.parametrize("n, delta", [(3, 2), (5, 3)])
def test_self_dual_ring_codes_are_pure(n, delta):
    pi = ring_code_projector(n)
    enum = enumerators_oracle(pi)
    # a rank-one projector passes every Knill-Laflamme test; purity carries the distance
    assert enum.K == 1 and knill_laflamme_distance(pi) == n + 1
    assert enum.is_pure(delta) and not enum.is_pure(delta + 1)


def test_ring_code_stabilizers():
    stab = stabilizer_elements(ring_code_projector(5))
    assert len(stab) == 31 and min(p.weight for p in stab) == 3


# -- Delsarte ---------------------------------------------------------------------------

def test_delsarte_single_qubit_feasible():
    res = delsarte_feasible(1, 1)
    assert res.feasible and res.status == "optimal"
    assert delsarte_constraints(1, 1, res.point, tol=1e-6) == []
    assert delsarte_constraints(1, 1, (1, 1)) == []


def test_delsarte_point_checker_by_hand():
    assert delsarte_constraints(1, 1, (1, 3)) == ["sum a = 2"]
    assert "a_1 = 0" in delsarte_constraints(2, 2, (1, 1, 2))


def test_delsarte_five_three_feasible_and_witnessed():
    res = delsarte_feasible(5, 3)
    assert res.feasible
    enum = enumerators_oracle(ring_code_projector(5))
    assert delsarte_constraints(5, 3, enum.A, tol=1e-9) == []


def test_delsarte_infeasible_case():
    res = delsarte_feasible(1, 2)
    assert not res.feasible and res.status == "primal_infeasible"
    assert res.certificate is not None


def test_delsarte_parameter_range():
    with pytest.raises(ValueError):
        delsarte_feasible(1, 3)


# -- confusability graph and theta check ------------------------------------------------

def test_confusability_single_qubit():
    g = confusability_graph(1, 1)
    assert g.n_vertices == 3 and len(g.edges) == 3 and not g.loops


def test_confusability_prunes_everything_for_distance_two():
    g = confusability_graph(1, 2)
    assert len(g.loops) == 3 and g.pruned().n_vertices == 0


def test_confusability_four_three_count():
    g = confusability_graph(4, 3)
    pruned = g.pruned()
    assert g.n_vertices == 255
    assert pruned.n_vertices == 108 + 81 == 189


def test_confusability_edges_match_definition():
    g = confusability_graph(2, 2)
    ps = [PauliOperator.from_label(lab) for lab in g.labels]
    for i, a in enumerate(ps):
        assert (i in g.loops) == (0 < a.weight < 2)
        for j in range(i + 1, len(ps)):
            b = ps[j]
            expect = not a.commutes(b) or 0 < (a * b).weight < 2
            assert g.adjacent(i, j) == expect


def test_theta_check_single_qubit():
    res = code_theta_check(1, 1)
    assert res.status == "not_excluded" and res.value == pytest.approx(1, abs=1e-6)


def test_theta_check_five_qubit_witness(tmp_path):
    res = code_theta_check(5, 3, export_path=tmp_path / "theta.dat-s")
    assert res.status == "not_excluded" and res.value >= 31
    assert (tmp_path / "theta.dat-s").exists()
