import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statepoly.apps import PauliOperator, all_paulis, pauli_mul, symplectic_matrix


def paulis(n):
    return st.builds(
        PauliOperator,
        st.just(n),
        st.integers(0, 3),
        st.lists(st.integers(0, 1), min_size=n, max_size=n).map(tuple),
        st.lists(st.integers(0, 1), min_size=n, max_size=n).map(tuple),
    )


def test_xy_is_iz():
    out = PauliOperator.from_label("X") * PauliOperator.from_label("Y")
    assert out == PauliOperator.from_label("iZ")


def test_square_is_identity():
    for label in "XYZ":
        p = PauliOperator.from_label(label)
        out = p * p
        assert out.is_identity and out.phase == 0


def test_weight():
    assert PauliOperator.from_label("XIZ").weight == 2
    assert PauliOperator.identity(4).weight == 0


def test_label_round_trip():
    for label in ("XIZ", "-iYY", "iZ", "-XX"):
        assert PauliOperator.from_label(label).label == label


def test_bad_label_and_size_mismatch():
    with pytest.raises(ValueError):
        PauliOperator.from_label("XQ")
    with pytest.raises(ValueError):
        pauli_mul(PauliOperator.from_label("X"), PauliOperator.from_label("XX"))


def test_all_paulis_order_and_index():
    ps = all_paulis(2)
    assert len(ps) == 16 and ps[0].is_identity
    assert [p.index for p in ps] == list(range(16))


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(paulis(n), paulis(n))))
def test_product_matches_matrices(pair):
    a, b = pair
    np.testing.assert_allclose(pauli_mul(a, b).matrix(), a.matrix() @ b.matrix(), atol=1e-12)


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(paulis(n), paulis(n), paulis(n))))
def test_associative(triple):
    a, b, c = triple
    assert (a * b) * c == a * (b * c)


@settings(max_examples=1000)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(paulis(n), paulis(n))))
def test_swapped_products_differ_by_commutation_sign(pair):
    a, b = pair
    ab, ba = a * b, b * a
    assert ab.letters == ba.letters
    assert (ab.phase - ba.phase) % 4 == 2 * a.symplectic_form(b)
    commute = np.allclose(a.matrix() @ b.matrix(), b.matrix() @ a.matrix())
    assert a.commutes(b) == commute


def test_symplectic_matrix_rows():
    rows = symplectic_matrix([PauliOperator.from_label(s) for s in ("XZ", "YI")])
    assert rows.tolist() == [[1, 0, 0, 1], [1, 0, 1, 0]]


def test_adjoint_matches_conjugate_transpose():
    for label in ("iXY", "-iZ", "-YY"):
        p = PauliOperator.from_label(label)
        np.testing.assert_allclose(p.adjoint().matrix(), p.matrix().conj().T)
