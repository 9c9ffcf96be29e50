import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfskit.algebra import (
    basis_from_json, basis_to_json, diagonal_generator, generate_basis,
    structure_constants, tensors_to_json, verify_algebra_identities,
)
from dfskit.serialize import dumps

R3, R6 = np.sqrt(3), np.sqrt(6)


def trace_f(basis, i, j, k):
    # independent oracle: f_ijk = -(i/4) Tr([l_i, l_j] l_k)
    a, b, c = basis[i], basis[j], basis[k]
    return (-0.25j * np.trace((a @ b - b @ a) @ c)).real


def trace_d(basis, i, j, k):
    a, b, c = basis[i], basis[j], basis[k]
    return (0.25 * np.trace((a @ b + b @ a) @ c)).real


# --- oracles --------------------------------------------------------------------

def test_su2_basis_is_pauli():
    b = generate_basis(2)
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1, -1])
    for got, want in zip(b.matrices, (sx, sy, sz)):
        np.testing.assert_allclose(got, want, atol=0)
    t = structure_constants(b)
    assert t.dsym == {}


def test_lambda8_entry():
    assert generate_basis(3)[8][2, 2] == pytest.approx(-2 / R3, abs=1e-15)


def test_su4_last_diagonal():
    np.testing.assert_allclose(np.diag(generate_basis(4)[15]).real,
                               np.array([1, 1, 1, -3]) / R6, atol=1e-15)


def test_su3_dsym_diagonal_values(tensors3):
    assert tensors3.d_value(3, 3, 8) == pytest.approx(1 / R3, abs=1e-14)
    assert tensors3.d_value(8, 8, 8) == pytest.approx(-1 / R3, abs=1e-14)
    diag = [tensors3.d_value(i, i, 8) for i in tensors3.diagonal_indices]
    assert sum(diag) == pytest.approx(0.0, abs=1e-14)


def test_su4_dsym_last():
    t = structure_constants(generate_basis(4))
    assert t.d_value(15, 15, 15) == pytest.approx(-2 / R6, abs=1e-14)


def test_f123(basis3, tensors3):
    assert trace_f(basis3, 1, 2, 3) == pytest.approx(1.0, abs=1e-15)
    assert tensors3.f_value(1, 2, 3) == pytest.approx(1.0, abs=1e-15)


def test_su3_textbook_constants(tensors3):
    f = {(1, 4, 7): 0.5, (1, 5, 6): -0.5, (2, 4, 6): 0.5, (2, 5, 7): 0.5,
         (3, 4, 5): 0.5, (3, 6, 7): -0.5, (4, 5, 8): R3 / 2, (6, 7, 8): R3 / 2}
    for key, val in f.items():
        assert tensors3.f_value(*key) == pytest.approx(val, abs=1e-14)
    assert tensors3.d_value(1, 4, 6) == pytest.approx(0.5, abs=1e-14)
    assert tensors3.d_value(4, 4, 8) == pytest.approx(-1 / (2 * R3), abs=1e-14)


def test_ffd_contraction_at_d3(tensors3):
    f = tensors3.f_dense[1:, 1:, 1:]
    np.testing.assert_allclose(np.einsum("ijk,ljk->il", f, f), 3 * np.eye(8), atol=1e-12)


def test_su2_identities_trivial():
    t = structure_constants(generate_basis(2))
    rep = verify_algebra_identities(t)
    assert rep.passed
    for key in ("d_iik=0", "d_ijk f_ljk=0", "dff=-(d/2)d", "ddd=(d^2-12)/(2d)d"):
        assert rep.residuals[key] == 0


@pytest.mark.parametrize("d", [3, 4, 5])
def test_tensors_match_trace_oracle(bases, d):
    b = bases[d]
    t = structure_constants(b)
    n = b.size
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        assert abs(t.f_value(i, j, k) - trace_f(b, i, j, k)) < 1e-13
    for i, j, k in itertools.combinations_with_replacement(range(1, n + 1), 3):
        assert abs(t.d_value(i, j, k) - trace_d(b, i, j, k)) < 1e-13


# --- invariants -----------------------------------------------------------------

@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_basis_invariants(bases, d):
    b = bases[d]
    assert b.size == d * d - 1
    for m in b.matrices:
        assert np.abs(m - m.conj().T).max() < 1e-14
        assert abs(np.trace(m)) < 1e-14
    gram = np.einsum("iab,jba->ij", b.stack[1:], b.stack[1:])
    np.testing.assert_allclose(gram, 2 * np.eye(b.size), atol=1e-12)
    assert len(b.diagonal_indices) == d - 1
    for i in b.diagonal_indices:
        m = b[i]
        assert np.all(m[~np.eye(d, dtype=bool)] == 0)
    b.check()


@pytest.mark.parametrize("d", [3, 4])
def test_product_expansion(bases, d):
    b = bases[d]
    t = structure_constants(b)
    for i, j in itertools.product(range(1, b.size + 1), repeat=2):
        rhs = (2 / d) * (i == j) * np.eye(d) + sum(
            (1j * t.f_value(i, j, k) + t.d_value(i, j, k)) * b[k] for k in range(1, b.size + 1))
        assert np.abs(b[i] @ b[j] - rhs).max() < 1e-12


def test_symmetry_rules(tensors3):
    for i, j, k in itertools.permutations((1, 4, 7)):
        sign = np.linalg.det(np.eye(3)[[(i, j, k).index(x) for x in (1, 4, 7)]])
        assert tensors3.f_value(i, j, k) == pytest.approx(sign * 0.5)
        assert tensors3.d_value(i, j, k) == tensors3.d_value(1, 4, 7)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_identity_suite(bases, d):
    rep = verify_algebra_identities(structure_constants(bases[d]), 1e-11, bases[d])
    assert rep.passed, rep.failures()
    assert "sum_diag d_iil=0" in rep.residuals


def test_identity_report_flags_failure(tensors3):
    rep = verify_algebra_identities(tensors3, tolerance=-1.0)
    assert not rep.passed
    assert set(rep.failures()) == set(rep.residuals)


def test_diagonal_generator_normalization():
    for d in range(2, 7):
        for l in range(2, d + 1):
            m = diagonal_generator(d, l)
            assert np.trace(m @ m) == pytest.approx(2.0)
            assert np.trace(m) == pytest.approx(0.0, abs=1e-15)


@given(st.integers(min_value=2, max_value=6), st.data())
@settings(max_examples=40, deadline=None)
def test_commutator_closes_on_basis(d, data):
    b = generate_basis(d)
    t = structure_constants(b)
    i = data.draw(st.integers(1, b.size))
    j = data.draw(st.integers(1, b.size))
    comm = b[i] @ b[j] - b[j] @ b[i]
    rhs = sum(2j * t.f_value(i, j, k) * b[k] for k in range(1, b.size + 1))
    assert np.abs(comm - rhs).max() < 1e-12


# --- errors and I/O -------------------------------------------------------------

def test_invalid_dimension():
    with pytest.raises(ValueError):
        generate_basis(1)
    with pytest.raises(TypeError):
        generate_basis(2.5)


def test_label_zero_is_identity(basis3):
    np.testing.assert_array_equal(basis3[0], np.eye(3))
    with pytest.raises(IndexError):
        basis3[9]


def test_basis_json_round_trip(basis3):
    data = json.loads(dumps(basis_to_json(basis3)))
    again = basis_from_json(data)
    for a, b in zip(basis3.matrices, again.matrices):
        np.testing.assert_array_equal(a, b)
    assert again.diagonal_indices == basis3.diagonal_indices


def test_tensor_json_canonical(tensors3):
    doc = tensors_to_json(tensors3)
    triples = [tuple(x[:3]) for x in doc["f"]]
    assert triples == sorted(triples)
    assert all(i < j < k for i, j, k in triples)
    assert all(i <= j <= k for i, j, k, _ in doc["dsym"])
