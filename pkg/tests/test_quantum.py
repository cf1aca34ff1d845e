# -*- coding: utf-8 -*-
"""
Tests for the labelled linear-algebra layer.
"""
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest

from nvholo.quantum import (
    DensityMatrix,
    DimensionMismatchError,
    HilbertSpace,
    NonFiniteError,
    NonHermitianError,
    Operator,
    StateVector,
    adjoint,
    basis_states,
    commutator,
    density_matrix,
    eig_hermitian,
    embed,
    expectation,
    identity,
    is_unitary,
    ket,
    matrix_exp,
    normalize,
    operator_from_terms,
    outer,
    project,
    tensor_product,
    trace,
    validate_density_matrix,
)
from nvholo.utils.testing import assert_operators_close


def test_hilbert_space_labels():
    space = HilbertSpace(["0", "1", "e"])
    assert space.dim == 3
    assert space.index("e") == 2
    assert "1" in space
    assert "x" not in space


def test_hilbert_space_duplicate_labels():
    with pytest.raises(ValueError, match="unique"):
        HilbertSpace(["0", "0"])


def test_hilbert_space_empty():
    with pytest.raises(ValueError):
        HilbertSpace([])


def test_hilbert_space_unknown_label(qubit_space):
    with pytest.raises(KeyError, match="Unknown basis label"):
        qubit_space.index("e")


def test_operator_shape_mismatch(qubit_space):
    with pytest.raises(DimensionMismatchError):
        Operator(qubit_space, np.eye(3))


def test_state_vector_shape_mismatch(qubit_space):
    with pytest.raises(DimensionMismatchError):
        StateVector(qubit_space, [1, 0, 0])


def test_operator_is_read_only(qubit_space):
    op = identity(qubit_space)
    with pytest.raises(ValueError):
        op.data[0, 0] = 2.0


def test_operator_product_different_spaces(qubit_space, vsystem_space):
    with pytest.raises(DimensionMismatchError):
        identity(qubit_space) @ identity(vsystem_space)


def test_operator_arithmetic(pauli):
    x, y, z = pauli["x"], pauli["y"], pauli["z"]
    assert_operators_close(x @ y, 1j * z)
    assert_operators_close(x + z - z, x)
    assert_operators_close(-x / 2, -0.5 * x)


def test_commutator_pauli(pauli):
    assert_operators_close(
        commutator(pauli["x"], pauli["y"]), 2j * pauli["z"]
    )


def test_adjoint(qubit_space):
    op = Operator(qubit_space, [[1, 2j], [3, 4]])
    assert_array_equal(adjoint(op).data, [[1, 3], [-2j, 4]])
    assert_array_equal(op.dag.data, adjoint(op).data)


def test_adjoint_involution(rng):
    space = HilbertSpace(["a", "b", "c", "d"])
    op = Operator(
        space, rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    )
    assert_array_equal(adjoint(adjoint(op)).data, op.data)


def test_trace_cyclic(rng):
    space = HilbertSpace(["a", "b", "c", "d"])
    A, B = (
        Operator(space, rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        for _ in range(2)
    )
    assert trace(A @ B) == pytest.approx(trace(B @ A), rel=1e-12)


def test_tensor_product_with_identity(pauli, qubit_space):
    op = tensor_product(pauli["x"], identity(qubit_space))
    assert op.data[0, 2] == 1
    assert op.data[1, 3] == 1
    assert op.data[0, 1] == 0


def test_ket_and_basis_states(vsystem_space):
    states = basis_states(vsystem_space)
    assert len(states) == 3
    assert_array_equal(states[2].amplitudes, [0, 0, 1])
    assert ket(vsystem_space, "1").amplitude("1") == 1


def test_normalize(qubit_space):
    state = normalize(StateVector(qubit_space, [3, 4j]))
    assert state.norm == pytest.approx(1.0)
    assert_allclose(state.amplitudes, [0.6, 0.8j])


def test_normalize_zero(qubit_space):
    with pytest.raises(ValueError, match="zero"):
        normalize(StateVector(qubit_space, [0, 0]))


def test_outer_and_expectation(qubit_space):
    plus = normalize(StateVector(qubit_space, [1, 1]))
    proj = outer(plus, plus)
    assert trace(proj) == pytest.approx(1.0)
    assert expectation(proj, plus) == pytest.approx(1.0)


def test_tensor_product_labels(pauli):
    op = tensor_product(pauli["x"], pauli["z"])
    assert op.space.labels == ("00", "01", "10", "11")
    assert_allclose(op.data, np.kron(pauli["x"].data, pauli["z"].data))


def test_matrix_exp_pauli(pauli):
    """exp(-i pi/2 sigma_x) = -i sigma_x"""
    U = matrix_exp(-1j * np.pi / 2 * pauli["x"])
    assert_operators_close(U, -1j * pauli["x"])


def test_matrix_exp_non_finite(qubit_space):
    with pytest.raises(NonFiniteError):
        matrix_exp(Operator(qubit_space, [[np.nan, 0], [0, 1]]))


@pytest.mark.parametrize("norm", [0.1, 1.0, 10.0])
def test_matrix_exp_inverse(random_hermitian, vsystem_space, norm):
    """exp(A) exp(-A) = I for anti-Hermitian A"""
    A = 1j * random_hermitian(vsystem_space, norm=norm)
    assert_operators_close(
        matrix_exp(A) @ matrix_exp(-A), identity(vsystem_space), atol=1e-10
    )


@pytest.mark.parametrize("t", [0.0, 0.3, 7.0])
def test_matrix_exp_unitary(random_hermitian, vsystem_space, t):
    H = random_hermitian(vsystem_space, norm=2.0)
    assert is_unitary(matrix_exp(-1j * t * H))


def test_eig_hermitian(random_hermitian, vsystem_space):
    H = random_hermitian(vsystem_space)
    values, vectors = eig_hermitian(H)
    assert np.all(np.diff(values) >= 0)
    for value, vector in zip(values, vectors):
        assert_allclose(
            (H @ vector).amplitudes, value * vector.amplitudes, atol=1e-12
        )
        amplitudes = vector.amplitudes
        first = amplitudes[np.flatnonzero(np.abs(amplitudes) > 1e-12)[0]]
        assert first.real > 0
        assert abs(first.imag) < 1e-14


def test_eig_hermitian_not_hermitian(qubit_space):
    with pytest.raises(NonHermitianError):
        eig_hermitian(Operator(qubit_space, [[0, 1], [0, 0]]))


def test_eig_hermitian_reconstruction(random_hermitian, vsystem_space):
    H = random_hermitian(vsystem_space, norm=3.0)
    values, vectors = eig_hermitian(H)
    rebuilt = sum(
        (value * outer(v, v) for value, v in zip(values, vectors)),
        0.0 * identity(vsystem_space),
    )
    assert_operators_close(rebuilt, H, atol=1e-12)


def test_eig_hermitian_one_dimensional():
    space = HilbertSpace(["g"])
    values, vectors = eig_hermitian(Operator(space, [[2.5]]))
    assert_array_equal(values, [2.5])
    assert len(vectors) == 1
    assert_array_equal(vectors[0].amplitudes, [1.0])


def test_is_unitary(pauli, qubit_space):
    assert is_unitary(pauli["y"])
    assert not is_unitary(Operator(qubit_space, [[1, 1], [0, 1]]))


def test_project(vsystem_space):
    op = Operator(vsystem_space, np.arange(9).reshape(3, 3))
    block = project(op, ["1", "0"])
    assert block.space.labels == ("1", "0")
    assert_array_equal(block.data, [[4, 3], [1, 0]])


def test_embed_with_mapping(qubit_space):
    space = HilbertSpace(["G", "Psi1", "Psi2"])
    state = StateVector(qubit_space, [0.6, 0.8])
    out = embed(state, space, {"0": "Psi2", "1": "Psi1"})
    assert_allclose(out.amplitudes, [0, 0.8, 0.6])


def test_embed_missing_label_with_weight(qubit_space):
    space = HilbertSpace(["G", "Psi1"])
    with pytest.raises(ValueError, match="no image"):
        embed(StateVector(qubit_space, [1, 0]), space, {"1": "Psi1"})


def test_embed_missing_label_without_weight(qubit_space):
    space = HilbertSpace(["G", "Psi1"])
    out = embed(StateVector(qubit_space, [0, 1]), space, {"1": "Psi1"})
    assert_allclose(out.amplitudes, [0, 1])


def test_density_matrix_from_state(random_state, vsystem_space):
    psi = StateVector(vsystem_space, random_state(3))
    rho = density_matrix(psi)
    defects = validate_density_matrix(rho)
    assert defects.hermiticity < 1e-15
    assert defects.trace < 1e-12
    assert defects.min_eigenvalue > -1e-12


def test_density_matrix_invalid(qubit_space):
    with pytest.raises(ValueError, match="Not a valid density matrix"):
        DensityMatrix(qubit_space, [[1, 0], [0, 1]])


def test_density_matrix_unchecked(qubit_space):
    rho = DensityMatrix(qubit_space, [[1, 0], [0, 1]], check=False)
    assert validate_density_matrix(rho).trace == pytest.approx(1.0)


def test_maximally_mixed_populations(vsystem_space):
    rho = DensityMatrix.maximally_mixed(vsystem_space)
    assert_allclose(rho.populations(), [1 / 3] * 3)


def test_operator_from_terms(vsystem_space):
    op = operator_from_terms(vsystem_space, [(2.0, "0", "e"), (1j, "e", "1")])
    assert op.element("0", "e") == 2.0
    assert op.element("e", "1") == 1j
    assert op.element("e", "0") == 0
