import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hamiltonian import (DimensionError, build_position_hamiltonian, lattice_hamiltonian, pauli_decompose,
                         rotate_il, scenario_hamiltonian, split_hermitian_antihermitian)
from model_params import InvalidParameterError, ModelParams, Scenario
from pauli import WeightedPauliSum


@pytest.fixture
def one_qubit():
    return ModelParams(mass=1.0, spacing=4.0, coupling=2.0, qubits=1)


@pytest.fixture
def two_qubits():
    return ModelParams(mass=1.0, spacing=4 / 3, coupling=2.0, qubits=2)


def test_one_qubit_matrix(one_qubit):
    assert np.allclose(build_position_hamiltonian(one_qubit), [[0.3125, -0.0625], [-0.0625, 0.3125]], atol=1e-15)


def test_one_qubit_free_matrix(one_qubit):
    assert np.allclose(build_position_hamiltonian(one_qubit, interacting=False),
                       [[0.0625, -0.0625], [-0.0625, 0.0625]], atol=1e-15)


def test_matrix_is_real_symmetric(two_qubits):
    h = build_position_hamiltonian(two_qubits)
    assert np.isrealobj(h)
    assert np.array_equal(h, h.T)


def test_rejects_too_many_qubits():
    with pytest.raises(DimensionError):
        build_position_hamiltonian(ModelParams(qubits=9))


def test_rejects_non_finite():
    with pytest.raises(InvalidParameterError):
        ModelParams(spacing=float("nan"))


def test_identity_decomposition():
    h = pauli_decompose(np.eye(4), 2)
    assert h.as_dict() == {"II": 1.0}


def test_one_qubit_decomposition(one_qubit):
    h = pauli_decompose(build_position_hamiltonian(one_qubit), 1)
    assert h.allclose(WeightedPauliSum.from_dict({"X": -0.0625, "I": 0.3125}))


def test_two_qubit_decomposition(two_qubits):
    h = pauli_decompose(build_position_hamiltonian(two_qubits), 2)
    expected = WeightedPauliSum.from_dict({"IX": -9 / 32, "XX": -9 / 32, "ZZ": -0.375, "II": 0.9375})
    assert len(h) == 4
    assert h.allclose(expected)


def test_decomposition_dimension_mismatch():
    with pytest.raises(DimensionError):
        pauli_decompose(np.eye(3), 1)


@pytest.mark.parametrize("qubits", [1, 2, 3, 4])
def test_lattice_coefficients_are_real(qubits):
    params = ModelParams(spacing=1.0, qubits=qubits)
    h = pauli_decompose(build_position_hamiltonian(params), qubits)
    assert all(abs(c.imag) <= 1e-14 for c, _ in h)


@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_decomposition_round_trip(qubits, seed):
    rng = np.random.default_rng(seed)
    dim = 2 ** qubits
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = (a + a.conj().T) / 2
    h = pauli_decompose(m, qubits)
    assert np.max(np.abs(h.to_matrix() - m)) < 1e-12
    assert pauli_decompose(h.to_matrix(), qubits).allclose(h)


def test_rotated_one_qubit(one_qubit):
    assert rotate_il(one_qubit).allclose(WeightedPauliSum.from_dict({"X": 0.0625, "I": -0.0625 - 0.25j}))


def test_rotated_free_is_negated_free(one_qubit):
    free = pauli_decompose(build_position_hamiltonian(one_qubit, interacting=False), 1)
    rotated = rotate_il(one_qubit, interacting=False)
    assert np.allclose(rotated.to_matrix(), -free.to_matrix(), atol=1e-15)


def test_rotated_two_qubits(two_qubits):
    expected = WeightedPauliSum.from_dict({"IX": 9 / 32, "XX": 9 / 32, "ZZ": 0.375j, "II": -(0.5625 + 0.375j)})
    assert rotate_il(two_qubits).allclose(expected)


@pytest.mark.parametrize("qubits, spacing", [(1, 4.0), (2, 4 / 3), (2, 0.7)])
def test_closed_forms_match_complex_spacing(qubits, spacing):
    params = ModelParams(spacing=spacing, coupling=-1.3, qubits=qubits)
    substituted = pauli_decompose(lattice_hamiltonian(params.mass, 1j * spacing, params.coupling, qubits), qubits)
    assert rotate_il(params).allclose(substituted, atol=1e-12)


def test_rotation_beyond_closed_forms():
    params = ModelParams(spacing=1.0, qubits=3)
    h = rotate_il(params)
    dense = lattice_hamiltonian(1.0, 1j, params.coupling, 3)
    assert np.allclose(h.to_matrix(), dense, atol=1e-12)
    assert not h.is_hermitian()


def test_scenario_hamiltonian_dispatch(two_qubits):
    nh = ModelParams(spacing=4 / 3, qubits=2, scenario=Scenario.NON_HERMITIAN_REAL_TIME)
    assert scenario_hamiltonian(nh).allclose(rotate_il(nh))
    assert scenario_hamiltonian(two_qubits).is_hermitian()


def test_split_rotated_two_qubits(two_qubits):
    split = split_hermitian_antihermitian(rotate_il(two_qubits))
    assert dict((p.letters, c) for c, p in split.hermitian_group) == pytest.approx({"IX": 9 / 32, "XX": 9 / 32})
    assert [(c, p.letters) for c, p in split.antihermitian_group] == [(pytest.approx(0.375), "ZZ")]
    assert split.scalar_offset == pytest.approx(-(0.5625 + 0.375j))
    assert split.size == 1


def test_split_hermitian_input(two_qubits):
    split = split_hermitian_antihermitian(scenario_hamiltonian(two_qubits))
    assert split.size == 0
    assert split.is_hermitian


def test_split_pure_imaginary():
    split = split_hermitian_antihermitian(WeightedPauliSum.from_dict({"Z": 1j}))
    assert split.hermitian_group == ()
    assert [(c, p.letters) for c, p in split.antihermitian_group] == [(1.0, "Z")]


def test_split_passes_through():
    split = split_hermitian_antihermitian(WeightedPauliSum.from_dict({"X": 1.0}))
    assert split_hermitian_antihermitian(split) is split


@given(st.integers(1, 3), st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_split_reconstruction(qubits, seed):
    rng = np.random.default_rng(seed)
    dim = 2 ** qubits
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = pauli_decompose(m, qubits)
    split = split_hermitian_antihermitian(h)
    assert np.max(np.abs(split.to_matrix() - m)) < 1e-12
    assert all(not p.is_identity for _, p in split.hermitian_group + split.antihermitian_group)
