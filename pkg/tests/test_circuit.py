import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from circuit import (MAX_DENSE_WIDTH, CapacityError, Circuit, CircuitError, Gate, GateError, GateKind,
                     StateVector, apply_circuit, apply_gates, basis_state, circuit_unitary,
                     controlled_pauli_string, exp_pauli_unitary, hadamard, marginal_probabilities,
                     pauli_string_gate, pauli_x, pauli_z, phase_s, project_qubit, ry, ry_matrix)
from pauli import PauliString

SQRT_HALF = 1 / math.sqrt(2)


def gate_matrix(gate, width=None):
    width = width if width is not None else max(gate.qubits) + 1
    return circuit_unitary(Circuit(width, (gate,)))


def test_basis_states():
    assert np.array_equal(basis_state(0, 1).amplitudes, [1, 0])
    assert np.array_equal(basis_state(3, 2).amplitudes, [0, 0, 0, 1])


def test_system_state_above_ancillas():
    # α = 2 on the top two qubits, two ancillas below
    psi = basis_state(2 << 2, 4)
    assert psi.amplitudes[8] == 1
    assert marginal_probabilities(psi, (2, 3), "01") == 1.0


def test_basis_state_errors():
    with pytest.raises(CircuitError):
        basis_state(4, 2)
    with pytest.raises(CapacityError):
        basis_state(0, 31)


def test_hadamard_on_zero():
    psi = apply_circuit(Circuit(1, (hadamard(0),)), basis_state(0, 1))
    assert np.allclose(psi.amplitudes, [SQRT_HALF, SQRT_HALF])


def test_phase_after_hadamard():
    psi = apply_circuit(Circuit(1, (hadamard(0), phase_s(0))), basis_state(0, 1))
    assert np.allclose(psi.amplitudes, [SQRT_HALF, 1j * SQRT_HALF])


def test_x_on_second_qubit():
    psi = apply_circuit(Circuit(2, (pauli_x(1),)), basis_state(1, 2))
    assert np.allclose(psi.amplitudes, basis_state(3, 2).amplitudes)


def test_apply_circuit_leaves_input():
    psi = basis_state(0, 1)
    apply_circuit(Circuit(1, (pauli_x(0),)), psi)
    assert psi.amplitudes[0] == 1


def test_width_mismatch():
    with pytest.raises(CircuitError):
        apply_circuit(Circuit(2, ()), basis_state(0, 1))


def test_gate_validation():
    with pytest.raises(GateError):
        Gate(GateKind.H, (0, 1))
    with pytest.raises(GateError):
        Gate(GateKind.X, (0,), controls=(0,))
    with pytest.raises(GateError):
        ry(math.inf, 0)
    with pytest.raises(GateError):
        Gate(GateKind.PAULI_STRING, (0, 1), pauli="X")
    with pytest.raises(GateError):
        Circuit(1, (pauli_x(1),))
    with pytest.raises(GateError):
        Circuit(3, (), system_qubits=(1, 2), hadamard_ancilla=1)


def test_ry_convention():
    theta = 0.7
    m = gate_matrix(ry(theta, 0))
    assert np.allclose(m, [[math.cos(theta / 2), -math.sin(theta / 2)], [math.sin(theta / 2), math.cos(theta / 2)]])
    assert np.allclose(m, ry_matrix(theta))


def test_zero_rotation_is_identity():
    assert np.allclose(gate_matrix(exp_pauli_unitary(0.3, PauliString("X"), 0.0)), np.eye(2))


def test_quarter_turn_rotation():
    m = gate_matrix(exp_pauli_unitary(math.pi / 2, PauliString("X"), 1.0))
    assert np.allclose(m, -1j * PauliString("X").matrix())


def test_zz_rotation():
    m = gate_matrix(exp_pauli_unitary(1.0, PauliString("ZZ"), 0.1))
    phase = np.exp(-0.1j)
    assert np.allclose(m, np.diag([phase, phase.conjugate(), phase.conjugate(), phase]))


def test_identity_rotation_rejected():
    with pytest.raises(GateError):
        exp_pauli_unitary(1.0, PauliString("II"), 0.1)


@pytest.mark.parametrize("letters", ["X", "Y", "Z", "IX", "XY", "ZI", "YZX"])
def test_pauli_string_gate_matches_kron(letters):
    h = PauliString(letters)
    assert np.allclose(gate_matrix(pauli_string_gate(h), width=h.num_qubits), h.matrix())


@pytest.mark.parametrize("letters", ["Y", "XZ", "YY", "XIZ"])
def test_rotation_matches_cos_sin_form(letters):
    h = PauliString(letters)
    angle = 0.37
    expected = math.cos(angle) * np.eye(2 ** h.num_qubits) - 1j * math.sin(angle) * h.matrix()
    assert np.allclose(gate_matrix(exp_pauli_unitary(angle, h, 1.0), width=h.num_qubits), expected)


@given(st.floats(-3, 3), st.sampled_from(["X", "ZZ", "XY", "IYZ"]), st.floats(0.01, 0.5), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_rotations_add(c, letters, dt, steps):
    h = PauliString(letters)
    single = gate_matrix(exp_pauli_unitary(c, h, dt), width=h.num_qubits)
    total = gate_matrix(exp_pauli_unitary(c, h, steps * dt), width=h.num_qubits)
    assert np.allclose(np.linalg.matrix_power(single, steps), total, atol=1e-10)


def test_controlled_pauli_string():
    # control on bit 0, system qubits 1..2 on bits 1..2
    gate = controlled_pauli_string(0, PauliString("ZX"), system_qubits=(1, 2))
    m = gate_matrix(gate, width=3)
    expected = np.zeros((8, 8), dtype=complex)
    zx = PauliString("ZX").matrix()
    for system in range(4):
        expected[system << 1, system << 1] = 1
        for row in range(4):
            expected[(row << 1) | 1, (system << 1) | 1] = zx[row, system]
    assert np.allclose(m, expected)


def _random_gate(draw_kind, qubit, other, angle, letters):
    if draw_kind == "h":
        return hadamard(qubit)
    if draw_kind == "x":
        return pauli_x(qubit)
    if draw_kind == "z":
        return pauli_z(qubit)
    if draw_kind == "s":
        return phase_s(qubit)
    if draw_kind == "ry":
        return ry(angle, qubit).controlled_by(other)
    return exp_pauli_unitary(angle, PauliString(letters), 1.0, system_qubits=(qubit, other)).controlled_by(
        [q for q in range(3) if q not in (qubit, other)][0])


gate_strategy = st.tuples(
    st.sampled_from(["h", "x", "z", "s", "ry", "rot"]),
    st.permutations(range(3)),
    st.floats(-math.pi, math.pi),
    st.sampled_from(["XX", "YZ", "ZI", "IY"]),
)


@given(st.lists(gate_strategy, min_size=1, max_size=12), st.integers(0, 7))
@settings(max_examples=50, deadline=None)
def test_norm_preserved(specs, index):
    gates = [_random_gate(kind, order[0], order[1], angle, letters) for kind, order, angle, letters in specs]
    psi = apply_gates(gates, basis_state(index, 3))
    assert abs(psi.norm() - 1) < 1e-10
    u = circuit_unitary(Circuit(3, tuple(gates)))
    assert np.max(np.abs(u.conj().T @ u - np.eye(8))) < 1e-10


def test_batched_states_match_single():
    gates = (hadamard(0), ry(0.4, 1).controlled_by(0), exp_pauli_unitary(0.2, PauliString("XY"), 1.0))
    batch = StateVector(np.eye(4, dtype=complex)[:, [1, 2]])
    apply_gates(gates, batch)
    for column, index in enumerate((1, 2)):
        single = apply_gates(gates, basis_state(index, 2))
        assert np.allclose(batch.amplitudes[:, column], single.amplitudes)


def test_marginals():
    plus = apply_circuit(Circuit(1, (hadamard(0),)), basis_state(0, 1))
    assert marginal_probabilities(plus, (0,), "0") == pytest.approx(0.5)
    assert marginal_probabilities(basis_state(3, 2), (1,), "0") == 0.0
    bell = apply_circuit(Circuit(2, (hadamard(0), pauli_x(1).controlled_by(0))), basis_state(0, 2))
    assert marginal_probabilities(bell, (0, 1), "00") == pytest.approx(0.5)
    assert marginal_probabilities(bell, (0, 1), "01") == pytest.approx(0.0)


@given(st.integers(0, 2 ** 32 - 1), st.lists(st.integers(0, 3), min_size=1, max_size=4, unique=True))
@settings(max_examples=40, deadline=None)
def test_marginals_sum_to_one(seed, qubits):
    rng = np.random.default_rng(seed)
    amplitudes = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi = StateVector(amplitudes / np.linalg.norm(amplitudes))
    outcomes = [format(k, f"0{len(qubits)}b") for k in range(2 ** len(qubits))]
    assert abs(sum(marginal_probabilities(psi, qubits, o) for o in outcomes) - 1) < 1e-12


def test_outcome_length_mismatch():
    with pytest.raises(CircuitError):
        marginal_probabilities(basis_state(0, 2), (0, 1), "0")


def test_project_qubit():
    psi = apply_circuit(Circuit(2, (hadamard(0), hadamard(1))), basis_state(0, 2))
    project_qubit(psi, 1, 0)
    assert np.allclose(psi.amplitudes, [0.5, 0.5, 0, 0])


def test_dense_cap():
    with pytest.raises(CapacityError):
        circuit_unitary(Circuit(MAX_DENSE_WIDTH + 1, ()))
