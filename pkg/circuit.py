"""
Gate-Level Circuits and a Statevector Engine

This module defines an immutable gate/circuit intermediate representation and
executes it on complex amplitude vectors. Qubit q is bit q of the global
amplitude index (little-endian), so in the tensor view of shape [2]*n the axis
of qubit q is n − 1 − q.

Gates are applied in place by fixing control axes to 1 with basic indexing
(which yields views) and updating the 0/1 slices of the target axis. An
optional trailing batch axis lets one run apply a circuit to many input states
at once; circuit_unitary uses it to materialize dense matrices for testing.

Classes:
    GateKind: Enumeration of the supported gate kinds
    Gate: One (possibly controlled) unitary gate
    Circuit: Ordered gate list with width and ancilla metadata
    StateVector: Complex amplitude vector acted on by circuits
"""

# Standard library imports
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

# Third-party imports
import numpy as np

# Local imports
from pauli import PauliString

MAX_STATEVECTOR_WIDTH = 30
MAX_DENSE_WIDTH = 12

_SQRT2_INV = 1 / math.sqrt(2)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV


class CircuitError(ValueError):
    """Base class for circuit construction and execution errors."""


class GateError(CircuitError):
    """Error indicating an invalid gate (indices, angle or Pauli letters)."""


class CapacityError(CircuitError):
    """Error indicating a width above a simulation cap."""


class GateKind(Enum):
    H = "h"
    X = "x"
    Z = "z"
    S = "s"
    RY = "ry"
    PAULI_ROTATION = "pauli_rotation"
    PAULI_STRING = "pauli_string"

    def __str__(self):
        return self.value


_SINGLE_QUBIT_KINDS = (GateKind.H, GateKind.X, GateKind.Z, GateKind.S, GateKind.RY)
_PAULI_KINDS = (GateKind.PAULI_ROTATION, GateKind.PAULI_STRING)


@dataclass(frozen=True)
class Gate:
    """
    A unitary gate, optionally controlled on one or more qubits being |1⟩.

    Attributes:
        kind: Gate kind.
        targets: Target qubits. Pauli kinds carry one letter per target.
        controls: Control qubits.
        angle: θ for RY, φ for PAULI_ROTATION = exp(−iφ·P).
        pauli: Letters over {X, Y, Z}, aligned with `targets`.
    """
    kind: GateKind
    targets: Tuple[int, ...]
    controls: Tuple[int, ...] = ()
    angle: float = 0.0
    pauli: str = ""

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        qubits = self.targets + self.controls
        if not self.targets:
            raise GateError(f"{self.kind} gate needs at least one target.")
        if len(set(qubits)) != len(qubits) or min(qubits) < 0:
            raise GateError(f"Gate qubits must be distinct and non-negative, got {qubits}.")
        if not math.isfinite(self.angle):
            raise GateError(f"Gate angle must be finite, got {self.angle}.")
        if self.kind in _SINGLE_QUBIT_KINDS and len(self.targets) != 1:
            raise GateError(f"{self.kind} acts on one target, got {self.targets}.")
        if self.kind in _PAULI_KINDS:
            if len(self.pauli) != len(self.targets) or set(self.pauli) - set("XYZ"):
                raise GateError(
                    f"Pauli letters {self.pauli!r} must be over X, Y, Z and match targets {self.targets}."
                )

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.targets + self.controls

    def controlled_by(self, qubit: int) -> "Gate":
        return replace(self, controls=self.controls + (qubit,))


def hadamard(qubit: int) -> Gate:
    return Gate(GateKind.H, (qubit,))


def pauli_x(qubit: int) -> Gate:
    return Gate(GateKind.X, (qubit,))


def pauli_z(qubit: int) -> Gate:
    return Gate(GateKind.Z, (qubit,))


def phase_s(qubit: int) -> Gate:
    return Gate(GateKind.S, (qubit,))


def ry(theta: float, qubit: int) -> Gate:
    return Gate(GateKind.RY, (qubit,), angle=float(theta))


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _pauli_targets(h: PauliString, system_qubits: Optional[Sequence[int]]) -> Tuple[Tuple[int, ...], str]:
    """Maps the non-identity letters of `h` onto circuit qubits.

    system_qubits[j - 1] is the circuit qubit of qubit j (1..Γ); the default
    places qubit j at bit j − 1.
    """
    n = h.num_qubits
    if system_qubits is None:
        system_qubits = tuple(range(n))
    if len(system_qubits) != n:
        raise GateError(f"{n}-qubit string needs {n} system qubits, got {len(system_qubits)}.")
    targets, letters = [], []
    for qubit in h.support():
        targets.append(system_qubits[qubit - 1])
        letters.append(h.letters[n - qubit])
    if not targets:
        raise GateError("The identity string has no gate; fold it into a scalar factor.")
    return tuple(targets), "".join(letters)


def pauli_string_gate(h: PauliString, system_qubits: Optional[Sequence[int]] = None) -> Gate:
    targets, letters = _pauli_targets(h, system_qubits)
    return Gate(GateKind.PAULI_STRING, targets, pauli=letters)


def controlled_pauli_string(control: int, h: PauliString,
                            system_qubits: Optional[Sequence[int]] = None) -> Gate:
    return pauli_string_gate(h, system_qubits).controlled_by(control)


def exp_pauli_unitary(c: float, h: PauliString, dt: float,
                      system_qubits: Optional[Sequence[int]] = None) -> Gate:
    """Gate for e^{−i·c·h·δt} = cos(cδt)·I − i·sin(cδt)·h.

    Raises
    ------
    GateError
        If `h` is the identity string
    """
    targets, letters = _pauli_targets(h, system_qubits)
    return Gate(GateKind.PAULI_ROTATION, targets, angle=float(c * dt), pauli=letters)


@dataclass(frozen=True)
class Circuit:
    """
    Ordered list of gates on `width` qubits.

    Attributes:
        width: Total qubit count.
        gates: Gates in application order.
        system_qubits: Circuit qubit of each system qubit 1..Γ, in that order.
        block_ancillas: Block-encoding ancilla qubits in application order.
        hadamard_ancilla: The Hadamard-test qubit, if any.
    """
    width: int
    gates: Tuple[Gate, ...] = ()
    system_qubits: Tuple[int, ...] = ()
    block_ancillas: Tuple[int, ...] = ()
    hadamard_ancilla: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "system_qubits", tuple(self.system_qubits))
        object.__setattr__(self, "block_ancillas", tuple(self.block_ancillas))
        if self.width < 1:
            raise GateError(f"Circuit width must be at least 1, got {self.width}.")
        for gate in self.gates:
            if max(gate.qubits) >= self.width:
                raise GateError(f"Gate {gate.kind} on {gate.qubits} exceeds width {self.width}.")
        ancillas = set(self.block_ancillas)
        if self.hadamard_ancilla is not None:
            ancillas.add(self.hadamard_ancilla)
        if ancillas & set(self.system_qubits):
            raise GateError("Ancilla qubits overlap the system qubits.")

    def __len__(self):
        return len(self.gates)

    def append(self, *gates: Gate) -> "Circuit":
        return replace(self, gates=self.gates + tuple(gates))

    def controlled_by(self, qubit: int) -> "Circuit":
        return replace(self, gates=tuple(g.controlled_by(qubit) for g in self.gates))


class StateVector(object):
    """Complex amplitudes of a `width`-qubit register, optionally batched.

    The amplitude axis is first; a second axis, if present, indexes
    independent states evolved together.
    """

    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.ascontiguousarray(amplitudes, dtype=complex)
        length = amplitudes.shape[0]
        width = int(length).bit_length() - 1
        if amplitudes.ndim not in (1, 2) or length < 2 or 2 ** width != length:
            raise CircuitError(f"Amplitude length must be a power of two ≥ 2, got shape {amplitudes.shape}.")
        self.amplitudes = amplitudes
        self.width = width

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def _tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.width + list(self.amplitudes.shape[1:]))

    def __repr__(self):
        return f"StateVector(width={self.width})"


def basis_state(index: int, width: int) -> StateVector:
    """Computational basis state |index⟩ on `width` qubits.

    Raises
    ------
    CapacityError
        If `width` exceeds the statevector cap
    CircuitError
        If `index` is outside [0, 2^width)
    """
    if width > MAX_STATEVECTOR_WIDTH:
        raise CapacityError(f"Width {width} exceeds the statevector cap of {MAX_STATEVECTOR_WIDTH} qubits.")
    if not 0 <= index < 2 ** width:
        raise CircuitError(f"Basis index {index} outside [0, {2 ** width}).")
    amplitudes = np.zeros(2 ** width, dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(amplitudes)


def _axis(qubit: int, width: int) -> int:
    return width - 1 - qubit


def _slot(ndim: int, axis: int, bit: int) -> tuple:
    # length-one slice keeps the result a view even for 1-D inputs
    index = [slice(None)] * ndim
    index[axis] = slice(bit, bit + 1)
    return tuple(index)


def _apply_letter(sub: np.ndarray, letter: str, axis: int) -> None:
    zero, one = _slot(sub.ndim, axis, 0), _slot(sub.ndim, axis, 1)
    if letter == "Z":
        sub[one] *= -1
        return
    a0 = sub[zero].copy()
    if letter == "X":
        sub[zero] = sub[one]
        sub[one] = a0
    else:
        sub[zero] = -1j * sub[one]
        sub[one] = 1j * a0


def _apply_matrix(sub: np.ndarray, matrix: np.ndarray, axis: int) -> None:
    zero, one = _slot(sub.ndim, axis, 0), _slot(sub.ndim, axis, 1)
    a0, a1 = sub[zero], sub[one]
    new0 = matrix[0, 0] * a0 + matrix[0, 1] * a1
    new1 = matrix[1, 0] * a0 + matrix[1, 1] * a1
    sub[zero] = new0
    sub[one] = new1


def _apply_gate(tensor: np.ndarray, gate: Gate, width: int) -> None:
    index = [slice(None)] * tensor.ndim
    for control in gate.controls:
        index[_axis(control, width)] = 1
    sub = tensor[tuple(index)]
    control_axes = [_axis(c, width) for c in gate.controls]

    def local(qubit: int) -> int:
        axis = _axis(qubit, width)
        return axis - sum(1 for a in control_axes if a < axis)

    kind = gate.kind
    if kind is GateKind.H:
        _apply_matrix(sub, _HADAMARD, local(gate.targets[0]))
    elif kind is GateKind.X:
        _apply_letter(sub, "X", local(gate.targets[0]))
    elif kind is GateKind.Z:
        _apply_letter(sub, "Z", local(gate.targets[0]))
    elif kind is GateKind.S:
        sub[_slot(sub.ndim, local(gate.targets[0]), 1)] *= 1j
    elif kind is GateKind.RY:
        _apply_matrix(sub, ry_matrix(gate.angle), local(gate.targets[0]))
    elif kind is GateKind.PAULI_STRING:
        for qubit, letter in zip(gate.targets, gate.pauli):
            _apply_letter(sub, letter, local(qubit))
    elif kind is GateKind.PAULI_ROTATION:
        flipped = sub.copy()
        for qubit, letter in zip(gate.targets, gate.pauli):
            _apply_letter(flipped, letter, local(qubit))
        sub *= math.cos(gate.angle)
        sub += -1j * math.sin(gate.angle) * flipped
    else:
        raise GateError(f"Unsupported gate kind {kind}.")


def apply_gates(gates: Iterable[Gate], state: StateVector) -> StateVector:
    """Applies gates to `state` in place and returns it."""
    tensor = state._tensor()
    for gate in gates:
        if max(gate.qubits) >= state.width:
            raise GateError(f"Gate {gate.kind} on {gate.qubits} exceeds width {state.width}.")
        _apply_gate(tensor, gate, state.width)
    return state


def apply_circuit(c: Circuit, psi: StateVector, in_place: bool = False) -> StateVector:
    """Applies the gates of `c` in order; `psi` is left untouched unless in_place.

    Raises
    ------
    CircuitError
        If the circuit and state widths differ
    """
    if c.width != psi.width:
        raise CircuitError(f"Circuit width {c.width} does not match state width {psi.width}.")
    target = psi if in_place else psi.copy()
    return apply_gates(c.gates, target)


def project_qubit(state: StateVector, qubit: int, bit: int = 0) -> StateVector:
    """Zeroes every amplitude whose `qubit` is not `bit` (no renormalization)."""
    tensor = state._tensor()
    tensor[_slot(tensor.ndim, _axis(qubit, state.width), 1 - bit)] = 0
    return state


def marginal_probabilities(psi: StateVector, qubits: Sequence[int],
                           outcome: Union[str, Sequence[int]]) -> float:
    """Probability that `qubits` read `outcome` (bits aligned with `qubits`).

    For an unnormalized state this is the summed |amplitude|² of the
    consistent indices.
    """
    bits = [int(b) for b in outcome]
    if len(bits) != len(qubits):
        raise CircuitError(f"Outcome {outcome!r} does not match {len(qubits)} qubits.")
    probabilities = psi.probabilities()
    tensor = probabilities.reshape([2] * psi.width + list(probabilities.shape[1:]))
    index = [slice(None)] * tensor.ndim
    for qubit, bit in zip(qubits, bits):
        index[_axis(qubit, psi.width)] = bit
    return float(np.sum(tensor[tuple(index)]))


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense matrix of `c` (column k = circuit applied to |k⟩).

    Raises
    ------
    CapacityError
        If the width exceeds the dense cap
    """
    if c.width > MAX_DENSE_WIDTH:
        raise CapacityError(f"Width {c.width} exceeds the dense-matrix cap of {MAX_DENSE_WIDTH} qubits.")
    state = StateVector(np.eye(2 ** c.width, dtype=complex))
    return apply_gates(c.gates, state).amplitudes
