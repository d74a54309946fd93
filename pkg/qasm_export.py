"""
OpenQASM 2.0 Export

Writes a Circuit as OpenQASM 2.0 text using only qelib1.inc gates. Pauli
rotations e^{−iφP} become a basis change (X: h; Y: sdg, h), a CX ladder onto
the last target, rz(2φ) (crz when controlled) and the reverse. Controlled RY
is cu3(θ, 0, 0). Gates with more controls than qelib1 offers raise ExportError.

Example:
    text = circuit_to_qasm(ec.hadamard_circuit(Part.REAL))
"""

# Standard library imports
import math
from typing import List, Sequence

# Local imports
from circuit import Circuit, Gate, GateKind


class ExportError(ValueError):
    """Error indicating a gate with no OpenQASM 2.0 (qelib1) counterpart."""


def _q(qubit: int) -> str:
    return f"q[{qubit}]"


def _angle(value: float) -> str:
    return repr(float(value))


def _pauli(letter: str, target: int, controls: Sequence[int]) -> List[str]:
    t = _q(target)
    if not controls:
        return [f"{letter.lower()} {t};"]
    if len(controls) == 1:
        return [f"c{letter.lower()} {_q(controls[0])},{t};"]
    if len(controls) == 2:
        c = f"{_q(controls[0])},{_q(controls[1])}"
        if letter == "X":
            return [f"ccx {c},{t};"]
        if letter == "Z":
            return [f"h {t};", f"ccx {c},{t};", f"h {t};"]
        return [f"sdg {t};", f"ccx {c},{t};", f"s {t};"]
    raise ExportError(f"Pauli {letter} with {len(controls)} controls has no qelib1 form.")


def _rotation(gate: Gate) -> List[str]:
    if len(gate.controls) > 1:
        raise ExportError(f"Pauli rotation with {len(gate.controls)} controls has no qelib1 form.")
    into, back = [], []
    for target, letter in zip(gate.targets, gate.pauli):
        if letter == "X":
            into.append(f"h {_q(target)};")
            back.append(f"h {_q(target)};")
        elif letter == "Y":
            into += [f"sdg {_q(target)};", f"h {_q(target)};"]
            back += [f"h {_q(target)};", f"s {_q(target)};"]
    ladder = [f"cx {_q(a)},{_q(b)};" for a, b in zip(gate.targets, gate.targets[1:])]
    last = _q(gate.targets[-1])
    if gate.controls:
        middle = [f"crz({_angle(2 * gate.angle)}) {_q(gate.controls[0])},{last};"]
    else:
        middle = [f"rz({_angle(2 * gate.angle)}) {last};"]
    return into + ladder + middle + ladder[::-1] + back


def gate_to_qasm(gate: Gate) -> List[str]:
    """QASM statements for one gate.

    Raises
    ------
    ExportError
        If the gate has no qelib1 form
    """
    kind, controls = gate.kind, gate.controls
    if kind is GateKind.PAULI_STRING:
        lines = []
        for target, letter in zip(gate.targets, gate.pauli):
            lines += _pauli(letter, target, controls)
        return lines
    if kind is GateKind.PAULI_ROTATION:
        return _rotation(gate)
    if kind in (GateKind.X, GateKind.Z):
        return _pauli(kind.name, gate.targets[0], controls)

    t = _q(gate.targets[0])
    if len(controls) > 1:
        raise ExportError(f"{kind} with {len(controls)} controls has no qelib1 form.")
    c = _q(controls[0]) if controls else None
    if kind is GateKind.H:
        return [f"ch {c},{t};"] if c else [f"h {t};"]
    if kind is GateKind.S:
        return [f"cu1({_angle(math.pi / 2)}) {c},{t};"] if c else [f"s {t};"]
    if kind is GateKind.RY:
        if c:
            return [f"cu3({_angle(gate.angle)},0,0) {c},{t};"]
        return [f"ry({_angle(gate.angle)}) {t};"]
    raise ExportError(f"Gate kind {kind} has no qelib1 form.")


def circuit_to_qasm(circuit: Circuit, measure: bool = True) -> str:
    """OpenQASM 2.0 program for `circuit`.

    With `measure`, the Hadamard-test and block-encoding ancillas are measured
    into a classical register in that order.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.width}];"]
    measured = []
    if measure:
        if circuit.hadamard_ancilla is not None:
            measured.append(circuit.hadamard_ancilla)
        measured += list(circuit.block_ancillas)
        if measured:
            lines.append(f"creg c[{len(measured)}];")
    for gate in circuit.gates:
        lines += gate_to_qasm(gate)
    for index, qubit in enumerate(measured):
        lines.append(f"measure {_q(qubit)} -> c[{index}];")
    return "\n".join(lines) + "\n"
