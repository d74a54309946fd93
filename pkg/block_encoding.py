"""
Block Encodings and Trotterized Evolution Circuits

A non-unitary factor e^{c·h·δt} with a Pauli string h (h² = I) equals
cosh(cδt)·I + sinh(cδt)·h. It is realized as the top-left block of a unitary
on the system plus one fresh ancilla: R_Y(θ) on the ancilla, h on the system
controlled by the ancilla, then a Hadamard on the ancilla. With
θ = 2·atan2(β, α) the block (ancilla |0⟩ → |0⟩) is (α·I + β·h)/√(2(α² + β²)).

An EvolutionCircuit strings N first-order Trotter steps together, one fresh
ancilla per non-unitary factor per step. The Hadamard-test ancilla is bit 0,
block ancillas follow in application order and the system qubits sit on top.
Identity-string factors are never encoded; they are folded into a scalar
prefactor.

Scenarios:
    imaginary-time: every term is non-unitary, e^{−c_k·h_k·δτ}
    non-hermitian-real-time: unitary rotations e^{−i·c_i·h_i·δt} first, then
        block-encoded factors e^{+c_j·h_j·δt} for the anti-Hermitian terms
    hermitian-real-time: unitary rotations only, no block ancillas
"""

# Standard library imports
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import Iterator, Optional, Tuple, Union

# Third-party imports
import numpy as np

# Local imports
from circuit import (MAX_DENSE_WIDTH, MAX_STATEVECTOR_WIDTH, CapacityError, Circuit, Gate, StateVector,
                     apply_gates, controlled_pauli_string, exp_pauli_unitary, hadamard, phase_s, ry)
from hamiltonian import NonHermitianSplit, split_hermitian_antihermitian
from model_params import ModelParams, Scenario
from pauli import PauliString, WeightedPauliSum

logger = logging.getLogger(__name__)


class BlockEncodingError(ValueError):
    """Error indicating a Hamiltonian that cannot be encoded for the requested scenario."""


@dataclass(frozen=True)
class LcuStep:
    """
    Block encoding of e^{c·h·δt} on one ancilla.

    Attributes:
        c, h, dt: The encoded factor.
        alpha, beta: cosh(c·δt), sinh(c·δt).
        theta: Ancilla preparation angle, 2·atan2(β, α).
        norm: √(2(α² + β²)); the block is the factor divided by this.
        ancilla: Ancilla qubit inside an assembled circuit.
    """
    c: float
    h: PauliString
    dt: float
    alpha: float
    beta: float
    theta: float
    norm: float
    ancilla: int = 0

    @property
    def num_qubits(self) -> int:
        return self.h.num_qubits

    @property
    def width(self) -> int:
        return self.num_qubits + 1

    def gates(self, system_qubits, ancilla: Optional[int] = None) -> Tuple[Gate, ...]:
        ancilla = self.ancilla if ancilla is None else ancilla
        return (ry(self.theta, ancilla),
                controlled_pauli_string(ancilla, self.h, system_qubits),
                hadamard(ancilla))

    def circuit(self) -> Circuit:
        """Stand-alone sub-circuit: ancilla at bit 0, qubit j at bit j."""
        system = tuple(range(1, self.width))
        return Circuit(self.width, self.gates(system, ancilla=0),
                       system_qubits=system, block_ancillas=(0,))

    def factor_matrix(self) -> np.ndarray:
        """Dense e^{c·h·δt} (not normalized)."""
        return self.alpha * np.eye(2 ** self.num_qubits) + self.beta * self.h.matrix()


def lcu_step(c: float, h: PauliString, dt: float, ancilla: int = 0) -> LcuStep:
    """Builds the block encoding of e^{c·h·δt}.

    Raises
    ------
    BlockEncodingError
        If `h` is the identity string or c·δt is not finite
    """
    if h.is_identity:
        raise BlockEncodingError("Identity strings are folded into the prefactor, not block encoded.")
    x = float(c) * float(dt)
    if not math.isfinite(x):
        raise BlockEncodingError(f"c·δt must be finite, got {x}.")
    alpha, beta = math.cosh(x), math.sinh(x)
    return LcuStep(c=float(c), h=h, dt=float(dt), alpha=alpha, beta=beta,
                   theta=2 * math.atan2(beta, alpha),
                   norm=math.sqrt(2 * (alpha ** 2 + beta ** 2)), ancilla=ancilla)


@dataclass(frozen=True)
class UnitaryFactor:
    """The unitary Trotter factor e^{−i·c·h·δt}."""
    c: float
    h: PauliString
    dt: float

    def gate(self, system_qubits) -> Gate:
        return exp_pauli_unitary(self.c, self.h, self.dt, system_qubits)

    def factor_matrix(self) -> np.ndarray:
        x = self.c * self.dt
        return math.cos(x) * np.eye(2 ** self.h.num_qubits) - 1j * math.sin(x) * self.h.matrix()


Factor = Union[UnitaryFactor, LcuStep]


class Part(Enum):
    """Which part of Tr[A] a Hadamard test measures."""
    REAL = "real"
    IMAGINARY = "imaginary"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EvolutionCircuit:
    """
    N Trotter steps of a scenario's evolution with block-encoded factors.

    The encoded operator is A = scalar_prefactor · total_norm · block, where
    block is the ancillas-all-zero block of the evolution circuit.

    Attributes:
        scenario: Scenario the circuit was assembled for.
        num_qubits: Γ.
        step_factors: One Trotter step in application order.
        steps: N.
        dt: Step size.
        total_norm: Product of all LCU norms over all steps.
        scalar_prefactor: Folded identity factor at t = N·δt.
    """
    scenario: Scenario
    num_qubits: int
    step_factors: Tuple[Factor, ...]
    steps: int
    dt: float
    total_norm: float
    scalar_prefactor: complex

    @property
    def lcu_per_step(self) -> int:
        return sum(1 for f in self.step_factors if isinstance(f, LcuStep))

    @property
    def width(self) -> int:
        return self.num_qubits + self.lcu_per_step * self.steps + 1

    @property
    def time(self) -> float:
        return self.steps * self.dt

    @property
    def hadamard_ancilla(self) -> int:
        return 0

    @property
    def block_ancillas(self) -> Tuple[int, ...]:
        return tuple(range(1, 1 + self.lcu_per_step * self.steps))

    @property
    def system_qubits(self) -> Tuple[int, ...]:
        return tuple(range(self.width - self.num_qubits, self.width))

    def factors(self) -> Iterator[Factor]:
        """All factors of all steps, LCU steps carrying their assigned ancilla."""
        ancilla = 1
        for _ in range(self.steps):
            for factor in self.step_factors:
                if isinstance(factor, LcuStep):
                    yield replace(factor, ancilla=ancilla)
                    ancilla += 1
                else:
                    yield factor

    def _evolution_gates(self):
        system = self.system_qubits
        for factor in self.factors():
            if isinstance(factor, LcuStep):
                yield from factor.gates(system)
            else:
                yield factor.gate(system)

    def _check_width(self, limit: int) -> None:
        if self.width > limit:
            raise CapacityError(
                f"Evolution circuit needs {self.width} qubits ({self.lcu_per_step}·{self.steps} block "
                f"ancillas + Γ = {self.num_qubits} + 1), above the cap of {limit} qubits."
            )

    @cached_property
    def circuit(self) -> Circuit:
        """The evolution U_A itself (Hadamard-test qubit idle).

        Building the gate list has no width cap; the simulators check theirs
        when they allocate amplitudes.
        """
        return Circuit(self.width, tuple(self._evolution_gates()), system_qubits=self.system_qubits,
                       block_ancillas=self.block_ancillas, hadamard_ancilla=self.hadamard_ancilla)

    def hadamard_circuit(self, part: Part = Part.REAL) -> Circuit:
        """Hadamard test around the evolution, controlled by bit 0."""
        part = Part(part)
        test = self.hadamard_ancilla
        gates = [hadamard(test)]
        gates += [g.controlled_by(test) for g in self.circuit.gates]
        if part is Part.IMAGINARY:
            gates.append(phase_s(test))
        gates.append(hadamard(test))
        return replace(self.circuit, gates=tuple(gates))


def _with_steps(params: ModelParams, steps: Optional[int]) -> Tuple[int, float]:
    steps = params.steps if steps is None else int(steps)
    if steps < 0:
        raise BlockEncodingError(f"steps must be non-negative, got {steps}.")
    return steps, params.dt


def _finish(scenario: Scenario, split: NonHermitianSplit, step_factors: Tuple[Factor, ...], steps: int,
            dt: float, prefactor: complex, max_width: Optional[int]) -> EvolutionCircuit:
    norms = [f.norm for f in step_factors if isinstance(f, LcuStep)]
    total_norm = float(np.prod(norms)) ** steps if norms else 1.0
    ec = EvolutionCircuit(scenario, split.num_qubits, step_factors, steps, dt, total_norm, complex(prefactor))
    if max_width is not None:
        ec._check_width(max_width)
    logger.debug("assembled %s: width %d, %d LCU/step, total_norm %.6g, prefactor %s",
                 scenario, ec.width, ec.lcu_per_step, total_norm, ec.scalar_prefactor)
    return ec


def assemble_imaginary_time(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit], params: ModelParams,
                            steps: Optional[int] = None,
                            max_width: Optional[int] = MAX_STATEVECTOR_WIDTH) -> EvolutionCircuit:
    """e^{−Ĥτ} as N steps of block-encoded e^{−c_k·h_k·δτ}.

    Raises
    ------
    BlockEncodingError
        If the Hamiltonian is not Hermitian
    CapacityError
        If the circuit is wider than `max_width`
    """
    split = split_hermitian_antihermitian(hamiltonian)
    if not split.is_hermitian:
        raise BlockEncodingError("Imaginary-time evolution needs a Hermitian Hamiltonian.")
    steps, dt = _with_steps(params, steps)
    factors = tuple(lcu_step(-c, h, dt) for c, h in split.hermitian_group)
    prefactor = np.exp(-split.scalar_offset.real * steps * dt)
    return _finish(Scenario.IMAGINARY_TIME, split, factors, steps, dt, prefactor, max_width)


def assemble_nonhermitian_realtime(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit],
                                   params: ModelParams, steps: Optional[int] = None,
                                   max_width: Optional[int] = MAX_STATEVECTOR_WIDTH) -> EvolutionCircuit:
    """e^{−iĤt} for Ĥ = H₁ + iH₂: rotations for H₁, then block-encoded e^{c_j·h_j·δt}.

    Raises
    ------
    BlockEncodingError
        If the anti-Hermitian group is empty (use assemble_unitary_realtime)
    CapacityError
        If the circuit is wider than `max_width`
    """
    split = split_hermitian_antihermitian(hamiltonian)
    if not split.antihermitian_group:
        raise BlockEncodingError(
            "No anti-Hermitian terms: nothing to block encode, use the unitary real-time circuit."
        )
    steps, dt = _with_steps(params, steps)
    factors = tuple(UnitaryFactor(c, h, dt) for c, h in split.hermitian_group)
    factors += tuple(lcu_step(c, h, dt) for c, h in split.antihermitian_group)
    prefactor = np.exp(-1j * split.scalar_offset * steps * dt)
    return _finish(Scenario.NON_HERMITIAN_REAL_TIME, split, factors, steps, dt, prefactor, max_width)


def assemble_unitary_realtime(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit], params: ModelParams,
                              steps: Optional[int] = None,
                              max_width: Optional[int] = MAX_STATEVECTOR_WIDTH,
                              scenario: Scenario = Scenario.HERMITIAN_REAL_TIME) -> EvolutionCircuit:
    """e^{−iĤt} with only unitary rotations; a complex identity coefficient is allowed.

    Raises
    ------
    BlockEncodingError
        If any non-identity term has an imaginary coefficient
    """
    split = split_hermitian_antihermitian(hamiltonian)
    if split.antihermitian_group:
        raise BlockEncodingError(
            f"{split.size} anti-Hermitian terms need block encoding; use assemble_nonhermitian_realtime."
        )
    steps, dt = _with_steps(params, steps)
    factors = tuple(UnitaryFactor(c, h, dt) for c, h in split.hermitian_group)
    prefactor = np.exp(-1j * split.scalar_offset * steps * dt)
    return _finish(scenario, split, factors, steps, dt, prefactor, max_width)


def assemble(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit], params: ModelParams,
             steps: Optional[int] = None,
             max_width: Optional[int] = MAX_STATEVECTOR_WIDTH) -> EvolutionCircuit:
    """Dispatches on params.scenario.

    A non-Hermitian run whose anti-Hermitian group is empty (the V₀ = 0 free
    partner, or any Γ = 1 rotated Hamiltonian) falls back to the unitary
    circuit, tagged with the non-Hermitian scenario.
    """
    scenario = params.scenario
    if scenario is Scenario.IMAGINARY_TIME:
        return assemble_imaginary_time(hamiltonian, params, steps, max_width)
    split = split_hermitian_antihermitian(hamiltonian)
    if scenario is Scenario.NON_HERMITIAN_REAL_TIME and split.antihermitian_group:
        return assemble_nonhermitian_realtime(split, params, steps, max_width)
    return assemble_unitary_realtime(split, params, steps, max_width, scenario=scenario)


def extract_block(ec: Union[EvolutionCircuit, LcuStep]) -> np.ndarray:
    """The 2^Γ × 2^Γ block mapping system ⊗ |0…0⟩ ancillas to itself.

    For an EvolutionCircuit this is A/(scalar_prefactor·total_norm).

    Raises
    ------
    CapacityError
        If the circuit is wider than the dense test cap
    """
    if isinstance(ec, LcuStep):
        width, num_qubits, gates = ec.width, ec.num_qubits, ec.circuit().gates
    else:
        ec._check_width(MAX_DENSE_WIDTH)
        width, num_qubits, gates = ec.width, ec.num_qubits, ec.circuit.gates
    if width > MAX_DENSE_WIDTH:
        raise CapacityError(f"Width {width} exceeds the dense-matrix cap of {MAX_DENSE_WIDTH} qubits.")
    shift = width - num_qubits
    dim = 2 ** num_qubits
    inputs = np.zeros((2 ** width, dim), dtype=complex)
    rows = np.arange(dim) << shift
    inputs[rows, np.arange(dim)] = 1.0
    outputs = apply_gates(gates, StateVector(inputs)).amplitudes
    return outputs[rows, :]
