"""
Lattice Hamiltonian, Pauli Decomposition and the L → iL Rotation

This module builds the position-space Hamiltonian of one particle on a periodic
lattice of 2^Γ sites with a contact potential on the two central sites, and
converts dense matrices into weighted Pauli sums.

The decomposition enumerates all 4^Γ Pauli strings (in the same way every
state of a finite game can be enumerated with itertools.product) and assigns
each the trace inner product Tr[P·M]/2^Γ. The trace inner products are
evaluated together as one tensor contraction.

Key Features:
    - Periodic nearest-neighbour hopping −1/(2ma²), diagonal 1/(ma²) + V(x_α)
    - Contact potential V₀/(2a) at α ∈ {2^Γ/2 − 1, 2^Γ/2}
    - Non-Hermitian rotation a → i·a with closed forms for Γ ∈ {1, 2}
    - Split of a Pauli sum into Hermitian, anti-Hermitian and identity parts

Example:
    params = ModelParams(mass=1.0, spacing=4.0, coupling=2.0, qubits=1)
    pauli_decompose(build_position_hamiltonian(params), 1).as_dict()
    {'I': (0.3125+0j), 'X': (-0.0625+0j)}
"""

# Standard library imports
import itertools
import logging
from dataclasses import dataclass
from typing import Tuple, Union

# Third-party imports
import numpy as np

# Local imports
from model_params import ModelParams, Scenario
from pauli import PauliLetter, PauliString, WeightedPauliSum

logger = logging.getLogger(__name__)

MAX_DENSE_QUBITS = 8
PRUNE_TOLERANCE = 1e-14

# [p, row, col] for p in I, X, Y, Z
_PAULI_BASIS = np.stack([letter.matrix for letter in sorted(PauliLetter)])


class DimensionError(ValueError):
    """Error indicating a matrix whose shape does not match 2^Γ × 2^Γ."""


def _check_qubits(num_qubits: int) -> None:
    if num_qubits < 1:
        raise DimensionError(f"Γ must be at least 1, got {num_qubits}.")
    if num_qubits > MAX_DENSE_QUBITS:
        raise DimensionError(
            f"Γ = {num_qubits} exceeds the dense-matrix cap of {MAX_DENSE_QUBITS} qubits."
        )


def contact_potential(num_qubits: int, spacing: Union[float, complex], coupling: float) -> np.ndarray:
    """Diagonal V(x_α): V₀/(2a) on the two central sites, zero elsewhere."""
    dim = 2 ** num_qubits
    potential = np.zeros(dim, dtype=complex)
    centre = dim // 2
    potential[[centre - 1, centre]] = coupling / (2 * spacing)
    return potential


def lattice_hamiltonian(mass: float, spacing: Union[float, complex], coupling: float,
                        num_qubits: int) -> np.ndarray:
    """Dense lattice Hamiltonian for a possibly complex spacing.

    A complex spacing is how the L → iL rotation enters; for real spacing the
    result is real symmetric (returned with complex dtype).

    For Γ = 1 the two periodic links coincide, so the off-diagonal entry is
    twice the hopping amplitude.
    """
    _check_qubits(num_qubits)
    dim = 2 ** num_qubits
    hopping = -1 / (2 * mass * spacing ** 2)
    sites = np.arange(dim)
    neighbours = (sites + 1) % dim
    matrix = np.zeros((dim, dim), dtype=complex)
    np.add.at(matrix, (sites, neighbours), hopping)
    np.add.at(matrix, (neighbours, sites), hopping)
    matrix[sites, sites] += 1 / (mass * spacing ** 2) + contact_potential(num_qubits, spacing, coupling)
    return matrix


def build_position_hamiltonian(params: ModelParams, interacting: bool = True) -> np.ndarray:
    """Real symmetric lattice Hamiltonian of `params` (V₀ = 0 if not interacting).

    Raises
    ------
    DimensionError
        If Γ exceeds the dense-matrix cap
    """
    coupling = params.coupling if interacting else 0.0
    return lattice_hamiltonian(params.mass, params.spacing, coupling, params.qubits).real


def _snap(value: complex, threshold: float) -> complex:
    real = value.real if abs(value.real) >= threshold else 0.0
    imag = value.imag if abs(value.imag) >= threshold else 0.0
    return complex(real, imag)


def pauli_decompose(matrix: np.ndarray, num_qubits: int,
                    tolerance: float = PRUNE_TOLERANCE) -> WeightedPauliSum:
    """Decomposes a dense 2^Γ × 2^Γ matrix into weighted Pauli strings.

    Coefficients are Tr[P·M]/2^Γ, listed in lexicographic string order over
    'IXYZ'. Real and imaginary parts smaller than `tolerance` times the
    largest |c| are set to zero and vanishing terms are dropped.

    Raises
    ------
    DimensionError
        If the matrix is not square of size 2^Γ or Γ exceeds the cap
    """
    _check_qubits(num_qubits)
    m = np.asarray(matrix, dtype=complex)
    dim = 2 ** num_qubits
    if m.shape != (dim, dim):
        raise DimensionError(f"Expected a {dim}×{dim} matrix for Γ = {num_qubits}, got shape {m.shape}.")

    # Tr[P·M] = Σ Π_k P_k[r_k, c_k] · M[c, r]; axes 0..Γ-1 are the letters.
    tensor = m.reshape([2] * (2 * num_qubits))
    operands = []
    for k in range(num_qubits):
        operands += [_PAULI_BASIS, [k, num_qubits + k, 2 * num_qubits + k]]
    col_axes = [2 * num_qubits + k for k in range(num_qubits)]
    row_axes = [num_qubits + k for k in range(num_qubits)]
    operands += [tensor, col_axes + row_axes]
    traces = np.einsum(*operands, list(range(num_qubits)), optimize=True).reshape(-1) / dim

    scale = float(np.max(np.abs(traces))) if traces.size else 0.0
    threshold = tolerance * scale
    terms = []
    for letters, value in zip(itertools.product("IXYZ", repeat=num_qubits), traces):
        coefficient = _snap(complex(value), threshold)
        if coefficient != 0 and abs(coefficient) >= threshold:
            terms.append((coefficient, PauliString("".join(letters))))
    return WeightedPauliSum(tuple(terms), num_qubits=num_qubits)


def _pruned(coefficients: dict, num_qubits: int) -> WeightedPauliSum:
    return WeightedPauliSum.from_dict({k: v for k, v in coefficients.items() if v != 0},
                                      num_qubits=num_qubits)


def rotate_il(params: ModelParams, interacting: bool = True) -> WeightedPauliSum:
    """Pauli form of the Hamiltonian after the analytic continuation L → iL.

    Substituting a → i·a flips the sign of every 1/(ma²) term and turns the
    contact term V₀/(2a) into −iV₀/(2a). Γ = 1 and Γ = 2 use closed forms;
    larger Γ substitutes into the dense build and decomposes.
    """
    m, a = params.mass, params.spacing
    v0 = params.coupling if interacting else 0.0
    kinetic = 1 / (m * a ** 2)
    if params.qubits == 1:
        return _pruned({"X": kinetic + 0j, "I": -(kinetic + 1j * v0 / (2 * a))}, 1)
    if params.qubits == 2:
        return _pruned({
            "IX": kinetic / 2 + 0j,
            "XX": kinetic / 2 + 0j,
            "ZZ": 1j * v0 / (4 * a),
            "II": -(kinetic + 1j * v0 / (4 * a)),
        }, 2)
    return pauli_decompose(lattice_hamiltonian(m, 1j * a, v0, params.qubits), params.qubits)


def scenario_hamiltonian(params: ModelParams, interacting: bool = True) -> WeightedPauliSum:
    """The Pauli-form Hamiltonian a scenario evolves with."""
    if params.scenario is Scenario.NON_HERMITIAN_REAL_TIME:
        return rotate_il(params, interacting)
    return pauli_decompose(build_position_hamiltonian(params, interacting), params.qubits)


@dataclass(frozen=True)
class NonHermitianSplit:
    """
    A Pauli sum regrouped as H = Σc_i ĥ_i + iΣc_j ĥ_j + scalar_offset·I.

    Attributes:
        hermitian_group: (c_i, ĥ_i) with real c_i.
        antihermitian_group: (c_j, ĥ_j) with real c_j; the term is i·c_j·ĥ_j.
        scalar_offset: Coefficient of the all-identity string.
        num_qubits: Γ.
    """
    hermitian_group: Tuple[Tuple[float, PauliString], ...]
    antihermitian_group: Tuple[Tuple[float, PauliString], ...]
    scalar_offset: complex
    num_qubits: int

    @property
    def size(self) -> int:
        """n, the number of anti-Hermitian terms (block-encoding ancillas per step)."""
        return len(self.antihermitian_group)

    @property
    def is_hermitian(self) -> bool:
        return not self.antihermitian_group and self.scalar_offset.imag == 0

    def to_matrix(self) -> np.ndarray:
        dim = 2 ** self.num_qubits
        matrix = self.scalar_offset * np.eye(dim, dtype=complex)
        for c, h in self.hermitian_group:
            matrix += c * h.matrix()
        for c, h in self.antihermitian_group:
            matrix += 1j * c * h.matrix()
        return matrix


def split_hermitian_antihermitian(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit]) -> NonHermitianSplit:
    """Sends Re(c) to the Hermitian group, Im(c) to the anti-Hermitian group.

    Mixed coefficients contribute to both groups; the identity string becomes
    the scalar offset. An existing split is returned unchanged.
    """
    if isinstance(hamiltonian, NonHermitianSplit):
        return hamiltonian
    hermitian, antihermitian = [], []
    offset = 0j
    for c, p in hamiltonian:
        if p.is_identity:
            offset += c
            continue
        if c.real != 0:
            hermitian.append((c.real, p))
        if c.imag != 0:
            antihermitian.append((c.imag, p))
    logger.debug("split: %d hermitian, %d anti-hermitian terms, offset %s",
                 len(hermitian), len(antihermitian), offset)
    return NonHermitianSplit(tuple(hermitian), tuple(antihermitian), offset, hamiltonian.num_qubits)
