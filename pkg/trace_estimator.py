"""
Hadamard-Test Trace Estimation

For an evolution circuit encoding A = prefactor · total_norm · block, the
Hadamard test on basis state |α⟩ gives outcome probabilities P_α(0), P_α(1)
with every block ancilla read as 0, and P_other for everything else. Then
P_α(0) − P_α(1) = Re⟨α|block|α⟩, or Im⟨α|block|α⟩ = P_α(1) − P_α(0) when an S
gate precedes the closing Hadamard. Summing over α estimates Tr[block].

Backends:
    faithful: the full-width circuit on one statevector
    projected: a (Γ + 2)-qubit workspace that reuses one block ancilla and
        projects it on |0⟩ after every block-encoded factor; it yields the same
        P_α(0), P_α(1) because no block ancilla is touched after its factor
    shot-free: projected probabilities without sampling

Sampling draws a multinomial of `shots` over (0, 1, other) per trial and α
from the exact probabilities. Shots landing in "other" stay in the
denominator.
"""

# Standard library imports
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np

# Local imports
from block_encoding import EvolutionCircuit, LcuStep, Part
from circuit import (StateVector, apply_circuit, apply_gates, basis_state, hadamard, marginal_probabilities, phase_s,
                     project_qubit)
from model_params import Scenario
from random_streams import StreamFactory

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-9


class EstimationError(ValueError):
    """Error indicating invalid sampling settings or mismatched estimates."""


class Backend(Enum):
    FAITHFUL = "faithful"
    PROJECTED = "projected"
    SHOT_FREE = "shot-free"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class HadamardOutcome:
    """Outcome probabilities of one Hadamard test on |α⟩."""
    alpha: int
    p0: float
    p1: float
    p_other: float
    part: Part

    def __post_init__(self):
        for name in ("p0", "p1", "p_other"):
            value = getattr(self, name)
            if value < -PROBABILITY_TOLERANCE or value > 1 + PROBABILITY_TOLERANCE:
                raise EstimationError(f"{name} = {value} is not a probability.")
        total = self.p0 + self.p1 + self.p_other
        if abs(total - 1) > PROBABILITY_TOLERANCE:
            raise EstimationError(f"Outcome probabilities sum to {total}, not 1.")

    @classmethod
    def from_pair(cls, alpha: int, p0: float, p1: float, part: Part) -> "HadamardOutcome":
        p_other = 1.0 - p0 - p1
        if -PROBABILITY_TOLERANCE < p_other < 0:
            p_other = 0.0
        return cls(alpha, float(p0), float(p1), p_other, part)

    @property
    def difference(self) -> float:
        """Re⟨α|block|α⟩ for the real part, Im⟨α|block|α⟩ for the imaginary part."""
        return self.p0 - self.p1 if self.part is Part.REAL else self.p1 - self.p0

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([self.p0, self.p1, self.p_other])


@dataclass(frozen=True)
class TraceEstimate:
    """
    Estimated Tr[block] at one step, with the factors that turn it into Tr[A].

    Attributes:
        step, time: Step index k and t_k = k·δt.
        mean: Estimated Tr[block]; only measured parts are meaningful.
        se_re, se_im: Standard errors of the real and imaginary parts.
        shots, trials: Sampling budget (0 shots for shot-free and step 0).
        backend: Backend used.
        total_norm, scalar_prefactor: Tr[A] = scalar_prefactor·total_norm·Tr[block].
        scenario: Scenario of the circuit.
        parts: Measured parts.
    """
    step: int
    time: float
    mean: complex
    se_re: float
    se_im: float
    shots: int
    trials: int
    backend: Backend
    total_norm: float
    scalar_prefactor: complex
    scenario: Scenario
    parts: Tuple[Part, ...] = (Part.REAL,)

    @property
    def scale(self) -> complex:
        return self.scalar_prefactor * self.total_norm

    def rescaled(self) -> Tuple[complex, float, float]:
        """Tr[A] with standard errors propagated through the complex scale."""
        return propagate(self.scale, self.mean, self.se_re, self.se_im)

    def merge(self, other: "TraceEstimate") -> "TraceEstimate":
        """Combines a real-part and an imaginary-part estimate of the same circuit."""
        if (other.step, other.scenario) != (self.step, self.scenario):
            raise EstimationError("Only estimates of the same step and scenario can be merged.")
        mean, se_re, se_im = self.mean, self.se_re, self.se_im
        if Part.IMAGINARY in other.parts:
            mean = complex(mean.real, other.mean.imag)
            se_im = other.se_im
        if Part.REAL in other.parts:
            mean = complex(other.mean.real, mean.imag)
            se_re = other.se_re
        parts = tuple(p for p in Part if p in self.parts or p in other.parts)
        return replace(self, mean=mean, se_re=se_re, se_im=se_im, parts=parts)


def propagate(z: complex, mean: complex, se_re: float, se_im: float) -> Tuple[complex, float, float]:
    """z·mean with independent real/imaginary errors propagated."""
    se_re_out = math.hypot(z.real * se_re, z.imag * se_im)
    se_im_out = math.hypot(z.imag * se_re, z.real * se_im)
    return z * mean, se_re_out, se_im_out


def _basis_offset(ec: EvolutionCircuit) -> int:
    return ec.width - ec.num_qubits


def hadamard_probabilities(ec: EvolutionCircuit, alpha: int, part: Part = Part.REAL) -> HadamardOutcome:
    """Faithful backend: the full Hadamard-test circuit on one statevector.

    Raises
    ------
    CapacityError
        If the circuit is wider than the statevector cap
    """
    part = Part(part)
    if not 0 <= alpha < 2 ** ec.num_qubits:
        raise EstimationError(f"Basis index {alpha} outside [0, {2 ** ec.num_qubits}).")
    circuit = _hadamard_circuit(ec, part)
    psi = apply_circuit(circuit, basis_state(alpha << _basis_offset(ec), ec.width), in_place=True)
    ancillas = (ec.hadamard_ancilla,) + ec.block_ancillas
    zeros = (0,) * len(ec.block_ancillas)
    p0 = marginal_probabilities(psi, ancillas, (0,) + zeros)
    p1 = marginal_probabilities(psi, ancillas, (1,) + zeros)
    return HadamardOutcome.from_pair(alpha, p0, p1, part)


@lru_cache(maxsize=32)
def _hadamard_circuit(ec: EvolutionCircuit, part: Part):
    return ec.hadamard_circuit(part)


@lru_cache(maxsize=32)
def _projected_step(ec: EvolutionCircuit):
    """One Trotter step on the workspace: bit 0 test, bit 1 ancilla, system above.

    Returns (gates, project_after) pairs, all gates controlled by bit 0.
    """
    system = tuple(range(2, ec.num_qubits + 2))
    ops = []
    for factor in ec.step_factors:
        if isinstance(factor, LcuStep):
            ops.append((tuple(g.controlled_by(0) for g in factor.gates(system, ancilla=1)), True))
        else:
            ops.append(((factor.gate(system).controlled_by(0),), False))
    return tuple(ops)


def _projected_outcomes(ec: EvolutionCircuit, part: Part, alphas: Sequence[int]) -> List[HadamardOutcome]:
    width = ec.num_qubits + 2
    inputs = np.zeros((2 ** width, len(alphas)), dtype=complex)
    inputs[np.asarray(alphas) << 2, np.arange(len(alphas))] = 1.0
    state = StateVector(inputs)
    apply_gates((hadamard(0),), state)
    ops = _projected_step(ec)
    for _ in range(ec.steps):
        for gates, project in ops:
            apply_gates(gates, state)
            if project:
                project_qubit(state, 1)
    closing = (phase_s(0), hadamard(0)) if part is Part.IMAGINARY else (hadamard(0),)
    apply_gates(closing, state)
    probabilities = (np.abs(state.amplitudes) ** 2).reshape(-1, 2, 2, len(alphas))
    p0 = probabilities[:, 0, 0, :].sum(axis=0)
    p1 = probabilities[:, 0, 1, :].sum(axis=0)
    return [HadamardOutcome.from_pair(a, p0[i], p1[i], part) for i, a in enumerate(alphas)]


def projected_backend(ec: EvolutionCircuit, alpha: int, part: Part = Part.REAL) -> HadamardOutcome:
    """Projected backend for one basis state; memory O(2^{Γ+2}) for any N."""
    part = Part(part)
    if not 0 <= alpha < 2 ** ec.num_qubits:
        raise EstimationError(f"Basis index {alpha} outside [0, {2 ** ec.num_qubits}).")
    return _projected_outcomes(ec, part, (alpha,))[0]


def outcome_table(ec: EvolutionCircuit, part: Part = Part.REAL,
                  backend: Backend = Backend.PROJECTED) -> List[HadamardOutcome]:
    """Outcomes for every α = 0..2^Γ − 1."""
    part, backend = Part(part), Backend(backend)
    alphas = range(2 ** ec.num_qubits)
    if backend is Backend.FAITHFUL:
        return [hadamard_probabilities(ec, a, part) for a in alphas]
    return _projected_outcomes(ec, part, tuple(alphas))


def predicted_standard_error(outcomes: Sequence[HadamardOutcome], shots: int, trials: int = 1) -> float:
    """Standard error of the trial-mean estimator implied by the exact probabilities.

    Per α the single-shot estimator takes ±1 or 0, so its variance is
    P(0) + P(1) − (P(0) − P(1))².
    """
    variance = sum(o.p0 + o.p1 - (o.p0 - o.p1) ** 2 for o in outcomes)
    return math.sqrt(max(variance, 0.0) / (shots * trials))


def _check_budget(shots: int, trials: int) -> None:
    for name, value in (("shots", shots), ("trials", trials)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise EstimationError(f"{name} must be a positive integer, got {value!r}.")


def identity_estimate(ec: EvolutionCircuit, backend: Backend, parts: Sequence[Part] = (Part.REAL,)) -> TraceEstimate:
    """Step 0: Tr[I] = 2^Γ exactly, no sampling."""
    return TraceEstimate(step=ec.steps, time=ec.time, mean=complex(2 ** ec.num_qubits), se_re=0.0, se_im=0.0,
                         shots=0, trials=1, backend=Backend(backend), total_norm=ec.total_norm,
                         scalar_prefactor=ec.scalar_prefactor, scenario=ec.scenario, parts=tuple(parts))


def estimate_trace(ec: EvolutionCircuit, part: Part, shots: int, trials: int, seed: Optional[int],
                   backend: Backend = Backend.PROJECTED, variant: int = 0,
                   outcomes: Optional[Sequence[HadamardOutcome]] = None) -> TraceEstimate:
    """Estimates one part of Tr[block] from sampled Hadamard tests.

    Parameters
    ----------
    ec: the evolution circuit
    part: Part.REAL or Part.IMAGINARY
    shots: shots per basis state α and trial
    trials: independent repetitions; SE is std(ddof=1)/√trials
    seed: run seed (ignored by the shot-free backend)
    backend: faithful, projected or shot-free
    variant: stream index separating circuits that share a step count
    outcomes: precomputed outcome table, computed if omitted

    Raises
    ------
    EstimationError
        If shots or trials are not positive integers, or a sampled run has no seed
    """
    part, backend = Part(part), Backend(backend)
    if ec.steps == 0:
        return identity_estimate(ec, backend, (part,))
    if outcomes is None:
        outcomes = outcome_table(ec, part, backend)
    sign = 1.0 if part is Part.REAL else -1.0

    if backend is Backend.SHOT_FREE:
        mean, se = sum(o.difference for o in outcomes), 0.0
        shots, trials = 0, 1
    else:
        _check_budget(shots, trials)
        if seed is None:
            raise EstimationError("Sampled estimates need a seed.")
        streams = StreamFactory(seed)
        part_index = 0 if part is Part.REAL else 1
        per_trial = np.zeros(trials)
        plug_in_variance = 0.0
        for trial in range(trials):
            for o in outcomes:
                rng = streams.stream(variant, part_index, ec.steps, trial, o.alpha)
                n0, n1, _ = rng.multinomial(shots, o.probabilities)
                per_trial[trial] += sign * (n0 - n1) / shots
                if trials == 1:
                    f0, f1 = n0 / shots, n1 / shots
                    plug_in_variance += (f0 + f1 - (f0 - f1) ** 2) / shots
        mean = float(per_trial.mean())
        if trials > 1:
            se = float(per_trial.std(ddof=1) / math.sqrt(trials))
        else:
            se = math.sqrt(max(plug_in_variance, 0.0))

    value = complex(mean, 0.0) if part is Part.REAL else complex(0.0, mean)
    se_re, se_im = (se, 0.0) if part is Part.REAL else (0.0, se)
    logger.debug("step %d %s: mean %.6g ± %.3g (%s)", ec.steps, part, mean, se, backend)
    return TraceEstimate(step=ec.steps, time=ec.time, mean=value, se_re=se_re, se_im=se_im,
                         shots=shots, trials=trials, backend=backend, total_norm=ec.total_norm,
                         scalar_prefactor=ec.scalar_prefactor, scenario=ec.scenario, parts=(part,))


def estimate_parts(ec: EvolutionCircuit, parts: Sequence[Part], shots: int, trials: int, seed: Optional[int],
                   backend: Backend = Backend.PROJECTED, variant: int = 0) -> TraceEstimate:
    """Estimates every requested part and merges them into one TraceEstimate."""
    estimates = [estimate_trace(ec, p, shots, trials, seed, backend, variant) for p in parts]
    merged = estimates[0]
    for other in estimates[1:]:
        merged = merged.merge(other)
    return merged
