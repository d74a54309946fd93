"""
Exact and Analytic References

Dense-matrix and closed-form references for the correlation functions:

    - matrix_exp / trace_exp: e^{z·M} and Tr[e^{z·M}]
    - exact_icf: C, C₀ and ΔC from eigenvalues of the lattice Hamiltonians
    - trotter_reference: the first-order Trotter product in circuit order,
      i.e. what a shot-free estimate must reproduce
    - analytic_delta_c: infinite-volume ΔC = ½·erfc(z)·e^{z²} − ½ with
      z = mV₀·√(it/(2m)), evaluated as ½·w(iz) − ½ with the Faddeeva function
    - phase_shift / icf_from_phase_shift: the contact-potential phase shift and
      its imaginary-time integral (τ/π)∫₀^∞ δ(ε)·e^{−ετ} dε
    - finite_volume_scan / trotter_error_sweep: convergence tables

The phase-shift integral uses δ shifted to vanish at high energy,
δ̄(E) = −atan(mV₀/k) with k = √(2mE). For attractive coupling the bound state
at E_b = −mV₀²/2 adds e^{−E_b·τ} − 1.
"""

# Standard library imports
import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

# Third-party imports
import numpy as np
import pandas as pd
from scipy import integrate, linalg, special

# Local imports
from hamiltonian import NonHermitianSplit, scenario_hamiltonian, split_hermitian_antihermitian
from model_params import ModelParams, Scenario
from pauli import WeightedPauliSum

logger = logging.getLogger(__name__)

MAX_EXP_DIMENSION = 64
MAX_ORACLE_QUBITS = 6
QUAD_TOLERANCE = 1e-8
NORMALITY_TOLERANCE = 1e-12
CONDITION_LIMIT = 1e8

EIGEN_EXPONENTIAL = "eigen-exponential"
TROTTER_PRODUCT = "trotter-product"
ANALYTIC_ERFC = "analytic-erfc"
PHASE_SHIFT_INTEGRAL = "phase-shift-integral"

REAL_TIME = "real-time"
IMAGINARY_TIME = "imaginary-time"


class QuadratureError(RuntimeError):
    """Error indicating that adaptive quadrature missed its tolerance."""


class NonPositiveEnergyError(ValueError):
    """Error indicating a scattering energy E ≤ 0."""


@dataclass(frozen=True)
class OracleResult:
    """
    Reference values on a time grid.

    Attributes:
        times: t_k (or τ_k).
        interacting: C(t_k).
        free: C₀(t_k), if computed.
        method: How the values were obtained.
    """
    times: np.ndarray
    interacting: np.ndarray
    free: Optional[np.ndarray]
    method: str

    @property
    def delta(self) -> np.ndarray:
        if self.free is None:
            raise ValueError("No free reference was computed.")
        return self.interacting - self.free


def matrix_exp(matrix: np.ndarray, z: complex = 1.0, method: str = "auto") -> np.ndarray:
    """e^{z·M}.

    method "auto" diagonalizes normal matrices unitarily (complex Schur form),
    uses an eigenbasis for well-conditioned diagonalizable ones and falls back
    to scaling and squaring otherwise; "eigen" forces the eigenbasis and
    "series" forces scaling and squaring.

    Raises
    ------
    ValueError
        For non-finite entries, non-square or oversized matrices, or an unknown method
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {m.shape}.")
    if m.shape[0] > MAX_EXP_DIMENSION:
        raise ValueError(f"Matrix size {m.shape[0]} exceeds {MAX_EXP_DIMENSION}.")
    if not np.all(np.isfinite(m)) or not np.isfinite(z):
        raise ValueError("matrix_exp needs finite entries.")
    if method not in ("auto", "eigen", "series"):
        raise ValueError(f"Unknown method {method!r}.")
    a = complex(z) * m
    if z == 0:
        return np.eye(m.shape[0], dtype=complex)
    if method == "series":
        return linalg.expm(a)

    scale = max(1.0, float(np.max(np.abs(a))))
    commutator = a @ a.conj().T - a.conj().T @ a
    if method == "auto" and np.max(np.abs(commutator)) <= NORMALITY_TOLERANCE * scale ** 2:
        logger.debug("matrix_exp: schur path")
        t, q = linalg.schur(a, output="complex")
        return (q * np.exp(np.diag(t))) @ q.conj().T

    values, vectors = linalg.eig(a)
    if method == "auto" and np.linalg.cond(vectors) > CONDITION_LIMIT:
        logger.debug("matrix_exp: ill-conditioned eigenbasis, scaling and squaring")
        return linalg.expm(a)
    logger.debug("matrix_exp: eigen path")
    return (vectors * np.exp(values)) @ np.linalg.inv(vectors)


def _eigenvalues(matrix: np.ndarray) -> np.ndarray:
    if np.allclose(matrix, matrix.conj().T, atol=0, rtol=0):
        return linalg.eigvalsh(matrix)
    return linalg.eigvals(matrix)


def trace_exp(matrix: np.ndarray, z: complex) -> complex:
    """Tr[e^{z·M}] = Σ e^{z·λ_i}."""
    return complex(np.sum(np.exp(complex(z) * _eigenvalues(np.asarray(matrix, dtype=complex)))))


def _exponent(scenario: Scenario, time: float) -> complex:
    return -time if scenario is Scenario.IMAGINARY_TIME else -1j * time


def exact_trace(hamiltonian: Union[WeightedPauliSum, np.ndarray], scenario: Scenario,
                times: Sequence[float]) -> np.ndarray:
    """Tr[e^{−Ĥτ}] or Tr[e^{−iĤt}] on a time grid."""
    matrix = hamiltonian.to_matrix() if isinstance(hamiltonian, WeightedPauliSum) else np.asarray(hamiltonian)
    scenario = Scenario.from_string(scenario)
    eigenvalues = _eigenvalues(np.asarray(matrix, dtype=complex))
    traces = [np.sum(np.exp(_exponent(scenario, t) * eigenvalues)) for t in times]
    values = np.array(traces, dtype=complex)
    if scenario is Scenario.IMAGINARY_TIME and np.isrealobj(eigenvalues):
        values = values.real.astype(complex)
    return values


def exact_icf(params: ModelParams, scenario: Optional[Scenario] = None,
              times: Optional[Sequence[float]] = None) -> OracleResult:
    """C, C₀ from the eigenvalues of the (rotated, for non-Hermitian runs) lattice Hamiltonians.

    Raises
    ------
    ValueError
        If Γ exceeds the oracle cap
    """
    if params.qubits > MAX_ORACLE_QUBITS:
        raise ValueError(f"Γ = {params.qubits} exceeds the oracle cap of {MAX_ORACLE_QUBITS} qubits.")
    if scenario is not None:
        params = replace(params, scenario=Scenario.from_string(scenario))
    times = params.times() if times is None else np.asarray(times, dtype=float)
    interacting = exact_trace(scenario_hamiltonian(params, True), params.scenario, times)
    free = exact_trace(scenario_hamiltonian(params, False), params.scenario, times)
    return OracleResult(np.asarray(times), interacting, free, EIGEN_EXPONENTIAL)


def trotter_step_matrix(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit], dt: float,
                        scenario: Scenario) -> np.ndarray:
    """One first-order Trotter step without the identity factor, in circuit order.

    imaginary time: Π e^{−c_k·h_k·δτ}
    real time: Π e^{c_j·h_j·δt} · Π e^{−i·c_i·h_i·δt} (rotations applied first)
    """
    split = split_hermitian_antihermitian(hamiltonian)
    scenario = Scenario.from_string(scenario)
    step = np.eye(2 ** split.num_qubits, dtype=complex)
    if scenario is Scenario.IMAGINARY_TIME:
        if split.antihermitian_group:
            raise ValueError("Imaginary-time references need a Hermitian Hamiltonian.")
        for c, h in split.hermitian_group:
            step = matrix_exp(h.matrix(), -c * dt) @ step
        return step
    for c, h in split.hermitian_group:
        step = matrix_exp(h.matrix(), -1j * c * dt) @ step
    for c, h in split.antihermitian_group:
        step = matrix_exp(h.matrix(), c * dt) @ step
    return step


def _trotter_traces(hamiltonian, dt: float, steps: int, scenario: Scenario) -> np.ndarray:
    split = split_hermitian_antihermitian(hamiltonian)
    step = trotter_step_matrix(split, dt, scenario)
    power = np.eye(step.shape[0], dtype=complex)
    traces = []
    for k in range(steps + 1):
        prefactor = np.exp(_exponent(scenario, k * dt) * split.scalar_offset)
        traces.append(prefactor * np.trace(power))
        power = step @ power
    return np.array(traces, dtype=complex)


def trotter_reference(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit], dt: float, steps: int,
                      scenario: Scenario,
                      free_hamiltonian: Optional[Union[WeightedPauliSum, NonHermitianSplit]] = None) -> OracleResult:
    """Tr of the Trotter product at t_k = k·δt, k = 0..N, identity factor included."""
    scenario = Scenario.from_string(scenario)
    interacting = _trotter_traces(hamiltonian, dt, steps, scenario)
    free = None if free_hamiltonian is None else _trotter_traces(free_hamiltonian, dt, steps, scenario)
    return OracleResult(dt * np.arange(steps + 1), interacting, free, TROTTER_PRODUCT)


def _domain(domain: Union[str, Scenario]) -> str:
    if isinstance(domain, Scenario):
        return REAL_TIME if domain.is_real_time else IMAGINARY_TIME
    if domain not in (REAL_TIME, IMAGINARY_TIME):
        raise ValueError(f"domain must be {REAL_TIME!r} or {IMAGINARY_TIME!r}, got {domain!r}.")
    return domain


def analytic_delta_c(params: ModelParams, times: Union[float, Sequence[float]],
                     domain: Union[str, Scenario] = IMAGINARY_TIME) -> Union[complex, np.ndarray]:
    """Infinite-volume ΔC for the contact potential.

    Imaginary time (t → −iτ) gives ½·erfcx(mV₀·√(τ/(2m))) − ½, real valued.
    Real time uses the principal branch of √(it); that evaluation is
    experimental.
    """
    domain = _domain(domain)
    t = np.asarray(times, dtype=float)
    m, v0 = params.mass, params.coupling
    if domain == IMAGINARY_TIME:
        z = m * v0 * np.sqrt(t / (2 * m))
        values = (0.5 * special.erfcx(z) - 0.5).astype(complex)
    else:
        warnings.warn("Real-time analytic ΔC uses the principal branch of √(it) and is experimental.")
        z = m * v0 * np.sqrt(1j * t / (2 * m))
        values = 0.5 * special.wofz(1j * z) - 0.5
    return complex(values) if values.ndim == 0 else values


def phase_shift(energy: float, params: ModelParams) -> float:
    """δ(E) = cot⁻¹(−√(2mE)/(mV₀)) on the branch (0, π); zero without coupling.

    Raises
    ------
    NonPositiveEnergyError
        If E ≤ 0
    """
    if not energy > 0:
        raise NonPositiveEnergyError(f"Phase shifts need E > 0, got {energy}.")
    m, v0 = params.mass, params.coupling
    if v0 == 0:
        return 0.0
    x = -math.sqrt(2 * m * energy) / (m * v0)
    return math.pi / 2 - math.atan(x)


def _vanishing_phase_shift(energy: float, params: ModelParams) -> float:
    if energy <= 0:
        return -math.copysign(math.pi / 2, params.coupling)
    return -math.atan(params.mass * params.coupling / math.sqrt(2 * params.mass * energy))


def bound_state_energy(params: ModelParams) -> Optional[float]:
    """E_b = −mV₀²/2 for attractive coupling, None otherwise."""
    if params.coupling >= 0:
        return None
    return -params.mass * params.coupling ** 2 / 2


def icf_from_phase_shift(params: ModelParams, tau: float,
                         phase: Optional[Callable[[float], float]] = None) -> float:
    """ΔC(τ) = (τ/π)∫₀^∞ δ(ε)·e^{−ετ} dε, plus the bound-state term if any.

    With `phase` given, that function is integrated as is and no bound-state
    term is added.

    Raises
    ------
    ValueError
        If τ ≤ 0
    QuadratureError
        If the quadrature did not reach its tolerance
    """
    if not tau > 0:
        raise ValueError(f"τ must be positive, got {tau}.")
    if phase is None:
        def integrand(e):
            return _vanishing_phase_shift(e, params) * math.exp(-e * tau)
    else:
        def integrand(e):
            return phase(e) * math.exp(-e * tau) if e > 0 else 0.0

    out = integrate.quad(integrand, 0, np.inf, epsabs=QUAD_TOLERANCE, epsrel=1e-10, limit=200, full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3 and abserr > QUAD_TOLERANCE:
        raise QuadratureError(f"Phase-shift integral reached error {abserr:.3g}, tolerance {QUAD_TOLERANCE}.")
    result = tau / math.pi * value
    bound = bound_state_energy(params)
    if phase is None and bound is not None:
        result += math.exp(-bound * tau) - 1
    return result


def finite_volume_scan(box_length: float, gammas: Sequence[int], tau: float,
                       mass: float = 1.0, coupling: float = 2.0) -> pd.DataFrame:
    """Imaginary-time ΔC at fixed box length L for several Γ (a = L/2^Γ)."""
    analytic = analytic_delta_c(ModelParams(mass=mass, coupling=coupling), tau).real
    records = []
    for gamma in gammas:
        params = ModelParams(mass=mass, spacing=box_length / 2 ** gamma, coupling=coupling, qubits=gamma,
                             dt=tau, steps=1, scenario=Scenario.IMAGINARY_TIME)
        exact = exact_icf(params, times=[tau]).delta[0].real
        records.append({"gamma": gamma, "spacing": params.spacing, "exact": exact,
                        "analytic": analytic, "deviation": abs(exact - analytic)})
    return pd.DataFrame.from_records(records)


def trotter_error_sweep(hamiltonian: Union[WeightedPauliSum, NonHermitianSplit], time: float,
                        dts: Sequence[float], scenario: Scenario) -> pd.DataFrame:
    """|Trotter trace − exact trace| at fixed t for each step size.

    This is the trace deviation, not the operator-norm deviation: the first-order
    error term is a commutator and has zero trace, so the deviation falls as δt².

    Raises
    ------
    ValueError
        If t is not an integer multiple of some δt
    """
    scenario = Scenario.from_string(scenario)
    split = split_hermitian_antihermitian(hamiltonian)
    exact = exact_trace(split.to_matrix(), scenario, [time])[0]
    records = []
    for dt in dts:
        steps = int(round(time / dt))
        if abs(steps * dt - time) > 1e-9 * max(1.0, time):
            raise ValueError(f"t = {time} is not a multiple of δt = {dt}.")
        trotter = _trotter_traces(split, dt, steps, scenario)[-1]
        records.append({"dt": dt, "steps": steps, "trotter_re": trotter.real, "trotter_im": trotter.imag,
                        "exact_re": exact.real, "exact_im": exact.imag, "deviation": abs(trotter - exact)})
    return pd.DataFrame.from_records(records)
