"""
ICF Experiment Runner

Runs a complete integrated-correlation-function experiment: builds the
interacting (and free) Hamiltonians of a scenario, assembles the evolution
circuits for steps 0..N, estimates their traces and rescales them into C or
ΔC, then attaches the reference columns.

Experiment Structure:
    1. Build Hamiltonians and decide between a shared circuit and independent circuits
    2. Generate (variant, step) chunks
    3. Estimate each chunk (serially with a progress bar, or on a dask pool)
    4. Rescale and attach exact / Trotter / analytic references

Example Usage:
    experiment = IcfExperiment(params, shots=100_000, trials=100, seed=2024)
    series = experiment.run(progress_bar=True)
"""

# Standard library imports
import logging
import warnings
from typing import Dict, Optional, Sequence, Tuple

# Third-party imports
import dask as da
import numpy as np
import tqdm

# Local imports
from block_encoding import Part, assemble
from circuit import MAX_STATEVECTOR_WIDTH
from exact_oracle import (MAX_ORACLE_QUBITS, analytic_delta_c, exact_icf, exact_trace,
                          trotter_reference)
from hamiltonian import scenario_hamiltonian
from icf_series import DELTA, INTERACTING as INTERACTING_OBSERVABLE, IcfSeries, rescale_icf, shares_circuit
from job_generator import FREE, INTERACTING, Chunk, JobGenerator
from model_params import ModelParams, Scenario
from pauli import WeightedPauliSum
from trace_estimator import Backend, TraceEstimate, estimate_parts, identity_estimate

EXACT = "exact"
TROTTER = "trotter"
ANALYTIC = "analytic"
ORACLES = (EXACT, TROTTER, ANALYTIC)


class IcfExperiment(object):
    """
    One ICF run.

    Attributes:
        params (ModelParams): Model, step size, step count and scenario
        shots (int): Shots per basis state and trial
        trials (int): Independent repetitions
        seed (Optional[int]): Run seed, required unless the backend is shot-free
        backend (Backend): faithful, projected or shot-free
        parts (Tuple[Part, ...]): Measured parts (both for real-time scenarios)
        observable (str): "delta" for ΔC, "interacting" for C
        hamiltonian (Optional[WeightedPauliSum]): Custom Hamiltonian; forces C
        oracles (Tuple[str, ...]): Reference columns to attach
        workers (int): Worker count; 1 runs serially
        shared (bool): Whether ΔC uses one circuit for both Hamiltonians
    """

    def __init__(
        self,
        params: ModelParams,
        shots: int = 100_000,
        trials: int = 100,
        seed: Optional[int] = None,
        backend: Backend = Backend.PROJECTED,
        parts: Sequence[Part] = (Part.REAL,),
        observable: str = DELTA,
        hamiltonian: Optional[WeightedPauliSum] = None,
        oracles: Sequence[str] = (EXACT, ANALYTIC),
        workers: int = 1,
    ) -> None:
        self.params = params
        self.shots = shots
        self.trials = trials
        self.seed = seed
        self.backend = Backend(backend)
        self.workers = max(1, int(workers))
        self.oracles = tuple(oracles)
        if EXACT in self.oracles and TROTTER in self.oracles:
            raise ValueError("The exact and trotter references share one column; choose one.")
        if params.scenario.is_real_time:
            self.parts = (Part.REAL, Part.IMAGINARY)
        else:
            self.parts = tuple(Part(p) for p in parts)

        self.custom = hamiltonian is not None
        if self.custom:
            if hamiltonian.num_qubits != params.qubits:
                raise ValueError(f"Custom Hamiltonian acts on {hamiltonian.num_qubits} qubits, Γ = {params.qubits}.")
            self.observable = INTERACTING_OBSERVABLE
            self.hamiltonian, self.free_hamiltonian = hamiltonian, None
        else:
            self.observable = observable
            self.hamiltonian = scenario_hamiltonian(params, interacting=True)
            self.free_hamiltonian = scenario_hamiltonian(params, interacting=False)
        self.shared = (self.observable == DELTA and shares_circuit(self.hamiltonian, self.free_hamiltonian))

        if self.observable == DELTA and not self.shared:
            variants = (INTERACTING, FREE)
        else:
            variants = (INTERACTING,)
        self.job_generator = JobGenerator(params.steps, self.parts, variants)
        self.max_width = MAX_STATEVECTOR_WIDTH if self.backend is Backend.FAITHFUL else None

        self._logger = logging.getLogger(__name__)
        self._logger.debug("Hamiltonian terms:\n%s", self.hamiltonian.to_text())
        self.use_progress_bar = False

    def _hamiltonian_for(self, variant: int) -> WeightedPauliSum:
        return self.free_hamiltonian if variant == FREE else self.hamiltonian

    def _estimate_chunk(self, chunk: Chunk) -> TraceEstimate:
        ec = assemble(self._hamiltonian_for(chunk.variant), self.params, steps=chunk.step,
                      max_width=self.max_width)
        if chunk.step == 0:
            return identity_estimate(ec, self.backend, chunk.parts)
        return estimate_parts(ec, chunk.parts, self.shots, self.trials, self.seed, self.backend, chunk.variant)

    def run(self, progress_bar: bool = False) -> IcfSeries:
        """Estimates every chunk and returns the rescaled series with references."""
        self.use_progress_bar = progress_bar
        self._logger.info(
            "Running %s: Γ=%d, N=%d, δt=%g, t_max=%g, backend=%s, shots=%d, trials=%d, seed=%s, observable=%s%s",
            self.params.scenario, self.params.qubits, self.params.steps, self.params.dt, self.params.total_time,
            self.backend, self.shots, self.trials, self.seed, self.observable, " (shared circuit)" if self.shared else "",
        )
        if self.max_width is not None:
            # the final step is the widest circuit
            for variant in self.job_generator.variants:
                assemble(self._hamiltonian_for(variant), self.params, max_width=self.max_width)
        if self.workers == 1:
            results = self._run_serial()
        else:
            results = self._run_parallel()

        interacting = [results[(INTERACTING, k)] for k in range(self.params.steps + 1)]
        if self.observable != DELTA:
            series = rescale_icf(interacting, self.params)
        elif self.shared:
            free_prefactors = [assemble(self.free_hamiltonian, self.params, steps=k, max_width=None).scalar_prefactor
                               for k in range(self.params.steps + 1)]
            series = rescale_icf(interacting, self.params, free_prefactors=free_prefactors)
        else:
            free = [results[(FREE, k)] for k in range(self.params.steps + 1)]
            series = rescale_icf(interacting, self.params, free_estimates=free)
        return self._attach_oracles(series)

    def _run_serial(self) -> Dict[Tuple[int, int], TraceEstimate]:
        chunks = self.job_generator.build_chunks()
        progress_bar = self._get_progress_bar()
        results = {}
        for chunk in chunks:
            results[(chunk.variant, chunk.step)] = self._estimate_chunk(chunk)
            if progress_bar is not None:
                progress_bar.update(1)
        if progress_bar is not None:
            progress_bar.close()
        self._logger.info("Estimated %d chunks", len(results))
        return results

    def _run_parallel(self) -> Dict[Tuple[int, int], TraceEstimate]:
        chunks = list(self.job_generator.build_chunks())
        tasks = [da.delayed(self._estimate_chunk)(chunk) for chunk in chunks]
        estimates = da.compute(*tasks, scheduler="threads", num_workers=self.workers)
        self._logger.info("Estimated %d chunks on %d workers", len(estimates), self.workers)
        return {(c.variant, c.step): e for c, e in zip(chunks, estimates)}

    def _get_progress_bar(self):
        if self.use_progress_bar:
            return tqdm.tqdm(total=self.job_generator.size, desc="Estimating traces")
        return None

    def _attach_oracles(self, series: IcfSeries) -> IcfSeries:
        params, delta = self.params, self.observable == DELTA
        exact, analytic = None, None

        if EXACT in self.oracles:
            if params.qubits > MAX_ORACLE_QUBITS:
                warnings.warn(f"Exact reference skipped: Γ = {params.qubits} exceeds {MAX_ORACLE_QUBITS}.")
            elif self.custom:
                exact = exact_trace(self.hamiltonian, params.scenario, params.times())
            else:
                result = exact_icf(params)
                exact = result.delta if delta else result.interacting
        elif TROTTER in self.oracles:
            result = trotter_reference(self.hamiltonian, params.dt, params.steps, params.scenario,
                                       free_hamiltonian=self.free_hamiltonian if delta else None)
            exact = result.delta if delta else result.interacting

        if ANALYTIC in self.oracles and delta and not self.custom:
            if params.scenario is Scenario.NON_HERMITIAN_REAL_TIME:
                self._logger.info("No analytic column for the rotated (L → iL) system.")
            else:
                analytic = np.atleast_1d(analytic_delta_c(params, params.times(), params.scenario))
        return series.with_oracles(exact=exact, analytic=analytic)
