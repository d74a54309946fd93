"""
Integrated Correlation Function Series

Turns per-step trace estimates into the integrated correlation function
C(t_k) = Tr[e^{−iĤt_k}] (or C(τ_k) = Tr[e^{−Ĥτ_k}]) and its
interacting-minus-free difference ΔC, and lays the result out as a table.

Two ways of forming ΔC are supported:
    shared circuit: when interacting and free Hamiltonians differ only in the
        identity coefficient, one circuit serves both and
        ΔC = (z_int − z_free)·total_norm·Tr[block], z being the folded prefactors
    independent circuits: ΔC = C − C₀ with standard errors added in quadrature

Functions:
    rescale_icf: Estimates → IcfSeries
    shares_circuit: Whether two Pauli sums differ only in the identity term
"""

# Standard library imports
import math
from dataclasses import dataclass, replace
from typing import Iterator, List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np
import pandas as pd

# Local imports
from block_encoding import Part
from model_params import ModelParams, Scenario
from pauli import WeightedPauliSum
from trace_estimator import EstimationError, TraceEstimate, propagate

COLUMNS = ("step", "time", "mean_re", "se_re", "mean_im", "se_im",
           "exact_re", "exact_im", "analytic_re", "analytic_im")

DELTA = "delta"
INTERACTING = "interacting"


@dataclass(frozen=True)
class IcfRow:
    step: int
    time: float
    mean: complex
    se_re: float
    se_im: float
    measured_imag: bool = True
    measured_real: bool = True
    exact: Optional[complex] = None
    analytic: Optional[complex] = None


@dataclass(frozen=True)
class IcfSeries:
    """
    Rescaled correlation-function series for steps 0..N.

    Attributes:
        rows: One IcfRow per step.
        scenario: Scenario of the estimates.
        observable: "delta" for ΔC, "interacting" for C.
    """
    rows: Tuple[IcfRow, ...]
    scenario: Scenario
    observable: str = DELTA

    def __len__(self):
        return len(self.rows)

    def __iter__(self) -> Iterator[IcfRow]:
        return iter(self.rows)

    def means(self) -> np.ndarray:
        return np.array([r.mean for r in self.rows])

    def times(self) -> np.ndarray:
        return np.array([r.time for r in self.rows])

    def with_oracles(self, exact: Optional[Sequence[complex]] = None,
                     analytic: Optional[Sequence[complex]] = None) -> "IcfSeries":
        """Attaches oracle columns; None leaves a column empty."""
        for name, values in (("exact", exact), ("analytic", analytic)):
            if values is not None and len(values) != len(self.rows):
                raise EstimationError(f"{name} oracle has {len(values)} values for {len(self.rows)} rows.")
        rows = []
        for k, row in enumerate(self.rows):
            rows.append(replace(
                row,
                exact=None if exact is None else complex(exact[k]),
                analytic=None if analytic is None else complex(analytic[k]),
            ))
        return replace(self, rows=tuple(rows))

    def to_frame(self) -> pd.DataFrame:
        """Rows in the fixed column order; disabled values are NaN."""
        nan = float("nan")
        records = []
        for r in self.rows:
            records.append({
                "step": r.step,
                "time": r.time,
                "mean_re": r.mean.real if r.measured_real else nan,
                "se_re": r.se_re if r.measured_real else nan,
                "mean_im": r.mean.imag if r.measured_imag else nan,
                "se_im": r.se_im if r.measured_imag else nan,
                "exact_re": nan if r.exact is None else r.exact.real,
                "exact_im": nan if r.exact is None else r.exact.imag,
                "analytic_re": nan if r.analytic is None else r.analytic.real,
                "analytic_im": nan if r.analytic is None else r.analytic.imag,
            })
        frame = pd.DataFrame.from_records(records, columns=list(COLUMNS))
        return frame.astype({"step": "int64"})


def shares_circuit(interacting: WeightedPauliSum, free: WeightedPauliSum, atol: float = 0.0) -> bool:
    """True if the two sums agree on every non-identity term."""
    return interacting.without_identity().allclose(free.without_identity(), atol=atol)


def _check_series(estimates: Sequence[TraceEstimate], params: ModelParams, label: str) -> None:
    steps = [e.step for e in estimates]
    if steps != list(range(params.steps + 1)):
        raise EstimationError(f"{label} estimates must cover steps 0..{params.steps} in order, got {steps}.")
    for e in estimates:
        if e.scenario is not params.scenario:
            raise EstimationError(
                f"{label} estimate at step {e.step} is for {e.scenario}, expected {params.scenario}."
            )


def rescale_icf(estimates: Sequence[TraceEstimate], params: ModelParams,
                free_estimates: Optional[Sequence[TraceEstimate]] = None,
                free_prefactors: Optional[Sequence[complex]] = None) -> IcfSeries:
    """Rescales trace estimates into C or ΔC.

    Parameters
    ----------
    estimates: interacting estimates for steps 0..N
    params: the run parameters (scenario and step count are checked)
    free_estimates: free-case estimates from independent circuits, for ΔC = C − C₀
    free_prefactors: free-case folded prefactors z_free(t_k), for the shared-circuit ΔC

    Returns
    -------
    IcfSeries
        ΔC if free data is given, C otherwise

    Raises
    ------
    EstimationError
        If steps are missing, scenarios differ or both free inputs are given
    """
    if free_estimates is not None and free_prefactors is not None:
        raise EstimationError("Give free estimates or free prefactors, not both.")
    _check_series(estimates, params, "interacting")
    if free_estimates is not None:
        _check_series(free_estimates, params, "free")
    if free_prefactors is not None and len(free_prefactors) != len(estimates):
        raise EstimationError(f"Expected {len(estimates)} free prefactors, got {len(free_prefactors)}.")

    rows: List[IcfRow] = []
    for k, est in enumerate(estimates):
        measured_imag = Part.IMAGINARY in est.parts
        measured_real = Part.REAL in est.parts
        if free_prefactors is not None:
            z = (est.scalar_prefactor - complex(free_prefactors[k])) * est.total_norm
            value, se_re, se_im = propagate(z, est.mean, est.se_re, est.se_im)
        else:
            value, se_re, se_im = est.rescaled()
            if free_estimates is not None:
                free = free_estimates[k]
                free_value, free_se_re, free_se_im = free.rescaled()
                value -= free_value
                se_re = math.hypot(se_re, free_se_re)
                se_im = math.hypot(se_im, free_se_im)
                measured_imag = measured_imag and Part.IMAGINARY in free.parts
                measured_real = measured_real and Part.REAL in free.parts
        if not measured_imag:
            value, se_im = complex(value.real, 0.0), 0.0
        if not measured_real:
            value, se_re = complex(0.0, value.imag), 0.0
        rows.append(IcfRow(step=est.step, time=est.time, mean=value, se_re=se_re, se_im=se_im,
                           measured_imag=measured_imag, measured_real=measured_real))
    observable = INTERACTING if free_estimates is None and free_prefactors is None else DELTA
    return IcfSeries(tuple(rows), params.scenario, observable)
