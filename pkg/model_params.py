"""
Model Parameters for the Lattice Contact-Potential System

This module holds the physical and lattice parameters of a single particle on a
periodic one-dimensional lattice with a centered contact interaction, together
with the evolution step and step count of a Trotterized run.

The parameter object is deliberately small: Hamiltonians, circuits and oracles
are built elsewhere from it, which keeps "what is simulated" separate from
"how it is simulated".

Key Features:
    - Immutable, validated parameter container
    - Derived box length L = 2^Γ·a
    - Scenario selector (imaginary time, non-Hermitian real time, Hermitian real time)

Classes:
    Scenario: Enumeration of the evolution scenarios
    ModelParams: Frozen container of m, a, V₀, Γ, δt, N and scenario

Example:
    params = ModelParams(mass=1.0, spacing=4.0, coupling=2.0, qubits=1)
    params.box_length
    8.0
"""

# Standard library imports
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Union

# Third-party imports
import numpy as np


class InvalidParameterError(ValueError):
    """Error indicating a physical or lattice parameter outside its domain."""


class Scenario(Enum):
    IMAGINARY_TIME = "imaginary-time"
    NON_HERMITIAN_REAL_TIME = "non-hermitian-real-time"
    HERMITIAN_REAL_TIME = "hermitian-real-time"

    def __str__(self):
        return self.value

    @property
    def is_real_time(self) -> bool:
        return self is not Scenario.IMAGINARY_TIME

    @classmethod
    def from_string(cls, text: Union[str, "Scenario"]) -> "Scenario":
        """Accepts the hyphenated value ('imaginary-time') or the member name."""
        if isinstance(text, Scenario):
            return text
        key = str(text).strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise InvalidParameterError(
            f"Unknown scenario {text!r}; expected one of {[m.value for m in cls]}."
        )


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters of the discretized contact-potential model.

    Attributes:
        mass (float): Particle mass m > 0.
        spacing (float): Lattice spacing a > 0.
        coupling (float): Contact coupling V₀ (negative is attractive).
        qubits (int): Number of system qubits Γ ≥ 1; the lattice has 2^Γ sites.
        dt (float): Evolution step δt (or δτ) > 0.
        steps (int): Number of Trotter steps N ≥ 0.
        scenario (Scenario): Which evolution is simulated.
    """
    mass: float = 1.0
    spacing: float = 4.0
    coupling: float = 2.0
    qubits: int = 1
    dt: float = 0.2
    steps: int = 15
    scenario: Scenario = Scenario.IMAGINARY_TIME

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario.from_string(self.scenario))
        for name in ("mass", "spacing", "coupling", "dt"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise InvalidParameterError(f"{name} must be a real number, got {value!r}.")
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}.")
            object.__setattr__(self, name, float(value))
        for name in ("qubits", "steps"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidParameterError(f"{name} must be an integer, got {value!r}.")
            object.__setattr__(self, name, int(value))
        if self.mass <= 0:
            raise InvalidParameterError(f"mass must be positive, got {self.mass}.")
        if self.spacing <= 0:
            raise InvalidParameterError(f"spacing must be positive, got {self.spacing}.")
        if self.dt <= 0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt}.")
        if self.qubits < 1:
            raise InvalidParameterError(f"qubits must be at least 1, got {self.qubits}.")
        if self.steps < 0:
            raise InvalidParameterError(f"steps must be non-negative, got {self.steps}.")

    @property
    def dimension(self) -> int:
        return 2 ** self.qubits

    @property
    def box_length(self) -> float:
        return self.dimension * self.spacing

    @property
    def total_time(self) -> float:
        return self.steps * self.dt

    def times(self) -> np.ndarray:
        """Time grid t_k = k·δt for k = 0..N."""
        return self.dt * np.arange(self.steps + 1)

    def free(self) -> "ModelParams":
        """The non-interacting partner (V₀ = 0)."""
        return replace(self, coupling=0.0)

    def with_steps(self, steps: int) -> "ModelParams":
        return replace(self, steps=steps)
