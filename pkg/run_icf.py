"""
ICF Runner

Command-line entry point: resolves a run configuration from defaults, a
preset, an optional key=value file and flags, runs the experiment and writes
the result table (and optionally the Hadamard-test circuit as OpenQASM).

Key Features:
    - Presets for the three reference runs (fig4, fig6, fig8)
    - Flat key=value configuration files, overridable flag by flag
    - Serial or dask-parallel estimation (ICF_WORKERS / --workers)
    - CSV or JSON output with a fixed column order
    - Nothing is written when the run fails

Presets:
    - fig4: imaginary time, Γ=1, m=1, a=4, V₀=2, δτ=0.2, N=15, 100 × 100,000 shots
    - fig6: imaginary time, Γ=2, a=4/3, δτ=0.1, N=10, projected backend
    - fig8: non-Hermitian real time, Γ=2, a=4/3, δt=0.2, N=15, 100,000 shots
      (one million with --million-shots)

Example:
    python run_icf.py --preset fig4 --seed 2024 --out fig4.csv --progress
    python run_icf.py --config run.cfg --steps 5 --format json --out run.json

Output Files:
    - Result table: step, time, mean_re, se_re, mean_im, se_im, exact_re, exact_im, analytic_re, analytic_im
    - Optional OpenQASM 2.0 program of the final-step Hadamard test
"""

# Standard library imports
import argparse
import logging
import os
import sys
import warnings
from dataclasses import asdict, dataclass, fields, replace
from tempfile import mkstemp
from typing import Any, Dict, Optional, Sequence, Tuple

# Local imports
from block_encoding import Part, assemble
from exact_oracle import QuadratureError
from experiment import ANALYTIC, EXACT, ORACLES, TROTTER, IcfExperiment
from icf_series import DELTA, INTERACTING, IcfSeries
from model_params import ModelParams, Scenario
from pauli import WeightedPauliSum
from qasm_export import circuit_to_qasm
from table_writer import FORMATS, emit_table
from trace_estimator import Backend

logger = logging.getLogger(__name__)

WORKERS_ENV = "ICF_WORKERS"
MILLION_SHOTS = 1_000_000

# Reference run settings
PRESETS: Dict[str, Dict[str, Any]] = {
    "fig4": {
        "scenario": "imaginary-time",
        "gamma": 1,
        "mass": 1.0,
        "spacing": 4.0,
        "coupling": 2.0,
        "dt": 0.2,
        "steps": 15,
        "shots": 100_000,
        "trials": 100,
        "backend": "projected",
    },
    "fig6": {
        "scenario": "imaginary-time",
        "gamma": 2,
        "mass": 1.0,
        "spacing": 4.0 / 3.0,
        "coupling": 2.0,
        "dt": 0.1,
        "steps": 10,
        "shots": 100_000,
        "trials": 100,
        "backend": "projected",
    },
    "fig8": {
        "scenario": "non-hermitian-real-time",
        "gamma": 2,
        "mass": 1.0,
        "spacing": 4.0 / 3.0,
        "coupling": 2.0,
        "dt": 0.2,
        "steps": 15,
        "shots": 100_000,
        "trials": 100,
        "backend": "projected",
    },
}


class ConfigError(ValueError):
    """Error indicating an invalid or inconsistent run configuration."""


def _parse_oracles(value: Any) -> Tuple[str, ...]:
    if isinstance(value, (tuple, list)):
        items = [str(v) for v in value]
    else:
        items = [v for v in str(value).replace(" ", "").split(",") if v]
    if items == ["none"]:
        return ()
    for item in items:
        if item not in ORACLES:
            raise ConfigError(f"Unknown oracle {item!r}; expected a comma list of {ORACLES} or 'none'.")
    if EXACT in items and TROTTER in items:
        raise ConfigError("The exact and trotter references fill the same columns; enable one of them.")
    return tuple(dict.fromkeys(items))


def _parse_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"Expected a boolean, got {value!r}.")


def _parse_seed(value: Any) -> Optional[int]:
    if value is None or str(value).strip().lower() in ("", "none"):
        return None
    return int(value)


def _parse_optional(value: Any) -> Optional[str]:
    if value is None or str(value).strip() == "":
        return None
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved configuration of one run.

    Attributes:
        scenario (str): imaginary-time, non-hermitian-real-time or hermitian-real-time
        gamma (int): System qubits Γ
        mass, spacing, coupling, dt (float): Model and step parameters
        steps (int): N
        shots (int): Shots per basis state and trial
        trials (int): Independent repetitions
        seed (Optional[int]): Mandatory unless the backend is shot-free
        backend (str): faithful, projected or shot-free
        part (str): real, imaginary or both (real-time runs always measure both)
        out (Optional[str]): Table path; a temporary file when omitted
        format (str): csv or json
        export_qasm (Optional[str]): Path for the final-step Hadamard test in OpenQASM 2.0
        oracle (Tuple[str, ...]): Enabled reference columns
        observable (str): delta or interacting
        hamiltonian (Optional[str]): Custom Hamiltonian file in the Pauli term format
        workers (int): Worker count
        progress (bool): Show a progress bar
        preset (Optional[str]): Preset the values started from
    """
    scenario: str = "imaginary-time"
    gamma: int = 1
    mass: float = 1.0
    spacing: float = 4.0
    coupling: float = 2.0
    dt: float = 0.2
    steps: int = 15
    shots: int = 100_000
    trials: int = 100
    seed: Optional[int] = None
    backend: str = "projected"
    part: str = "real"
    out: Optional[str] = None
    format: str = "csv"
    export_qasm: Optional[str] = None
    oracle: Tuple[str, ...] = (EXACT, ANALYTIC)
    observable: str = DELTA
    hamiltonian: Optional[str] = None
    workers: int = 1
    progress: bool = False
    preset: Optional[str] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "scenario", str(Scenario.from_string(self.scenario)))
            object.__setattr__(self, "backend", str(Backend(self.backend)))
        except ValueError as error:
            raise ConfigError(str(error)) from None
        object.__setattr__(self, "oracle", _parse_oracles(self.oracle))
        if self.part not in ("real", "imaginary", "both"):
            raise ConfigError(f"part must be real, imaginary or both, got {self.part!r}.")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}.")
        if self.observable not in (DELTA, INTERACTING):
            raise ConfigError(f"observable must be {DELTA!r} or {INTERACTING!r}, got {self.observable!r}.")
        for name in ("shots", "trials", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}.")
        if self.seed is None and self.backend != str(Backend.SHOT_FREE):
            raise ConfigError(f"A seed is required for the sampled {self.backend} backend.")

    def model_params(self) -> ModelParams:
        return ModelParams(mass=self.mass, spacing=self.spacing, coupling=self.coupling, qubits=self.gamma,
                           dt=self.dt, steps=self.steps, scenario=self.scenario)

    def parts(self) -> Tuple[Part, ...]:
        if self.part == "both":
            return (Part.REAL, Part.IMAGINARY)
        return (Part(self.part),)

    def echo(self) -> Dict[str, Any]:
        """Plain-value configuration for the JSON table."""
        values = asdict(self)
        values["oracle"] = list(self.oracle)
        return values


_CONVERTERS = {
    "scenario": str,
    "gamma": int,
    "mass": float,
    "spacing": float,
    "coupling": float,
    "dt": float,
    "steps": int,
    "shots": int,
    "trials": int,
    "seed": _parse_seed,
    "backend": str,
    "part": str,
    "out": _parse_optional,
    "format": str,
    "export_qasm": _parse_optional,
    "oracle": _parse_oracles,
    "observable": str,
    "hamiltonian": _parse_optional,
    "workers": int,
    "progress": _parse_bool,
    "preset": _parse_optional,
    "million_shots": _parse_bool,
}


def _key(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in _CONVERTERS:
        raise ConfigError(f"Unknown configuration key {name!r}.")
    return key


def _convert(key: str, value: Any) -> Any:
    try:
        return _CONVERTERS[key](value)
    except ConfigError:
        raise
    except (TypeError, ValueError):
        raise ConfigError(f"Bad value for {key}: {value!r}.") from None


def parse_config_text(text: str) -> Dict[str, Any]:
    """Parses flat `key = value` lines; `#` starts a comment.

    Raises
    ------
    ConfigError
        For a line without '=', an unknown key or a value that does not convert
    """
    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {number}: expected key=value, got {raw.strip()!r}")
        name, value = line.split("=", 1)
        key = _key(name)
        values[key] = _convert(key, value.strip())
    return values


def read_config_file(path: str) -> Dict[str, Any]:
    with open(path) as file:
        return parse_config_text(file.read())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Estimate integrated correlation functions of a lattice contact potential "
                    "with block-encoded Hadamard tests.")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="start from a reference parameter set")
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--scenario", choices=[str(s) for s in Scenario])
    parser.add_argument("--gamma", type=int, help="system qubits Γ (2^Γ lattice sites)")
    parser.add_argument("--mass", type=float)
    parser.add_argument("--spacing", type=float, help="lattice spacing a")
    parser.add_argument("--coupling", type=float, help="contact coupling V₀")
    parser.add_argument("--dt", type=float, help="step size δt or δτ")
    parser.add_argument("--steps", type=int, help="number of Trotter steps N")
    parser.add_argument("--shots", type=int, help="shots per basis state and trial")
    parser.add_argument("--million-shots", action="store_true", default=None,
                        help="use one million shots per basis state and trial")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--backend", choices=[str(b) for b in Backend])
    parser.add_argument("--part", choices=["real", "imaginary", "both"])
    parser.add_argument("--observable", choices=[DELTA, INTERACTING])
    parser.add_argument("--hamiltonian", help="custom Hamiltonian file, one '<re> <im> <string>' per line")
    parser.add_argument("--oracle", help="comma list of exact, trotter, analytic, or 'none'")
    parser.add_argument("--out", help="result table path")
    parser.add_argument("--format", choices=list(FORMATS))
    parser.add_argument("--export-qasm", help="write the final-step Hadamard test as OpenQASM 2.0")
    parser.add_argument("--workers", type=int, help=f"worker count (default from {WORKERS_ENV})")
    parser.add_argument("--progress", action="store_true", default=None)
    parser.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def resolve_config(args: argparse.Namespace, environ: Optional[Dict[str, str]] = None) -> RunConfig:
    """defaults < preset < config file < flags; ICF_WORKERS sets the default worker count."""
    environ = os.environ if environ is None else environ
    values: Dict[str, Any] = {}
    if environ.get(WORKERS_ENV):
        values["workers"] = _convert("workers", environ[WORKERS_ENV])

    file_values = read_config_file(args.config) if args.config else {}
    flag_values = {}
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "log_level"):
            flag_values[_key(key)] = _convert(_key(key), value)

    preset = flag_values.get("preset", file_values.get("preset"))
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"Unknown preset {preset!r}; expected one of {sorted(PRESETS)}.")
        values.update(PRESETS[preset])
    values.update(file_values)
    values.update(flag_values)

    if values.pop("million_shots", False):
        values["shots"] = MILLION_SHOTS
    known = {f.name for f in fields(RunConfig)}
    return RunConfig(**{k: v for k, v in values.items() if k in known})


def _custom_hamiltonian(cfg: RunConfig) -> Optional[WeightedPauliSum]:
    if cfg.hamiltonian is None:
        return None
    with open(cfg.hamiltonian) as file:
        return WeightedPauliSum.from_text(file.read())


def _stage_text(path: str, text: str) -> str:
    """Writes `text` next to `path` and returns the temporary file name."""
    handle, tmp = mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(handle, "w") as file:
            file.write(text)
    except BaseException:
        os.remove(tmp)
        raise
    return tmp


def run_scenario(cfg: RunConfig) -> IcfSeries:
    """Runs the configured experiment and writes its table (and QASM program).

    Every estimate and export is computed before any file is touched.

    Raises
    ------
    ValueError
        Any configuration, parameter or capacity error, with the offending limit
    QuadratureError
        If a phase-shift reference integral fails
    OSError
        If an output file cannot be written
    """
    params = cfg.model_params()
    hamiltonian = _custom_hamiltonian(cfg)
    experiment = IcfExperiment(params, shots=cfg.shots, trials=cfg.trials, seed=cfg.seed,
                               backend=Backend(cfg.backend), parts=cfg.parts(), observable=cfg.observable,
                               hamiltonian=hamiltonian, oracles=cfg.oracle, workers=cfg.workers)
    qasm = None
    if cfg.export_qasm:
        # text export only, so the simulation cap does not apply
        ec = assemble(experiment.hamiltonian, params, max_width=None)
        part = Part.IMAGINARY if cfg.part == "imaginary" else Part.REAL
        qasm = circuit_to_qasm(ec.hadamard_circuit(part))

    series = experiment.run(progress_bar=cfg.progress)

    staged = _stage_text(cfg.export_qasm, qasm) if qasm is not None else None
    out = cfg.out
    try:
        if out is None:
            warnings.warn("No output path given; the table is written to a temporary file.")
            handle, out = mkstemp(suffix=f".{cfg.format}")
            os.close(handle)
        emit_table(series, out, cfg.format, config=replace(cfg, out=out).echo(), seed=cfg.seed)
    except BaseException:
        if staged is not None:
            os.remove(staged)
        raise
    logger.info("Wrote %d rows to %s", len(series), out)
    if staged is not None:
        try:
            os.replace(staged, cfg.export_qasm)
        except BaseException:
            os.remove(staged)
            os.remove(out)
            raise
        logger.info("Wrote OpenQASM program to %s", cfg.export_qasm)
    return series


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Returns 0 on success and 2 on a configuration, capacity or I/O error."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        run_scenario(cfg)
    except (ValueError, QuadratureError, OSError) as error:
        logger.error("%s: %s", type(error).__name__, error)
        print(f"error: {error}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
