import json
import os
import tempfile

import pandas as pd
import pytest

from icf_series import COLUMNS
from run_icf import (MILLION_SHOTS, PRESETS, ConfigError, RunConfig, build_parser, main, parse_config_text,
                     resolve_config, run_scenario)


def _resolve(argv, environ=None):
    return resolve_config(build_parser().parse_args(argv), environ or {})


def test_fig4_run(tmp_path):
    out = tmp_path / "fig4.csv"
    status = main(["--preset", "fig4", "--shots", "2000", "--trials", "5", "--seed", "3", "--out", str(out)])
    assert status == 0
    frame = pd.read_csv(out)
    assert tuple(frame.columns) == COLUMNS
    assert len(frame) == 16
    assert frame.loc[0, "mean_re"] == 0 and frame.loc[0, "se_re"] == 0
    assert frame.loc[5, "exact_re"] == pytest.approx(-0.4164, abs=1e-4)
    assert (frame["exact_im"] == 0).all()
    assert frame["mean_im"].isna().all()


def test_output_is_byte_identical(tmp_path):
    argv = ["--preset", "fig4", "--steps", "3", "--shots", "500", "--trials", "3", "--seed", "11"]
    assert main(argv + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(argv + ["--out", str(tmp_path / "a_again.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "a_again.csv").read_bytes()


def test_fig8_json(tmp_path):
    out = tmp_path / "fig8.json"
    status = main(["--preset", "fig8", "--steps", "2", "--shots", "500", "--trials", "3", "--seed", "2",
                   "--format", "json", "--out", str(out)])
    assert status == 0
    document = json.loads(out.read_text())
    assert document["seed"] == 2
    assert document["config"]["scenario"] == "non-hermitian-real-time"
    assert len(document["rows"]) == 3
    assert document["rows"][2]["mean_im"] is not None
    assert document["rows"][2]["analytic_re"] is None


def test_qasm_export(tmp_path):
    qasm = tmp_path / "circuit.qasm"
    status = main(["--preset", "fig4", "--steps", "2", "--backend", "shot-free", "--out", str(tmp_path / "t.csv"),
                   "--export-qasm", str(qasm)])
    assert status == 0
    assert qasm.read_text().startswith("OPENQASM 2.0;")


def test_qasm_export_above_simulation_cap(tmp_path):
    qasm = tmp_path / "fig6.qasm"
    status = main(["--preset", "fig6", "--backend", "shot-free", "--out", str(tmp_path / "fig6.csv"),
                   "--export-qasm", str(qasm)])
    assert status == 0
    assert "qreg q[33];" in qasm.read_text()
    assert (tmp_path / "fig6.csv").exists()


def test_failed_qasm_export_leaves_no_table(tmp_path):
    status = main(["--preset", "fig4", "--steps", "1", "--backend", "shot-free", "--out", str(tmp_path / "t.csv"),
                   "--export-qasm", str(tmp_path / "missing" / "c.qasm")])
    assert status == 2
    assert os.listdir(tmp_path) == []


def test_missing_seed_writes_nothing(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["--preset", "fig4", "--out", str(out)]) == 2
    assert not out.exists()


def test_capacity_error_writes_nothing(tmp_path):
    out = tmp_path / "x.csv"
    status = main(["--preset", "fig6", "--backend", "faithful", "--shots", "10", "--trials", "2", "--seed", "1",
                   "--out", str(out)])
    assert status == 2
    assert not out.exists()


def test_invalid_parameters_exit_with_error(tmp_path):
    assert main(["--spacing", "-1", "--backend", "shot-free", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["--oracle", "exact,trotter", "--backend", "shot-free", "--out", str(tmp_path / "x.csv")]) == 2
    assert os.listdir(tmp_path) == []


def test_presets():
    assert PRESETS["fig4"]["spacing"] == 4.0
    assert PRESETS["fig6"]["dt"] == 0.1
    assert PRESETS["fig8"]["scenario"] == "non-hermitian-real-time"
    cfg = _resolve(["--preset", "fig8", "--seed", "1"])
    assert cfg.shots == 100_000
    assert _resolve(["--preset", "fig8", "--seed", "1", "--million-shots"]).shots == MILLION_SHOTS


def test_precedence(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("# a run\npreset = fig6\nsteps = 4\ntrials=7\nseed = 5\n")
    cfg = _resolve(["--config", str(config), "--steps", "2"])
    assert cfg.gamma == 2
    assert cfg.dt == 0.1
    assert cfg.trials == 7
    assert cfg.steps == 2
    assert cfg.seed == 5


def test_worker_count_from_environment():
    assert _resolve(["--seed", "1"], {"ICF_WORKERS": "4"}).workers == 4
    assert _resolve(["--seed", "1", "--workers", "2"], {"ICF_WORKERS": "4"}).workers == 2


def test_config_text():
    values = parse_config_text("export-qasm = out.qasm\noracle = exact, analytic\nprogress = yes\n")
    assert values == {"export_qasm": "out.qasm", "oracle": ("exact", "analytic"), "progress": True}
    assert parse_config_text("oracle = none")["oracle"] == ()
    with pytest.raises(ConfigError):
        parse_config_text("steps 3")
    with pytest.raises(ConfigError):
        parse_config_text("colour = blue")
    with pytest.raises(ConfigError):
        parse_config_text("steps = three")


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(seed=None)
    with pytest.raises(ConfigError):
        RunConfig(seed=1, backend="quantum")
    with pytest.raises(ConfigError):
        RunConfig(seed=1, format="xml")
    with pytest.raises(ConfigError):
        RunConfig(seed=1, shots=0)
    cfg = RunConfig(backend="shot-free")
    assert cfg.model_params().qubits == 1
    assert cfg.echo()["oracle"] == ["exact", "analytic"]


def test_custom_hamiltonian_run(tmp_path):
    terms = tmp_path / "h.txt"
    terms.write_text("0.28125 0.0 IX\n0.28125 0.0 XX\n0.0 0.375 ZZ\n-0.5625 -0.375 II\n")
    out = tmp_path / "custom.csv"
    status = main(["--scenario", "non-hermitian-real-time", "--gamma", "2", "--steps", "2", "--backend",
                   "shot-free", "--hamiltonian", str(terms), "--oracle", "trotter", "--out", str(out)])
    assert status == 0
    frame = pd.read_csv(out)
    assert frame.loc[0, "mean_re"] == 4
    assert frame["mean_re"].to_numpy() == pytest.approx(frame["exact_re"].to_numpy(), abs=1e-9)


def test_missing_output_path_warns(tmp_path, monkeypatch):
    monkeypatch.setattr(tempfile, "tempdir", str(tmp_path))
    with pytest.warns(UserWarning):
        assert main(["--preset", "fig4", "--steps", "1", "--backend", "shot-free"]) == 0


@pytest.mark.slow
def test_fig4_preset_full(tmp_path):
    out = tmp_path / "fig4.csv"
    assert main(["--preset", "fig4", "--seed", "2024", "--out", str(out)]) == 0
    frame = pd.read_csv(out).iloc[1:11]
    assert ((frame["mean_re"] - frame["exact_re"]).abs() <= 2 * frame["se_re"]).mean() >= 0.8


def test_run_scenario_returns_series(tmp_path):
    out = tmp_path / "series.json"
    cfg = RunConfig(gamma=2, spacing=4.0 / 3.0, dt=0.1, steps=2, backend="shot-free", oracle=("trotter",),
                    format="json", out=str(out))
    series = run_scenario(cfg)
    assert len(series) == 3
    assert json.loads(out.read_text())["config"]["gamma"] == 2
    frame = series.to_frame()
    assert frame["mean_re"].to_numpy() == pytest.approx(frame["exact_re"].to_numpy(), abs=1e-9)
