import json
import math
import os

import numpy as np
import pytest

from kicked_ising.cli import main
from kicked_ising.config import (
    ConfigError,
    canonical_json,
    config_hash,
    parse_config,
)
from kicked_ising.output import format_number, write_csv


def write_config(tmp_path, obj, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_empty_config_defaults(tmp_path):
    cfg = parse_config(write_config(tmp_path, {"command": "run"}))
    assert cfg.n_sites == 10
    assert cfg.coupling * cfg.period_tau == pytest.approx(0.6)
    assert cfg.epsilon == 0.08
    assert cfg.field == 0.0
    assert cfg.n_periods == 1000
    assert math.isinf(cfg.range_exponent)


def test_config_round_trip_is_byte_identical(tmp_path):
    cfg = parse_config(
        write_config(
            tmp_path,
            {
                "command": "scan",
                "n_sites": 14,
                "grid": {"param": "epsilon", "start": 0.0, "stop": 0.5, "steps": 51},
                "range_exponent": "inf",
                "seed": 7,
            },
        )
    )
    emitted = canonical_json(cfg)
    reparsed = parse_config(write_config(tmp_path, json.loads(emitted), "round.json"))
    assert canonical_json(reparsed) == emitted
    assert config_hash(reparsed) == config_hash(cfg)


def test_unknown_keys_fatal(tmp_path):
    with pytest.raises(ConfigError, match="unknown config keys"):
        parse_config(write_config(tmp_path, {"command": "run", "tipo": 1}))


def test_out_of_range_values_name_the_constraint(tmp_path):
    with pytest.raises(ConfigError, match="epsilon"):
        parse_config(write_config(tmp_path, {"command": "run", "epsilon": 0.7}))
    with pytest.raises(ConfigError, match="n_periods"):
        parse_config(write_config(tmp_path, {"command": "run", "n_periods": 4}))


def test_dense_cap_rejected_for_floquet(tmp_path):
    with pytest.raises(ConfigError, match="cap"):
        parse_config(write_config(tmp_path, {"command": "floquet", "n_sites": 40}))
    # but large sector sizes are fine for the collective-spin command
    cfg = parse_config(write_config(tmp_path, {"command": "lmg", "n_sites": 50}))
    assert cfg.n_sites == 50


def test_scan_requires_grid(tmp_path):
    with pytest.raises(ConfigError, match="grid"):
        parse_config(write_config(tmp_path, {"command": "scan"}))


def test_flags_override_file(tmp_path):
    path = write_config(tmp_path, {"command": "run", "seed": 1, "n_periods": 64})
    cfg = parse_config(path, {"seed": 9}, command="run")
    assert cfg.seed == 9
    assert cfg.n_periods == 64


def test_format_number_fixed_digits():
    assert format_number(1.0) == "1"
    assert format_number(-0.0) == "0"
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(3) == "3"
    # round-trips doubles exactly
    for x in (math.pi, 1e-17, -2.5e300):
        assert float(format_number(x)) == x


def test_write_csv_atomic_and_commented(tmp_path):
    path = tmp_path / "sub" / "data.csv"
    write_csv(str(path), ["a", "b"], [(1, 0.5)], {"config": "deadbeef"})
    text = path.read_text()
    assert text.startswith("# config=deadbeef\n")
    assert "a,b\n" in text
    assert not [p for p in os.listdir(tmp_path / "sub") if p.startswith(".tmp")]


def run_cli(args):
    return main(args)


def test_cli_run_alternating_series(tmp_path):
    out = str(tmp_path / "out")
    rc = run_cli(
        [
            "run",
            "--out",
            out,
            "--set",
            "epsilon=0.0",
            "--set",
            "n_sites=4",
            "--set",
            "n_periods=64",
        ]
    )
    assert rc == 0
    lines = [
        line
        for line in (tmp_path / "out" / "mx.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert lines[0] == "n,mx"
    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert np.allclose(values, [(-1.0) ** n for n in range(64)], atol=1e-12)
    meta = json.loads((tmp_path / "out" / "meta.json").read_text())
    assert meta["config"]["epsilon"] == 0.0
    assert len(meta["config_hash"]) == 64
    spectrum = (tmp_path / "out" / "spectrum.csv").read_text()
    assert spectrum.splitlines()[0].startswith("# config=" + meta["config_hash"])


def test_cli_determinism_byte_identical(tmp_path):
    args = lambda out: [
        "run",
        "--out",
        out,
        "--seed",
        "5",
        "--set",
        "noise_bound=0.05",
        "--set",
        "epsilon=0.0",
        "--set",
        "n_sites=4",
        "--set",
        "n_periods=64",
        "--set",
        "n_realizations=3",
    ]
    assert run_cli(args(str(tmp_path / "a"))) == 0
    assert run_cli(args(str(tmp_path / "b"))) == 0
    for name in ("mx.csv", "spectrum.csv", "mx_realizations.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    meta_a = json.loads((tmp_path / "a" / "meta.json").read_text())
    meta_b = json.loads((tmp_path / "b" / "meta.json").read_text())
    assert meta_a["config_hash"] == meta_b["config_hash"]  # destination not hashed


def test_cli_scan_writes_phase_map_and_kld(tmp_path):
    out = str(tmp_path / "scan")
    cfg = {
        "command": "scan",
        "n_sites": 6,
        "n_periods": 128,
        "grid": {"param": "epsilon", "start": 0.0, "stop": 0.5, "steps": 3},
        "out_dir": out,
    }
    path = tmp_path / "scan.json"
    path.write_text(json.dumps(cfg))
    assert run_cli(["scan", "--config", str(path)]) == 0
    kld_lines = [
        line
        for line in (tmp_path / "scan" / "kld.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert kld_lines[0] == "param,kld"
    assert len(kld_lines) == 4
    first = kld_lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) < 1e-6  # ideal period-2 response
    pm = (tmp_path / "scan" / "phase_map.csv").read_text().splitlines()
    header = next(line for line in pm if not line.startswith("#"))
    assert header == "param,omega_tau,amplitude_raw,amplitude_maxnorm"
    assert (tmp_path / "scan" / "splitting.csv").exists()


def test_cli_scan_two_axes_kld_map(tmp_path):
    out = str(tmp_path / "map")
    cfg = {
        "command": "scan",
        "n_sites": 4,
        "n_periods": 64,
        "grid": {"param": "h_over_j", "start": 0.0, "stop": 0.4, "steps": 2},
        "grid_outer": {"param": "range_exponent", "start": 1.5, "stop": 3.0, "steps": 2},
        "out_dir": out,
    }
    path = tmp_path / "map.json"
    path.write_text(json.dumps(cfg))
    assert run_cli(["scan", "--config", str(path)]) == 0
    lines = [
        line
        for line in (tmp_path / "map" / "kld_map.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert lines[0] == "param_outer,param,kld"
    assert len(lines) == 5


def test_cli_floquet_outputs(tmp_path):
    out = str(tmp_path / "fl")
    rc = run_cli(
        [
            "floquet",
            "--out",
            out,
            "--set",
            "n_list=[3,4,5]",
            "--set",
            "epsilon_list=[0.0,0.1]",
            "--set",
            "field=0.32",
        ]
    )
    assert rc == 0
    pairing = [
        line
        for line in (tmp_path / "fl" / "pairing.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert pairing[0] == "epsilon,n_sites,mean_log_delta_0,mean_log_delta_pi"
    assert len(pairing) == 7
    slopes = (tmp_path / "fl" / "pairing_slopes.csv").read_text().splitlines()
    assert any("slope_b0" in line for line in slopes)


def test_cli_floquet_single_point_dumps_spectrum(tmp_path):
    out = str(tmp_path / "fl1")
    rc = run_cli(
        ["floquet", "--out", out, "--set", "n_sites=3", "--set", "epsilon=0.05"]
    )
    assert rc == 0
    lines = [
        line
        for line in (tmp_path / "fl1" / "quasi_energies.csv").read_text().splitlines()
        if not line.startswith("#")
    ]
    assert lines[0] == "alpha,mu,parity"
    assert len(lines) == 9


def test_cli_lmg_outputs(tmp_path):
    out = str(tmp_path / "lmg")
    rc = run_cli(
        [
            "lmg",
            "--out",
            out,
            "--set",
            "n_sites=30",
            "--set",
            "epsilon=0.01",
            "--set",
            "n_periods=256",
        ]
    )
    assert rc == 0
    info = json.loads((tmp_path / "lmg" / "lmg.json").read_text())
    assert info["omega_1"] == pytest.approx((30 - 1) / 30)
    assert info["max_closed_form_deviation"] < 0.05
    assert (tmp_path / "lmg" / "mx_closed_form.csv").exists()


def test_cli_fit_pipeline(tmp_path):
    out = str(tmp_path / "fit")
    rc = run_cli(
        [
            "fit",
            "--out",
            out,
            "--set",
            "n_list=[2,3,4]",
            "--set",
            "epsilon_list=[0.08,0.10,0.12,0.14]",
            "--set",
            "n_periods=20000",
        ]
    )
    assert rc == 0
    fit = json.loads((tmp_path / "fit" / "fit.json").read_text())
    assert set(fit) >= {"m_a", "m_b", "epsilon_star", "per_n", "points"}
    assert len(fit["per_n"]) == 3
    assert fit["m_a"] > 0
    assert 0 < fit["epsilon_star"] < 0.5
    assert (tmp_path / "fit" / "splitting.csv").exists()


def test_cli_error_is_machine_readable(tmp_path, capsys):
    rc = run_cli(["run", "--set", "epsilon=0.9", "--out", str(tmp_path / "x")])
    assert rc == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == "config"
    assert "epsilon" in err["error"]["message"]
    assert not (tmp_path / "x").exists()  # nothing half-written
