"""Command-line entry point.

Subcommands: run (single trajectory or noise ensemble), scan (one-parameter
phase map, optionally nested in an outer grid), floquet (quasi-energy gap
statistics), lmg (collective-spin exact vs closed form), fit (main-peak
splitting scaling).  Every invocation writes a meta.json with the full
canonical config, its hash, and library versions; all numeric files embed
the same hash and are written atomically.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .chain import DriveSpec
from .config import (
    COMMANDS,
    ConfigError,
    ExperimentConfig,
    canonical_json,
    config_hash,
    parse_config,
)
from .dynamics import run_noisy_ensemble, run_trajectory
from .evolve import Propagator
from .floquet import fit_pairing_scaling, pairing_gap_table
from .lmg import dicke_omega_1, kicked_beat_frequency, lmg_exact_trajectory, lmg_perturbative_mx
from .output import write_csv, write_json
from .spectral import (
    fit_splitting_scaling,
    fourier_spectrum,
    main_peak_splitting,
    scan_phase_map,
)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config, _flag_overrides(args), command=args.command)
        execute(cfg)
    except ConfigError as exc:
        _emit_error("config", str(exc))
        return 2
    except Exception as exc:  # pipeline failure: machine-readable, nonzero
        _emit_error(type(exc).__name__, str(exc))
        return 1
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kicked-ising",
        description="Stroboscopic dynamics and spectral diagnostics of kicked Ising chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("run", "single trajectory (or noise ensemble) and its spectrum"),
        ("scan", "sweep one of epsilon / j_tau / h_over_j and map the response"),
        ("floquet", "quasi-energy pairing gaps over (epsilon, N) grids"),
        ("lmg", "collective-spin sector: exact kicked evolution vs closed form"),
        ("fit", "main-peak splitting scaling fit over (N, epsilon)"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="RNG seed")
        p.add_argument("--threads", type=int, help="worker processes for per-point scans")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override any config key (repeatable); values parsed as JSON",
        )
    return parser


def _flag_overrides(args: argparse.Namespace) -> dict:
    overrides: dict = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key] = value
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    return overrides


def _emit_error(kind: str, message: str) -> None:
    json.dump({"error": {"type": kind, "message": message}}, sys.stderr)
    sys.stderr.write("\n")


def execute(cfg: ExperimentConfig) -> None:
    """Dispatch a validated config and write its output files."""
    handler = {
        "run": _cmd_run,
        "scan": _cmd_scan,
        "floquet": _cmd_floquet,
        "lmg": _cmd_lmg,
        "fit": _cmd_fit,
    }[cfg.command]
    handler(cfg)
    _write_meta(cfg)


def _out(cfg: ExperimentConfig, name: str) -> str:
    import os

    return os.path.join(cfg.out_dir, name)


def _comments(cfg: ExperimentConfig) -> dict:
    return {"config": config_hash(cfg), "schema_version": cfg.schema_version}


def _write_meta(cfg: ExperimentConfig) -> None:
    import scipy

    write_json(
        _out(cfg, "meta.json"),
        {
            "config": json.loads(canonical_json(cfg)),
            "config_hash": config_hash(cfg),
            "versions": {
                "kicked_ising": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": sys.version.split()[0],
            },
        },
    )


def _prop(cfg: ExperimentConfig) -> Propagator:
    return Propagator(method=cfg.method, tolerance=cfg.tolerance)


def _cmd_run(cfg: ExperimentConfig) -> None:
    h_spec = cfg.hamiltonian_spec()
    drive = cfg.drive_spec()
    comments = _comments(cfg)
    if cfg.noise_bound > 0.0 and cfg.n_realizations > 1:
        ens = run_noisy_ensemble(
            h_spec, drive, cfg.initial_state, _prop(cfg), cfg.n_realizations
        )
        series = ens.mean_series
        write_csv(
            _out(cfg, "mx_realizations.csv"),
            ["realization", "n", "mx"],
            (
                (r, n, ens.realization_series[r, n])
                for r in range(cfg.n_realizations)
                for n in range(cfg.n_periods)
            ),
            comments,
        )
        norm_drift = ens.norm_drift
    else:
        result = run_trajectory(h_spec, drive, cfg.initial_state, _prop(cfg))
        series = result.mx_series
        norm_drift = result.norm_drift
    write_csv(
        _out(cfg, "mx.csv"), ["n", "mx"], enumerate(series.tolist()), comments
    )
    spectrum = fourier_spectrum(series)
    write_csv(
        _out(cfg, "spectrum.csv"),
        ["omega_tau", "amplitude"],
        zip(spectrum.omega_tau.tolist(), spectrum.amplitude.tolist()),
        comments,
    )
    write_json(
        _out(cfg, "trajectory.json"),
        {
            "config_hash": config_hash(cfg),
            "initial_state": cfg.initial_state,
            "norm_drift": norm_drift,
            "mx": series.tolist(),
        },
    )


def _scan_values(cfg: ExperimentConfig) -> np.ndarray:
    assert cfg.grid is not None
    return np.asarray(cfg.grid.values())


def _cmd_scan(cfg: ExperimentConfig) -> None:
    comments = _comments(cfg)
    if cfg.grid_outer is not None:
        _cmd_scan_two_axes(cfg)
        return
    rows = scan_phase_map(
        cfg.hamiltonian_spec(),
        cfg.drive_spec(),
        cfg.grid.param,
        _scan_values(cfg),
        cfg.initial_state,
        _prop(cfg),
        threads=cfg.threads,
    )
    peak_amp = max((r.spectrum.amplitude.max() for r in rows if not r.failed), default=1.0)
    phase_rows = []
    for r in rows:
        if r.failed:
            continue
        for w, a in zip(r.spectrum.omega_tau.tolist(), r.spectrum.amplitude.tolist()):
            phase_rows.append((r.value, w, a, a / peak_amp))
    write_csv(
        _out(cfg, "phase_map.csv"),
        ["param", "omega_tau", "amplitude_raw", "amplitude_maxnorm"],
        phase_rows,
        {**comments, "param": cfg.grid.param},
    )
    write_csv(
        _out(cfg, "kld.csv"),
        ["param", "kld"],
        ((r.value, r.kld) for r in rows),
        {**comments, "param": cfg.grid.param},
    )
    splitting_rows = []
    for r in rows:
        if r.failed:
            continue
        peak = main_peak_splitting(r.spectrum)
        splitting_rows.append(
            (r.value, peak.delta_omega, peak.omega_f, int(peak.prominent))
        )
    write_csv(
        _out(cfg, "splitting.csv"),
        ["param", "delta_omega", "omega_f", "prominent"],
        splitting_rows,
        {**comments, "param": cfg.grid.param},
    )


def _cmd_scan_two_axes(cfg: ExperimentConfig) -> None:
    outer = cfg.grid_outer
    rows_out = []
    for outer_value in outer.values():
        inner_cfg = _apply_outer(cfg, outer.param, outer_value)
        rows = scan_phase_map(
            inner_cfg.hamiltonian_spec(),
            inner_cfg.drive_spec(),
            inner_cfg.grid.param,
            _scan_values(inner_cfg),
            inner_cfg.initial_state,
            _prop(inner_cfg),
            threads=inner_cfg.threads,
        )
        for r in rows:
            rows_out.append((outer_value, r.value, r.kld))
    write_csv(
        _out(cfg, "kld_map.csv"),
        ["param_outer", "param", "kld"],
        rows_out,
        {
            **_comments(cfg),
            "param_outer": outer.param,
            "param": cfg.grid.param,
        },
    )


def _apply_outer(cfg: ExperimentConfig, param: str, value: float) -> ExperimentConfig:
    if param == "epsilon":
        return replace(cfg, epsilon=value)
    if param == "j_tau":
        return replace(cfg, period_tau=value / cfg.coupling)
    if param == "h_over_j":
        return replace(cfg, field=value * cfg.coupling)
    if param == "range_exponent":
        return replace(cfg, range_exponent=value)
    if param == "noise_bound":
        return replace(cfg, noise_bound=value)
    raise ConfigError(f"unsupported outer grid parameter {param!r}")


def _cmd_floquet(cfg: ExperimentConfig) -> None:
    comments = _comments(cfg)
    n_list = list(cfg.n_list) if cfg.n_list else [cfg.n_sites]
    eps_list = list(cfg.epsilon_list) if cfg.epsilon_list else [cfg.epsilon]
    template = cfg.hamiltonian_spec(n_sites=max(n_list))
    table = pairing_gap_table(template, cfg.drive_spec(), n_list, eps_list, _prop(cfg))
    write_csv(
        _out(cfg, "pairing.csv"),
        ["epsilon", "n_sites", "mean_log_delta_0", "mean_log_delta_pi"],
        (
            (r["epsilon"], r["n_sites"], r["mean_log_delta_0"], r["mean_log_delta_pi"])
            for r in table
        ),
        comments,
    )
    if len(n_list) >= 3:
        points = fit_pairing_scaling(n_list, eps_list, table)
        write_csv(
            _out(cfg, "pairing_slopes.csv"),
            ["epsilon", "slope_b0", "slope_bpi", "pi_gaps_at_floor", "dtc_compatible"],
            (
                (p.epsilon, p.slope_b0, p.slope_bpi, int(p.pi_gaps_at_floor), int(p.dtc_compatible))
                for p in points
            ),
            comments,
        )
    if len(n_list) == 1 and len(eps_list) == 1:
        from .evolve import build_floquet_matrix
        from .chain import build_hamiltonian
        from .floquet import floquet_eigensystem

        u = build_floquet_matrix(
            build_hamiltonian(cfg.hamiltonian_spec()), cfg.drive_spec(), _prop(cfg)
        )
        es = floquet_eigensystem(u, cfg.period_tau)
        write_csv(
            _out(cfg, "quasi_energies.csv"),
            ["alpha", "mu", "parity"],
            (
                (a, es.quasi_energies[a], int(es.parities[a]))
                for a in range(es.hilbert_dim)
            ),
            comments,
        )


def _cmd_lmg(cfg: ExperimentConfig) -> None:
    comments = _comments(cfg)
    exact = lmg_exact_trajectory(
        cfg.n_sites, cfg.field, cfg.period_tau, cfg.epsilon, cfg.n_periods
    )
    omega_1 = dicke_omega_1(cfg.n_sites, cfg.field)
    beat = kicked_beat_frequency(cfg.n_sites, cfg.period_tau, cfg.epsilon, cfg.field)
    closed = lmg_perturbative_mx(
        cfg.n_sites, cfg.epsilon, cfg.period_tau, omega_1, cfg.n_periods
    )
    write_csv(_out(cfg, "mx.csv"), ["n", "mx"], enumerate(exact.tolist()), comments)
    write_csv(
        _out(cfg, "mx_closed_form.csv"),
        ["n", "mx"],
        enumerate(closed.tolist()),
        comments,
    )
    spectrum = fourier_spectrum(exact)
    write_csv(
        _out(cfg, "spectrum.csv"),
        ["omega_tau", "amplitude"],
        zip(spectrum.omega_tau.tolist(), spectrum.amplitude.tolist()),
        comments,
    )
    write_json(
        _out(cfg, "lmg.json"),
        {
            "config_hash": config_hash(cfg),
            "omega_1": omega_1,
            "kicked_beat_over_tau": beat / cfg.period_tau,
            "max_closed_form_deviation": float(np.max(np.abs(exact - closed))),
        },
    )


def _cmd_fit(cfg: ExperimentConfig) -> None:
    comments = _comments(cfg)
    eps_list = list(cfg.epsilon_list) if cfg.epsilon_list else [
        0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10, 0.11, 0.12
    ]
    points = []
    for n in cfg.n_list:
        rows = scan_phase_map(
            cfg.hamiltonian_spec(n_sites=n),
            cfg.drive_spec(),
            "epsilon",
            np.asarray(eps_list),
            cfg.initial_state,
            _prop(cfg),
            threads=cfg.threads,
        )
        for r in rows:
            peak = main_peak_splitting(r.spectrum)
            points.append((n, r.value, peak.delta_omega))
    resolution = 2.0 * math.pi / cfg.n_periods
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fit = fit_splitting_scaling(points, resolution=resolution)
    excluded = set((n, e) for n, e, _ in fit.excluded_points)
    write_csv(
        _out(cfg, "splitting.csv"),
        ["n_sites", "epsilon", "delta_omega", "included"],
        ((n, e, d, int((n, e) not in excluded)) for n, e, d in points),
        comments,
    )
    write_json(
        _out(cfg, "fit.json"),
        {
            "config_hash": config_hash(cfg),
            "m_a": fit.m_a,
            "m_b": fit.m_b,
            "epsilon_star": fit.epsilon_star,
            "r_squared_a": fit.r_squared_a,
            "r_squared_b": fit.r_squared_b,
            "per_n": [
                {
                    "n_sites": int(n),
                    "a": float(a),
                    "b": float(b),
                    "r_squared": float(r2),
                }
                for n, a, b, r2 in zip(
                    fit.n_values, fit.a_slopes, fit.b_intercepts, fit.r_squared
                )
            ],
            "points": [
                {
                    "n_sites": int(n),
                    "epsilon": float(e),
                    "delta_omega": float(d),
                    "included": bool((n, e) not in excluded),
                }
                for n, e, d in points
            ],
        },
    )


if __name__ == "__main__":
    sys.exit(main())
