"""Run configuration: parsing, validation, canonical form, and hashing.

A config is a flat JSON object.  Parsing fills defaults, rejects unknown
keys, and validates ranges; emitting produces a canonical byte form
(sorted keys, fixed separators, "inf" spelled as a string) so that
file -> parse -> emit round-trips byte-identically and the SHA-256 of the
canonical form can ride along with every output file as provenance.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields, replace

from .chain import DENSE_CAP_SITES, MAX_SITES, DriveSpec, HamiltonianSpec
from .dynamics import INITIAL_STATE_TAGS

SCHEMA_VERSION = 1
COMMANDS = ("run", "scan", "floquet", "lmg", "fit")


@dataclass(frozen=True)
class GridSpec:
    param: str
    start: float
    stop: float
    steps: int

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        width = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * width for i in range(self.steps)]


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    schema_version: int = SCHEMA_VERSION
    n_sites: int = 10
    coupling: float = 1.0
    field: float = 0.0
    range_exponent: float = math.inf
    period_tau: float = 0.6
    epsilon: float = 0.08
    noise_bound: float = 0.0
    n_periods: int = 1000
    n_realizations: int = 1
    initial_state: str = "product_right"
    method: str = "auto"
    tolerance: float = 1e-10
    seed: int = 0
    threads: int = 1
    out_dir: str = "out"
    grid: GridSpec | None = None
    grid_outer: GridSpec | None = None
    n_list: tuple[int, ...] | None = None
    epsilon_list: tuple[float, ...] | None = None

    def hamiltonian_spec(self, n_sites: int | None = None) -> HamiltonianSpec:
        return HamiltonianSpec(
            n_sites=n_sites if n_sites is not None else self.n_sites,
            coupling=self.coupling,
            field=self.field,
            range_exponent=self.range_exponent,
        )

    def drive_spec(self) -> DriveSpec:
        return DriveSpec(
            period_tau=self.period_tau,
            epsilon=self.epsilon,
            noise_bound=self.noise_bound,
            n_periods=self.n_periods,
            rng_seed=self.seed,
        )


class ConfigError(ValueError):
    """Malformed or out-of-range configuration."""


_GRID_KEYS = {"param", "start", "stop", "steps"}


def parse_config(
    path: str | None = None,
    overrides: dict | None = None,
    command: str | None = None,
) -> ExperimentConfig:
    """Load a config file, apply overrides (flags beat file), validate."""
    raw: dict = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    if command is not None:
        raw["command"] = command
    return _validate(raw)


def _validate(raw: dict) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    data = dict(raw)
    if "command" not in data:
        raise ConfigError("config needs a 'command' (one of %s)" % (COMMANDS,))
    for key in ("grid", "grid_outer"):
        if data.get(key) is not None:
            data[key] = _parse_grid(data[key], key)
    if data.get("range_exponent") is not None:
        data["range_exponent"] = _parse_inf(data["range_exponent"])
    if data.get("n_list") is not None:
        data["n_list"] = tuple(int(n) for n in data["n_list"])
    if data.get("epsilon_list") is not None:
        data["epsilon_list"] = tuple(float(e) for e in data["epsilon_list"])
    try:
        cfg = ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    _check_ranges(cfg)
    return cfg


def _parse_grid(obj, key: str) -> GridSpec:
    if not isinstance(obj, dict) or set(obj) - _GRID_KEYS:
        raise ConfigError(f"{key} must be an object with keys {sorted(_GRID_KEYS)}")
    try:
        grid = GridSpec(
            param=str(obj["param"]),
            start=float(obj["start"]),
            stop=float(obj["stop"]),
            steps=int(obj["steps"]),
        )
    except KeyError as exc:
        raise ConfigError(f"{key} is missing {exc}") from exc
    if grid.steps < 1:
        raise ConfigError(f"{key}.steps must be >= 1")
    return grid


def _parse_inf(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        raise ConfigError(f"range_exponent string must be 'inf', got {value!r}")
    return float(value)


def _check_ranges(cfg: ExperimentConfig) -> None:
    def fail(msg: str) -> None:
        raise ConfigError(msg)

    if cfg.command not in COMMANDS:
        fail(f"command must be one of {COMMANDS}, got {cfg.command!r}")
    if cfg.schema_version != SCHEMA_VERSION:
        fail(f"schema_version must be {SCHEMA_VERSION}")
    if cfg.command == "lmg":
        # the collective-spin sector is (N+1)-dimensional, not 2^N
        from .lmg import MAX_SECTOR_SITES

        if not 1 <= cfg.n_sites <= MAX_SECTOR_SITES:
            fail(f"n_sites must be in [1, {MAX_SECTOR_SITES}] for the sector model")
    elif not 1 <= cfg.n_sites <= MAX_SITES:
        fail(f"n_sites must be in [1, {MAX_SITES}] (statevector cap)")
    if cfg.command == "floquet":
        sizes = cfg.n_list if cfg.n_list else (cfg.n_sites,)
        for n in sizes:
            if n > DENSE_CAP_SITES:
                fail(
                    f"command 'floquet' diagonalizes dense 2^N x 2^N matrices; "
                    f"n_sites = {n} exceeds the cap of {DENSE_CAP_SITES}"
                )
    if cfg.coupling < 0:
        fail("coupling must be >= 0")
    if not cfg.range_exponent > 0:
        fail("range_exponent must be > 0 (or 'inf')")
    if cfg.period_tau <= 0:
        fail("period_tau must be > 0")
    if not 0.0 <= cfg.epsilon <= 0.5:
        fail("epsilon must be in [0, 0.5]")
    if not 0.0 <= cfg.noise_bound <= 0.5:
        fail("noise_bound must be in [0, 0.5]")
    if cfg.n_periods < 16:
        fail("n_periods must be >= 16 (spectral resolution)")
    if cfg.n_realizations < 1:
        fail("n_realizations must be >= 1")
    if cfg.initial_state not in INITIAL_STATE_TAGS:
        fail(f"initial_state must be one of {INITIAL_STATE_TAGS}")
    if cfg.method not in ("auto", "exact_eigen", "krylov"):
        fail("method must be auto, exact_eigen, or krylov")
    if not 0 < cfg.tolerance < 1e-2:
        fail("tolerance must be in (0, 1e-2)")
    if cfg.threads < 1:
        fail("threads must be >= 1")
    if cfg.command == "scan" and cfg.grid is None:
        fail("command 'scan' needs a 'grid'")
    if cfg.command == "fit" and (cfg.n_list is None or len(cfg.n_list) < 3):
        fail("command 'fit' needs an 'n_list' with at least 3 sizes")


def canonical_json(cfg: ExperimentConfig) -> str:
    """Canonical byte form: sorted keys, two-space indent, 'inf' as string."""
    data = asdict(cfg)
    if math.isinf(data["range_exponent"]):
        data["range_exponent"] = "inf"
    for key in ("n_list", "epsilon_list"):
        if data[key] is not None:
            data[key] = list(data[key])
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def config_hash(cfg: ExperimentConfig) -> str:
    """Hash of the physics content: where results go and how many workers
    ran does not change what was computed."""
    normalized = replace(cfg, out_dir="", threads=1)
    return hashlib.sha256(canonical_json(normalized).encode("utf-8")).hexdigest()


def default_threads() -> int:
    return os.cpu_count() or 1
