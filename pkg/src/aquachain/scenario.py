"""Scenario files: YAML in, validated simulation inputs out.

A scenario has up to four sections -- network, energy, sim, output --
and only network.n and network.area are required. Everything else falls back
to the library default, and the eligibility threshold defaults to twice
the cost of a full-range hop so a node must survive roughly two more
relays to qualify. Unknown keys are hard errors: a typo that silently
reverts a parameter to its default would poison whole result sets.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import yaml

from .energy import EnergyParams, default_threshold
from .engine import MODES
from .errors import ConfigurationError
from .model import NetworkConfig, Position

_NETWORK_KEYS = {
    "n",
    "area",
    "bs_position",
    "comm_range",
    "initial_energy",
    "drift_sigma",
    "localization_interval",
    "adaptive_energy",
    "seed",
    "congestion_init",
    "failure_prob_init",
}
_ENERGY_KEYS = {"e_elec", "e_amp", "alpha", "packet_bits", "threshold"}
_SIM_KEYS = {"mode", "max_rounds", "seeds", "congestion_delta", "congestion_decay"}
_OUTPUT_KEYS = {"rounds_csv", "summary_json", "trace_json"}


@dataclass(frozen=True, slots=True)
class OutputPaths:
    """Artifact file names, resolved relative to the chosen output directory."""

    rounds_csv: str = "rounds.csv"
    summary_json: str = "summary.json"
    trace_json: str = "trace.json"


@dataclass(frozen=True, slots=True)
class Scenario:
    """A fully validated scenario ready to run."""

    config: NetworkConfig
    params: EnergyParams
    mode: str
    max_rounds: int
    seeds: tuple[int, ...]
    congestion_delta: float
    congestion_decay: float
    output: OutputPaths

    def config_for_seed(self, seed: int) -> NetworkConfig:
        return dataclasses.replace(self.config, rng_seed=seed)


def _check_keys(section: dict, allowed: set[str], prefix: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigurationError(f"unknown setting {prefix}.{key}")


def _num(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"{path} must be a number (got {value!r})")
    return float(value)


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"{path} must be an integer (got {value!r})")
    return value


def _num_pair(value, path: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigurationError(f"{path} must be a list of two numbers (got {value!r})")
    return (_num(value[0], f"{path}[0]"), _num(value[1], f"{path}[1]"))


def _parse_network(section: dict) -> NetworkConfig:
    _check_keys(section, _NETWORK_KEYS, "network")
    for required in ("n", "area"):
        if required not in section:
            raise ConfigurationError(f"network.{required} is required")

    area = section["area"]
    if not isinstance(area, (list, tuple)) or len(area) not in (2, 3):
        raise ConfigurationError(
            f"network.area must be two or three extents (got {area!r})"
        )
    extents = [_num(v, f"network.area[{i}]") for i, v in enumerate(area)]
    if len(extents) == 2:
        extents.append(0.0)  # planar deployment

    kwargs: dict = {"n": _int(section["n"], "network.n"), "area": tuple(extents)}
    if "bs_position" in section:
        bs = section["bs_position"]
        if not isinstance(bs, (list, tuple)) or len(bs) != 3:
            raise ConfigurationError(
                f"network.bs_position must be three coordinates (got {bs!r})"
            )
        kwargs["bs_position"] = Position(
            *(_num(v, f"network.bs_position[{i}]") for i, v in enumerate(bs))
        )
    for key in ("comm_range", "initial_energy", "drift_sigma", "adaptive_energy"):
        if key in section:
            kwargs[key] = _num(section[key], f"network.{key}")
    if "localization_interval" in section:
        kwargs["localization_interval"] = _int(
            section["localization_interval"], "network.localization_interval"
        )
    if "seed" in section:
        kwargs["rng_seed"] = _int(section["seed"], "network.seed")
    for key in ("congestion_init", "failure_prob_init"):
        if key in section:
            kwargs[key] = _num_pair(section[key], f"network.{key}")

    config = NetworkConfig(**kwargs)
    config.validate(prefix="network.")
    return config


def _parse_energy(section: dict, comm_range: float) -> EnergyParams:
    _check_keys(section, _ENERGY_KEYS, "energy")
    kwargs: dict = {}
    for key in ("e_elec", "e_amp", "alpha", "threshold"):
        if key in section:
            kwargs[key] = _num(section[key], f"energy.{key}")
    if "packet_bits" in section:
        kwargs["packet_bits"] = _int(section["packet_bits"], "energy.packet_bits")

    if "threshold" not in kwargs:
        base = EnergyParams(**kwargs)
        base.validate(prefix="energy.")
        kwargs["threshold"] = default_threshold(base, comm_range)
    params = EnergyParams(**kwargs)
    params.validate(prefix="energy.")
    return params


def load_scenario(path) -> Scenario:
    """Read a YAML scenario file and validate every setting.

    Raises ConfigurationError for anything malformed, naming the offending
    key by its dotted path.
    """
    with open(path) as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f"scenario is not valid YAML: {exc}") from exc
    return scenario_from_dict(raw)


def scenario_from_dict(raw) -> Scenario:
    """Build a Scenario from already-parsed mapping data."""
    if not isinstance(raw, dict):
        raise ConfigurationError("scenario must be a mapping of sections")
    _check_keys(raw, {"network", "energy", "sim", "output"}, "scenario")
    if "network" not in raw:
        raise ConfigurationError("scenario.network section is required")
    for name in ("network", "energy", "sim", "output"):
        if name in raw and not isinstance(raw[name], dict):
            raise ConfigurationError(f"scenario.{name} must be a mapping")

    config = _parse_network(raw["network"])
    params = _parse_energy(raw.get("energy", {}), config.comm_range)

    sim = raw.get("sim", {})
    _check_keys(sim, _SIM_KEYS, "sim")
    mode = sim.get("mode", "parametric")
    if mode not in MODES:
        raise ConfigurationError(f"sim.mode must be one of {MODES} (got {mode!r})")
    max_rounds = _int(sim.get("max_rounds", 1000), "sim.max_rounds")
    if max_rounds < 1:
        raise ConfigurationError(f"sim.max_rounds must be >= 1 (got {max_rounds})")
    if "seeds" in sim:
        rawseeds = sim["seeds"]
        if not isinstance(rawseeds, (list, tuple)) or not rawseeds:
            raise ConfigurationError(
                f"sim.seeds must be a non-empty list of integers (got {rawseeds!r})"
            )
        seeds = tuple(_int(s, f"sim.seeds[{i}]") for i, s in enumerate(rawseeds))
    else:
        seeds = (config.rng_seed,)
    delta = _num(sim.get("congestion_delta", 0.1), "sim.congestion_delta")
    decay = _num(sim.get("congestion_decay", 0.9), "sim.congestion_decay")
    if delta < 0:
        raise ConfigurationError(f"sim.congestion_delta must be >= 0 (got {delta})")
    if not 0.0 <= decay <= 1.0:
        raise ConfigurationError(f"sim.congestion_decay must be in [0, 1] (got {decay})")

    out_section = raw.get("output", {})
    _check_keys(out_section, _OUTPUT_KEYS, "output")
    out_kwargs = {}
    for key in _OUTPUT_KEYS:
        if key in out_section:
            value = out_section[key]
            if not isinstance(value, str) or not value:
                raise ConfigurationError(
                    f"output.{key} must be a non-empty file name (got {value!r})"
                )
            out_kwargs[key] = value
    output = OutputPaths(**out_kwargs)

    return Scenario(
        config=config,
        params=params,
        mode=mode,
        max_rounds=max_rounds,
        seeds=seeds,
        congestion_delta=delta,
        congestion_decay=decay,
        output=output,
    )
