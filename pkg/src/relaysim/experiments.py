"""Scenario configuration, experiment orchestration and result emission.

A scenario lives in a TOML file with five flat sections (system, topology,
traffic, experiment, flags); the schema is strict and unknown keys are fatal.
Three presets ship with the package: ``fig3a`` (450 m, R=3, relay-count
sweep), ``fig3b`` (1200 m, R=1, relay-count sweep, negligible direct link)
and ``fig4`` (450 m, R=3, 8 relays, traffic-split sweep).
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from importlib import resources

from .channel import (
    LinkStatistics,
    SystemParams,
    Topology,
    build_link_statistics,
    general_snr,
    sample_shadowing,
)
from .energy import TrafficProfile
from .montecarlo import (
    SCHEMES,
    STREAM_ENERGY,
    STREAM_SHADOW,
    block_rng,
    run_energy_mc,
)
from .outage import outage_sweep

EXPERIMENT_KINDS = ("energy-vs-relays", "energy-vs-zeta", "outage-sweep", "dmt-check")
PRESETS = ("fig3a", "fig3b", "fig4")

CSV_HEADER = (
    "scheme,n_relays,zeta,rho_db,trials,energy_total_j_per_bit,"
    "energy_ms_j_per_bit,energy_relay_j_per_bit,energy_bs_j_per_bit,"
    "ci95_energy,outage_rate,ci95_outage,mean_gamma_size,master_seed"
)
CSV_FIELDS = CSV_HEADER.split(",")


class ConfigError(ValueError):
    """Scenario configuration is missing, malformed or inconsistent."""


@dataclass(frozen=True)
class TopologySpec:
    """One of three ways to pin the link geometry.

    mode 'distance'  MS and BS a given distance apart, relays placed uniformly
                     in the disc spanned by them, from a dedicated seed.
    mode 'explicit'  node coordinates given outright.
    mode 'rates'     per-link exponential rates given directly (normalized
                     studies), bypassing geometry.
    """

    mode: str
    ms_bs_distance_m: float | None = None
    n_relays: int | None = None
    placement_seed: int = 714025
    ms_position: tuple[float, float] | None = None
    bs_position: tuple[float, float] | None = None
    relay_positions: tuple[tuple[float, float], ...] | None = None
    lambda_direct: float | None = None
    lambda_ms_relay: tuple[float, ...] | None = None
    lambda_relay_bs: tuple[float, ...] | None = None

    def pool_size(self) -> int | None:
        if self.mode == "distance":
            return self.n_relays
        if self.mode == "explicit":
            return len(self.relay_positions)
        return len(self.lambda_ms_relay) if self.lambda_ms_relay is not None else self.n_relays


@dataclass(frozen=True)
class Flags:
    p0_cap: bool = False
    baseline_set: str = "sigma"
    outage_rule: str = "snr-max"
    hard_zero_direct: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    system: SystemParams
    topology: TopologySpec
    zeta: float
    l_total_bits: float
    weight_ms: float
    weight_relay: float
    weight_bs: float
    trials: int = 100_000
    master_seed: int = 1
    workers: int = 1
    relay_counts: tuple[int, ...] | None = None
    zeta_values: tuple[float, ...] | None = None
    rho_db_values: tuple[float, ...] | None = None
    flags: Flags = field(default_factory=Flags)

    def profile(self, zeta: float | None = None) -> TrafficProfile:
        return TrafficProfile(
            zeta=self.zeta if zeta is None else zeta,
            l_total_bits=self.l_total_bits,
            weight_ms=self.weight_ms,
            weight_relay=self.weight_relay,
            weight_bs=self.weight_bs,
        )


@dataclass(frozen=True)
class ResultRow:
    """One emitted line: a (grid point, scheme) aggregate.

    Energy fields are None for outage-style experiments, where only the
    outage statistics are meaningful.
    """

    scheme: str
    n_relays: int
    zeta: float
    rho_db: float | None
    trials: int
    energy_total_j_per_bit: float | None
    energy_ms_j_per_bit: float | None
    energy_relay_j_per_bit: float | None
    energy_bs_j_per_bit: float | None
    ci95_energy: float | None
    outage_rate: float
    ci95_outage: float
    mean_gamma_size: float
    master_seed: int


# ---------------------------------------------------------------------------
# config parsing


def _type_name(t) -> str:
    return {float: "number", int: "integer", bool: "boolean", str: "string"}.get(
        t, t.__name__
    )


def _coerce(section: str, key: str, value, expected):
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key '{section}.{key}' must be a number")
        return float(value)
    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key '{section}.{key}' must be an integer")
        return int(value)
    if expected is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"key '{section}.{key}' must be a boolean")
        return value
    if expected is str:
        if not isinstance(value, str):
            raise ConfigError(f"key '{section}.{key}' must be a string")
        return value
    raise AssertionError(expected)


def _number_list(section: str, key: str, value, expected=float, allow_empty=False):
    if not isinstance(value, list) or (not value and not allow_empty):
        raise ConfigError(f"key '{section}.{key}' must be a non-empty array")
    return tuple(_coerce(section, f"{key}[{i}]", v, expected) for i, v in enumerate(value))


def _point(section: str, key: str, value) -> tuple[float, float]:
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError(f"key '{section}.{key}' must be a 2-element array [x, y]")
    return (
        _coerce(section, f"{key}[0]", value[0], float),
        _coerce(section, f"{key}[1]", value[1], float),
    )


_SECTION_KEYS = {
    "experiment": {
        "kind",
        "trials",
        "master_seed",
        "workers",
        "relay_counts",
        "zeta_values",
        "rho_db_values",
    },
    "system": {
        "p0_dbm",
        "bandwidth_hz",
        "noise_psd_dbm_per_hz",
        "spectral_efficiency",
        "carrier_freq_hz",
        "antenna_gain_product_dbi",
        "ref_distance_m",
        "path_loss_exponent",
        "shadowing_sigma_db",
    },
    "topology": {
        "ms_bs_distance_m",
        "n_relays",
        "placement_seed",
        "ms_position",
        "bs_position",
        "relay_positions",
        "lambda_direct",
        "lambda_ms_relay",
        "lambda_relay_bs",
    },
    "traffic": {"zeta", "l_total_bits", "weight_ms", "weight_relay", "weight_bs"},
    "flags": {"p0_cap", "baseline_set", "outage_rule", "hard_zero_direct"},
}


def _check_keys(data: dict) -> None:
    for section in data:
        if section not in _SECTION_KEYS:
            raise ConfigError(f"unknown section '{section}'")
        if not isinstance(data[section], dict):
            raise ConfigError(f"section '{section}' must be a table")
        for key in data[section]:
            if key not in _SECTION_KEYS[section]:
                raise ConfigError(f"unknown key '{section}.{key}'")


def _parse_system(sec: dict) -> SystemParams:
    defaults = dict(
        p0_dbm=24.0,
        bandwidth_hz=180e3,
        noise_psd_dbm_per_hz=-171.0,
        spectral_efficiency=3.0,
        carrier_freq_hz=2.5e9,
        antenna_gain_product_dbi=5.0,
        ref_distance_m=1.0,
        path_loss_exponent=3.76,
        shadowing_sigma_db=0.0,
    )
    for key, value in sec.items():
        defaults[key] = _coerce("system", key, value, float)
    try:
        return SystemParams.from_db_units(
            p0_dbm=defaults["p0_dbm"],
            bandwidth_hz=defaults["bandwidth_hz"],
            noise_psd_dbm_per_hz=defaults["noise_psd_dbm_per_hz"],
            spectral_efficiency_r=defaults["spectral_efficiency"],
            carrier_freq_hz=defaults["carrier_freq_hz"],
            antenna_gain_product_dbi=defaults["antenna_gain_product_dbi"],
            ref_distance_m=defaults["ref_distance_m"],
            path_loss_exponent=defaults["path_loss_exponent"],
            shadowing_sigma_db=defaults["shadowing_sigma_db"],
        )
    except ValueError as exc:
        raise ConfigError(f"invalid system parameters: {exc}") from exc


def _parse_topology(sec: dict) -> TopologySpec:
    distance_keys = {"ms_bs_distance_m"}
    explicit_keys = {"ms_position", "bs_position", "relay_positions"}
    rates_keys = {"lambda_direct", "lambda_ms_relay", "lambda_relay_bs"}
    present = set(sec)
    modes = [
        name
        for name, keys in (
            ("distance", distance_keys),
            ("explicit", explicit_keys),
            ("rates", rates_keys),
        )
        if present & keys
    ]
    if len(modes) != 1:
        raise ConfigError(
            "topology must use exactly one of: ms_bs_distance_m (+ n_relays), "
            "explicit positions, or explicit lambda rates"
        )
    mode = modes[0]
    n_relays = None
    if "n_relays" in sec:
        n_relays = _coerce("topology", "n_relays", sec["n_relays"], int)
        if n_relays < 0:
            raise ConfigError("key 'topology.n_relays' must be >= 0")
    placement_seed = 714025
    if "placement_seed" in sec:
        placement_seed = _coerce("topology", "placement_seed", sec["placement_seed"], int)
        if placement_seed < 0:
            raise ConfigError("key 'topology.placement_seed' must be >= 0")

    if mode == "distance":
        d = _coerce("topology", "ms_bs_distance_m", sec["ms_bs_distance_m"], float)
        if d <= 0:
            raise ConfigError("key 'topology.ms_bs_distance_m' must be > 0")
        return TopologySpec(
            mode="distance", ms_bs_distance_m=d, n_relays=n_relays,
            placement_seed=placement_seed,
        )
    if mode == "explicit":
        missing = explicit_keys - present
        if missing:
            raise ConfigError(f"topology explicit mode missing key '{sorted(missing)[0]}'")
        relays = sec["relay_positions"]
        if not isinstance(relays, list):
            raise ConfigError("key 'topology.relay_positions' must be an array of [x, y]")
        if n_relays is not None and n_relays != len(relays):
            raise ConfigError(
                f"key 'topology.n_relays' ({n_relays}) contradicts the "
                f"{len(relays)} entries of 'topology.relay_positions'"
            )
        return TopologySpec(
            mode="explicit",
            ms_position=_point("topology", "ms_position", sec["ms_position"]),
            bs_position=_point("topology", "bs_position", sec["bs_position"]),
            relay_positions=tuple(
                _point("topology", f"relay_positions[{i}]", p) for i, p in enumerate(relays)
            ),
            n_relays=len(relays),
            placement_seed=placement_seed,
        )
    missing = rates_keys - present
    if missing:
        raise ConfigError(f"topology rates mode missing key '{sorted(missing)[0]}'")
    lam_d = _coerce("topology", "lambda_direct", sec["lambda_direct"], float)

    def rate_array(key):
        value = sec[key]
        if isinstance(value, list):
            # empty arrays describe a relay-free scenario
            return _number_list("topology", key, value, allow_empty=True)
        scalar = _coerce("topology", key, value, float)
        if n_relays is None:
            raise ConfigError(
                f"key 'topology.{key}' given as a scalar requires 'topology.n_relays'"
            )
        return tuple([scalar] * n_relays)

    lam_mr = rate_array("lambda_ms_relay")
    lam_rb = rate_array("lambda_relay_bs")
    if len(lam_mr) != len(lam_rb):
        raise ConfigError(
            "keys 'topology.lambda_ms_relay' and 'topology.lambda_relay_bs' "
            "must have equal length"
        )
    if n_relays is not None and n_relays != len(lam_mr):
        raise ConfigError(
            f"key 'topology.n_relays' ({n_relays}) contradicts the "
            f"{len(lam_mr)} per-relay rate entries"
        )
    if lam_d <= 0 or any(v <= 0 for v in lam_mr + lam_rb):
        raise ConfigError("topology lambda rates must be > 0")
    return TopologySpec(
        mode="rates",
        lambda_direct=lam_d,
        lambda_ms_relay=lam_mr,
        lambda_relay_bs=lam_rb,
        n_relays=len(lam_mr),
        placement_seed=placement_seed,
    )


def parse_config(data: dict) -> ScenarioConfig:
    """Validate a parsed TOML document and apply defaults."""
    _check_keys(data)
    exp = data.get("experiment", {})
    if "kind" not in exp:
        raise ConfigError("missing required key 'experiment.kind'")
    kind = _coerce("experiment", "kind", exp["kind"], str)
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(
            f"key 'experiment.kind' must be one of {EXPERIMENT_KINDS}, got '{kind}'"
        )
    trials = _coerce("experiment", "trials", exp.get("trials", 100_000), int)
    if trials < 1:
        raise ConfigError("key 'experiment.trials' must be >= 1")
    master_seed = _coerce("experiment", "master_seed", exp.get("master_seed", 1), int)
    if not 0 <= master_seed < 2**64:
        raise ConfigError("key 'experiment.master_seed' must fit in an unsigned 64-bit")
    workers = _coerce("experiment", "workers", exp.get("workers", 1), int)
    if workers < 1:
        raise ConfigError("key 'experiment.workers' must be >= 1")

    relay_counts = zeta_values = rho_db_values = None
    if "relay_counts" in exp:
        relay_counts = _number_list("experiment", "relay_counts", exp["relay_counts"], int)
        if any(n < 0 for n in relay_counts):
            raise ConfigError("key 'experiment.relay_counts' entries must be >= 0")
    if "zeta_values" in exp:
        zeta_values = _number_list("experiment", "zeta_values", exp["zeta_values"])
        if any(not 0.0 <= z <= 1.0 for z in zeta_values):
            raise ConfigError("key 'experiment.zeta_values' entries must be in [0, 1]")
    if "rho_db_values" in exp:
        rho_db_values = _number_list("experiment", "rho_db_values", exp["rho_db_values"])

    needs = {
        "energy-vs-relays": ("relay_counts",),
        "energy-vs-zeta": ("zeta_values",),
        "outage-sweep": ("rho_db_values",),
        "dmt-check": ("relay_counts", "rho_db_values"),
    }[kind]
    grids = {
        "relay_counts": relay_counts,
        "zeta_values": zeta_values,
        "rho_db_values": rho_db_values,
    }
    for name in needs:
        if grids[name] is None:
            raise ConfigError(f"experiment kind '{kind}' requires key 'experiment.{name}'")
    for name, value in grids.items():
        if value is not None and name not in needs:
            raise ConfigError(f"key 'experiment.{name}' is not used by kind '{kind}'")

    system = _parse_system(data.get("system", {}))

    traffic = data.get("traffic", {})
    zeta = _coerce("traffic", "zeta", traffic.get("zeta", 0.5), float)
    if not 0.0 <= zeta <= 1.0:
        raise ConfigError("key 'traffic.zeta' must be in [0, 1]")
    l_total = _coerce("traffic", "l_total_bits", traffic.get("l_total_bits", 1e6), float)
    if l_total <= 0:
        raise ConfigError("key 'traffic.l_total_bits' must be > 0")
    weights = {}
    weight_defaults = {"weight_ms": 1.0, "weight_relay": 1.0, "weight_bs": 0.0}
    for key, default in weight_defaults.items():
        weights[key] = _coerce("traffic", key, traffic.get(key, default), float)
        if weights[key] < 0:
            raise ConfigError(f"key 'traffic.{key}' must be >= 0")
    if not any(w > 0 for w in weights.values()):
        raise ConfigError("at least one of the 'traffic.weight_*' keys must be > 0")

    topo_sec = data.get("topology")
    if topo_sec is None:
        # normalized unit-rate links as a fallback keeps tiny configs runnable
        default_n = max(relay_counts) if relay_counts else 1
        topology = TopologySpec(
            mode="rates",
            lambda_direct=1.0,
            lambda_ms_relay=tuple([1.0] * default_n),
            lambda_relay_bs=tuple([1.0] * default_n),
            n_relays=default_n,
        )
    else:
        topology = _parse_topology(topo_sec)

    flags_sec = data.get("flags", {})
    baseline_set = _coerce("flags", "baseline_set", flags_sec.get("baseline_set", "sigma"), str)
    if baseline_set not in ("sigma", "gamma"):
        raise ConfigError("key 'flags.baseline_set' must be 'sigma' or 'gamma'")
    outage_rule = _coerce("flags", "outage_rule", flags_sec.get("outage_rule", "snr-max"), str)
    if outage_rule not in ("snr-max", "judrs"):
        raise ConfigError("key 'flags.outage_rule' must be 'snr-max' or 'judrs'")
    flags = Flags(
        p0_cap=_coerce("flags", "p0_cap", flags_sec.get("p0_cap", False), bool),
        baseline_set=baseline_set,
        outage_rule=outage_rule,
        hard_zero_direct=_coerce(
            "flags", "hard_zero_direct", flags_sec.get("hard_zero_direct", False), bool
        ),
    )

    config = ScenarioConfig(
        kind=kind,
        system=system,
        topology=topology,
        zeta=zeta,
        l_total_bits=l_total,
        weight_ms=weights["weight_ms"],
        weight_relay=weights["weight_relay"],
        weight_bs=weights["weight_bs"],
        trials=trials,
        master_seed=master_seed,
        workers=workers,
        relay_counts=relay_counts,
        zeta_values=zeta_values,
        rho_db_values=rho_db_values,
        flags=flags,
    )
    _check_pool(config)
    return config


def _check_pool(config: ScenarioConfig) -> None:
    pool = config.topology.pool_size()
    wanted = max(config.relay_counts) if config.relay_counts else None
    if config.topology.mode == "distance":
        if pool is None and wanted is None:
            raise ConfigError(
                "topology distance mode requires key 'topology.n_relays' "
                "(or an 'experiment.relay_counts' grid)"
            )
        if pool is not None and wanted is not None and wanted > pool:
            raise ConfigError(
                f"max of 'experiment.relay_counts' ({wanted}) exceeds "
                f"'topology.n_relays' ({pool})"
            )
    elif wanted is not None and wanted > pool:
        raise ConfigError(
            f"max of 'experiment.relay_counts' ({wanted}) exceeds the "
            f"{pool} relays defined by the topology"
        )


def load_config(path) -> ScenarioConfig:
    """Read, parse and validate a scenario file."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    return parse_config(data)


def preset_config(name: str) -> ScenarioConfig:
    """Load one of the packaged scenario presets."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset '{name}'; available: {', '.join(PRESETS)}")
    text = resources.files("relaysim").joinpath(f"presets/{name}.toml").read_text("utf-8")
    return parse_config(tomllib.loads(text))


# ---------------------------------------------------------------------------
# scenario materialization


def _relay_pool(config: ScenarioConfig) -> int:
    pool = config.topology.pool_size()
    if config.relay_counts:
        grid_max = max(config.relay_counts)
        return grid_max if pool is None else pool
    if pool is None:
        raise ConfigError("topology does not define a relay count")
    return pool


def scenario_statistics(config: ScenarioConfig, n_relays: int) -> LinkStatistics:
    """Link statistics for a grid point using the first ``n_relays`` relays of
    the scenario's pool, so nested relay counts share their geometry."""
    topo_spec = config.topology
    if topo_spec.mode == "rates":
        stats = LinkStatistics(
            lambda_direct=topo_spec.lambda_direct,
            lambda_ms_relay=np.array(topo_spec.lambda_ms_relay[:n_relays]),
            lambda_relay_bs=np.array(topo_spec.lambda_relay_bs[:n_relays]),
        )
    else:
        if topo_spec.mode == "distance":
            pool = Topology.random_disc(
                topo_spec.ms_bs_distance_m, _relay_pool(config), topo_spec.placement_seed
            )
        else:
            pool = Topology(
                topo_spec.ms_position,
                topo_spec.bs_position,
                topo_spec.relay_positions,
            )
        topo = Topology(pool.ms_position, pool.bs_position, pool.relay_positions[:n_relays])
        shadow = None
        if config.system.shadowing_sigma_db > 0.0:
            rng = block_rng((config.master_seed, STREAM_SHADOW, n_relays), 0)
            shadow = sample_shadowing(config.system, 2 * n_relays + 1, rng)
        stats = build_link_statistics(config.system, topo, shadow_draws=shadow)
    if config.flags.hard_zero_direct:
        # an infinite rate degenerates the direct gain to exactly zero
        stats = LinkStatistics(
            lambda_direct=math.inf,
            lambda_ms_relay=stats.lambda_ms_relay,
            lambda_relay_bs=stats.lambda_relay_bs,
        )
    return stats


# ---------------------------------------------------------------------------
# runners


def _energy_rows(config, n_relays, zeta, result) -> list[ResultRow]:
    rho_db = 10.0 * math.log10(general_snr(config.system))
    rows = []
    for scheme in SCHEMES:
        st = result.schemes[scheme]
        rows.append(
            ResultRow(
                scheme=scheme,
                n_relays=n_relays,
                zeta=zeta,
                rho_db=rho_db,
                trials=st.trials,
                energy_total_j_per_bit=_none_if_nan(st.mean_total),
                energy_ms_j_per_bit=_none_if_nan(st.mean_ms),
                energy_relay_j_per_bit=_none_if_nan(st.mean_relay),
                energy_bs_j_per_bit=_none_if_nan(st.mean_bs),
                ci95_energy=_none_if_nan(st.ci95_total),
                outage_rate=st.outage_rate,
                ci95_outage=st.ci95_outage,
                mean_gamma_size=result.mean_gamma_size,
                master_seed=config.master_seed,
            )
        )
    return rows


def _none_if_nan(x: float) -> float | None:
    return None if x != x else x


def run_energy_vs_relays(config: ScenarioConfig) -> list[ResultRow]:
    """Mean per-bit energies of the three schemes over a relay-count grid."""
    if config.kind != "energy-vs-relays":
        raise ConfigError(f"config kind is '{config.kind}', not 'energy-vs-relays'")
    pool_n = _relay_pool(config)
    pool_stats = scenario_statistics(config, pool_n)
    rows = []
    for n in config.relay_counts:
        result = run_energy_mc(
            config.system,
            config.profile(),
            pool_stats,
            config.trials,
            key=(config.master_seed, STREAM_ENERGY, pool_n),
            workers=config.workers,
            cap_at_p0=config.flags.p0_cap,
            baselines_over_gamma=config.flags.baseline_set == "gamma",
            n_active=n,
        )
        rows.extend(_energy_rows(config, n, config.zeta, result))
    return rows


def run_energy_vs_zeta(config: ScenarioConfig) -> list[ResultRow]:
    """Mean per-bit energies over a traffic-split grid at fixed relay count.

    All grid points reuse the same channel draws (the gain law does not
    depend on the split), so the energy-vs-zeta trend is free of sampling
    jitter between points.
    """
    if config.kind != "energy-vs-zeta":
        raise ConfigError(f"config kind is '{config.kind}', not 'energy-vs-zeta'")
    n = _relay_pool(config)
    stats = scenario_statistics(config, n)
    rows = []
    for zeta in config.zeta_values:
        result = run_energy_mc(
            config.system,
            config.profile(zeta),
            stats,
            config.trials,
            key=(config.master_seed, STREAM_ENERGY, n),
            workers=config.workers,
            cap_at_p0=config.flags.p0_cap,
            baselines_over_gamma=config.flags.baseline_set == "gamma",
        )
        rows.extend(_energy_rows(config, n, zeta, result))
    return rows


def _outage_rows(config, n_relays, estimates) -> list[ResultRow]:
    rows = []
    for est in estimates:
        rows.append(
            ResultRow(
                scheme=config.flags.outage_rule,
                n_relays=n_relays,
                zeta=est.zeta,
                rho_db=10.0 * math.log10(est.snr_rho),
                trials=est.trials,
                energy_total_j_per_bit=None,
                energy_ms_j_per_bit=None,
                energy_relay_j_per_bit=None,
                energy_bs_j_per_bit=None,
                ci95_energy=None,
                outage_rate=est.probability,
                ci95_outage=est.ci95_halfwidth,
                mean_gamma_size=est.mean_gamma_size,
                master_seed=config.master_seed,
            )
        )
    return rows


def _sweep_estimates(config: ScenarioConfig, n_relays: int):
    stats = scenario_statistics(config, n_relays)
    rho = np.array([10.0 ** (db / 10.0) for db in config.rho_db_values])
    return outage_sweep(
        stats,
        config.zeta,
        rho,
        config.system.spectral_efficiency_r,
        config.trials,
        config.master_seed,
        rule=config.flags.outage_rule,
        weights=(config.weight_ms, config.weight_relay, config.weight_bs),
        workers=config.workers,
    )


def run_outage_sweep(config: ScenarioConfig) -> list[ResultRow]:
    """Outage probability over an SNR grid at the configured topology."""
    if config.kind != "outage-sweep":
        raise ConfigError(f"config kind is '{config.kind}', not 'outage-sweep'")
    n = _relay_pool(config)
    return _outage_rows(config, n, _sweep_estimates(config, n))


def run_dmt_check(config: ScenarioConfig) -> list[ResultRow]:
    """Outage sweeps over a relay-count grid, as input to slope fits."""
    if config.kind != "dmt-check":
        raise ConfigError(f"config kind is '{config.kind}', not 'dmt-check'")
    rows = []
    for n in config.relay_counts:
        rows.extend(_outage_rows(config, n, _sweep_estimates(config, n)))
    return rows


def run_experiment(config: ScenarioConfig) -> list[ResultRow]:
    runner = {
        "energy-vs-relays": run_energy_vs_relays,
        "energy-vs-zeta": run_energy_vs_zeta,
        "outage-sweep": run_outage_sweep,
        "dmt-check": run_dmt_check,
    }[config.kind]
    return runner(config)


# ---------------------------------------------------------------------------
# emission


def _fmt9(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        raise TypeError("unexpected boolean field")
    if isinstance(value, int):
        return str(value)
    return format(value, ".9g")


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_fmt9(getattr(row, name)) for name in CSV_FIELDS])
    return buf.getvalue()


def render_json(rows) -> str:
    def jsonable(row):
        out = {}
        for name in CSV_FIELDS:
            value = getattr(row, name)
            if value is None or isinstance(value, (int, str)):
                out[name] = value
            else:
                # re-parse the 9-significant-digit rendering so CSV and JSON
                # carry the exact same values
                out[name] = float(_fmt9(value))
        return out

    return json.dumps([jsonable(row) for row in rows], indent=2) + "\n"


def emit_results(rows, fmt: str, path) -> None:
    """Write rows as CSV (exact standard header) or a JSON array."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    text = render_csv(rows) if fmt == "csv" else render_json(rows)
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def parse_rows_csv(text: str) -> list[dict]:
    """Parse an emitted CSV back into typed dicts (testing/tooling aid)."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for rec in reader:
        row = {}
        for name in CSV_FIELDS:
            value = rec[name]
            if value == "":
                row[name] = None
            elif name in ("n_relays", "trials", "master_seed"):
                row[name] = int(value)
            elif name == "scheme":
                row[name] = value
            else:
                row[name] = float(value)
        out.append(row)
    return out
