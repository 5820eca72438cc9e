"""Link statistics and Rayleigh-fading channel sampling.

Geometry (node positions) is turned into per-link mean power gains via a
log-distance path-loss law with optional log-normal shadowing.  Instantaneous
power gains are exponentially distributed around those means, and the uplink
and downlink of every link share one fading draw (TDD reciprocity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 2.99792458e8  # m/s


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Radio constants shared by every link in a scenario.

    Attributes
    ----------
    p0_watts : maximum transmit power available at every node (W).
    bandwidth_hz : transmission bandwidth (Hz).
    noise_psd_w_per_hz : one-sided AWGN power spectral density (W/Hz).
    spectral_efficiency_r : end-to-end spectral efficiency target (bit/s/Hz).
    carrier_wavelength_m : carrier wavelength (m).
    antenna_gain_product : product of transmit and receive antenna gains, linear.
    ref_distance_m : far-field reference distance of the path-loss law (m).
    path_loss_exponent : path-loss exponent, >= 2.
    shadowing_sigma_db : log-normal shadowing standard deviation (dB), 0 disables.
    """

    p0_watts: float
    bandwidth_hz: float
    noise_psd_w_per_hz: float
    spectral_efficiency_r: float
    carrier_wavelength_m: float
    antenna_gain_product: float
    ref_distance_m: float = 1.0
    path_loss_exponent: float = 3.76
    shadowing_sigma_db: float = 0.0

    def __post_init__(self):
        positive = (
            ("p0_watts", self.p0_watts),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_psd_w_per_hz", self.noise_psd_w_per_hz),
            ("spectral_efficiency_r", self.spectral_efficiency_r),
            ("carrier_wavelength_m", self.carrier_wavelength_m),
            ("antenna_gain_product", self.antenna_gain_product),
            ("ref_distance_m", self.ref_distance_m),
        )
        for name, value in positive:
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if self.path_loss_exponent < 2.0:
            raise ValueError(
                f"path_loss_exponent must be >= 2, got {self.path_loss_exponent!r}"
            )
        if self.shadowing_sigma_db < 0.0:
            raise ValueError(
                f"shadowing_sigma_db must be >= 0, got {self.shadowing_sigma_db!r}"
            )

    @classmethod
    def from_db_units(
        cls,
        p0_dbm: float = 24.0,
        bandwidth_hz: float = 180e3,
        noise_psd_dbm_per_hz: float = -171.0,
        spectral_efficiency_r: float = 3.0,
        carrier_freq_hz: float = 2.5e9,
        antenna_gain_product_dbi: float = 5.0,
        ref_distance_m: float = 1.0,
        path_loss_exponent: float = 3.76,
        shadowing_sigma_db: float = 0.0,
    ) -> "SystemParams":
        """Build params from link-budget units (dBm, dBi, carrier frequency).

        The defaults are the standard simulation parameter set: 24 dBm transmit
        power, 180 kHz bandwidth, -171 dBm/Hz noise density, 5 dBi combined
        antenna gain, 2.5 GHz carrier, path-loss exponent 3.76.
        """
        return cls(
            p0_watts=dbm_to_watts(p0_dbm),
            bandwidth_hz=bandwidth_hz,
            noise_psd_w_per_hz=dbm_to_watts(noise_psd_dbm_per_hz),
            spectral_efficiency_r=spectral_efficiency_r,
            carrier_wavelength_m=SPEED_OF_LIGHT / carrier_freq_hz,
            antenna_gain_product=db_to_linear(antenna_gain_product_dbi),
            ref_distance_m=ref_distance_m,
            path_loss_exponent=path_loss_exponent,
            shadowing_sigma_db=shadowing_sigma_db,
        )


def general_snr(params: SystemParams) -> float:
    """Transmit SNR before fading: maximum power over total noise power."""
    return params.p0_watts / (params.noise_psd_w_per_hz * params.bandwidth_hz)


def mean_channel_gain(
    params: SystemParams, distance_m: float, shadow_linear: float = 1.0
) -> float:
    """Mean linear power gain of a link at the given distance.

    Log-distance law: (sqrt(Gt*Gr) * wavelength / (4*pi*d0))^2 * (d0/d)^p,
    scaled by the linear shadowing realization.  Strictly decreasing in
    distance for a fixed shadow draw.
    """
    if not distance_m > 0.0:
        raise ValueError(f"distance_m must be > 0, got {distance_m!r}")
    if not shadow_linear > 0.0:
        raise ValueError(f"shadow_linear must be > 0, got {shadow_linear!r}")
    d0 = params.ref_distance_m
    ref = (
        math.sqrt(params.antenna_gain_product)
        * params.carrier_wavelength_m
        / (4.0 * math.pi * d0)
    ) ** 2
    return ref * (d0 / distance_m) ** params.path_loss_exponent * shadow_linear


@dataclass(frozen=True)
class Topology:
    """Node geometry: one mobile station, one base station, N relays (2-D, m)."""

    ms_position: tuple[float, float]
    bs_position: tuple[float, float]
    relay_positions: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        nodes = [self.ms_position, self.bs_position, *self.relay_positions]
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if math.dist(nodes[i], nodes[j]) <= 0.0:
                    raise ValueError(
                        f"nodes {i} and {j} coincide at {nodes[i]!r}; "
                        "all pairwise distances must be > 0"
                    )

    @property
    def n_relays(self) -> int:
        return len(self.relay_positions)

    def ms_relay_distances(self) -> np.ndarray:
        return np.array(
            [math.dist(self.ms_position, p) for p in self.relay_positions]
        )

    def relay_bs_distances(self) -> np.ndarray:
        return np.array(
            [math.dist(p, self.bs_position) for p in self.relay_positions]
        )

    def ms_bs_distance(self) -> float:
        return math.dist(self.ms_position, self.bs_position)

    @classmethod
    def random_disc(
        cls, ms_bs_distance_m: float, n_relays: int, placement_seed: int
    ) -> "Topology":
        """MS at the origin, BS on the x axis, relays uniform i.i.d. in the
        disc whose diameter is the MS-BS segment.

        The placement is drawn once from its own seed so that a scenario's
        geometry is fixed independently of the fading seed.
        """
        if not ms_bs_distance_m > 0.0:
            raise ValueError("ms_bs_distance_m must be > 0")
        if n_relays < 0:
            raise ValueError("n_relays must be >= 0")
        rng = np.random.default_rng(np.random.SeedSequence((int(placement_seed), 0x9E)))
        center = np.array([ms_bs_distance_m / 2.0, 0.0])
        radius = ms_bs_distance_m / 2.0
        pos = []
        while len(pos) < n_relays:
            # rejection sampling keeps the disc distribution exactly uniform
            xy = rng.uniform(-radius, radius, size=2)
            if xy[0] ** 2 + xy[1] ** 2 <= radius**2:
                pos.append(tuple(center + xy))
        return cls(
            ms_position=(0.0, 0.0),
            bs_position=(ms_bs_distance_m, 0.0),
            relay_positions=tuple(pos),
        )


@dataclass(frozen=True)
class LinkStatistics:
    """Exponential rate parameters of the squared channel gains.

    ``lambda_direct`` is the rate of the MS-BS gain; ``lambda_ms_relay[i]``
    and ``lambda_relay_bs[i]`` are the rates of the i-th MS-relay and
    relay-BS gains.  Mean gain of a link is 1/lambda.
    """

    lambda_direct: float
    lambda_ms_relay: np.ndarray = field(default_factory=lambda: np.empty(0))
    lambda_relay_bs: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        object.__setattr__(
            self, "lambda_ms_relay", np.asarray(self.lambda_ms_relay, dtype=np.float64)
        )
        object.__setattr__(
            self, "lambda_relay_bs", np.asarray(self.lambda_relay_bs, dtype=np.float64)
        )
        if not self.lambda_direct > 0.0:
            raise ValueError("lambda_direct must be > 0")
        if self.lambda_ms_relay.shape != self.lambda_relay_bs.shape:
            raise ValueError("per-relay rate arrays must have equal length")
        if np.any(self.lambda_ms_relay <= 0.0) or np.any(self.lambda_relay_bs <= 0.0):
            raise ValueError("all link rates must be > 0")

    @property
    def n_relays(self) -> int:
        return int(self.lambda_ms_relay.size)

    def mean_gains(self) -> tuple[float, np.ndarray, np.ndarray]:
        """(direct, ms-relay, relay-bs) mean power gains."""
        return (
            1.0 / self.lambda_direct,
            1.0 / self.lambda_ms_relay,
            1.0 / self.lambda_relay_bs,
        )

    @classmethod
    def iid(cls, n_relays: int, lam: float = 1.0) -> "LinkStatistics":
        """Identical rate ``lam`` on every link; handy for normalized studies."""
        return cls(
            lambda_direct=lam,
            lambda_ms_relay=np.full(n_relays, lam),
            lambda_relay_bs=np.full(n_relays, lam),
        )


def sample_shadowing(params: SystemParams, n_links: int, rng: np.random.Generator):
    """Linear log-normal shadow draws, one per link; all ones when disabled."""
    if params.shadowing_sigma_db == 0.0:
        return np.ones(n_links)
    return 10.0 ** (rng.normal(0.0, params.shadowing_sigma_db, size=n_links) / 10.0)


def build_link_statistics(
    params: SystemParams,
    topo: Topology,
    shadow_draws: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> LinkStatistics:
    """Per-link exponential rates from geometry and shadowing.

    ``shadow_draws`` is a flat array of 2N+1 linear shadow factors ordered as
    (direct, ms-relay 0..N-1, relay-bs 0..N-1).  When omitted and shadowing is
    enabled, draws come from ``rng``; with shadowing disabled the statistics
    are a deterministic function of geometry.
    """
    n = topo.n_relays
    if shadow_draws is None:
        if params.shadowing_sigma_db > 0.0:
            if rng is None:
                raise ValueError(
                    "shadowing enabled: pass shadow_draws or an rng to sample them"
                )
            shadow_draws = sample_shadowing(params, 2 * n + 1, rng)
        else:
            shadow_draws = np.ones(2 * n + 1)
    shadow_draws = np.asarray(shadow_draws, dtype=np.float64)
    if shadow_draws.shape != (2 * n + 1,):
        raise ValueError(f"expected {2 * n + 1} shadow draws, got {shadow_draws.shape}")

    d_direct = topo.ms_bs_distance()
    d_mr = topo.ms_relay_distances()
    d_rb = topo.relay_bs_distances()
    lam_direct = 1.0 / mean_channel_gain(params, d_direct, float(shadow_draws[0]))
    lam_mr = np.array(
        [
            1.0 / mean_channel_gain(params, float(d), float(s))
            for d, s in zip(d_mr, shadow_draws[1 : n + 1])
        ]
    )
    lam_rb = np.array(
        [
            1.0 / mean_channel_gain(params, float(d), float(s))
            for d, s in zip(d_rb, shadow_draws[n + 1 :])
        ]
    )
    return LinkStatistics(lam_direct, lam_mr, lam_rb)


@dataclass(frozen=True)
class ChannelRealization:
    """Instantaneous squared gains of one fading draw.

    One value per link: the uplink and downlink of a link see the same gain,
    so consumers read ``h_sq[i]`` for MS<->relay i and ``g_sq[i]`` for
    relay i<->BS in either direction.
    """

    h_direct_sq: float
    h_sq: np.ndarray
    g_sq: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "h_sq", np.asarray(self.h_sq, dtype=np.float64))
        object.__setattr__(self, "g_sq", np.asarray(self.g_sq, dtype=np.float64))
        if self.h_direct_sq < 0.0:
            raise ValueError("gains must be >= 0")
        if self.h_sq.shape != self.g_sq.shape:
            raise ValueError("per-relay gain arrays must have equal length")
        if np.any(self.h_sq < 0.0) or np.any(self.g_sq < 0.0):
            raise ValueError("gains must be >= 0")

    @property
    def n_relays(self) -> int:
        return int(self.h_sq.size)


def sample_gain_block(
    stats: LinkStatistics, rng: np.random.Generator, n_trials: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized draw of ``n_trials`` independent realizations.

    Returns (h_direct_sq, h_sq, g_sq) with shapes (n,), (n, N), (n, N).  The
    draw order (direct, then MS-relay, then relay-BS) is part of the
    determinism contract: a stream replayed from the same state reproduces
    the same block bit for bit.
    """
    n = stats.n_relays
    md, mh, mg = stats.mean_gains()
    h_direct = rng.standard_exponential(n_trials) * md
    h = rng.standard_exponential((n_trials, n)) * mh[None, :]
    g = rng.standard_exponential((n_trials, n)) * mg[None, :]
    return h_direct, h, g


def sample_realization(
    stats: LinkStatistics, rng: np.random.Generator
) -> ChannelRealization:
    """One fading realization from the given stream."""
    h_direct, h, g = sample_gain_block(stats, rng, 1)
    return ChannelRealization(float(h_direct[0]), h[0], g[0])
