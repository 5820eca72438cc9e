"""Deterministic, block-partitioned Monte Carlo driver.

Trials are partitioned into fixed-size blocks; block ``b`` of a run draws its
channel gains from a dedicated counter-based stream keyed by
``(*key, b)``, so every trial's realization is a pure function of the key and
the trial index.  Workers process whole blocks and partial results are always
combined in block order, which makes run output bit-identical for any worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .channel import ChannelRealization, LinkStatistics, SystemParams, sample_gain_block
from .energy import TrafficProfile

BLOCK_TRIALS = 1 << 15

# stream tags keep the gain draws of unrelated experiment stages independent
STREAM_ENERGY = 1
STREAM_OUTAGE = 2
STREAM_SHADOW = 3

SCHEMES = ("judrs", "best_worse", "harmonic_mean")


def block_rng(key: tuple[int, ...], block_index: int) -> np.random.Generator:
    """Counter-based generator for one block; cheap to create, random access."""
    entropy = tuple(int(k) for k in key) + (int(block_index),)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def realization_at(
    stats: LinkStatistics, key: tuple[int, ...], trial_index: int
) -> ChannelRealization:
    """The exact realization trial ``trial_index`` sees in a keyed run.

    Regenerates the enclosing block and slices one row, so it is bit-identical
    to what the batch path consumed; pure in (key, trial_index).
    """
    if trial_index < 0:
        raise ValueError("trial_index must be >= 0")
    bi, row = divmod(int(trial_index), BLOCK_TRIALS)
    h_d, h, g = sample_gain_block(stats, block_rng(key, bi), BLOCK_TRIALS)
    return ChannelRealization(float(h_d[row]), h[row], g[row])


def _block_plan(trials: int) -> list[tuple[int, int]]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_blocks = math.ceil(trials / BLOCK_TRIALS)
    plan = []
    for bi in range(n_blocks):
        used = min(BLOCK_TRIALS, trials - bi * BLOCK_TRIALS)
        plan.append((bi, used))
    return plan


def _map_blocks(fn, plan, workers: int):
    if workers <= 1:
        return [fn(item) for item in plan]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, plan))


@dataclass(frozen=True)
class SchemeEnergyStats:
    """Aggregated per-scheme energy statistics of one grid point."""

    scheme: str
    trials: int
    ok_count: int
    outage_count: int
    mean_ms: float
    mean_relay: float
    mean_bs: float
    mean_total: float
    ci95_total: float
    outage_rate: float
    ci95_outage: float


@dataclass(frozen=True)
class EnergyMcResult:
    trials: int
    mean_gamma_size: float
    schemes: dict[str, SchemeEnergyStats]


def _finish_scheme(scheme, trials, ok, s_ms, s_rel, s_bs, s_tot, s_tot_sq):
    if ok > 0:
        mean_ms = s_ms / ok
        mean_rel = s_rel / ok
        mean_bs = s_bs / ok
        mean_tot = s_tot / ok
    else:
        mean_ms = mean_rel = mean_bs = mean_tot = math.nan
    if ok > 1:
        var = max(s_tot_sq - ok * mean_tot * mean_tot, 0.0) / (ok - 1)
        ci_tot = 1.96 * math.sqrt(var / ok)
    else:
        ci_tot = math.nan
    p_out = (trials - ok) / trials
    ci_out = 1.96 * math.sqrt(p_out * (1.0 - p_out) / trials)
    return SchemeEnergyStats(
        scheme=scheme,
        trials=trials,
        ok_count=ok,
        outage_count=trials - ok,
        mean_ms=mean_ms,
        mean_relay=mean_rel,
        mean_bs=mean_bs,
        mean_total=mean_tot,
        ci95_total=ci_tot,
        outage_rate=p_out,
        ci95_outage=ci_out,
    )


def run_energy_mc(
    params: SystemParams,
    profile: TrafficProfile,
    stats: LinkStatistics,
    trials: int,
    key: tuple[int, ...],
    workers: int = 1,
    cap_at_p0: bool = False,
    baselines_over_gamma: bool = False,
    n_active: int | None = None,
) -> EnergyMcResult:
    """Monte Carlo energy statistics of the three schemes on one scenario.

    Energies are averaged over non-outage trials (all schemes share the same
    outage trials when baselines are sigma-restricted); the outage fraction
    is reported separately.

    ``n_active`` restricts selection to the first relays of ``stats`` while
    the draws still cover the whole pool: grid points of a relay-count sweep
    then ride on common random numbers, so adding relays can only improve
    each individual trial.
    """
    sc = backend.selection_constants(params, profile)
    plan = _block_plan(trials)
    if n_active is None:
        n_active = stats.n_relays
    if not 0 <= n_active <= stats.n_relays:
        raise ValueError(f"n_active must be in [0, {stats.n_relays}]")

    def do_block(item):
        bi, used = item
        rng = block_rng(key, bi)
        h_d, h, g = sample_gain_block(stats, rng, BLOCK_TRIALS)
        h_d = h_d[:used]
        h = np.ascontiguousarray(h[:used, :n_active])
        g = np.ascontiguousarray(g[:used, :n_active])
        dec, e_ms, e_rel, e_bs, e_tot, _metric, gsz = backend.energy_selection_block(
            h_d, h, g, sc, cap_at_p0, baselines_over_gamma
        )
        ok = dec != -2
        return (
            ok.sum(axis=0),
            np.where(ok, e_ms, 0.0).sum(axis=0),
            np.where(ok, e_rel, 0.0).sum(axis=0),
            np.where(ok, e_bs, 0.0).sum(axis=0),
            np.where(ok, e_tot, 0.0).sum(axis=0),
            np.where(ok, e_tot * e_tot, 0.0).sum(axis=0),
            int(gsz.sum()),
        )

    partials = _map_blocks(do_block, plan, workers)

    ok = np.zeros(3, dtype=np.int64)
    sums = [np.zeros(3) for _ in range(5)]
    gamma_total = 0
    for part in partials:
        ok += part[0]
        for k in range(5):
            sums[k] += part[1 + k]
        gamma_total += part[6]

    schemes = {}
    for s, name in enumerate(SCHEMES):
        schemes[name] = _finish_scheme(
            name,
            trials,
            int(ok[s]),
            float(sums[0][s]),
            float(sums[1][s]),
            float(sums[2][s]),
            float(sums[3][s]),
            float(sums[4][s]),
        )
    return EnergyMcResult(
        trials=trials,
        mean_gamma_size=gamma_total / trials,
        schemes=schemes,
    )


@dataclass(frozen=True)
class OutageMcResult:
    trials: int
    ul_events: np.ndarray
    dl_events: np.ndarray
    gamma_size_sum: np.ndarray


def run_outage_mc(
    stats: LinkStatistics,
    rho_values: np.ndarray,
    rate_r: float,
    trials: int,
    key: tuple[int, ...],
    workers: int = 1,
    rule: str = "snr-max",
    zeta: float = 0.5,
    weights: tuple[float, float, float] = (1.0, 1.0, 0.0),
) -> OutageMcResult:
    """Count uplink/downlink outage events at each SNR point.

    All points share the block draws (the gain distribution does not depend
    on SNR), so the per-point estimates ride on common random numbers.
    ``rule`` picks how the second-hop relay is chosen for the outage event:
    best received SNR over the decoding set ('snr-max') or the actual
    energy-minimizing decision ('judrs').
    """
    if rule not in ("snr-max", "judrs"):
        raise ValueError(f"unknown outage rule {rule!r}")
    rho = np.asarray(rho_values, dtype=np.float64)
    if rho.ndim != 1 or rho.size == 0 or np.any(rho <= 0.0):
        raise ValueError("rho_values must be a non-empty 1-D array of positives")
    if not rate_r > 0.0:
        raise ValueError("rate_r must be > 0")
    x2r = 2.0 ** (2.0 * rate_r) - 1.0
    xr = 2.0**rate_r - 1.0
    thr_gain = x2r / rho
    thr_direct = xr / rho
    wm, wr, wb = weights
    a_c = zeta * wm + (1.0 - zeta) * wr
    b_c = zeta * wr + (1.0 - zeta) * wb
    d_c = zeta * wm + (1.0 - zeta) * wb
    e_ratio = 2.0 * xr / x2r
    plan = _block_plan(trials)

    def do_block(item):
        bi, used = item
        rng = block_rng(key, bi)
        h_d, h, g = sample_gain_block(stats, rng, BLOCK_TRIALS)
        h_d, h, g = h_d[:used], h[:used], g[:used]
        ul, dl, gsz = backend.outage_block(
            h_d, h, g, thr_gain, thr_direct, rule == "judrs", a_c, b_c, d_c, wr, e_ratio
        )
        return (
            ul.sum(axis=0, dtype=np.int64),
            dl.sum(axis=0, dtype=np.int64),
            gsz.sum(axis=0, dtype=np.int64),
        )

    partials = _map_blocks(do_block, plan, workers)
    ul = np.zeros(rho.size, dtype=np.int64)
    dl = np.zeros(rho.size, dtype=np.int64)
    gsum = np.zeros(rho.size, dtype=np.int64)
    for p_ul, p_dl, p_g in partials:
        ul += p_ul
        dl += p_dl
        gsum += p_g
    return OutageMcResult(trials=trials, ul_events=ul, dl_events=dl, gamma_size_sum=gsum)
