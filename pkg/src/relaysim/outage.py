"""Outage events, Monte Carlo outage probability, closed-form oracles and the
diversity-multiplexing tradeoff curve.

The outage event of one direction is: the direct link misses the target rate
AND either no relay decoded the first hop or the combined two-hop channel
(direct contribution plus the strongest decoded relay's second hop) also
misses it.  Uplink and downlink estimates are mixed by the traffic split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LinkStatistics
from .montecarlo import STREAM_OUTAGE, run_outage_mc

#: minimum observed events per direction for a point to enter a slope fit
MIN_COUNTABLE_EVENTS = 50


class EstimationError(ValueError):
    """Not enough usable points to estimate a slope."""


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo outage probability at one (SNR, rate) point.

    ``probability`` is the traffic mix zeta*UL + (1-zeta)*DL of the two
    per-direction event frequencies; the per-direction counts are kept so
    each direction's probability * trials stays an integer count.
    """

    probability: float
    trials: int
    ci95_halfwidth: float
    snr_rho: float
    rate_r_bits: float
    zeta: float = 1.0
    ul_events: int = 0
    dl_events: int = 0
    mean_gamma_size: float = 0.0
    low_confidence: bool = False

    @property
    def ul_probability(self) -> float:
        return self.ul_events / self.trials

    @property
    def dl_probability(self) -> float:
        return self.dl_events / self.trials


@dataclass(frozen=True)
class DmtPoint:
    """One point of the diversity-multiplexing tradeoff curve."""

    multiplexing_r: float
    diversity_d: float


def mutual_info_direct(rho: float, h_direct_sq: float) -> float:
    """Spectral efficiency of the direct link: log2(1 + rho*|h_direct|^2)."""
    if not rho > 0.0:
        raise ValueError("rho must be > 0")
    if h_direct_sq < 0.0:
        raise ValueError("gain must be >= 0")
    return math.log2(1.0 + rho * h_direct_sq)


def mutual_info_two_hop(rho: float, h_direct_sq: float, g_best_sq: float) -> float:
    """Spectral efficiency of the combined direct + relayed transfer.

    The retransmission halves the rate but the receiver combines both copies:
    0.5 * log2(1 + rho*(|h_direct|^2 + |g|^2)).
    """
    if not rho > 0.0:
        raise ValueError("rho must be > 0")
    if h_direct_sq < 0.0 or g_best_sq < 0.0:
        raise ValueError("gains must be >= 0")
    return 0.5 * math.log2(1.0 + rho * (h_direct_sq + g_best_sq))


def prob_gamma_size_closed_form(
    lambdas: np.ndarray, rho: float, rate_r: float, t: int
) -> float:
    """Probability that exactly ``t`` relays decode the first hop.

    Relay i decodes when its gain reaches (2^(2R)-1)/rho, which happens with
    probability q_i = exp(-lambda_i*(2^(2R)-1)/rho).  For unequal rates this
    is the Poisson-binomial mass, evaluated by the standard O(N^2) dynamic
    program (equivalent to the sum over all size-t subsets).
    """
    lam = np.asarray(lambdas, dtype=np.float64)
    n = lam.size
    if not 0 <= t <= n:
        raise ValueError(f"t must be in [0, {n}], got {t}")
    if not rho > 0.0 or not rate_r > 0.0:
        raise ValueError("rho and rate_r must be > 0")
    q = np.exp(-lam * (2.0 ** (2.0 * rate_r) - 1.0) / rho)
    dist = np.zeros(n + 1)
    dist[0] = 1.0
    for qi in q:
        dist[1 : n + 1] = dist[1 : n + 1] * (1.0 - qi) + dist[0:n] * qi
        dist[0] *= 1.0 - qi
    return float(dist[t])


def direct_outage_closed_form(lambda_direct: float, rho: float, rate_r: float) -> float:
    """Outage probability of the bare direct link.

    The gain is exponential(lambda), so Pr{log2(1+rho*x) < R} =
    1 - exp(-lambda*(2^R-1)/rho).
    """
    if not lambda_direct > 0.0 or not rho > 0.0:
        raise ValueError("lambda_direct and rho must be > 0")
    if rate_r < 0.0:
        raise ValueError("rate_r must be >= 0")
    return 1.0 - math.exp(-lambda_direct * (2.0**rate_r - 1.0) / rho)


def dmt_theoretical(n_relays: int, r: float) -> DmtPoint:
    """Tradeoff curve of the joint selection scheme.

    d(r) = (N+1) * max(0, 1 - r*(2N+1)/(N+1)): full diversity N+1 at r = 0,
    hitting zero at r = (N+1)/(2N+1).
    """
    if n_relays < 0:
        raise ValueError("n_relays must be >= 0")
    if r < 0.0:
        raise ValueError("r must be >= 0")
    n = n_relays
    d = (n + 1) * max(0.0, 1.0 - r * (2 * n + 1) / (n + 1))
    return DmtPoint(multiplexing_r=r, diversity_d=d)


def outage_probability_mc(
    stats: LinkStatistics,
    zeta: float,
    rho: float,
    rate_r: float,
    trials: int,
    seed: int,
    rule: str = "snr-max",
    weights: tuple[float, float, float] = (1.0, 1.0, 0.0),
    workers: int = 1,
) -> OutageEstimate:
    """Monte Carlo outage estimate at a single SNR point."""
    return outage_sweep(
        stats,
        zeta,
        np.array([rho], dtype=np.float64),
        rate_r,
        trials,
        seed,
        rule=rule,
        weights=weights,
        workers=workers,
    )[0]


def outage_sweep(
    stats: LinkStatistics,
    zeta: float,
    rho_values: np.ndarray,
    rate_r: float,
    trials: int,
    seed: int,
    rule: str = "snr-max",
    weights: tuple[float, float, float] = (1.0, 1.0, 0.0),
    workers: int = 1,
) -> list[OutageEstimate]:
    """Outage estimates over an SNR grid, sharing one set of channel draws.

    Points whose weighted directions observed fewer than
    ``MIN_COUNTABLE_EVENTS`` events are flagged low-confidence; slope fits
    should skip them.
    """
    if not 0.0 <= zeta <= 1.0:
        raise ValueError("zeta must be in [0, 1]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rho = np.asarray(rho_values, dtype=np.float64)
    key = (int(seed), STREAM_OUTAGE, stats.n_relays)
    mc = run_outage_mc(
        stats, rho, rate_r, trials, key,
        workers=workers, rule=rule, zeta=zeta, weights=weights,
    )
    out = []
    for i in range(rho.size):
        ul = int(mc.ul_events[i])
        dl = int(mc.dl_events[i])
        p = (zeta * ul + (1.0 - zeta) * dl) / trials
        ci = 1.96 * math.sqrt(p * (1.0 - p) / trials)
        counted = []
        if zeta > 0.0:
            counted.append(ul)
        if zeta < 1.0:
            counted.append(dl)
        out.append(
            OutageEstimate(
                probability=p,
                trials=trials,
                ci95_halfwidth=ci,
                snr_rho=float(rho[i]),
                rate_r_bits=rate_r,
                zeta=zeta,
                ul_events=ul,
                dl_events=dl,
                mean_gamma_size=float(mc.gamma_size_sum[i]) / trials,
                low_confidence=min(counted) < MIN_COUNTABLE_EVENTS,
            )
        )
    return out


def estimate_diversity_slope(outage_points) -> float:
    """Diversity estimate from a sweep: negated least-squares slope of
    log10(P_out) against log10(rho).

    Points with probability 0 or 1 carry no slope information and are
    dropped; fewer than three usable points raises ``EstimationError``.
    """
    usable = [(r, p) for r, p in outage_points if 0.0 < p < 1.0]
    if len(usable) < 3:
        raise EstimationError(
            f"need >= 3 points with probability in (0,1), got {len(usable)}"
        )
    x = np.log10([r for r, _ in usable])
    y = np.log10([p for _, p in usable])
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)
