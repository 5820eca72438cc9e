"""Candidate-set formation and the three relay-selection rules.

Selection runs once per fading realization and serves both link directions:
decoding feasibility screens the relays into candidate sets, then a scheme
picks a relay (or falls back to direct transmission / declares outage).

Schemes
-------
``judrs``          minimize the weighted energy per bit over the candidates,
                   taking direct transmission when it is at least as cheap.
``best_worse``     maximize the weaker of the two hop gains.
``harmonic_mean``  maximize the harmonic mean of the two hop gains.
``direct_only``    never use a relay; transmit directly when feasible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelRealization, SystemParams
from .energy import (
    EnergyComponents,
    PowerAllocation,
    TrafficProfile,
    allocate_powers,
    coop_energy_components,
    direct_energy_components,
    rate_factors,
    weighted_energy_coop,
    weighted_energy_direct,
)

SCHEME_JUDRS = "judrs"
SCHEME_BEST_WORSE = "best_worse"
SCHEME_HARMONIC_MEAN = "harmonic_mean"
SCHEME_DIRECT_ONLY = "direct_only"

DECISION_RELAY = "relay"
DECISION_DIRECT = "direct"
DECISION_OUTAGE = "outage"


@dataclass(frozen=True)
class CandidateSets:
    """Relays that decoded the first hop (gamma) and, of those, the ones whose
    second hop can close the link (sigma)."""

    gamma: tuple[int, ...]
    sigma: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.gamma)

    def __post_init__(self):
        if not set(self.sigma) <= set(self.gamma):
            raise ValueError("sigma must be a subset of gamma")


@dataclass(frozen=True)
class SelectionOutcome:
    """Result of one selection round.

    ``energy_per_bit`` is the reported weighted energy assembled from the
    clamped power allocation; ``selection_metric`` is the closed-form value
    the energy-minimizing rule ranks by.  Both are None on outage.
    """

    decision: str
    scheme: str
    relay_index: int | None
    candidate_sets: CandidateSets
    powers: PowerAllocation | None = None
    energy_per_bit: float | None = None
    selection_metric: float | None = None
    components: EnergyComponents | None = None


def form_gamma(params: SystemParams, real: ChannelRealization) -> tuple[int, ...]:
    """Relays whose first hop decodes at full power: P0*h² >= th1 (inclusive)."""
    rf = rate_factors(params)
    p0 = params.p0_watts
    return tuple(
        i for i in range(real.n_relays) if p0 * float(real.h_sq[i]) >= rf.th1
    )


def form_sigma(
    params: SystemParams, real: ChannelRealization, gamma: tuple[int, ...]
) -> tuple[int, ...]:
    """Members of gamma that can help: P0*g² >= th2, with th2 discounted by the
    direct-link contribution (non-positive th2 admits any g)."""
    rf = rate_factors(params)
    p0 = params.p0_watts
    hd = real.h_direct_sq
    out = []
    for i in gamma:
        h = float(real.h_sq[i])
        th2 = rf.th1 * (1.0 - hd / h)
        if p0 * float(real.g_sq[i]) >= th2:
            out.append(i)
    return tuple(out)


def _selectable(
    params: SystemParams,
    real: ChannelRealization,
    members: tuple[int, ...],
    cap_at_p0: bool,
) -> tuple[int, ...]:
    # zero-gain second hops cannot carry traffic at any power, and the P0 cap
    # additionally requires the BS downlink power th1/g² to fit the supply
    rf = rate_factors(params)
    p0 = params.p0_watts
    out = []
    for i in members:
        g = float(real.g_sq[i])
        if g <= 0.0:
            continue
        if cap_at_p0 and p0 * g < rf.th1:
            continue
        out.append(i)
    return tuple(out)


def _direct_supported(params: SystemParams, real: ChannelRealization) -> bool:
    rf = rate_factors(params)
    return params.p0_watts * real.h_direct_sq >= rf.th_direct


def _fallback(
    scheme: str,
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    sets: CandidateSets,
) -> SelectionOutcome:
    # no usable relay candidate: direct transmission if it closes at P0
    if _direct_supported(params, real):
        comps = direct_energy_components(profile, params, real)
        return SelectionOutcome(
            decision=DECISION_DIRECT,
            scheme=scheme,
            relay_index=None,
            candidate_sets=sets,
            energy_per_bit=comps.weighted_total(profile),
            selection_metric=weighted_energy_direct(profile, params, real),
            components=comps,
        )
    return SelectionOutcome(
        decision=DECISION_OUTAGE,
        scheme=scheme,
        relay_index=None,
        candidate_sets=sets,
    )


def _relay_outcome(
    scheme: str,
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    index: int,
    sets: CandidateSets,
    cap_at_p0: bool,
) -> SelectionOutcome:
    alloc = allocate_powers(params, real, index, cap_at_p0=cap_at_p0)
    comps = coop_energy_components(profile, params, real, index)
    return SelectionOutcome(
        decision=DECISION_RELAY,
        scheme=scheme,
        relay_index=index,
        candidate_sets=sets,
        powers=alloc,
        energy_per_bit=comps.weighted_total(profile),
        selection_metric=weighted_energy_coop(profile, params, real, index),
        components=comps,
    )


def _candidate_sets(params, real):
    gamma = form_gamma(params, real)
    sigma = form_sigma(params, real, gamma)
    return CandidateSets(gamma, sigma)


def select_judrs(
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    cap_at_p0: bool = False,
) -> SelectionOutcome:
    """Energy-minimizing joint selection for uplink and downlink.

    Picks the candidate relay with the lowest closed-form weighted energy and
    compares it against direct transmission, preferring direct on ties.  With
    no candidate, falls back to direct if the direct link supports rate R at
    full power, otherwise reports outage.  Relay ties break to the lowest
    index.
    """
    sets = _candidate_sets(params, real)
    usable = _selectable(params, real, sets.sigma, cap_at_p0)
    best_i = None
    best_m = math.inf
    for i in usable:
        m = weighted_energy_coop(profile, params, real, i)
        if math.isfinite(m) and m < best_m:
            best_m = m
            best_i = i
    if best_i is None:
        return _fallback(SCHEME_JUDRS, profile, params, real, sets)
    e_direct = weighted_energy_direct(profile, params, real)
    direct_option = real.h_direct_sq > 0.0 and (
        not cap_at_p0 or _direct_supported(params, real)
    )
    if direct_option and e_direct <= best_m:
        comps = direct_energy_components(profile, params, real)
        return SelectionOutcome(
            decision=DECISION_DIRECT,
            scheme=SCHEME_JUDRS,
            relay_index=None,
            candidate_sets=sets,
            energy_per_bit=comps.weighted_total(profile),
            selection_metric=e_direct,
            components=comps,
        )
    return _relay_outcome(SCHEME_JUDRS, profile, params, real, best_i, sets, cap_at_p0)


def _select_by_channel_metric(
    scheme: str,
    metric_fn,
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    cap_at_p0: bool,
    baselines_over_gamma: bool,
) -> SelectionOutcome:
    sets = _candidate_sets(params, real)
    # the P0 cap re-imposes the second-hop requirement the gamma variant
    # drops, so capped membership is the sigma-based one either way
    members = sets.gamma if (baselines_over_gamma and not cap_at_p0) else sets.sigma
    usable = _selectable(params, real, members, cap_at_p0)
    best_i = None
    best_m = -math.inf
    for i in usable:
        m = metric_fn(float(real.h_sq[i]), float(real.g_sq[i]))
        if m > best_m:
            best_m = m
            best_i = i
    if best_i is None:
        return _fallback(scheme, profile, params, real, sets)
    return _relay_outcome(scheme, profile, params, real, best_i, sets, cap_at_p0)


def select_best_worse(
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    cap_at_p0: bool = False,
    baselines_over_gamma: bool = False,
) -> SelectionOutcome:
    """Pick the candidate whose weaker hop gain min(h², g²) is largest."""
    return _select_by_channel_metric(
        SCHEME_BEST_WORSE,
        lambda h, g: min(h, g),
        profile,
        params,
        real,
        cap_at_p0,
        baselines_over_gamma,
    )


def select_harmonic_mean(
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    cap_at_p0: bool = False,
    baselines_over_gamma: bool = False,
) -> SelectionOutcome:
    """Pick the candidate maximizing (1/h² + 1/g²)^-1 = h²g²/(h²+g²)."""
    return _select_by_channel_metric(
        SCHEME_HARMONIC_MEAN,
        lambda h, g: h * g / (h + g),
        profile,
        params,
        real,
        cap_at_p0,
        baselines_over_gamma,
    )


def select_direct_only(
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
) -> SelectionOutcome:
    """Relaying disabled: direct transmission when it closes at P0, else outage."""
    sets = _candidate_sets(params, real)
    return _fallback(SCHEME_DIRECT_ONLY, profile, params, real, sets)
