"""Power thresholds, minimum-power allocation and weighted energy per bit.

A two-hop (cooperative) transfer runs at per-phase spectral efficiency 2R so
the end-to-end rate stays R; a direct transfer runs at R in a single phase.
Every transmitter is driven at the minimum power that closes its link, and
energies are weighted per node class (MS / relay / BS) and normalized per
delivered information bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .channel import ChannelRealization, SystemParams


class InfeasibleLinkError(ValueError):
    """A required hop has zero gain; the relay cannot serve the link."""


@dataclass(frozen=True)
class TrafficProfile:
    """Traffic split and per-node energy weights.

    ``zeta`` is the uplink share of the total load: L_UL = zeta * l_total_bits
    and L_DL = (1 - zeta) * l_total_bits.  Weights express how much each
    node's transmit energy counts; the battery-powered default weighs MS and
    relay fully and ignores the mains-powered BS.
    """

    zeta: float
    l_total_bits: float = 1e6
    weight_ms: float = 1.0
    weight_relay: float = 1.0
    weight_bs: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.zeta <= 1.0:
            raise ValueError(f"zeta must be in [0, 1], got {self.zeta!r}")
        if not self.l_total_bits > 0.0:
            raise ValueError("l_total_bits must be > 0")
        weights = (self.weight_ms, self.weight_relay, self.weight_bs)
        if any(w < 0.0 for w in weights):
            raise ValueError("weights must be >= 0")
        if not any(w > 0.0 for w in weights):
            raise ValueError("at least one weight must be > 0")

    @property
    def l_ul_bits(self) -> float:
        return self.zeta * self.l_total_bits

    @property
    def l_dl_bits(self) -> float:
        return (1.0 - self.zeta) * self.l_total_bits


class RateFactors(NamedTuple):
    """Precomputed rate-dependent constants, shared by the scalar API and the
    batch kernels so both paths produce bit-identical numbers.

    th1        received-power threshold of a 2R hop: N0*B*(2^(2R)-1), W
    th_direct  received-power threshold of a rate-R hop: N0*B*(2^R-1), W
    ef_coef    cooperative energy prefactor N0*(2^(2R)-1)/(2R), J/bit per 1/gain
    ed_coef    direct energy prefactor N0*(2^R-1)/R
    inv_2rb    1/(2*R*B), converts a power to per-bit energy of one 2R phase
    inv_rb     1/(R*B), same for the single-phase direct transfer
    """

    th1: float
    th_direct: float
    ef_coef: float
    ed_coef: float
    inv_2rb: float
    inv_rb: float


def rate_factors(params: SystemParams) -> RateFactors:
    r = params.spectral_efficiency_r
    n0 = params.noise_psd_w_per_hz
    b = params.bandwidth_hz
    x2r = 2.0 ** (2.0 * r) - 1.0
    xr = 2.0**r - 1.0
    return RateFactors(
        th1=n0 * b * x2r,
        th_direct=n0 * b * xr,
        ef_coef=n0 * x2r / (2.0 * r),
        ed_coef=n0 * xr / r,
        inv_2rb=1.0 / (2.0 * r * b),
        inv_rb=1.0 / (r * b),
    )


@dataclass(frozen=True)
class PowerAllocation:
    """Minimum transmit powers for one relay candidate (W), with the raw
    thresholds they were derived from.  ``feasible`` is False only when the
    P0 cap is enabled and some power would exceed it."""

    p_ms_ul: float
    p_relay_ul: float
    p_bs_dl: float
    p_relay_dl: float
    th1: float
    th2: float
    th3: float
    feasible: bool = True


def thresholds(
    params: SystemParams, real: ChannelRealization, relay_index: int
) -> tuple[float, float, float]:
    """Received-power thresholds governing relay ``relay_index``.

    th1 is the absolute requirement of a 2R hop; th2 and th3 discount it by
    what the direct link already delivers, for the relay's transmit hop
    toward BS and toward MS respectively.  th2/th3 go negative when the
    direct gain exceeds the corresponding first-hop gain.
    """
    rf = rate_factors(params)
    h = float(real.h_sq[relay_index])
    g = float(real.g_sq[relay_index])
    if h <= 0.0 or g <= 0.0:
        raise InfeasibleLinkError(
            f"relay {relay_index} has a zero-gain hop (h²={h}, g²={g})"
        )
    hd = real.h_direct_sq
    th2 = rf.th1 * (1.0 - hd / h)
    th3 = rf.th1 * (1.0 - hd / g)
    return rf.th1, th2, th3


def allocate_powers(
    params: SystemParams,
    real: ChannelRealization,
    relay_index: int,
    cap_at_p0: bool = False,
) -> PowerAllocation:
    """Minimum powers that close both directions through one relay.

    Negative thresholds clamp to zero transmit power: the direct-link
    contribution already meets the rate, and negative power is unphysical.
    With ``cap_at_p0`` the allocation is marked infeasible if any power
    exceeds the supply limit.
    """
    th1, th2, th3 = thresholds(params, real, relay_index)
    h = float(real.h_sq[relay_index])
    g = float(real.g_sq[relay_index])
    p_ms_ul = th1 / h
    p_relay_ul = max(th2, 0.0) / g
    p_bs_dl = th1 / g
    p_relay_dl = max(th3, 0.0) / h
    feasible = True
    if cap_at_p0:
        p0 = params.p0_watts
        feasible = max(p_ms_ul, p_relay_ul, p_bs_dl, p_relay_dl) <= p0
    return PowerAllocation(p_ms_ul, p_relay_ul, p_bs_dl, p_relay_dl, th1, th2, th3, feasible)


def weighted_energy_coop(
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    relay_index: int,
) -> float:
    """Closed-form weighted energy per bit of cooperation via one relay.

    E = N0*(2^(2R)-1)/(2R) * [ (z*wM + (1-z)*wR)/h² + (z*wR + (1-z)*wB)/g²
                               - wR*h_direct²/(h²*g²) ]

    This is the selection metric; it equals the assembly of the traffic-
    weighted power allocation whenever th2 and th3 are non-negative (no
    clamping active).
    """
    rf = rate_factors(params)
    h = float(real.h_sq[relay_index])
    g = float(real.g_sq[relay_index])
    if h <= 0.0 or g <= 0.0:
        raise InfeasibleLinkError(
            f"relay {relay_index} has a zero-gain hop (h²={h}, g²={g})"
        )
    z = profile.zeta
    a_c = z * profile.weight_ms + (1.0 - z) * profile.weight_relay
    b_c = z * profile.weight_relay + (1.0 - z) * profile.weight_bs
    hd = real.h_direct_sq
    return rf.ef_coef * (a_c / h + b_c / g - profile.weight_relay * hd / (h * g))


def weighted_energy_direct(
    profile: TrafficProfile, params: SystemParams, real: ChannelRealization
) -> float:
    """Weighted energy per bit of relaying-free direct transmission.

    E = N0*(2^R-1)/R * (z*wM + (1-z)*wB) / h_direct².  Returns +inf when the
    direct link is absent (zero gain): direct transmission is impossible.
    """
    hd = real.h_direct_sq
    if hd <= 0.0:
        return math.inf
    z = profile.zeta
    d_c = z * profile.weight_ms + (1.0 - z) * profile.weight_bs
    rf = rate_factors(params)
    return rf.ed_coef * d_c / hd


class EnergyComponents(NamedTuple):
    """Per-bit transmit energies by node (J/bit), before weighting."""

    e_ms: float
    e_relay: float
    e_bs: float

    def weighted_total(self, profile: TrafficProfile) -> float:
        return (
            profile.weight_ms * self.e_ms
            + profile.weight_relay * self.e_relay
            + profile.weight_bs * self.e_bs
        )


def coop_energy_components(
    profile: TrafficProfile,
    params: SystemParams,
    real: ChannelRealization,
    relay_index: int,
) -> EnergyComponents:
    """Node-by-node per-bit energies of cooperation from the clamped powers.

    MS transmits only in the uplink phase, BS only in the downlink phase,
    the relay in both; each phase runs at 2R over bandwidth B.
    """
    alloc = allocate_powers(params, real, relay_index)
    rf = rate_factors(params)
    z = profile.zeta
    e_ms = z * alloc.p_ms_ul * rf.inv_2rb
    e_relay = (z * alloc.p_relay_ul + (1.0 - z) * alloc.p_relay_dl) * rf.inv_2rb
    e_bs = (1.0 - z) * alloc.p_bs_dl * rf.inv_2rb
    return EnergyComponents(e_ms, e_relay, e_bs)


def direct_energy_components(
    profile: TrafficProfile, params: SystemParams, real: ChannelRealization
) -> EnergyComponents:
    """Node-by-node per-bit energies of direct transmission."""
    hd = real.h_direct_sq
    if hd <= 0.0:
        raise InfeasibleLinkError("direct link has zero gain")
    rf = rate_factors(params)
    p = rf.th_direct / hd
    z = profile.zeta
    return EnergyComponents(z * p * rf.inv_rb, 0.0, (1.0 - z) * p * rf.inv_rb)


def assemble_weighted_energy(
    profile: TrafficProfile, params: SystemParams, alloc: PowerAllocation
) -> float:
    """Weighted cooperative energy per bit assembled from explicit powers.

    (1/(2RB)) * [ z*(wM*P_M_ul + wR*P_R_ul) + (1-z)*(wR*P_R_dl + wB*P_B_dl) ].
    Used as the reporting path; with clamping inactive it agrees with the
    closed form of ``weighted_energy_coop``.
    """
    rf = rate_factors(params)
    z = profile.zeta
    return rf.inv_2rb * (
        z * (profile.weight_ms * alloc.p_ms_ul + profile.weight_relay * alloc.p_relay_ul)
        + (1.0 - z)
        * (profile.weight_relay * alloc.p_relay_dl + profile.weight_bs * alloc.p_bs_dl)
    )
