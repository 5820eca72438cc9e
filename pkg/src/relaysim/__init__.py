"""Monte Carlo link-level simulator and analysis library for joint
uplink/downlink relay selection in cooperative cellular networks."""

from .backend import active_backend, set_backend
from .channel import (
    ChannelRealization,
    LinkStatistics,
    SystemParams,
    Topology,
    build_link_statistics,
    general_snr,
    mean_channel_gain,
    sample_gain_block,
    sample_realization,
)
from .energy import (
    EnergyComponents,
    InfeasibleLinkError,
    PowerAllocation,
    TrafficProfile,
    allocate_powers,
    assemble_weighted_energy,
    coop_energy_components,
    direct_energy_components,
    thresholds,
    weighted_energy_coop,
    weighted_energy_direct,
)
from .experiments import (
    CSV_HEADER,
    ConfigError,
    ResultRow,
    ScenarioConfig,
    emit_results,
    load_config,
    preset_config,
    run_dmt_check,
    run_energy_vs_relays,
    run_energy_vs_zeta,
    run_experiment,
    run_outage_sweep,
)
from .montecarlo import BLOCK_TRIALS, block_rng, realization_at, run_energy_mc
from .outage import (
    DmtPoint,
    EstimationError,
    OutageEstimate,
    direct_outage_closed_form,
    dmt_theoretical,
    estimate_diversity_slope,
    mutual_info_direct,
    mutual_info_two_hop,
    outage_probability_mc,
    outage_sweep,
    prob_gamma_size_closed_form,
)
from .selection import (
    CandidateSets,
    SelectionOutcome,
    form_gamma,
    form_sigma,
    select_best_worse,
    select_direct_only,
    select_harmonic_mean,
    select_judrs,
)

__version__ = "0.1.0"
