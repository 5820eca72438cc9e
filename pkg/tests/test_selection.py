import math

import numpy as np
import pytest

import relaysim as rs

from conftest import norm_params, realization

P_HALF = norm_params(r=0.5, p0=1.0)  # th1 = 1 W at unit N0*B
P_OPEN = norm_params(r=0.5, p0=1e12)  # effectively unconstrained decoding
PROFILE = rs.TrafficProfile(zeta=0.5, weight_ms=1, weight_relay=1, weight_bs=0)


def log2_threshold_params(th1: float, p0: float = 1.0) -> rs.SystemParams:
    # pick R so that N0*B*(2^(2R)-1) equals the wanted threshold exactly
    r = math.log2(th1 + 1.0) / 2.0
    return norm_params(r=r, p0=p0)


class TestFormGamma:
    def test_direct_substitution_example(self):
        params = log2_threshold_params(0.5)
        real = realization(0.0, [0.6, 0.4, 0.7], [1.0, 1.0, 1.0])
        assert rs.form_gamma(params, real) == (0, 2)

    def test_all_zero_gains(self):
        real = realization(0.0, [0.0, 0.0], [1.0, 1.0])
        assert rs.form_gamma(P_HALF, real) == ()

    def test_boundary_is_inclusive(self):
        real = realization(0.0, [1.0, 1.0 - 1e-12], [1.0, 1.0])
        assert rs.form_gamma(P_HALF, real) == (0,)


class TestFormSigma:
    def test_no_direct_link_reduces_to_th1(self):
        real = realization(0.0, [2.0, 2.0], [1.0, 0.5])
        gamma = rs.form_gamma(P_HALF, real)
        assert gamma == (0, 1)
        assert rs.form_sigma(P_HALF, real, gamma) == (0,)

    def test_nonpositive_threshold_admits_any_gain(self):
        # direct at least as strong as the first hop: th2 <= 0
        real = realization(2.0, [2.0], [1e-9])
        gamma = rs.form_gamma(P_HALF, real)
        assert rs.form_sigma(P_HALF, real, gamma) == (0,)

    def test_substitution_gives_empty_set(self):
        real = realization(0.5, [1.0, 2.0], [0.4, 0.6])
        gamma = rs.form_gamma(P_HALF, real)
        assert gamma == (0, 1)
        assert rs.form_sigma(P_HALF, real, gamma) == ()

    def test_subset_of_gamma(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            real = realization(
                rng.exponential(0.5), rng.exponential(1.0, 4), rng.exponential(1.0, 4)
            )
            gamma = rs.form_gamma(P_HALF, real)
            sigma = rs.form_sigma(P_HALF, real, gamma)
            assert set(sigma) <= set(gamma)


class TestSelectJudrs:
    def test_brute_force_two_relay_example(self):
        profile = rs.TrafficProfile(zeta=1.0, weight_ms=1, weight_relay=1, weight_bs=0)
        real = realization(0.0, [1.0, 2.0], [1.0, 2.0])
        out = rs.select_judrs(profile, P_OPEN, real)
        assert out.decision == "relay"
        assert out.relay_index == 1
        assert out.selection_metric == pytest.approx(1.0, rel=1e-12)
        assert out.energy_per_bit == pytest.approx(1.0, rel=1e-12)

    def test_equal_energies_pick_lowest_index(self):
        real = realization(0.0, [1.0, 1.0], [1.0, 1.0])
        out = rs.select_judrs(PROFILE, P_OPEN, real)
        assert out.decision == "relay"
        assert out.relay_index == 0

    def test_no_candidates_and_weak_direct_is_outage(self):
        real = realization(0.1, [0.1], [1.0])  # 0.1 < th1=1 and 0.1 < th_direct
        out = rs.select_judrs(PROFILE, P_HALF, real)
        assert out.decision == "outage"
        assert out.energy_per_bit is None
        assert out.selection_metric is None

    def test_no_candidates_with_supported_direct(self):
        real = realization(0.9, [0.1], [1.0])  # 0.9 >= th_direct = 2^0.5-1
        out = rs.select_judrs(PROFILE, P_HALF, real)
        assert out.decision == "direct"
        assert out.energy_per_bit == pytest.approx(
            rs.weighted_energy_direct(PROFILE, P_HALF, real), rel=1e-12
        )

    def test_direct_preferred_when_cheaper(self):
        # direct gain just below the hops: thresholds stay non-negative and
        # the direct option is the cheaper one (0.46 vs 0.6)
        real = realization(0.9, [1.0], [1.0])
        out = rs.select_judrs(PROFILE, P_OPEN, real)
        assert out.decision == "direct"

    def test_raw_closed_form_can_go_negative_and_wins(self):
        # with the direct gain far above both hops the closed form turns
        # negative; selection uses it as written, and the reported energy
        # comes from the clamped powers, which stay non-negative
        real = realization(1e6, [1.0], [1.0])
        out = rs.select_judrs(PROFILE, P_OPEN, real)
        assert out.decision == "relay"
        assert out.selection_metric < 0.0
        assert out.energy_per_bit >= 0.0

    def test_decision_belongs_to_sigma(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            real = realization(
                rng.exponential(0.3), rng.exponential(1.0, 5), rng.exponential(1.0, 5)
            )
            out = rs.select_judrs(PROFILE, P_HALF, real)
            if out.decision == "relay":
                assert out.relay_index in out.candidate_sets.sigma
                assert out.energy_per_bit is not None
            elif out.decision == "outage":
                assert out.energy_per_bit is None

    def test_direct_preference_contract(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            real = realization(
                rng.exponential(1.0), rng.exponential(1.0, 3), rng.exponential(1.0, 3)
            )
            out = rs.select_judrs(PROFILE, P_OPEN, real)
            if out.decision != "relay":
                continue
            e_direct = rs.weighted_energy_direct(PROFILE, P_OPEN, real)
            assert e_direct > out.selection_metric


class TestBaselines:
    def test_best_worse_example(self):
        real = realization(0.0, [0.81, 0.25], [0.04, 0.36])
        out = rs.select_best_worse(PROFILE, P_OPEN, real)
        assert out.decision == "relay"
        assert out.relay_index == 1

    def test_best_worse_singleton(self):
        real = realization(0.0, [0.5], [0.7])
        out = rs.select_best_worse(PROFILE, P_OPEN, real)
        assert out.relay_index == 0

    def test_best_worse_tie_picks_lowest_index(self):
        real = realization(0.0, [0.5, 0.5], [0.5, 0.5])
        out = rs.select_best_worse(PROFILE, P_OPEN, real)
        assert out.relay_index == 0

    def test_harmonic_mean_example(self):
        real = realization(0.0, [0.81, 0.25], [0.04, 0.36])
        # 1/(1/0.81 + 1/0.04) = 0.0381 vs 1/(1/0.25 + 1/0.36) = 0.1475
        out = rs.select_harmonic_mean(PROFILE, P_OPEN, real)
        assert out.relay_index == 1

    def test_harmonic_mean_symmetric_orders_by_gain(self):
        real = realization(0.0, [0.4, 0.9, 0.6], [0.4, 0.9, 0.6])
        out = rs.select_harmonic_mean(PROFILE, P_OPEN, real)
        assert out.relay_index == 1

    def test_zero_second_hop_never_selected(self):
        # relay 0 has a huge first hop but a dead second hop; a dead hop
        # cannot carry traffic at any power, so relay 1 must win
        real = realization(2.0, [100.0, 1.0], [0.0, 1.0])
        for select in (rs.select_harmonic_mean, rs.select_best_worse, rs.select_judrs):
            out = select(PROFILE, P_OPEN, real)
            assert out.relay_index == 1

    def test_all_dead_second_hops_fall_back(self):
        real = realization(2.0, [100.0, 50.0], [0.0, 0.0])
        for select in (rs.select_harmonic_mean, rs.select_best_worse, rs.select_judrs):
            out = select(PROFILE, P_OPEN, real)
            assert out.decision == "direct"  # direct supported at this gain

    def test_baselines_never_take_direct_with_candidates(self):
        real = realization(1e6, [1.0], [1.0])  # direct would be far cheaper
        assert rs.select_best_worse(PROFILE, P_OPEN, real).decision == "relay"
        assert rs.select_harmonic_mean(PROFILE, P_OPEN, real).decision == "relay"

    def test_gamma_baseline_flag_widens_candidates(self):
        # relay 0 in gamma but not sigma; sigma-based baselines fall back to
        # direct, gamma-based ones still relay
        real = realization(0.5, [1.0], [0.4])
        gamma = rs.form_gamma(P_HALF, real)
        assert rs.form_sigma(P_HALF, real, gamma) == ()
        out_sigma = rs.select_best_worse(PROFILE, P_HALF, real)
        assert out_sigma.decision == "direct"
        out_gamma = rs.select_best_worse(PROFILE, P_HALF, real, baselines_over_gamma=True)
        assert out_gamma.decision == "relay"
        assert out_gamma.relay_index == 0


class TestCapFlag:
    def test_cap_excludes_overbudget_bs_power(self):
        # th1/g = 1/0.5 = 2 > P0 = 1: with the cap the candidate is dropped
        real = realization(0.9, [2.0], [0.5])
        out = rs.select_judrs(PROFILE, P_HALF, real, cap_at_p0=True)
        assert out.decision == "direct"
        out_nocap = rs.select_judrs(PROFILE, P_HALF, real, cap_at_p0=False)
        assert out_nocap.decision in ("relay", "direct")

    def test_cap_keeps_feasible_allocations(self):
        real = realization(0.5, [2.0], [2.0])
        out = rs.select_judrs(PROFILE, P_HALF, real, cap_at_p0=True)
        if out.decision == "relay":
            alloc = out.powers
            assert max(
                alloc.p_ms_ul, alloc.p_relay_ul, alloc.p_bs_dl, alloc.p_relay_dl
            ) <= P_HALF.p0_watts + 1e-15


class TestDirectOnly:
    def test_direct_when_supported(self):
        out = rs.select_direct_only(PROFILE, P_HALF, realization(0.9, [2.0], [2.0]))
        assert out.decision == "direct"
        assert out.scheme == "direct_only"

    def test_outage_when_unsupported(self):
        out = rs.select_direct_only(PROFILE, P_HALF, realization(0.1, [2.0], [2.0]))
        assert out.decision == "outage"


class TestDominance:
    def test_removing_relays_never_helps(self):
        # the minimum over a relay subset is at least the minimum over the
        # full set, realization by realization
        rng = np.random.default_rng(31)
        for _ in range(200):
            h = rng.exponential(1.0, 5)
            g = rng.exponential(1.0, 5)
            hd = rng.exponential(0.3)
            vals = []
            for k in (2, 3, 5):
                out = rs.select_judrs(PROFILE, P_HALF, realization(hd, h[:k], g[:k]))
                vals.append(
                    math.inf if out.decision == "outage" else out.selection_metric
                )
            assert vals[0] >= vals[1] >= vals[2]

    def test_judrs_metric_never_above_baselines(self):
        rng = np.random.default_rng(21)
        strict = 0
        total = 0
        for _ in range(500):
            real = realization(
                rng.exponential(0.5), rng.exponential(1.0, 5), rng.exponential(1.0, 5)
            )
            j = rs.select_judrs(PROFILE, P_HALF, real)
            b = rs.select_best_worse(PROFILE, P_HALF, real)
            h = rs.select_harmonic_mean(PROFILE, P_HALF, real)
            vals = []
            for out in (j, b, h):
                vals.append(math.inf if out.decision == "outage" else out.selection_metric)
            assert vals[0] <= vals[1]
            assert vals[0] <= vals[2]
            total += 1
            if vals[0] < min(vals[1], vals[2]):
                strict += 1
        assert strict > 0.05 * total
