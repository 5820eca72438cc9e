import math

import numpy as np
import pytest
import scipy.stats

import relaysim as rs
from relaysim.montecarlo import block_rng, realization_at

from conftest import norm_params


class TestMeanChannelGain:
    def test_table1_reference_distance(self, table1_params):
        # independent hand evaluation of the log-distance law at d0 with the
        # standard constants: gain product 10^0.5, wavelength c / 2.5 GHz
        lam = 2.99792458e8 / 2.5e9
        expected = 10**0.5 * (lam / (4.0 * math.pi)) ** 2
        got = rs.mean_channel_gain(table1_params, 1.0, 1.0)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(2.88e-4, rel=2e-3)

    def test_doubling_distance_scales_by_exponent(self, table1_params):
        g1 = rs.mean_channel_gain(table1_params, 100.0)
        g2 = rs.mean_channel_gain(table1_params, 200.0)
        assert g2 / g1 == pytest.approx(2.0**-3.76, rel=1e-12)
        assert g2 / g1 == pytest.approx(0.0738, rel=2e-3)

    def test_strictly_decreasing_in_distance(self, table1_params):
        d = np.linspace(1.0, 2000.0, 50)
        gains = [rs.mean_channel_gain(table1_params, x) for x in d]
        assert all(a > b for a, b in zip(gains, gains[1:]))

    def test_shadow_scales_linearly(self, table1_params):
        base = rs.mean_channel_gain(table1_params, 300.0, 1.0)
        assert rs.mean_channel_gain(table1_params, 300.0, 2.5) == pytest.approx(
            2.5 * base, rel=1e-12
        )

    @pytest.mark.parametrize("distance,shadow", [(0.0, 1.0), (-5.0, 1.0), (10.0, 0.0), (10.0, -1.0)])
    def test_domain_errors(self, table1_params, distance, shadow):
        with pytest.raises(ValueError):
            rs.mean_channel_gain(table1_params, distance, shadow)


class TestGeneralSnr:
    def test_table1_value(self, table1_params):
        # 24 dBm over (-171 dBm/Hz * 180 kHz), evaluated independently
        p0 = 10 ** (24.0 / 10.0) * 1e-3
        n0b = 10 ** (-171.0 / 10.0) * 1e-3 * 180e3
        assert rs.general_snr(table1_params) == pytest.approx(p0 / n0b, rel=1e-12)
        assert rs.general_snr(table1_params) == pytest.approx(1.757e14, rel=1e-3)

    def test_unit_case(self):
        params = norm_params(r=1.0, p0=1.0)
        assert rs.general_snr(params) == 1.0

    def test_linear_in_power(self):
        a = rs.general_snr(norm_params(r=1.0, p0=3.0))
        b = rs.general_snr(norm_params(r=1.0, p0=6.0))
        assert b == pytest.approx(2.0 * a, rel=1e-12)


class TestSystemParams:
    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            rs.SystemParams(
                p0_watts=0.0,
                bandwidth_hz=1.0,
                noise_psd_w_per_hz=1.0,
                spectral_efficiency_r=1.0,
                carrier_wavelength_m=1.0,
                antenna_gain_product=1.0,
            )

    def test_rejects_small_path_loss_exponent(self):
        with pytest.raises(ValueError):
            rs.SystemParams(
                p0_watts=1.0,
                bandwidth_hz=1.0,
                noise_psd_w_per_hz=1.0,
                spectral_efficiency_r=1.0,
                carrier_wavelength_m=1.0,
                antenna_gain_product=1.0,
                path_loss_exponent=1.5,
            )

    def test_shadowing_sigma_zero_allowed(self, table1_params):
        assert table1_params.shadowing_sigma_db == 0.0


class TestTopology:
    def test_coincident_nodes_rejected(self):
        with pytest.raises(ValueError):
            rs.Topology((0.0, 0.0), (0.0, 0.0))
        with pytest.raises(ValueError):
            rs.Topology((0.0, 0.0), (10.0, 0.0), ((10.0, 0.0),))

    def test_random_disc_geometry(self):
        topo = rs.Topology.random_disc(450.0, 64, placement_seed=7)
        center = np.array([225.0, 0.0])
        for p in topo.relay_positions:
            assert np.linalg.norm(np.array(p) - center) <= 225.0
        assert topo.ms_bs_distance() == pytest.approx(450.0)

    def test_random_disc_deterministic(self):
        a = rs.Topology.random_disc(450.0, 8, placement_seed=3)
        b = rs.Topology.random_disc(450.0, 8, placement_seed=3)
        assert a == b
        c = rs.Topology.random_disc(450.0, 8, placement_seed=4)
        assert a != c


class TestBuildLinkStatistics:
    def test_equidistant_relays_get_equal_rates(self, table1_params):
        topo = rs.Topology(
            (0.0, 0.0), (100.0, 0.0), ((50.0, 40.0), (50.0, -40.0))
        )
        stats = rs.build_link_statistics(table1_params, topo)
        assert stats.lambda_ms_relay[0] == pytest.approx(stats.lambda_ms_relay[1], rel=1e-12)
        assert stats.lambda_relay_bs[0] == pytest.approx(stats.lambda_relay_bs[1], rel=1e-12)

    def test_rates_match_mean_gain(self, table1_params):
        topo = rs.Topology((0.0, 0.0), (120.0, 0.0), ((30.0, 10.0),))
        stats = rs.build_link_statistics(table1_params, topo)
        assert 1.0 / stats.lambda_direct == pytest.approx(
            rs.mean_channel_gain(table1_params, 120.0), rel=1e-12
        )
        d = math.dist((0.0, 0.0), (30.0, 10.0))
        assert 1.0 / stats.lambda_ms_relay[0] == pytest.approx(
            rs.mean_channel_gain(table1_params, d), rel=1e-12
        )

    def test_no_shadowing_is_deterministic(self, table1_params):
        topo = rs.Topology((0.0, 0.0), (100.0, 0.0), ((40.0, 5.0),))
        a = rs.build_link_statistics(table1_params, topo)
        b = rs.build_link_statistics(table1_params, topo)
        assert a.lambda_direct == b.lambda_direct
        assert np.array_equal(a.lambda_ms_relay, b.lambda_ms_relay)

    def test_zero_relays(self, table1_params):
        topo = rs.Topology((0.0, 0.0), (100.0, 0.0))
        stats = rs.build_link_statistics(table1_params, topo)
        assert stats.n_relays == 0
        assert stats.lambda_direct > 0

    def test_shadowing_needs_draws_or_rng(self):
        params = rs.SystemParams.from_db_units(shadowing_sigma_db=8.0)
        topo = rs.Topology((0.0, 0.0), (100.0, 0.0), ((40.0, 5.0),))
        with pytest.raises(ValueError):
            rs.build_link_statistics(params, topo)
        stats = rs.build_link_statistics(params, topo, rng=np.random.default_rng(1))
        assert stats.n_relays == 1


class TestSampling:
    def test_empirical_mean_within_one_percent(self):
        stats = rs.LinkStatistics(
            lambda_direct=2.0,
            lambda_ms_relay=np.array([0.5]),
            lambda_relay_bs=np.array([4.0]),
        )
        rng = np.random.default_rng(1234)
        h_d, h, g = rs.sample_gain_block(stats, rng, 1_000_000)
        assert h_d.mean() == pytest.approx(1.0 / 2.0, rel=0.01)
        assert h.mean() == pytest.approx(1.0 / 0.5, rel=0.01)
        assert g.mean() == pytest.approx(1.0 / 4.0, rel=0.01)

    def test_trial_realization_is_pure_function_of_seed_and_index(self):
        stats = rs.LinkStatistics.iid(3)
        key = (99, 1, 3)
        a = realization_at(stats, key, 70_000)
        b = realization_at(stats, key, 70_000)
        assert a.h_direct_sq == b.h_direct_sq
        assert np.array_equal(a.h_sq, b.h_sq)
        assert np.array_equal(a.g_sq, b.g_sq)
        c = realization_at(stats, key, 70_001)
        assert c.h_direct_sq != a.h_direct_sq

    def test_degenerate_rate_limit(self):
        stats = rs.LinkStatistics.iid(2, lam=1e12)
        rng = np.random.default_rng(5)
        h_d, h, g = rs.sample_gain_block(stats, rng, 1000)
        assert h_d.max() < 1e-9
        assert h.max() < 1e-9

    def test_reciprocity_single_gain_per_link(self):
        # one stored gain per link is the reciprocity contract: any consumer
        # reading the UL and DL gain of a link sees the same value
        real = rs.sample_realization(rs.LinkStatistics.iid(2), np.random.default_rng(0))
        ul_view = real.h_sq
        dl_view = real.h_sq
        assert ul_view is dl_view

    def test_gains_follow_exponential_law(self):
        stats = rs.LinkStatistics(
            lambda_direct=1.5,
            lambda_ms_relay=np.array([0.7]),
            lambda_relay_bs=np.array([2.2]),
        )
        rng = np.random.default_rng(42)
        h_d, h, g = rs.sample_gain_block(stats, rng, 100_000)
        for sample, lam in ((h_d, 1.5), (h[:, 0], 0.7), (g[:, 0], 2.2)):
            stat = scipy.stats.kstest(sample, "expon", args=(0.0, 1.0 / lam))
            assert stat.pvalue > 0.01

    def test_block_rng_streams_differ(self):
        a = block_rng((1, 2, 3), 0).standard_normal(4)
        b = block_rng((1, 2, 3), 1).standard_normal(4)
        assert not np.array_equal(a, b)
