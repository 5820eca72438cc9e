"""Vectorized numpy implementations of the Monte Carlo hot loops.

These mirror the numba kernels operation for operation (same expression
trees, same tie-breaking) so both backends produce bit-identical outputs for
a given block of channel draws.  Selected via RELAYSIM_BACKEND=numpy or when
numba is unavailable.
"""

from __future__ import annotations

import numpy as np

DEC_DIRECT = -1
DEC_OUTAGE = -2


def energy_selection_block(
    h_d,
    h,
    g,
    p0,
    th1,
    thd,
    ef,
    ed,
    inv2rb,
    invrb,
    zeta,
    wm,
    wr,
    wb,
    a_c,
    b_c,
    d_c,
    cap,
    over_gamma,
):
    """Run the three selection schemes on a block of realizations.

    Returns (decisions, e_ms, e_relay, e_bs, e_total, metric, gamma_size);
    per-scheme arrays are (trials, 3) ordered judrs, best_worse,
    harmonic_mean.  Decisions hold the relay index, -1 for direct, -2 for
    outage; energies are zero on outage rows and metric is NaN there.
    """
    n_trials, n_relays = h.shape
    rows = np.arange(n_trials)
    hd_col = h_d[:, None]

    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        in_gamma = p0 * h >= th1
        gamma_size = in_gamma.sum(axis=1).astype(np.int32)
        pos_g = g > 0.0
        th2 = th1 * (1.0 - hd_col / h)
        in_sigma = in_gamma & pos_g & (p0 * g >= th2)
        if cap:
            in_sigma = in_sigma & (p0 * g >= th1)
        sel = in_sigma
        base = (in_gamma & pos_g) if (over_gamma and not cap) else in_sigma

        metric = ef * (a_c / h + b_c / g - wr * hd_col / (h * g))

        if n_relays > 0:
            m_sel = np.where(sel & np.isfinite(metric), metric, np.inf)
            j_idx = np.argmin(m_sel, axis=1)
            j_metric = m_sel[rows, j_idx]

            # NaN metrics are skipped, +inf ones kept: same candidate
            # semantics as the compiled loop's strict comparisons
            bw_raw = np.minimum(h, g)
            bw = np.where(base & ~np.isnan(bw_raw), bw_raw, -np.inf)
            bw_idx = np.argmax(bw, axis=1)
            bw_has = bw[rows, bw_idx] > -np.inf

            hm_raw = h * g / (h + g)
            hm = np.where(base & ~np.isnan(hm_raw), hm_raw, -np.inf)
            hm_idx = np.argmax(hm, axis=1)
            hm_has = hm[rows, hm_idx] > -np.inf
        else:
            j_idx = np.zeros(n_trials, dtype=np.intp)
            j_metric = np.full(n_trials, np.inf)
            bw_idx = hm_idx = j_idx
            bw_has = hm_has = np.zeros(n_trials, dtype=bool)
        j_has = np.isfinite(j_metric)

        e_dir_metric = np.where(h_d > 0.0, ed * d_c / h_d, np.inf)
        dir_support = p0 * h_d >= thd
        dir_option = (h_d > 0.0) & (dir_support if cap else True)

        judrs_direct = j_has & dir_option & (e_dir_metric <= j_metric)
        fb_direct = dir_support

        def decide(has_relay, idx, take_direct):
            return np.where(
                has_relay & ~take_direct,
                idx,
                np.where(take_direct | (~has_relay & fb_direct), DEC_DIRECT, DEC_OUTAGE),
            ).astype(np.int32)

        dec_j = decide(j_has, j_idx, judrs_direct)
        dec_bw = decide(bw_has, bw_idx, np.zeros(n_trials, dtype=bool))
        dec_hm = decide(hm_has, hm_idx, np.zeros(n_trials, dtype=bool))

        p_dir = thd / h_d
        e_ms_dir = zeta * p_dir * invrb
        e_bs_dir = (1.0 - zeta) * p_dir * invrb

        def components(dec, idx):
            if n_relays > 0:
                hi = h[rows, idx]
                gi = g[rows, idx]
                th2i = th1 * (1.0 - h_d / hi)
                th3i = th1 * (1.0 - h_d / gi)
                e_ms_r = zeta * (th1 / hi) * inv2rb
                e_rel_r = (
                    zeta * (np.maximum(th2i, 0.0) / gi)
                    + (1.0 - zeta) * (np.maximum(th3i, 0.0) / hi)
                ) * inv2rb
                e_bs_r = (1.0 - zeta) * (th1 / gi) * inv2rb
                m_r = metric[rows, idx]
            else:
                e_ms_r = e_rel_r = e_bs_r = m_r = np.zeros(n_trials)
            is_relay = dec >= 0
            is_direct = dec == DEC_DIRECT
            e_ms = np.where(is_relay, e_ms_r, np.where(is_direct, e_ms_dir, 0.0))
            e_rel = np.where(is_relay, e_rel_r, 0.0)
            e_bs = np.where(is_relay, e_bs_r, np.where(is_direct, e_bs_dir, 0.0))
            m = np.where(is_relay, m_r, np.where(is_direct, e_dir_metric, np.nan))
            e_tot = wm * e_ms + wr * e_rel + wb * e_bs
            return e_ms, e_rel, e_bs, e_tot, m

        parts = [
            components(dec_j, j_idx),
            components(dec_bw, bw_idx),
            components(dec_hm, hm_idx),
        ]

    decisions = np.stack([dec_j, dec_bw, dec_hm], axis=1)
    e_ms = np.stack([p[0] for p in parts], axis=1)
    e_relay = np.stack([p[1] for p in parts], axis=1)
    e_bs = np.stack([p[2] for p in parts], axis=1)
    e_total = np.stack([p[3] for p in parts], axis=1)
    metric_out = np.stack([p[4] for p in parts], axis=1)
    return decisions, e_ms, e_relay, e_bs, e_total, metric_out, gamma_size


def outage_block(
    h_d,
    h,
    g,
    thr_gain,
    thr_direct,
    rule_judrs,
    a_c,
    b_c,
    d_c,
    wr,
    e_ratio,
):
    """Uplink/downlink outage indicators for several SNR points at once.

    ``thr_gain[p]`` is the gain a 2R hop needs at full power and
    ``thr_direct[p]`` the gain the rate-R direct link needs; both scale as
    1/SNR, so one block of draws serves every point.  Returns boolean
    (trials, points) arrays for UL and DL plus the decoding-set size.
    """
    n_trials, n_relays = h.shape
    n_points = thr_gain.shape[0]
    rows = np.arange(n_trials)
    ul = np.zeros((n_trials, n_points), dtype=np.bool_)
    dl = np.zeros((n_trials, n_points), dtype=np.bool_)
    gamma_size = np.zeros((n_trials, n_points), dtype=np.int32)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        for p in range(n_points):
            bg = thr_gain[p]
            bd = thr_direct[p]
            dfail = h_d < bd
            in_gamma_ul = h >= bg
            t_ul = in_gamma_ul.sum(axis=1)
            gamma_size[:, p] = t_ul
            if not rule_judrs:
                if n_relays > 0:
                    g_best = np.max(np.where(in_gamma_ul, g, -np.inf), axis=1)
                    in_gamma_dl = g >= bg
                    t_dl = in_gamma_dl.sum(axis=1)
                    h_best = np.max(np.where(in_gamma_dl, h, -np.inf), axis=1)
                else:
                    g_best = h_best = np.full(n_trials, -np.inf)
                    t_dl = t_ul
                ul[:, p] = dfail & ((t_ul == 0) | (h_d + g_best < bg))
                dl[:, p] = dfail & ((t_dl == 0) | (h_d + h_best < bg))
            else:
                hd_col = h_d[:, None]
                if n_relays > 0:
                    th2s = bg * (1.0 - hd_col / h)
                    sel = in_gamma_ul & (g > 0.0) & (g >= th2s)
                    metric = a_c / h + b_c / g - wr * hd_col / (h * g)
                    m_sel = np.where(sel & np.isfinite(metric), metric, np.inf)
                    j_idx = np.argmin(m_sel, axis=1)
                    j_metric = m_sel[rows, j_idx]
                    g_sel = g[rows, j_idx]
                    h_sel = h[rows, j_idx]
                else:
                    j_idx = np.zeros(n_trials, dtype=np.intp)
                    j_metric = np.full(n_trials, np.inf)
                    g_sel = h_sel = np.zeros(n_trials)
                j_has = np.isfinite(j_metric)
                e_dir = np.where(h_d > 0.0, e_ratio * d_c / h_d, np.inf)
                dir_support = h_d >= bd
                take_direct = j_has & (h_d > 0.0) & (e_dir <= j_metric)
                relay = j_has & ~take_direct
                any_direct = take_direct | (~j_has & dir_support)
                no_option = ~j_has & ~dir_support
                ul[:, p] = no_option | (any_direct & dfail) | (
                    relay & dfail & (h_d + g_sel < bg)
                )
                dl[:, p] = no_option | (any_direct & dfail) | (
                    relay & dfail & (h_d + h_sel < bg)
                )
    return ul, dl, gamma_size
