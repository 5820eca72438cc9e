"""Numba-compiled implementations of the Monte Carlo hot loops.

Kept expression-for-expression in sync with ``_kernels_numpy`` so the two
backends return bit-identical arrays.  Kernels release the GIL, letting the
thread-pool driver overlap sampling and evaluation.
"""

from __future__ import annotations

import numpy as np
from numba import njit

DEC_DIRECT = -1
DEC_OUTAGE = -2


@njit(cache=True, nogil=True)
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
    n_trials, n_relays = h.shape
    decisions = np.empty((n_trials, 3), np.int32)
    e_ms = np.zeros((n_trials, 3), np.float64)
    e_relay = np.zeros((n_trials, 3), np.float64)
    e_bs = np.zeros((n_trials, 3), np.float64)
    e_total = np.zeros((n_trials, 3), np.float64)
    metric_out = np.full((n_trials, 3), np.nan)
    gamma_size = np.zeros(n_trials, np.int32)

    gamma_base = over_gamma and not cap

    for b in range(n_trials):
        hd = h_d[b]
        t = 0
        j_idx = -1
        j_metric = np.inf
        bw_idx = -1
        bw_best = -np.inf
        hm_idx = -1
        hm_best = -np.inf
        for i in range(n_relays):
            hi = h[b, i]
            if p0 * hi >= th1:
                in_gamma = True
                t += 1
            else:
                in_gamma = False
            if not in_gamma:
                continue
            gi = g[b, i]
            if gi <= 0.0:
                continue
            th2 = th1 * (1.0 - hd / hi)
            in_sigma = p0 * gi >= th2
            if cap:
                in_sigma = in_sigma and p0 * gi >= th1
            member = in_gamma if gamma_base else in_sigma
            if in_sigma:
                m = ef * (a_c / hi + b_c / gi - wr * hd / (hi * gi))
                if np.isfinite(m) and m < j_metric:
                    j_metric = m
                    j_idx = i
            if member:
                w = min(hi, gi)
                if w > bw_best:
                    bw_best = w
                    bw_idx = i
                hm = hi * gi / (hi + gi)
                if hm > hm_best:
                    hm_best = hm
                    hm_idx = i
        gamma_size[b] = t

        if hd > 0.0:
            e_dir_metric = ed * d_c / hd
        else:
            e_dir_metric = np.inf
        dir_support = p0 * hd >= thd
        dir_option = hd > 0.0 and ((not cap) or dir_support)

        for s in range(3):
            if s == 0:
                idx = j_idx
                take_direct = (
                    j_idx >= 0 and dir_option and e_dir_metric <= j_metric
                )
            elif s == 1:
                idx = bw_idx
                take_direct = False
            else:
                idx = hm_idx
                take_direct = False

            if idx >= 0 and not take_direct:
                hi = h[b, idx]
                gi = g[b, idx]
                th2i = th1 * (1.0 - hd / hi)
                th3i = th1 * (1.0 - hd / gi)
                ems = zeta * (th1 / hi) * inv2rb
                erel = (
                    zeta * (max(th2i, 0.0) / gi)
                    + (1.0 - zeta) * (max(th3i, 0.0) / hi)
                ) * inv2rb
                ebs = (1.0 - zeta) * (th1 / gi) * inv2rb
                decisions[b, s] = idx
                e_ms[b, s] = ems
                e_relay[b, s] = erel
                e_bs[b, s] = ebs
                metric_out[b, s] = ef * (
                    a_c / hi + b_c / gi - wr * hd / (hi * gi)
                )
            elif take_direct or dir_support:
                p_dir = thd / hd
                decisions[b, s] = DEC_DIRECT
                e_ms[b, s] = zeta * p_dir * invrb
                e_bs[b, s] = (1.0 - zeta) * p_dir * invrb
                metric_out[b, s] = e_dir_metric
            else:
                decisions[b, s] = DEC_OUTAGE
            e_total[b, s] = wm * e_ms[b, s] + wr * e_relay[b, s] + wb * e_bs[b, s]
    return decisions, e_ms, e_relay, e_bs, e_total, metric_out, gamma_size


@njit(cache=True, nogil=True)
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
    n_trials, n_relays = h.shape
    n_points = thr_gain.shape[0]
    ul = np.zeros((n_trials, n_points), np.bool_)
    dl = np.zeros((n_trials, n_points), np.bool_)
    gamma_size = np.zeros((n_trials, n_points), np.int32)

    for b in range(n_trials):
        hd = h_d[b]
        for p in range(n_points):
            bg = thr_gain[p]
            bd = thr_direct[p]
            dfail = hd < bd
            if not rule_judrs:
                t_ul = 0
                g_best = -np.inf
                t_dl = 0
                h_best = -np.inf
                for i in range(n_relays):
                    hi = h[b, i]
                    gi = g[b, i]
                    if hi >= bg:
                        t_ul += 1
                        if gi > g_best:
                            g_best = gi
                    if gi >= bg:
                        t_dl += 1
                        if hi > h_best:
                            h_best = hi
                gamma_size[b, p] = t_ul
                ul[b, p] = dfail and (t_ul == 0 or hd + g_best < bg)
                dl[b, p] = dfail and (t_dl == 0 or hd + h_best < bg)
            else:
                t_ul = 0
                j_idx = -1
                j_metric = np.inf
                for i in range(n_relays):
                    hi = h[b, i]
                    if hi >= bg:
                        t_ul += 1
                    else:
                        continue
                    gi = g[b, i]
                    if gi <= 0.0:
                        continue
                    th2s = bg * (1.0 - hd / hi)
                    if gi >= th2s:
                        m = a_c / hi + b_c / gi - wr * hd / (hi * gi)
                        if np.isfinite(m) and m < j_metric:
                            j_metric = m
                            j_idx = i
                gamma_size[b, p] = t_ul
                if hd > 0.0:
                    e_dir = e_ratio * d_c / hd
                else:
                    e_dir = np.inf
                dir_support = hd >= bd
                if j_idx >= 0:
                    if hd > 0.0 and e_dir <= j_metric:
                        ul[b, p] = dfail
                        dl[b, p] = dfail
                    else:
                        ul[b, p] = dfail and hd + g[b, j_idx] < bg
                        dl[b, p] = dfail and hd + h[b, j_idx] < bg
                elif dir_support:
                    ul[b, p] = dfail
                    dl[b, p] = dfail
                else:
                    ul[b, p] = True
                    dl[b, p] = True
    return ul, dl, gamma_size
