#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_backends.py [--trials 500000] [--relays 8]

Reports wall time and throughput of the two Monte Carlo hot loops (energy
selection and outage counting) under each backend, plus end-to-end time of a
reduced relay-count sweep.  The first numba call includes JIT compilation;
kernels are compiled with cache=True so later runs start warm.
"""

import argparse
import dataclasses
import time

import numpy as np

import relaysim as rs
from relaysim import backend
from relaysim.experiments import preset_config, run_energy_vs_relays
from relaysim.montecarlo import block_rng, run_outage_mc


def time_it(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(trials, n_relays):
    params = rs.SystemParams.from_db_units()
    profile = rs.TrafficProfile(zeta=0.5)
    sc = backend.selection_constants(params, profile)
    stats = rs.LinkStatistics.iid(n_relays)
    h_d, h, g = rs.sample_gain_block(stats, block_rng((0,), 0), trials)
    rho = 10.0 ** (np.array([10.0, 20.0, 30.0]) / 10.0)
    thr_gain = 3.0 / rho
    thr_direct = 1.0 / rho

    rows = []
    for name in ("numba", "numpy"):
        try:
            rs.set_backend(name)
            backend.energy_selection_block(h_d[:64], h[:64], g[:64], sc, False, False)
            backend.outage_block(
                h_d[:64], h[:64], g[:64], thr_gain, thr_direct, False,
                1.0, 0.5, 0.5, 1.0, 2.0 / 3.0,
            )  # warm-up / compile
            t_energy = time_it(
                lambda: backend.energy_selection_block(h_d, h, g, sc, False, False)
            )
            t_outage = time_it(
                lambda: backend.outage_block(
                    h_d, h, g, thr_gain, thr_direct, False,
                    1.0, 0.5, 0.5, 1.0, 2.0 / 3.0,
                )
            )
            rows.append((name, t_energy, t_outage))
        except RuntimeError as exc:
            print(f"{name}: skipped ({exc})")
        finally:
            rs.set_backend(None)

    print(f"\nkernel benchmark: {trials} trials, {n_relays} relays, 3 SNR points")
    print(f"{'backend':<8} {'energy kernel':>16} {'outage kernel':>16}")
    for name, t_e, t_o in rows:
        print(
            f"{name:<8} {t_e * 1e3:>10.1f} ms ({trials / t_e / 1e6:4.1f} M/s)"
            f" {t_o * 1e3:>10.1f} ms ({trials / t_o / 1e6:4.1f} M/s)"
        )
    return rows


def bench_end_to_end(trials):
    cfg = dataclasses.replace(preset_config("fig3a"), trials=trials)
    print(f"\nend-to-end relay-count sweep ({trials} trials/point, 8 points):")
    for name in ("numba", "numpy"):
        try:
            rs.set_backend(name)
            run_energy_vs_relays(cfg)  # warm-up
            t = time_it(lambda: run_energy_vs_relays(cfg), repeats=2)
            print(f"{name:<8} {t:8.2f} s")
        except RuntimeError as exc:
            print(f"{name}: skipped ({exc})")
        finally:
            rs.set_backend(None)


def bench_outage_driver(trials, n_relays):
    stats = rs.LinkStatistics.iid(n_relays)
    rho = 10.0 ** (np.array([10.0, 20.0, 30.0]) / 10.0)
    print(f"\noutage sweep driver ({trials} trials, {n_relays} relays, workers=2):")
    for name in ("numba", "numpy"):
        try:
            rs.set_backend(name)
            run_outage_mc(stats, rho, 1.0, 10_000, key=(1,), workers=2)  # warm-up
            t = time_it(
                lambda: run_outage_mc(stats, rho, 1.0, trials, key=(1,), workers=2),
                repeats=2,
            )
            print(f"{name:<8} {t:8.2f} s ({trials / t / 1e6:5.1f} M trials/s)")
        except RuntimeError as exc:
            print(f"{name}: skipped ({exc})")
        finally:
            rs.set_backend(None)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=500_000)
    parser.add_argument("--relays", type=int, default=8)
    args = parser.parse_args()
    bench_kernels(args.trials, args.relays)
    bench_outage_driver(4 * args.trials, args.relays)
    bench_end_to_end(max(args.trials // 10, 10_000))


if __name__ == "__main__":
    main()
