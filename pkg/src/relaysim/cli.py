"""Command line front end.

    relaysim run --config scenario.toml --out results.csv
    relaysim run --preset fig3a --out fig3a.csv --trials 20000 --seed 7

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .backend import active_backend
from .experiments import (
    PRESETS,
    ConfigError,
    ResultRow,
    emit_results,
    load_config,
    preset_config,
    run_experiment,
)
from .outage import MIN_COUNTABLE_EVENTS, EstimationError, dmt_theoretical, estimate_diversity_slope

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaysim",
        description="Monte Carlo simulator for joint uplink/downlink relay selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario and write a result table")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="PATH", help="scenario TOML file")
    src.add_argument("--preset", choices=PRESETS, help="packaged scenario preset")
    run.add_argument("--out", metavar="PATH", required=True, help="output file ('-' for stdout)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--seed", type=int, metavar="U64", help="override the master seed")
    run.add_argument("--trials", type=int, metavar="N", help="override trials per grid point")
    run.add_argument("--workers", type=int, metavar="N", help="override the worker count")
    return parser


def _print_dmt_summary(rows: list[ResultRow]) -> None:
    by_n: dict[int, list[ResultRow]] = {}
    for row in rows:
        by_n.setdefault(row.n_relays, []).append(row)
    for n, group in sorted(by_n.items()):
        points = []
        skipped = 0
        for row in group:
            # approximate the per-direction event floor from the mixed rate
            if row.outage_rate * row.trials < MIN_COUNTABLE_EVENTS:
                skipped += 1
                continue
            points.append((10.0 ** (row.rho_db / 10.0), row.outage_rate))
        theory = dmt_theoretical(n, 0.0).diversity_d
        try:
            slope = estimate_diversity_slope(points)
            print(
                f"n_relays={n}: fitted diversity slope {slope:.3f} "
                f"(theory at r->0: {theory:.0f}; {skipped} low-confidence point(s) skipped)"
            )
        except EstimationError as exc:
            print(f"n_relays={n}: slope not estimated ({exc})")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.preset:
            config = preset_config(args.preset)
        else:
            config = load_config(args.config)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("--seed must fit in an unsigned 64-bit")
            config = replace(config, master_seed=args.seed)
        if args.trials is not None:
            if args.trials < 1:
                raise ConfigError("--trials must be >= 1")
            config = replace(config, trials=args.trials)
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("--workers must be >= 1")
            config = replace(config, workers=args.workers)
    except ConfigError as exc:
        print(f"relaysim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        rows = run_experiment(config)
        emit_results(rows, args.format, args.out)
        if args.out != "-":
            print(
                f"wrote {len(rows)} rows to {args.out} "
                f"({config.kind}, seed {config.master_seed}, backend {active_backend()})"
            )
        if config.kind in ("outage-sweep", "dmt-check"):
            _print_dmt_summary(rows)
    except ConfigError as exc:
        print(f"relaysim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"relaysim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
