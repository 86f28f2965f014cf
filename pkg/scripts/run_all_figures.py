#!/usr/bin/env python3
"""Run every bundled scenario and print a convergence summary table.

Usage:
    python scripts/run_all_figures.py [--out OUT_DIR]

Writes per-scenario trajectory/summary CSVs, metadata JSON and gnuplot
scripts under OUT_DIR (default: out/). Render a figure with, e.g.:

    cd out && gnuplot -p fig1_ct_pe.gp
"""

import argparse

from fctdrem.cli import bundled_names, bundled_path
from fctdrem.plots import emit_plots
from fctdrem.scenario import parse_scenario, run_scenario, summarize


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    args = parser.parse_args()

    print(f"{'scenario':<22} {'estimator':<22} {'hit':>10} {'final rms':>12}")
    for name in bundled_names():
        scn = parse_scenario(bundled_path(name))
        table, reports = run_scenario(scn, args.out)
        emit_plots(table, args.out, scn.name, scn.mode)
        for rep in reports:
            hit = "-" if rep.hit_time is None else format(rep.hit_time, ".4g")
            last_rms = rep.interval_rms[-1][2]
            print(f"{name:<22} {rep.estimator:<22} {hit:>10} {last_rms:>12.3e}")
    print(f"\nwrote CSVs, metadata and gnuplot scripts to {args.out}/")


if __name__ == "__main__":
    main()
