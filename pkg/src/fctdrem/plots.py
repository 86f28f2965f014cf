"""Gnuplot script emission for trajectory CSVs.

Each scenario gets a self-contained script next to its CSV, referencing the
data by relative path. Running gnuplot is optional and outside the test
surface; the scripts themselves are deterministic text.
"""

from __future__ import annotations

from pathlib import Path

from .trajectory import TrajectoryTable


def emit_plots(table: TrajectoryTable, out_dir, base_name: str, mode: str = "ct") -> Path:
    """Write `<base_name>.gp` drawing the true parameter and every estimate."""
    if not table.rows:
        raise ValueError("cannot plot an empty trajectory")
    est_cols = [c for c in table.columns if c.startswith("theta_") and c != "theta_true"]
    if not est_cols:
        raise ValueError("trajectory has no estimate columns to plot")
    idx = {c: i + 1 for i, c in enumerate(table.columns)}  # gnuplot is 1-based
    style = "lines lw 1.5" if mode == "ct" else "points pt 7 ps 0.5"
    xlabel = "time [s]" if mode == "ct" else "sample k"
    csv_rel = f"{base_name}_trajectory.csv"
    lines = [
        f'# plot script for {base_name}; run: gnuplot -p {base_name}.gp',
        'set datafile separator ","',
        "set key outside right",
        "set grid",
        f'set xlabel "{xlabel}"',
        'set ylabel "parameter"',
        f'set title "{base_name}"',
        "plot \\",
    ]
    parts = [
        f'  "{csv_rel}" every ::1 using 1:{idx["theta_true"]} '
        f'with lines lw 2 lc rgb "black" title "theta-true"'
    ]
    for c in est_cols:
        label = c.replace("_", "-")
        parts.append(f'  "{csv_rel}" every ::1 using 1:{idx[c]} with {style} title "{label}"')
    lines.append(", \\\n".join(parts))
    out = Path(out_dir) / f"{base_name}.gp"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return out
