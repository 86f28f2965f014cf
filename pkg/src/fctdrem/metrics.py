"""Post-run diagnostics over completed trajectories.

Detection runs on the emitted output grid, never on internal integrator
steps, so every number here is reproducible from the CSV alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .signals import ParameterProfile
from .trajectory import TrajectoryTable


@dataclass(frozen=True)
class ConvergenceReport:
    """Earliest sustained entry into the error band, plus per-interval RMS."""

    estimator: str
    epsilon: float
    hold: float
    hit_time: Optional[float]
    interval_rms: Tuple[tuple, ...]  # (start, end, rms) per interval


def _truth(traj: TrajectoryTable, target: Optional[ParameterProfile], sample_time: float) -> list:
    if target is None:
        return traj.column("theta_true")
    return [target.value1(a * sample_time) for a in traj.axis_values()]


def convergence_time(
    traj: TrajectoryTable,
    column: str,
    target: Optional[ParameterProfile] = None,
    *,
    epsilon: float,
    hold: float,
    search_from: float = 0.0,
    sample_time: float = 1.0,
) -> Optional[float]:
    """Earliest axis value t >= search_from with |estimate - truth| <= epsilon
    over the whole window [t, t + hold]; None if no such window exists.

    `hold` is in axis units (seconds for CT tables, samples for DT tables)
    and must cover at least one output step.
    """
    est = traj.column(column)
    truth = _truth(traj, target, sample_time)
    axis = traj.axis_values()
    if len(axis) < 2:
        raise ValueError("trajectory too short for convergence detection")
    step = axis[1] - axis[0]
    if hold < step:
        raise ValueError(f"hold {hold} is below one output step {step}")
    hold_rows = int(math.ceil(hold / step - 1e-9))
    ok = [abs(e - th) <= epsilon for e, th in zip(est, truth)]
    n = len(ok)
    pref = [0] * (n + 1)
    for i, flag in enumerate(ok):
        pref[i + 1] = pref[i] + flag
    for j in range(n - hold_rows):
        if axis[j] < search_from:
            continue
        if pref[j + hold_rows + 1] - pref[j] == hold_rows + 1:
            return axis[j]
    return None


def interval_rms(
    traj: TrajectoryTable,
    column: str,
    target: Optional[ParameterProfile] = None,
    t0: float = 0.0,
    t1: float = 0.0,
    *,
    sample_time: float = 1.0,
) -> float:
    """Root-mean-square of (estimate - truth) over output samples in [t0, t1]."""
    if not t0 < t1:
        raise ValueError(f"empty interval [{t0}, {t1}]")
    est = traj.column(column)
    truth = _truth(traj, target, sample_time)
    sq = [
        (e - th) ** 2
        for a, e, th in zip(traj.axis_values(), est, truth)
        if t0 <= a <= t1
    ]
    if not sq:
        raise ValueError(f"no output samples inside [{t0}, {t1}]")
    return math.sqrt(math.fsum(sq) / len(sq))


def build_report(
    traj: TrajectoryTable,
    column: str,
    target: Optional[ParameterProfile],
    *,
    epsilon: float,
    hold: float,
    intervals: Sequence[tuple],
    sample_time: float = 1.0,
) -> ConvergenceReport:
    hit = convergence_time(
        traj, column, target, epsilon=epsilon, hold=hold, sample_time=sample_time
    )
    rms = tuple(
        (a, b, interval_rms(traj, column, target, a, b, sample_time=sample_time))
        for a, b in intervals
    )
    return ConvergenceReport(
        estimator=column, epsilon=epsilon, hold=hold, hit_time=hit, interval_rms=rms
    )
