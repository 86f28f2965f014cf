"""Scenario configuration (TOML) and deterministic batch execution.

A scenario fully describes one experiment: excitation and parameter profile,
optional measurement disturbance, time grid, and a roster of estimators with
their gains. Running a scenario writes a trajectory CSV, a convergence summary
CSV and a metadata JSON; repeated runs are byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import metrics
from .baselines import Alg1Estimator, Alg1Gains, Alg3Estimator, Alg3Gains
from .ct_estimators import CtEstimator, CtGains, clip, stage_eval, window_steps
from .dt_estimators import DtEstimator, DtGains
from .lre import MeasurementSignal, make_scalar_sample
from .signals import (
    Constant,
    InverseSqrt,
    ParameterProfile,
    Segment,
    Signal,
    Sine,
    SumSignal,
    Zero,
)
from .trajectory import TrajectoryTable

CT_KINDS = ("gradient", "fct", "fct_ap", "alg1", "alg3")
DT_KINDS = ("dt_gradient", "dt_fct", "dt_fct_ap")

# summary defaults: error band and dwell (seconds for CT, samples for DT)
SUMMARY_EPSILON = 1e-3
SUMMARY_HOLD_CT = 0.5
SUMMARY_HOLD_DT = 2.0


class ScenarioError(ValueError):
    """Scenario file failed parsing or validation."""


@dataclass(frozen=True)
class RosterEntry:
    kind: str
    name: str
    gains: object
    theta0: float = 0.0
    extras: tuple = ()  # accepted-but-inert keys, echoed to run metadata


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str  # "ct" or "dt"
    delta: Signal
    theta: ParameterProfile
    noise: Optional[Signal]
    step: float  # integration step h (ct) or sampling time (dt)
    horizon: float
    decimation: int
    roster: tuple


# --------------------------------------------------------------------------
# parsing


def _fail(src: str, msg: str):
    raise ScenarioError(f"{src}: {msg}")


def _num(v, src: str, key: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(src, f"{key} must be a number, got {v!r}")
    return float(v)


def _check_keys(d: dict, allowed: set, src: str, where: str):
    for k in d:
        if k not in allowed:
            _fail(src, f"unknown key '{k}' in {where}")


def _require(d: dict, key: str, src: str, where: str):
    if key not in d:
        _fail(src, f"missing key '{key}' in {where}")
    return d[key]


def _parse_signal(d, src: str, where: str) -> Signal:
    if not isinstance(d, dict):
        _fail(src, f"{where} must be a table")
    kind = _require(d, "kind", src, where)
    if kind == "zero":
        _check_keys(d, {"kind"}, src, where)
        return Zero()
    if kind == "constant":
        _check_keys(d, {"kind", "level"}, src, where)
        return Constant(_num(_require(d, "level", src, where), src, "level"))
    if kind == "sine":
        _check_keys(d, {"kind", "amplitude", "omega", "phase"}, src, where)
        return Sine(
            _num(_require(d, "amplitude", src, where), src, "amplitude"),
            _num(_require(d, "omega", src, where), src, "omega"),
            _num(d.get("phase", 0.0), src, "phase"),
        )
    if kind == "inverse_sqrt":
        _check_keys(d, {"kind", "offset"}, src, where)
        offset = _num(_require(d, "offset", src, where), src, "offset")
        if offset <= 0.0:
            _fail(src, f"inverse_sqrt offset must be > 0 in {where}, got {offset}")
        return InverseSqrt(offset)
    if kind == "sum":
        _check_keys(d, {"kind", "parts"}, src, where)
        parts = _require(d, "parts", src, where)
        if not isinstance(parts, list) or not parts:
            _fail(src, f"sum needs a non-empty parts list in {where}")
        return SumSignal(tuple(_parse_signal(p, src, f"{where}.parts") for p in parts))
    _fail(src, f"unknown signal kind '{kind}' in {where}")


def _parse_segment(d, src: str, where: str) -> Segment:
    if not isinstance(d, dict):
        _fail(src, f"{where} must be a table")
    kind = _require(d, "kind", src, where)
    start = _num(_require(d, "start", src, where), src, "start")
    end = _num(_require(d, "end", src, where), src, "end")
    value = _num(_require(d, "value", src, where), src, "value")
    if kind == "constant":
        _check_keys(d, {"kind", "start", "end", "value"}, src, where)
        return Segment(start, end, value)
    if kind == "ramp":
        _check_keys(d, {"kind", "start", "end", "value", "slope"}, src, where)
        return Segment(start, end, value, _num(_require(d, "slope", src, where), src, "slope"))
    _fail(src, f"unknown segment kind '{kind}' in {where}")


def _parse_profile(d, src: str) -> ParameterProfile:
    if not isinstance(d, dict):
        _fail(src, "theta must be a table")
    _check_keys(d, {"segments"}, src, "theta")
    segs = _require(d, "segments", src, "theta")
    if not isinstance(segs, list) or not segs:
        _fail(src, "theta.segments must be a non-empty list")
    try:
        return ParameterProfile.scalar(
            tuple(_parse_segment(s, src, "theta.segments") for s in segs)
        )
    except ValueError as e:
        _fail(src, f"invalid theta profile: {e}")


_ENTRY_KEYS = {
    "gradient": {"gamma", "theta0"},
    "fct": {"gamma", "mu", "theta0"},
    "fct_ap": {"gamma", "mu", "t_window", "theta0"},
    "alg1": {"gamma", "alpha", "theta0"},
    "alg3": {"gamma", "varsigma", "delta_max"},
    "dt_gradient": {"c", "theta0"},
    "dt_fct": {"c", "rho", "theta0"},
    "dt_fct_ap": {"c", "rho", "d", "theta0"},
}
# gains listed alongside DT scenarios that play no role in the DT recursions;
# accepted and echoed to metadata instead of silently dropped
_DT_INERT_KEYS = ("gamma", "t_window")


def _parse_entry(d, src: str, idx: int, mode: str) -> RosterEntry:
    where = f"estimators[{idx}]"
    if not isinstance(d, dict):
        _fail(src, f"{where} must be a table")
    kind = _require(d, "kind", src, where)
    if mode == "ct" and kind not in CT_KINDS:
        _fail(src, f"{where}: kind '{kind}' is not a CT estimator")
    if mode == "dt" and kind not in DT_KINDS:
        _fail(src, f"{where}: kind '{kind}' is not a DT estimator")
    allowed = {"kind", "name"} | _ENTRY_KEYS[kind]
    extras = ()
    if mode == "dt":
        allowed |= set(_DT_INERT_KEYS)
        extras = tuple((k, _num(d[k], src, k)) for k in _DT_INERT_KEYS if k in d)
    _check_keys(d, allowed, src, where)
    name = d.get("name", kind)
    if not isinstance(name, str) or not name:
        _fail(src, f"{where}: name must be a non-empty string")
    theta0 = _num(d.get("theta0", 0.0), src, "theta0")

    def num(key):
        return _num(_require(d, key, src, where), src, key)

    try:
        if kind in ("gradient", "fct", "fct_ap"):
            gains = CtGains(
                gamma=num("gamma"),
                mu=num("mu") if kind in ("fct", "fct_ap") else None,
                t_window=num("t_window") if kind == "fct_ap" else None,
            )
        elif kind == "alg1":
            alpha = num("alpha")
            if not 0.0 <= alpha < 1.0:
                _fail(src, f"{where}: alpha must be in [0, 1), got {alpha}")
            gains = Alg1Gains(gamma=num("gamma"), alpha=alpha)
        elif kind == "alg3":
            dmax = _require(d, "delta_max", src, where)
            if dmax == "auto":
                dmax = None
            else:
                dmax = _num(dmax, src, "delta_max")
            gains = Alg3Gains(gamma=num("gamma"), varsigma=num("varsigma"), delta_max=dmax)
        else:
            dd = d.get("d", 1)
            if isinstance(dd, bool) or not isinstance(dd, int):
                _fail(src, f"{where}: d must be an integer, got {dd!r}")
            gains = DtGains(
                c=num("c"),
                rho=num("rho") if kind in ("dt_fct", "dt_fct_ap") else None,
                d=dd if kind == "dt_fct_ap" else 1,
            )
    except ScenarioError:
        raise
    except ValueError as e:
        _fail(src, f"{where}: {e}")
    return RosterEntry(kind=kind, name=name, gains=gains, theta0=theta0, extras=extras)


def _scenario_from_raw(raw: dict, src: str, step=None, horizon=None) -> Scenario:
    if not isinstance(raw, dict):
        _fail(src, "top level must be a table")
    _check_keys(
        raw,
        {"name", "mode", "horizon", "step", "decimation", "delta", "theta", "noise", "estimators"},
        src,
        "scenario",
    )
    name = _require(raw, "name", src, "scenario")
    if not isinstance(name, str) or not name:
        _fail(src, "name must be a non-empty string")
    mode = _require(raw, "mode", src, "scenario")
    if mode not in ("ct", "dt"):
        _fail(src, f"mode must be 'ct' or 'dt', got {mode!r}")
    step_v = _num(step if step is not None else _require(raw, "step", src, "scenario"), src, "step")
    horizon_v = _num(
        horizon if horizon is not None else _require(raw, "horizon", src, "scenario"),
        src,
        "horizon",
    )
    if step_v <= 0.0:
        _fail(src, f"step must be > 0, got {step_v}")
    if horizon_v <= 0.0:
        _fail(src, f"horizon must be > 0, got {horizon_v}")
    dec = raw.get("decimation", 1)
    if isinstance(dec, bool) or not isinstance(dec, int) or dec < 1:
        _fail(src, f"decimation must be an integer >= 1, got {dec!r}")
    delta = _parse_signal(_require(raw, "delta", src, "scenario"), src, "delta")
    theta = _parse_profile(_require(raw, "theta", src, "scenario"), src)
    noise = _parse_signal(raw["noise"], src, "noise") if "noise" in raw else None
    entries_raw = _require(raw, "estimators", src, "scenario")
    if not isinstance(entries_raw, list) or not entries_raw:
        _fail(src, "estimators must be a non-empty array of tables")
    roster = tuple(_parse_entry(e, src, i, mode) for i, e in enumerate(entries_raw))
    names = [e.name for e in roster]
    if len(set(names)) != len(names):
        _fail(src, f"estimator names must be unique, got {names}")
    for e in roster:
        if e.kind == "fct_ap":
            try:
                window_steps(e.gains.t_window, step_v)
            except ValueError as err:
                _fail(src, f"estimators[{e.name}]: {err}")
    return Scenario(
        name=name,
        mode=mode,
        delta=delta,
        theta=theta,
        noise=noise,
        step=step_v,
        horizon=horizon_v,
        decimation=dec,
        roster=roster,
    )


def parse_scenario(path, *, step=None, horizon=None) -> Scenario:
    """Load and validate a scenario TOML file; unknown keys are rejected."""
    path = Path(path)
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"{path}: TOML parse error: {e}") from e
    return _scenario_from_raw(raw, str(path), step=step, horizon=horizon)


# --------------------------------------------------------------------------
# execution


def _n_output_rows(scn: Scenario) -> int:
    return int(math.floor(scn.horizon / (scn.step * scn.decimation) + 1e-9)) + 1


def _estimate_of(entry: RosterEntry, est) -> float:
    if entry.kind in ("gradient", "dt_gradient", "alg1", "alg3"):
        return est.theta_hat
    if entry.kind in ("fct", "dt_fct"):
        return est.theta_fct
    return est.theta_fct_ap


def _diag_columns(entry: RosterEntry) -> list:
    if entry.kind in ("fct", "dt_fct"):
        return [f"{entry.name}_w", f"{entry.name}_w_c", f"{entry.name}_ie"]
    if entry.kind in ("fct_ap", "dt_fct_ap"):
        return [f"{entry.name}_w_d", f"{entry.name}_w_d_c", f"{entry.name}_ie"]
    return []


def _diag_values(entry: RosterEntry, est) -> list:
    if entry.kind == "fct":
        mu = est.gains.mu
        classic, _ = est.ie_flags()
        return [est.w, clip(est.w, mu), int(classic)]
    if entry.kind == "fct_ap":
        mu = est.gains.mu
        _, windowed = est.ie_flags()
        return [est.w_d, clip(est.w_d, mu), int(windowed)]
    if entry.kind == "dt_fct":
        return [est.w, clip(est.w, est.gains.rho), int(est.ie_met())]
    if entry.kind == "dt_fct_ap":
        wd = est.window_ratio()
        return [wd, clip(wd, est.gains.rho), int(est.ie_window_met())]
    return []


def _build_ct_estimator(entry: RosterEntry, scn: Scenario, y: MeasurementSignal):
    if entry.kind in ("gradient", "fct", "fct_ap"):
        return CtEstimator(entry.gains, scn.delta, y, scn.step, theta0=entry.theta0)
    if entry.kind == "alg1":
        return Alg1Estimator(entry.gains, scn.delta, y, scn.step, theta0=entry.theta0)
    return Alg3Estimator(entry.gains, scn.delta, y, scn.step)


def _run_ct(scn: Scenario) -> TrajectoryTable:
    h = scn.step
    y = MeasurementSignal(scn.delta, scn.theta, scn.noise)
    ests = [_build_ct_estimator(e, scn, y) for e in scn.roster]
    columns = ["time", "delta", "y_meas", "theta_true"]
    columns += [f"theta_{e.name}" for e in scn.roster]
    for e in scn.roster:
        columns += _diag_columns(e)
    table = TrajectoryTable(columns=columns)
    n_rows = _n_output_rows(scn)
    total_steps = (n_rows - 1) * scn.decimation
    for n in range(total_steps + 1):
        t = n * h
        if n % scn.decimation == 0:
            row = [t, scn.delta.value(t), y.value(t), scn.theta.value1(t)]
            row += [_estimate_of(e, est) for e, est in zip(scn.roster, ests)]
            for e, est in zip(scn.roster, ests):
                row += _diag_values(e, est)
            table.append(row)
        if n < total_steps:
            stages = stage_eval(scn.delta, y, t, h)
            for est in ests:
                est.step(stages)
    return table


def _run_dt(scn: Scenario) -> TrajectoryTable:
    ts = scn.step
    ests = [DtEstimator(e.gains, theta0=e.theta0) for e in scn.roster]
    columns = ["k", "delta", "y_meas", "theta_true"]
    columns += [f"theta_{e.name}" for e in scn.roster]
    for e in scn.roster:
        columns += _diag_columns(e)
    table = TrajectoryTable(columns=columns)
    n_rows = _n_output_rows(scn)
    total_samples = (n_rows - 1) * scn.decimation
    for k in range(total_samples + 1):
        sample = make_scalar_sample(scn.delta, scn.theta, scn.noise, k * ts)
        if k % scn.decimation == 0:
            row = [k, sample.delta, sample.y_meas, scn.theta.value1(k * ts)]
            row += [_estimate_of(e, est) for e, est in zip(scn.roster, ests)]
            for e, est in zip(scn.roster, ests):
                row += _diag_values(e, est)
            table.append(row)
        if k < total_samples:
            for est in ests:
                est.step(sample)
    return table


def _profile_intervals(scn: Scenario) -> list:
    """Profile segments clipped to the run, in axis units (seconds or samples)."""
    scale = scn.step if scn.mode == "dt" else 1.0
    end = scn.horizon
    out = []
    for seg in scn.theta.component_segments(0):
        a, b = seg.start, min(seg.end, end)
        if b > a:
            out.append((a / scale, b / scale))
    return out


def summarize(scn: Scenario, table: TrajectoryTable) -> list:
    hold = SUMMARY_HOLD_CT if scn.mode == "ct" else SUMMARY_HOLD_DT
    intervals = _profile_intervals(scn)
    return [
        metrics.build_report(
            table,
            f"theta_{e.name}",
            None,
            epsilon=SUMMARY_EPSILON,
            hold=hold,
            intervals=intervals,
        )
        for e in scn.roster
    ]


def _write_summary(reports, path: Path) -> None:
    lines = ["estimator,epsilon,hold,hit,interval_start,interval_end,rms"]
    for rep in reports:
        hit = "" if rep.hit_time is None else repr(float(rep.hit_time))
        for a, b, rms in rep.interval_rms:
            lines.append(
                f"{rep.estimator},{rep.epsilon!r},{rep.hold!r},{hit},"
                f"{float(a)!r},{float(b)!r},{rms!r}"
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _gains_meta(entry: RosterEntry) -> dict:
    g = entry.gains
    meta = {"kind": entry.kind, "name": entry.name}
    for field in ("gamma", "mu", "t_window", "alpha", "varsigma", "delta_max", "c", "rho", "d"):
        if hasattr(g, field):
            meta[field] = getattr(g, field)
    if entry.kind not in ("alg3",):
        meta["theta0"] = entry.theta0
    if entry.extras:
        meta["inert_gains"] = dict(entry.extras)
    return meta


def write_meta(scn: Scenario, path: Path) -> None:
    meta = {
        "scenario": scn.name,
        "mode": scn.mode,
        "step": scn.step,
        "horizon": scn.horizon,
        "decimation": scn.decimation,
        "delta_abs_bound": scn.delta.abs_bound(),
        "noise": scn.noise is not None,
        "method": "rk4 fixed step + simpson excitation quadrature" if scn.mode == "ct" else "exact recursions",
        "estimators": [_gains_meta(e) for e in scn.roster],
    }
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def run_scenario(scn: Scenario, out_dir) -> tuple:
    """Run every roster estimator over the horizon on shared signal
    evaluations; write `<name>_trajectory.csv`, `<name>_summary.csv` and
    `<name>_meta.json` under out_dir. Returns (table, reports)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = _run_ct(scn) if scn.mode == "ct" else _run_dt(scn)
    reports = summarize(scn, table)
    table.write_csv(out / f"{scn.name}_trajectory.csv")
    _write_summary(reports, out / f"{scn.name}_summary.csv")
    write_meta(scn, out / f"{scn.name}_meta.json")
    return table, reports
