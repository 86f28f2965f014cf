"""Continuous-time gradient estimator with finite-convergence-time readouts.

One state machine per scalar LRE carries three views of the same trajectory:

* the raw gradient estimate, advanced by classical fixed-step RK4;
* the finite-convergence-time (FCT) reconstruction, which divides out the
  remembered fraction of the initial error using the excitation weight
  w = exp(-gamma * integral of delta^2);
* the alertness-preserving (AP) reconstruction, same idea over a sliding
  window of length t_window, anchored at the delayed estimate.

w and its windowed counterpart are never integrated as ODEs: they are exact
exponentials of a Simpson-accumulated integral of delta^2, which makes
positivity, monotonicity and the windowed lower bound structural rather than
numerical accidents.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Tuple


def clip(w: float, threshold: float) -> float:
    """Saturate the excitation weight: threshold if w >= threshold, else w."""
    return threshold if w >= threshold else w


def fct_reconstruct(theta_hat: float, theta_ref: float, w_c: float) -> float:
    """Divide the remembered error fraction out of the gradient estimate.

    The denominator stays >= 1 - threshold > 0 because w_c is clipped.
    """
    return (theta_hat - w_c * theta_ref) / (1.0 - w_c)


def ie_threshold(gamma: float, mu: float) -> float:
    """Excitation energy needed before w can fall below 1 - mu."""
    return -math.log(1.0 - mu) / gamma


@dataclass(frozen=True)
class CtGains:
    """Adaptation gain, clipping threshold, and AP window length (seconds)."""

    gamma: float
    mu: Optional[float] = None
    t_window: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.mu is not None and not 0.0 < self.mu < 1.0:
            raise ValueError(f"mu must be in (0, 1), got {self.mu}")
        if self.t_window is not None and not self.t_window > 0.0:
            raise ValueError(f"t_window must be > 0, got {self.t_window}")


@dataclass(frozen=True)
class CtOutputs:
    """Per-instant snapshot of every estimate and diagnostic the state carries."""

    theta_grad: float
    theta_fct: Optional[float]
    theta_fct_ap: Optional[float]
    w: float
    w_d: Optional[float]
    w_c: Optional[float]
    w_d_c: Optional[float]
    ie_classic: Optional[bool]
    ie_window: Optional[bool]


# Shared per-step signal evaluations: (d0, y0) at t, (dm, ym) at t + h/2,
# (d1, y1) at t + h. Lets a scenario evaluate the signals once per step and
# feed every estimator the identical numbers.
StageEval = Tuple[float, float, float, float, float, float]


def stage_eval(delta, y, t: float, h: float) -> StageEval:
    tm = t + 0.5 * h
    t1 = t + h
    return (
        delta.value(t), y.value(t),
        delta.value(tm), y.value(tm),
        delta.value(t1), y.value(t1),
    )


def window_steps(t_window: float, h: float) -> int:
    """t_window as an exact step count; rejects non-integer multiples of h."""
    n = int(round(t_window / h))
    if n < 1 or abs(n * h - t_window) > 1e-9 * max(1.0, abs(t_window)):
        raise ValueError(
            f"t_window {t_window} must be a positive integer multiple of the step {h}"
        )
    return n


class CtEstimator:
    """Scalar CT gradient flow with FCT and alertness-preserving readouts.

    `delta` and `y` are analytic specs evaluated at the RK4 stage times; the
    excitation integral is advanced by Simpson quadrature over each step so w
    keeps the integrator's fourth-order accuracy.
    """

    def __init__(self, gains: CtGains, delta, y, h: float, theta0: float = 0.0):
        if not h > 0.0:
            raise ValueError(f"step h must be > 0, got {h}")
        self.gains = gains
        self._delta = delta
        self._y = y
        self._h = h
        self._n = 0
        self._theta = theta0
        self._theta_c = 0.0  # Kahan compensation for the theta accumulation
        self._theta0 = theta0
        self._i_acc = 0.0
        if gains.t_window is not None:
            nd = window_steps(gains.t_window, h)
            # snapshots (i_acc, theta_hat) at step resolution; element 0 is the
            # value t_window ago once full, and the t < 0 convention
            # (i_acc = 0, theta_hat = theta0) before that
            self._delay = deque([(0.0, theta0)], maxlen=nd + 1)
        else:
            self._delay = None

    # -- stepping ---------------------------------------------------------

    def step(self, stages: Optional[StageEval] = None) -> None:
        """Advance one step of length h."""
        h = self._h
        if stages is None:
            stages = stage_eval(self._delta, self._y, self._n * h, h)
        d0, y0, dm, ym, d1, y1 = stages
        g = self.gains.gamma
        x = self._theta
        k1 = g * d0 * (y0 - d0 * x)
        k2 = g * dm * (ym - dm * (x + 0.5 * h * k1))
        k3 = g * dm * (ym - dm * (x + 0.5 * h * k2))
        k4 = g * d1 * (y1 - d1 * (x + h * k3))
        inc = (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        # compensated add: keeps the integrator at its truncation order instead
        # of drowning in accumulated rounding over ~1e4 steps
        y_ = inc - self._theta_c
        s = x + y_
        self._theta_c = (s - x) - y_
        self._theta = s
        # plain add of a non-negative Simpson increment: i_acc can never decrease
        self._i_acc += (h / 6.0) * (d0 * d0 + 4.0 * dm * dm + d1 * d1)
        self._n += 1
        if self._delay is not None:
            self._delay.append((self._i_acc, self._theta))

    # -- state ------------------------------------------------------------

    @property
    def t(self) -> float:
        return self._n * self._h

    @property
    def theta_hat(self) -> float:
        return self._theta

    @property
    def theta_hat0(self) -> float:
        return self._theta0

    @property
    def excitation_integral(self) -> float:
        return self._i_acc

    # -- weights and readouts ----------------------------------------------

    @property
    def w(self) -> float:
        return math.exp(-self.gains.gamma * self._i_acc)

    @property
    def w_d(self) -> float:
        i_then, _ = self._delayed()
        return math.exp(-self.gains.gamma * (self._i_acc - i_then))

    def w_values(self) -> tuple:
        return self.w, self.w_d

    @property
    def theta_fct(self) -> float:
        w_c = clip(self.w, self._mu())
        return fct_reconstruct(self._theta, self._theta0, w_c)

    @property
    def theta_fct_ap(self) -> float:
        _, theta_then = self._delayed()
        w_c = clip(self.w_d, self._mu())
        return fct_reconstruct(self._theta, theta_then, w_c)

    def ie_flags(self) -> tuple:
        """(classic, windowed): has enough excitation energy accrued."""
        thr = ie_threshold(self.gains.gamma, self._mu())
        classic = self._i_acc >= thr
        if self._delay is None:
            return classic, None
        i_then, _ = self._delayed()
        return classic, (self._i_acc - i_then) >= thr

    def outputs(self) -> CtOutputs:
        mu = self.gains.mu
        w = self.w
        if mu is None:
            return CtOutputs(self._theta, None, None, w, None, None, None, None, None)
        if self._delay is None:
            classic, _ = self.ie_flags()
            return CtOutputs(
                self._theta, self.theta_fct, None, w,
                None, clip(w, mu), None, classic, None,
            )
        classic, windowed = self.ie_flags()
        w_d = self.w_d
        return CtOutputs(
            self._theta, self.theta_fct, self.theta_fct_ap, w,
            w_d, clip(w, mu), clip(w_d, mu), classic, windowed,
        )

    # -- internals ----------------------------------------------------------

    def _mu(self) -> float:
        if self.gains.mu is None:
            raise ValueError("clipping threshold mu is not configured")
        return self.gains.mu

    def _delayed(self) -> tuple:
        if self._delay is None:
            raise ValueError("t_window is not configured")
        return self._delay[0]
