"""High-gain finite-time comparison estimators.

Two continuous-time schemes driven by the same fixed-step RK4 harness as the
gradient estimator: a fractional-power error injection (alg1) and a relay-like
scheme whose exponent scales with the instantaneous regressor magnitude
(alg3). Their right-hand sides are only continuous, not smooth; they are
integrated with plain RK4, and any chattering near zero error is reported as
is rather than suppressed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ct_estimators import StageEval, stage_eval

DELTA_PEAK_FLOOR = 1e-9


def signed_power(x: float, p: float) -> float:
    """|x|^p * sign(x) with sign(0) = 0, so the origin is a true equilibrium."""
    if x > 0.0:
        return x ** p
    if x < 0.0:
        return -((-x) ** p)
    return 0.0


def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    if x < 0.0:
        return -1.0
    return 0.0


@dataclass(frozen=True)
class Alg1Gains:
    """Gain and fractional exponent. alpha = 1 reproduces the plain gradient
    and is admitted here for that identity check; scenario files keep the
    strict range [0, 1)."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class Alg3Gains:
    """Gain, exponent divisor > 1, and the regressor magnitude bound.

    delta_max = None selects a running maximum (floored at DELTA_PEAK_FLOOR)
    instead of a user-supplied analytic bound.
    """

    gamma: float
    varsigma: float
    delta_max: Optional[float] = None

    def __post_init__(self):
        if not self.gamma > 0.0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if not self.varsigma > 1.0:
            raise ValueError(f"varsigma must be > 1, got {self.varsigma}")
        if self.delta_max is not None and not self.delta_max > 0.0:
            raise ValueError(f"delta_max must be > 0, got {self.delta_max}")


def _rk4(f, t: float, x: float, h: float, stages: StageEval) -> float:
    d0, y0, dm, ym, d1, y1 = stages
    k1 = f(d0, y0, x)
    k2 = f(dm, ym, x + 0.5 * h * k1)
    k3 = f(dm, ym, x + 0.5 * h * k2)
    k4 = f(d1, y1, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def alg1_step(
    theta_hat: float, gains: Alg1Gains, delta_spec, y_spec, t: float, h: float,
    stages: Optional[StageEval] = None,
) -> float:
    """One RK4 step of d(theta)/dt = gamma * delta * sp(Y - delta*theta, alpha)."""
    if stages is None:
        stages = stage_eval(delta_spec, y_spec, t, h)
    g, a = gains.gamma, gains.alpha

    def f(d, y, x):
        return g * d * signed_power(y - d * x, a)

    return _rk4(f, t, theta_hat, h, stages)


def alg3_step(
    theta_hat: float, gains: Alg3Gains, delta_spec, y_spec, t: float, h: float,
    stages: Optional[StageEval] = None, delta_max: Optional[float] = None,
) -> float:
    """One RK4 step of the relay-exponent scheme.

    d(theta)/dt = gamma * sign(delta) * sp(Y - delta*theta, |delta|/(varsigma*delta_max))
    """
    if delta_max is None:
        delta_max = gains.delta_max
    if delta_max is None:
        raise ValueError("alg3_step needs an explicit delta_max")
    if stages is None:
        stages = stage_eval(delta_spec, y_spec, t, h)
    g, scale = gains.gamma, gains.varsigma * delta_max

    def f(d, y, x):
        return g * _sign(d) * signed_power(y - d * x, abs(d) / scale)

    return _rk4(f, t, theta_hat, h, stages)


class Alg1Estimator:
    def __init__(self, gains: Alg1Gains, delta, y, h: float, theta0: float = 0.0):
        if not h > 0.0:
            raise ValueError(f"step h must be > 0, got {h}")
        self.gains = gains
        self._delta = delta
        self._y = y
        self._h = h
        self._n = 0
        self.theta_hat = theta0

    @property
    def t(self) -> float:
        return self._n * self._h

    def step(self, stages: Optional[StageEval] = None) -> None:
        t = self._n * self._h
        self.theta_hat = alg1_step(
            self.theta_hat, self.gains, self._delta, self._y, t, self._h, stages
        )
        self._n += 1


class Alg3Estimator:
    """The relay-exponent scheme; its initial estimate is pinned to zero."""

    def __init__(self, gains: Alg3Gains, delta, y, h: float):
        if not h > 0.0:
            raise ValueError(f"step h must be > 0, got {h}")
        self.gains = gains
        self._delta = delta
        self._y = y
        self._h = h
        self._n = 0
        self.theta_hat = 0.0
        self._peak = DELTA_PEAK_FLOOR  # used only in running-maximum mode

    @property
    def t(self) -> float:
        return self._n * self._h

    def delta_max(self) -> float:
        return self.gains.delta_max if self.gains.delta_max is not None else self._peak

    def step(self, stages: Optional[StageEval] = None) -> None:
        t = self._n * self._h
        if stages is None:
            stages = stage_eval(self._delta, self._y, t, self._h)
        if self.gains.delta_max is None:
            d0, _, dm, _, d1, _ = stages
            self._peak = max(self._peak, abs(d0), abs(dm), abs(d1))
        self.theta_hat = alg3_step(
            self.theta_hat, self.gains, self._delta, self._y, t, self._h,
            stages, self.delta_max(),
        )
        self._n += 1
