"""Synthetic linear-regression-equation (LRE) data streams.

Builds measurable (regressor, measurement) pairs from ground-truth parameter
profiles and excitation specs, in scalar (post-mixing) and vector forms.
Construction is pure: no state, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .signals import ParameterProfile, Signal


@dataclass(frozen=True)
class ScalarLreSample:
    """One time-stamped (Y, delta) pair of a scalar LRE.

    In discrete time `t` holds the sample index k. `y_meas` may carry an
    additive deterministic disturbance; `delta` never does.
    """

    t: float
    delta: float
    y_meas: float


@dataclass(frozen=True)
class VectorLreSample:
    """One sample of the vector LRE y = phi^T theta."""

    t: float
    phi: tuple
    y: float


def make_scalar_sample(
    delta_spec: Signal,
    profile: ParameterProfile,
    noise_spec: Optional[Signal],
    t: float,
) -> ScalarLreSample:
    """Sample the scalar LRE Y = delta * theta (+ noise) at time t."""
    if profile.dim != 1:
        raise ValueError(f"scalar LRE needs a 1-component profile, got dim {profile.dim}")
    delta = delta_spec.value(t)
    y = delta * profile.value1(t)
    if noise_spec is not None:
        y += noise_spec.value(t)
    return ScalarLreSample(t=t, delta=delta, y_meas=y)


def make_vector_sample(
    phi_specs: Sequence[Signal],
    profile: ParameterProfile,
    t: float,
) -> VectorLreSample:
    """Sample the vector LRE y = phi(t)^T theta(t) at time t."""
    if len(phi_specs) != profile.dim:
        raise ValueError(
            f"phi has {len(phi_specs)} components but profile has {profile.dim}"
        )
    phi = tuple(s.value(t) for s in phi_specs)
    theta = profile.value(t)
    y = 0.0
    for p, th in zip(phi, theta):
        y += p * th
    return VectorLreSample(t=t, phi=phi, y=y)


@dataclass(frozen=True)
class MeasurementSignal:
    """Effective scalar measurement Y(t) = delta(t) * theta(t) + noise(t).

    Evaluable at arbitrary instants, which the fixed-step integrators need
    for their sub-step stages.
    """

    delta: Signal
    theta: ParameterProfile
    noise: Optional[Signal] = None

    def __post_init__(self):
        if self.theta.dim != 1:
            raise ValueError("measurement signal needs a scalar parameter profile")

    def value(self, t: float) -> float:
        y = self.delta.value(t) * self.theta.value1(t)
        if self.noise is not None:
            y += self.noise.value(t)
        return y
