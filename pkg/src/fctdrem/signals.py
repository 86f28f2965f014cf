"""Analytic excitation signals and piecewise parameter profiles.

Everything here is a pure function of time and immutable after construction,
so integrator stages can be sampled at arbitrary sub-step instants without
interpolation error. Two evaluations at the same instant are bit-identical.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence


class Signal:
    """Base class for analytic scalar time signals."""

    def value(self, t: float) -> float:
        """Signal value at time t (seconds, t >= 0)."""
        raise NotImplementedError

    def abs_bound(self) -> float:
        """Analytic upper bound for |value(t)| over t >= 0."""
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(Signal):
    def value(self, t: float) -> float:
        return 0.0

    def abs_bound(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Constant(Signal):
    level: float

    def value(self, t: float) -> float:
        return self.level

    def abs_bound(self) -> float:
        return abs(self.level)


@dataclass(frozen=True)
class Sine(Signal):
    """amplitude * sin(omega * t + phase), omega in rad/s."""

    amplitude: float
    omega: float
    phase: float = 0.0

    def value(self, t: float) -> float:
        return self.amplitude * math.sin(self.omega * t + self.phase)

    def abs_bound(self) -> float:
        return abs(self.amplitude)


@dataclass(frozen=True)
class InverseSqrt(Signal):
    """1 / sqrt(t + offset). Requires offset > 0 so the value is finite at t = 0."""

    offset: float

    def __post_init__(self):
        if not self.offset > 0.0:
            raise ValueError(f"inverse-sqrt offset must be > 0, got {self.offset}")

    def value(self, t: float) -> float:
        return 1.0 / math.sqrt(t + self.offset)

    def abs_bound(self) -> float:
        # decreasing on t >= 0, so the supremum is at t = 0
        return 1.0 / math.sqrt(self.offset)


@dataclass(frozen=True)
class SumSignal(Signal):
    """Sum of component signals, always folded left-to-right in stored order."""

    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        for p in self.parts:
            if not isinstance(p, Signal):
                raise ValueError(f"sum part is not a signal: {p!r}")

    def value(self, t: float) -> float:
        acc = 0.0
        for p in self.parts:
            acc += p.value(t)
        return acc

    def abs_bound(self) -> float:
        acc = 0.0
        for p in self.parts:
            acc += p.abs_bound()
        return acc


def eval_signal(spec: Signal, t: float) -> float:
    """Evaluate a signal spec at time t >= 0."""
    return spec.value(t)


@dataclass(frozen=True)
class Segment:
    """One profile piece on [start, end): base + slope * (t - start).

    A constant piece has slope 0. `end` may be math.inf for the final piece.
    """

    start: float
    end: float
    base: float
    slope: float = 0.0

    def __post_init__(self):
        if not self.end > self.start:
            raise ValueError(f"segment end {self.end} must exceed start {self.start}")


def _validate_segments(segments: Sequence[Segment]) -> tuple:
    segs = tuple(segments)
    if not segs:
        raise ValueError("profile component needs at least one segment")
    if segs[0].start != 0.0:
        raise ValueError(f"first segment must start at 0, got {segs[0].start}")
    for a, b in zip(segs, segs[1:]):
        if a.end != b.start:
            raise ValueError(f"segments must be contiguous: gap between {a.end} and {b.start}")
    if not math.isinf(segs[-1].end):
        raise ValueError("last segment must extend to +inf")
    return segs


class ParameterProfile:
    """Piecewise time profile of the true parameter vector.

    One list of contiguous segments per parameter component. Evaluation is
    right-continuous: at a segment boundary the newer segment wins.
    """

    def __init__(self, components: Sequence[Sequence[Segment]]):
        self._components = tuple(_validate_segments(c) for c in components)
        if not self._components:
            raise ValueError("profile needs at least one component")
        self._starts = tuple(tuple(s.start for s in comp) for comp in self._components)

    @classmethod
    def scalar(cls, segments: Sequence[Segment]) -> "ParameterProfile":
        return cls((segments,))

    @classmethod
    def constant(cls, *levels: float) -> "ParameterProfile":
        return cls(tuple((Segment(0.0, math.inf, v),) for v in levels))

    @property
    def dim(self) -> int:
        return len(self._components)

    def component_segments(self, i: int = 0) -> tuple:
        return self._components[i]

    def _component_value(self, comp_idx: int, t: float) -> float:
        seg = self._components[comp_idx][bisect_right(self._starts[comp_idx], t) - 1]
        return seg.base + seg.slope * (t - seg.start)

    def value(self, t: float) -> list:
        """Vector of component values at t (one entry per parameter)."""
        return [self._component_value(i, t) for i in range(len(self._components))]

    def value1(self, t: float) -> float:
        """Fast path for scalar (single-component) profiles."""
        starts = self._starts[0]
        seg = self._components[0][bisect_right(starts, t) - 1]
        return seg.base + seg.slope * (t - seg.start)


def eval_profile(profile: ParameterProfile, t: float) -> list:
    """Evaluate a parameter profile at time t >= 0, one entry per component."""
    return profile.value(t)
