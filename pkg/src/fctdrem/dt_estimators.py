"""Discrete-time gradient estimator with finite-convergence-time readouts.

The recursions are exact (no integrator error):

    theta(k+1) = theta(k) + delta(k)/(c + delta(k)^2) * (Y - delta(k) theta(k))
    w(k+1)     = c/(c + delta(k)^2) * w(k),   w(0) = 1

so w(k) is the running product of the per-step contraction factors. The
windowed weight w^d(k) = w(k)/w(k - d) is evaluated as the explicit product of
the last d factors: mathematically identical, but immune to w underflowing to
zero on long, strongly excited runs. Pre-history convention: w(j) = 1 and
theta(j) = theta(0) for j <= 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .ct_estimators import clip, fct_reconstruct
from .lre import ScalarLreSample


@dataclass(frozen=True)
class DtGains:
    """Regularizer c, clipping threshold rho, AP window length d (samples)."""

    c: float
    rho: Optional[float] = None
    d: int = 1

    def __post_init__(self):
        if not self.c > 0.0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if self.rho is not None and not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must be in (0, 1), got {self.rho}")
        if not (isinstance(self.d, int) and self.d >= 1):
            raise ValueError(f"d must be a positive integer, got {self.d}")


class DtEstimator:
    """Scalar DT gradient recursion with FCT and alertness-preserving readouts.

    The measurement fed at index k is the one paired with the regressor
    delta(k); the update produces theta_hat(k+1).
    """

    def __init__(self, gains: DtGains, theta0: float = 0.0):
        self.gains = gains
        self.k = 0
        self._theta = theta0
        self._theta0 = theta0
        self._w = 1.0
        # snapshots (w, theta_hat); element 0 is the state d samples ago once
        # full, and the k <= 0 convention (w = 1, theta = theta0) before that
        self._hist = deque([(1.0, theta0)], maxlen=gains.d + 1)
        self._factors = deque(maxlen=gains.d)  # last d contraction factors

    def step(self, sample: ScalarLreSample) -> None:
        """Consume the sample at the current index and advance to k + 1."""
        d = sample.delta
        den = self.gains.c + d * d
        self._theta += (d / den) * (sample.y_meas - d * self._theta)
        f = self.gains.c / den
        self._w *= f
        self._factors.append(f)
        self._hist.append((self._w, self._theta))
        self.k += 1

    # -- state ---------------------------------------------------------------

    @property
    def theta_hat(self) -> float:
        return self._theta

    @property
    def theta_hat0(self) -> float:
        return self._theta0

    @property
    def w(self) -> float:
        return self._w

    # -- readouts --------------------------------------------------------------

    @property
    def theta_fct(self) -> float:
        """Reconstruction anchored at the initial estimate."""
        return fct_reconstruct(self._theta, self._theta0, clip(self._w, self._rho()))

    def window_ratio(self) -> float:
        """w(k)/w(k-d) as the product of the last d contraction factors."""
        p = 1.0
        for f in self._factors:
            p *= f
        return p

    @property
    def theta_fct_ap(self) -> float:
        """Reconstruction anchored at the estimate d samples ago."""
        _, theta_then = self._hist[0]
        w_c = clip(self.window_ratio(), self._rho())
        return fct_reconstruct(self._theta, theta_then, w_c)

    def ie_met(self) -> bool:
        """Has the running product crossed the clipping threshold."""
        return self._w < self._rho()

    def ie_window_met(self) -> bool:
        return self.window_ratio() < self._rho()

    def _rho(self) -> float:
        if self.gains.rho is None:
            raise ValueError("clipping threshold rho is not configured")
        return self.gains.rho
