"""Regressor extension and mixing: vector LRE -> q decoupled scalar LREs.

Extension stacks delayed copies of the vector LRE into a square system; mixing
multiplies by the adjugate so every parameter sees the same scalar regressor,
the determinant of the extended matrix. The adjugate is built from explicit
cofactors (q <= 5) so it stays finite when the determinant vanishes, which an
inverse-based route cannot guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lre import VectorLreSample

MAX_DIM = 5


def _det(m: list) -> float:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    acc = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        acc += -term if j % 2 else term
    return acc


def adjugate_and_det(m: Sequence[Sequence[float]]) -> tuple:
    """Cofactor-expansion adjugate and determinant of a small square matrix.

    Satisfies adj(m) @ m = det(m) * I, including det = 0.
    """
    rows = [list(r) for r in m]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("matrix must be square and non-empty")
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the cofactor limit {MAX_DIM}")
    if n == 1:
        return [[1.0]], rows[0][0]
    adj = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1 :] for k, row in enumerate(rows) if k != i]
            cof = _det(minor)
            adj[j][i] = -cof if (i + j) % 2 else cof
    return adj, _det(rows)


@dataclass(frozen=True)
class ExtendedRegressor:
    """Square stack of delayed regressor rows and the matching measurements."""

    phi_e: tuple  # q rows, row j = phi(k - lags[j])
    y_e: tuple  # entry j = y(k - lags[j])
    k: int


@dataclass(frozen=True)
class MixedScalarLres:
    """q scalar LREs sharing delta = det(phi_e): y_mixed_i = delta * theta_i."""

    delta: float
    y_mixed: tuple
    k: int


def extend(
    history: Sequence[VectorLreSample],
    lags: Sequence[int],
    k: int,
) -> ExtendedRegressor:
    """Stack rows phi(k - lag) for each lag; indices before time zero are zero-filled."""
    lags = list(lags)
    q = len(history[0].phi) if history else 0
    if len(lags) != q:
        raise ValueError(f"need {q} lags for a {q}-dimensional LRE, got {len(lags)}")
    if lags[0] != 0:
        raise ValueError("first lag must be 0")
    if any(b <= a for a, b in zip(lags, lags[1:])):
        raise ValueError(f"lags must be strictly increasing, got {lags}")
    if len(history) <= k:
        raise ValueError(f"history covers indices up to {len(history) - 1}, need {k}")
    rows = []
    ys = []
    for lag in lags:
        idx = k - lag
        if idx < 0:
            rows.append((0.0,) * q)
            ys.append(0.0)
        else:
            rows.append(tuple(history[idx].phi))
            ys.append(history[idx].y)
    return ExtendedRegressor(phi_e=tuple(rows), y_e=tuple(ys), k=k)


def mix(ext: ExtendedRegressor) -> MixedScalarLres:
    """Multiply by the adjugate: delta = det(phi_e), y_mixed = adj(phi_e) y_e."""
    adj, delta = adjugate_and_det(ext.phi_e)
    y_mixed = []
    for row in adj:
        acc = 0.0
        for a, y in zip(row, ext.y_e):
            acc += a * y
        y_mixed.append(acc)
    return MixedScalarLres(delta=delta, y_mixed=tuple(y_mixed), k=ext.k)
