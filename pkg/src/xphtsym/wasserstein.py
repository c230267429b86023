"""1-Wasserstein distance between extended persistence diagrams."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .persistence import KINDS, ThetaPoint, XPHDiagram, XPHInterval

__all__ = ["TransportPlanCost", "d_theta", "d_interval", "ephemeral_cost", "w1", "w1_plan", "w1_tuple"]


@dataclass(frozen=True)
class TransportPlanCost:
    matched: float
    unmatched_x: float
    unmatched_y: float

    @property
    def total(self) -> float:
        return self.matched + self.unmatched_x + self.unmatched_y


def d_theta(a: ThetaPoint, b: ThetaPoint) -> float:
    if a.tag is not b.tag:
        return math.inf
    return abs(a.value - b.value)


def d_interval(x: XPHInterval, y: XPHInterval) -> float:
    return d_theta(x.birth, y.birth) + d_theta(x.death, y.death)


def ephemeral_cost(x: XPHInterval) -> float:
    """Distance from ``x`` to the nearest ephemeral interval of its own kind.

    ``|b - s| + |d - s|`` is minimised by any ``s`` between the endpoint
    values, giving ``|b - d|``; ephemeral families of other kinds are at
    infinite distance.
    """
    return abs(x.birth.value - x.death.value)


def _match(bx, dx, by, dy):
    """Optimal matched / unmatched cost split for same-kind interval arrays."""
    m, n = len(bx), len(by)
    px, py = np.abs(bx - dx), np.abs(by - dy)
    if m == 0 or n == 0:
        return 0.0, float(px.sum()), float(py.sum())
    cost = np.zeros((m + n, m + n))
    cost[:m, :n] = np.abs(bx[:, None] - by[None, :]) + np.abs(dx[:, None] - dy[None, :])
    # any ephemeral slot serves any interval, so whole rows/columns share one cost
    cost[:m, n:] = px[:, None]
    cost[m:, :n] = py[None, :]
    rows, cols = linear_sum_assignment(cost)
    real = (rows < m) & (cols < n)
    to_eph_x = (rows < m) & (cols >= n)
    to_eph_y = (rows >= m) & (cols < n)
    return (float(cost[rows[real], cols[real]].sum()),
            float(px[rows[to_eph_x]].sum()),
            float(py[cols[to_eph_y]].sum()))


def w1_plan(X: XPHDiagram, Y: XPHDiagram) -> TransportPlanCost:
    """Cost breakdown of an optimal transportation plan from ``X`` to ``Y``.

    Matching intervals of different kinds costs infinity while routing to an
    ephemeral interval is finite, so each kind is matched on its own.
    """
    if X.degree != Y.degree:
        raise ValueError(f"cannot compare diagrams of degree {X.degree} and {Y.degree}")
    swapped = X.canonical_key > Y.canonical_key
    if swapped:
        X, Y = Y, X
    matched = ux = uy = 0.0
    for kind in KINDS:
        bx, dx = X.arrays(kind)
        by, dy = Y.arrays(kind)
        if len(bx) == 0 and len(by) == 0:
            continue
        m, a, b = _match(bx, dx, by, dy)
        matched += m
        ux += a
        uy += b
    if swapped:
        ux, uy = uy, ux
    return TransportPlanCost(matched, ux, uy)


def w1(X: XPHDiagram, Y: XPHDiagram) -> float:
    p = w1_plan(X, Y)
    # fixed summation order keeps w1(X, Y) == w1(Y, X) bit for bit
    return p.matched + min(p.unmatched_x, p.unmatched_y) + max(p.unmatched_x, p.unmatched_y)


def w1_tuple(A, B) -> float:
    """Sum of degree-wise distances between two per-direction diagram tuples."""
    if len(A) != len(B):
        raise ValueError("diagram tuples must have the same length")
    total = 0.0
    for x, y in zip(A, B):
        total += w1(x, y)
    return total
