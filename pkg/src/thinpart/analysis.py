"""Sublevel-set measurements for scalar fields.

The quantity of interest is how much mass |f| < eps carries, either on a box
in R^d (Monte Carlo with a CLT band) or on SO(n) against Haar measure, where
the decay rate in eps is fitted as a power law.  A finite-difference order
estimator rounds out the toolkit: the measured decay exponent should be about
1 / order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .linalg import haar_orthogonal

__all__ = [
    "DegenerateFieldError",
    "GridTooSmallError",
    "ScalarField",
    "Box",
    "MeasureEstimate",
    "sublevel_measure",
    "good_constant_estimate",
    "compact_group_sublevel_fit",
    "estimate_order",
]


class DegenerateFieldError(ValueError):
    """Field is numerically zero on the region; no scale to normalize by."""


class GridTooSmallError(ValueError):
    """Every epsilon on the grid produced an empty sublevel set."""


@dataclass(frozen=True)
class ScalarField:
    """Scalar function on R^dim; eval maps an (m, dim) batch to (m,) values."""

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    label: str


@dataclass(frozen=True)
class Box:
    """Sup-norm ball: center +/- radius in every coordinate."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("box radius must be positive")
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)))

    @property
    def dim(self) -> int:
        return self.center.shape[0]


class MeasureEstimate(NamedTuple):
    value: float
    halfwidth: float  # 3 sigma CLT band


def _band(p_hat: float, n: int) -> float:
    return 3.0 * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)


def sublevel_measure(
    f: ScalarField, box: Box, eps: float, n_samples: int, rng: np.random.Generator
) -> MeasureEstimate:
    """Monte Carlo estimate of the normalized volume of {|f| < eps} in the box."""
    if f.dim != box.dim:
        raise ValueError("field and box dimensions disagree")
    if n_samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {n_samples}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    pts = box.center + box.radius * rng.uniform(-1.0, 1.0, size=(n_samples, box.dim))
    values = np.asarray(f.eval(pts), dtype=float)
    p_hat = float(np.mean(np.abs(values) < eps))
    return MeasureEstimate(p_hat, _band(p_hat, n_samples))


def good_constant_estimate(
    f: ScalarField,
    box: Box,
    alpha: float,
    eps_grid: list,
    subball_count: int,
    rng: np.random.Generator,
    samples_per_ball: int = 4096,
) -> float:
    """Estimate the constant C in measure{|f| < eps} <= C (eps / sup|f|)^alpha.

    Random sub-boxes B' of the box are drawn (center uniform, radius uniform
    below the distance to the boundary), sup|f| on B' is taken from the same
    sample cloud, and the max of measure * (sup / eps)^alpha over every
    (B', eps) pair is returned.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if subball_count < 1:
        raise ValueError("need at least one sub-ball")
    probe = box.center + box.radius * rng.uniform(-1.0, 1.0, size=(4096, box.dim))
    if float(np.max(np.abs(f.eval(probe)))) < 1e-14:
        raise DegenerateFieldError(f"field {f.label!r} vanishes on the box")
    c_hat = 0.0
    for _ in range(subball_count):
        center = box.center + box.radius * rng.uniform(-1.0, 1.0, size=box.dim)
        slack = box.radius - float(np.max(np.abs(center - box.center)))
        radius = rng.uniform(0.0, 1.0) * slack
        if radius <= 0:
            continue
        pts = center + radius * rng.uniform(-1.0, 1.0, size=(samples_per_ball, box.dim))
        values = np.abs(np.asarray(f.eval(pts), dtype=float))
        sup = float(values.max())
        if sup < 1e-14:
            continue
        for eps in eps_grid:
            measure = float(np.mean(values < eps))
            c_hat = max(c_hat, measure * (sup / eps) ** alpha)
    return c_hat


def _haar_coefficient_samples(
    n: int, coefficient: tuple, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    i, j = coefficient
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"coefficient index {coefficient} out of range for SO({n})")
    if n == 2:
        # Haar on SO(2) is the uniform angle; sample it directly.
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n_samples)
        entries = [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        return entries[j][i]
    out = np.empty(n_samples)
    for t in range(n_samples):
        out[t] = haar_orthogonal(n, rng)[j, i]
    return out


def compact_group_sublevel_fit(
    n: int,
    coefficient: tuple,
    eps_grid: list,
    rng: np.random.Generator,
    n_samples: int = 200_000,
) -> tuple:
    """Fit measure{|<g e_i, e_j>| < eps} ~ kappa eps^slope over Haar samples.

    Grid points whose measure comes out 0 (too small to resolve) or 1
    (eps above sup|f|) are excluded from the fit.  Returns (kappa_hat,
    slope_hat).
    """
    values = np.abs(_haar_coefficient_samples(n, coefficient, n_samples, rng))
    values.sort()
    eps_arr = np.asarray(sorted(eps_grid), dtype=float)
    measures = np.searchsorted(values, eps_arr, side="left") / n_samples
    keep = (measures > 0.0) & (measures < 1.0)
    if not np.any(measures > 0.0):
        raise GridTooSmallError("no epsilon on the grid captured any mass")
    if np.count_nonzero(keep) < 2:
        raise GridTooSmallError("fewer than two usable grid points for the fit")
    slope, intercept = np.polyfit(np.log(eps_arr[keep]), np.log(measures[keep]), 1)
    return float(np.exp(intercept)), float(slope)


def _central_difference(f: ScalarField, point: float, order: int, h: float) -> float:
    offsets = np.array([order / 2.0 - k for k in range(order + 1)])
    signs = np.array([(-1.0) ** k for k in range(order + 1)])
    coeffs = np.array([math.comb(order, k) for k in range(order + 1)], dtype=float)
    pts = (point + h * offsets).reshape(-1, 1)
    vals = np.asarray(f.eval(pts), dtype=float)
    return float(np.sum(signs * coeffs * vals)) / h**order


def estimate_order(f: ScalarField, point: float, max_order: int) -> int:
    """Vanishing order of f at the point: the first nonzero Taylor exponent.

    Central differences over a step ladder; a derivative counts as nonzero
    only if its Richardson-extrapolated value is stable between steps and
    clears an absolute floor, which filters both higher-order Taylor leakage
    (unstable, scales like a power of h) and rounding noise.  Returns
    max_order + 1 when everything through max_order vanishes.
    """
    if f.dim != 1:
        raise ValueError("order estimation expects a one-parameter field")
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    window = point + 0.1 * np.arange(-5, 6).reshape(-1, 1)
    scale = float(np.max(np.abs(f.eval(window)))) + 1e-300
    floor = 1e-6 * scale
    value = float(f.eval(np.array([[point]]))[0])
    if abs(value) > floor:
        return 0
    ladder = (0.2, 0.1, 0.05)
    for order in range(1, max_order + 1):
        ests = [_central_difference(f, point, order, h) for h in ladder]
        riches = [
            (4.0 * ests[i + 1] - ests[i]) / 3.0 for i in range(len(ladder) - 1)
        ]
        if any(abs(e) <= floor for e in ests):
            continue
        ratios = [ests[i + 1] / ests[i] for i in range(len(ests) - 1)]
        stable = all(0.5 <= r <= 2.0 for r in ratios)
        if stable and all(abs(r) > floor for r in riches):
            return order
    return max_order + 1
