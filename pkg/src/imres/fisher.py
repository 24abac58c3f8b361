"""Fisher information of parametrized images and the resolution bounds it sets.

For a pixel distribution Pr(x|theta) the Fisher information is

    F(theta) = sum_x (d Pr(x|theta) / d theta)^2 / Pr(x|theta)

and the Cramer-Rao bound limits any unbiased estimate of theta to a standard
deviation of at least 1 / sqrt(F).  For an unnormalized image I(x|theta) with
total I0(theta), the same quantity expressed directly in image terms is

    F(theta) = sum_x (d I(x)/d theta)^2 / (I0 I(x)) - (d I0/d theta)^2 / I0^2

where the second term is kept even when I0 happens to be constant.  Pixels
with vanishing intensity are regularized by a floor epsilon proportional to
the brightest pixel; without it the near-zeros of fringe patterns produce
spurious near-singular quotients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DegenerateImageError, GridMismatchError, Image, ProbabilityDistribution

__all__ = [
    "FisherReport",
    "statistical_distance_increment",
    "fisher_from_distribution",
    "fisher_from_images",
    "cramer_rao_resolution",
    "two_point_resolution",
    "generator_bound",
]

STEP_CHECK_RTOL = 1e-6


@dataclass(frozen=True)
class FisherReport:
    """Fisher information at one parameter value and the bound it implies."""

    theta: float
    fisher: float
    resolution: float
    method: str  # "analytic_derivative" or "central_difference"
    step: float | None  # finite-difference step, None for analytic derivatives
    floor: float  # probability floor actually applied


def _default_step(theta: float) -> float:
    return 1e-5 * max(1.0, abs(theta))


def _report(theta: float, fisher: float, method: str, step: float | None, floor: float) -> FisherReport:
    fisher = max(float(fisher), 0.0)  # guard tiny negative round-off
    resolution = 1.0 / math.sqrt(fisher) if fisher > 0.0 else math.inf
    return FisherReport(float(theta), fisher, resolution, method, step, float(floor))


def _check_step(coarse: float, fine: float, step: float) -> None:
    scale = max(abs(fine), np.finfo(float).tiny)
    if abs(coarse - fine) / scale >= STEP_CHECK_RTOL:
        warnings.warn(
            f"Fisher estimate changed by {abs(coarse - fine) / scale:.2e} (relative) when the "
            f"step {step:g} was halved; the finite-difference step may be unsuitable",
            stacklevel=3,
        )


def statistical_distance_increment(
    p0: ProbabilityDistribution, p1: ProbabilityDistribution, floor_scale: float = 1e-12
) -> float:
    """Squared statistical distance sum_x (p1 - p0)^2 / p0 between two nearby
    pixel distributions, with the reference probabilities floored."""
    if p0.grid != p1.grid:
        raise GridMismatchError(f"distributions live on different grids: {p0.grid} vs {p1.grid}")
    base = p0.probabilities
    floor = floor_scale * float(base.max())
    diff = p1.probabilities - base
    return float(np.sum(diff * diff / np.maximum(base, floor)))


def _mixed_probabilities(dist: ProbabilityDistribution, background: float) -> np.ndarray:
    p = dist.probabilities
    if background:
        p = (1.0 - background) * p + background / p.size
    return p


def fisher_from_distribution(
    family: Callable[[float], ProbabilityDistribution],
    theta: float,
    derivative=None,
    *,
    step: float | None = None,
    floor_scale: float = 1e-12,
    background: float = 0.0,
    validate_step: bool = True,
) -> FisherReport:
    """Fisher information of a pixel-distribution family at ``theta``.

    ``derivative`` may be the per-pixel theta-derivative (array), a callable
    returning it, or None to fall back on central differences with ``step``
    (default 1e-5 * max(1, |theta|)).  ``background`` mixes a uniform faint
    floor into the distribution, Pr <- (1 - b) Pr + b / N.  Probabilities are
    floored at floor_scale * max(Pr) and renormalized before the quotient.
    """
    if not (0.0 <= background < 1.0):
        raise ValueError(f"background must lie in [0, 1) (got {background!r})")
    p = _mixed_probabilities(family(theta), background)
    floor = floor_scale * float(p.max())
    floored = np.maximum(p, floor)
    floored = floored / floored.sum()

    def quotient(d: np.ndarray) -> float:
        d = np.asarray(d, dtype=float)
        if d.shape != p.shape:
            raise ValueError(f"derivative shape {d.shape} does not match {p.shape} pixels")
        return float(np.sum(d * d / floored))

    if derivative is not None:
        d = derivative(theta) if callable(derivative) else derivative
        d = (1.0 - background) * np.asarray(d, dtype=float)
        return _report(theta, quotient(d), "analytic_derivative", None, floor)

    h = _default_step(theta) if step is None else float(step)
    if h <= 0.0:
        raise ValueError(f"step must be positive (got {step!r})")

    def central(hh: float) -> float:
        upper = _mixed_probabilities(family(theta + hh), background)
        lower = _mixed_probabilities(family(theta - hh), background)
        return quotient((upper - lower) / (2.0 * hh))

    value = central(h)
    if validate_step:
        _check_step(value, central(h / 2.0), h)
    return _report(theta, value, "central_difference", h, floor)


def fisher_from_images(
    image_family: Callable[[float], Image],
    theta: float,
    *,
    step: float | None = None,
    floor_scale: float = 1e-12,
    background: float = 0.0,
    validate_step: bool = True,
) -> FisherReport:
    """Fisher information computed directly from an unnormalized image family.

    Both terms of the image-form expression are evaluated; the second
    (total-intensity) term vanishes automatically when I0 is theta
    independent.  ``background`` mixes a uniform component into the image
    while preserving its total, I <- (1 - b) I + b I0 / N.
    """
    if not (0.0 <= background < 1.0):
        raise ValueError(f"background must lie in [0, 1) (got {background!r})")
    h = _default_step(theta) if step is None else float(step)
    if h <= 0.0:
        raise ValueError(f"step must be positive (got {step!r})")

    def image_values(th: float) -> tuple[np.ndarray, float]:
        img = image_family(th)
        total = img.normalization
        if total <= 0.0:
            raise DegenerateImageError("degenerate image: zero total intensity")
        vals = img.values
        if background:
            vals = (1.0 - background) * vals + background * total / vals.size
        return vals, total

    center, i0 = image_values(theta)
    floor = floor_scale * float(center.max())
    denominator = i0 * np.maximum(center, floor)

    def estimate(hh: float) -> float:
        upper, _ = image_values(theta + hh)
        lower, _ = image_values(theta - hh)
        d = (upper - lower) / (2.0 * hh)
        safe = np.where(denominator > 0.0, denominator, 1.0)
        terms = np.where(denominator > 0.0, d * d / safe, 0.0)
        return float(terms.sum() - (d.sum() / i0) ** 2)

    value = estimate(h)
    if validate_step:
        _check_step(value, estimate(h / 2.0), h)
    # report the floor in probability units to match the distribution route
    return _report(theta, value, "central_difference", h, floor / i0)


def cramer_rao_resolution(fisher: float) -> float:
    """Smallest resolvable parameter increment, 1 / sqrt(F)."""
    if not np.isfinite(fisher) or fisher < 0.0:
        raise ValueError(f"Fisher information must be finite and non-negative (got {fisher!r})")
    if fisher == 0.0:
        raise ValueError("parameter not identifiable from this image")
    return 1.0 / math.sqrt(fisher)


def two_point_resolution(
    fisher_curve: Callable[[float], float],
    bracket: tuple[float, float],
    rel_tol: float = 1e-6,
    max_iter: int = 200,
) -> float:
    """Smallest separation theta with theta^2 F(theta) >= 1.

    Solves theta^2 F(theta) = 1 by bisection on the given bracket, to a
    relative tolerance on theta.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < lo < hi):
        raise ValueError(f"bracket must satisfy 0 < lo < hi (got {bracket!r})")

    def gap(theta: float) -> float:
        return theta * theta * float(fisher_curve(theta)) - 1.0

    g_lo = gap(lo)
    g_hi = gap(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if np.sign(g_lo) == np.sign(g_hi):
        raise ValueError(
            "two-point criterion has no sign change in the bracket: "
            f"theta^2 F - 1 = {g_lo:.6g} at {lo:.6g} and {g_hi:.6g} at {hi:.6g}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if (hi - lo) <= rel_tol * abs(mid):
            break
        g_mid = gap(mid)
        if g_mid == 0.0:
            return mid
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def generator_bound(generator_variance: float) -> float:
    """Upper bound 4 * Var(K) on the Fisher information of any measurement
    of a state whose theta-dependence is generated by the observable K."""
    if not (generator_variance >= 0.0):
        raise ValueError(f"generator variance must be non-negative (got {generator_variance!r})")
    return 4.0 * float(generator_variance)
