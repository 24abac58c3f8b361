"""Detector substrate models.

Four families of photon-count detectors, all diagonal in the count basis:

* ``ideal_counter`` -- records the photon count at the pixel exactly.
* ``m_photon_absorber`` -- binary detector that fires only when at least m
  photons are present; each photon is absorbed independently with
  probability eta, so q_0(n) = (1 - eta)^n for n >= m and 1 below threshold.
* ``saturating_counter`` -- counts faithfully up to a full-well depth s and
  reports s for any count at or above it.
* ``bleeding_counter`` -- wraps a base detector; the outcome recorded at a
  pixel is the base detector's outcome at a displaced pixel, with the
  displacement distance Poisson distributed and its direction chosen
  uniformly between left and right.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import PixelGrid, Povm

__all__ = [
    "BleedingSpec",
    "BleedingPovm",
    "ideal_counter",
    "m_photon_absorber",
    "saturating_counter",
    "bleeding_counter",
    "displacement_kernel",
]

BOUNDARY_POLICIES = ("clamp", "reflect", "discard")


class IdealCounter(Povm):
    """Perfect photon-number-resolving detector: outcome k = count, i_k = k."""

    def outcome_values(self, n_max: int) -> np.ndarray:
        return np.arange(n_max + 1, dtype=float)

    def conditional_matrix(self, n_max: int) -> np.ndarray:
        return np.eye(n_max + 1)


class MPhotonAbsorber(Povm):
    """Threshold detector exposed by an m-photon absorption process.

    Outcomes are {0: nothing, 1: exposed} with reading values {0, 1}.
    """

    def __init__(self, m: int, eta: float):
        if not isinstance(m, (int, np.integer)) or m < 1:
            raise ValueError(f"absorption order m must be a positive integer (got {m!r})")
        if not (0.0 <= eta <= 1.0):
            raise ValueError(f"efficiency eta must lie in [0, 1] (got {eta!r})")
        self.m = int(m)
        self.eta = float(eta)

    def outcome_values(self, n_max: int) -> np.ndarray:
        return np.array([0.0, 1.0])

    def conditional_matrix(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        q0 = np.where(n < self.m, 1.0, (1.0 - self.eta) ** n)
        return np.vstack([q0, 1.0 - q0])


class SaturatingCounter(Povm):
    """Photon counter with a full-well depth: counts above s all read s."""

    def __init__(self, s: int):
        if not isinstance(s, (int, np.integer)) or s < 1:
            raise ValueError(f"saturation level s must be a positive integer (got {s!r})")
        self.s = int(s)

    def outcome_values(self, n_max: int) -> np.ndarray:
        return np.arange(self.s + 1, dtype=float)

    def conditional_matrix(self, n_max: int) -> np.ndarray:
        n = np.arange(n_max + 1)
        matrix = np.zeros((self.s + 1, n_max + 1))
        clipped = np.minimum(n, self.s)
        matrix[clipped, n] = 1.0
        return matrix


def ideal_counter() -> Povm:
    return IdealCounter()


def m_photon_absorber(m: int, eta: float) -> Povm:
    return MPhotonAbsorber(m, eta)


def saturating_counter(s: int) -> Povm:
    return SaturatingCounter(s)


def displacement_kernel(mean_distance: float, tail_mass: float = 1e-12):
    """Signed displacement offsets and weights for a bleeding detector.

    The distance d is Poisson(mean_distance), truncated where the tail mass
    drops below ``tail_mass`` and renormalized; for d > 0 the direction is
    split evenly between left and right.
    """
    if not (mean_distance >= 0.0) or not np.isfinite(mean_distance):
        raise ValueError(f"mean bleed distance must be non-negative (got {mean_distance!r})")
    if mean_distance == 0.0:
        return np.array([0]), np.array([1.0])
    d_max = int(stats.poisson.isf(tail_mass, mean_distance))
    pd = stats.poisson.pmf(np.arange(d_max + 1), mean_distance)
    pd = pd / pd.sum()
    offsets = np.arange(-d_max, d_max + 1)
    weights = np.empty(offsets.size)
    weights[d_max] = pd[0]
    for d in range(1, d_max + 1):
        weights[d_max + d] = pd[d] / 2.0
        weights[d_max - d] = pd[d] / 2.0
    return offsets, weights


@dataclass(frozen=True)
class BleedingSpec:
    """Configuration of a bleeding detector.

    boundary_policy decides where reads displaced past the grid edge land:
    'clamp' pins them to the edge pixel, 'reflect' mirrors them back into
    the grid, 'discard' drops them and renormalizes the remaining weights.
    """

    mean_distance: float
    base_povm: Povm = field(default_factory=ideal_counter)
    boundary_policy: str = "clamp"

    def __post_init__(self):
        if not (self.mean_distance >= 0.0):
            raise ValueError(f"mean bleed distance must be non-negative (got {self.mean_distance!r})")
        if self.boundary_policy not in BOUNDARY_POLICIES:
            raise ValueError(
                f"boundary_policy must be one of {BOUNDARY_POLICIES} (got {self.boundary_policy!r})"
            )
        if not getattr(self.base_povm, "is_local", False):
            raise ValueError("bleeding must wrap a local (single-pixel) detector")


class BleedingPovm(Povm):
    """Detector whose reads bleed to neighbouring pixels.

    The outcome recorded at pixel x is the base detector's outcome at pixel
    x + delta, delta drawn from the symmetrized Poisson displacement kernel.
    """

    is_local = False

    def __init__(self, spec: BleedingSpec):
        self.spec = spec
        self.base_povm = spec.base_povm
        self.offsets, self.weights = displacement_kernel(spec.mean_distance)

    def outcome_values(self, n_max: int) -> np.ndarray:
        return self.base_povm.outcome_values(n_max)

    def conditional_matrix(self, n_max: int) -> np.ndarray:
        return self.base_povm.conditional_matrix(n_max)

    def _folded_targets(self, grid: PixelGrid, delta: int) -> np.ndarray | None:
        """Read targets for every pixel at one displacement; None = all off-grid reads
        dropped (only possible under 'discard')."""
        n = grid.n_pixels
        idx = np.arange(n) + delta
        policy = self.spec.boundary_policy
        if policy == "clamp":
            return np.clip(idx, 0, n - 1)
        if policy == "reflect":
            if abs(delta) >= n:
                raise ValueError("bleed kernel wider than the grid is not supported with 'reflect'")
            idx = np.where(idx < 0, -1 - idx, idx)
            idx = np.where(idx >= n, 2 * n - 1 - idx, idx)
            return idx
        return None  # discard handles masking itself

    def mix_pixelwise(self, grid: PixelGrid, per_pixel: np.ndarray) -> np.ndarray:
        """Apply the displacement mixing to any per-pixel expectation array."""
        n = grid.n_pixels
        out = np.zeros(n)
        if self.spec.boundary_policy == "discard":
            norm = np.zeros(n)
            base_idx = np.arange(n)
            for delta, w in zip(self.offsets, self.weights):
                idx = base_idx + delta
                inside = (idx >= 0) & (idx < n)
                out[inside] += w * per_pixel[idx[inside]]
                norm[inside] += w
            return out / norm
        for delta, w in zip(self.offsets, self.weights):
            out += w * per_pixel[self._folded_targets(grid, int(delta))]
        return out

    def pixel_kernel(self, grid: PixelGrid, x: int):
        """Read-target pixels and weights for a single pixel x."""
        n = grid.n_pixels
        targets = []
        weights = []
        for delta, w in zip(self.offsets, self.weights):
            t = x + int(delta)
            policy = self.spec.boundary_policy
            if policy == "clamp":
                t = min(max(t, 0), n - 1)
            elif policy == "reflect":
                if abs(int(delta)) >= n:
                    raise ValueError("bleed kernel wider than the grid is not supported with 'reflect'")
                if t < 0:
                    t = -1 - t
                if t >= n:
                    t = 2 * n - 1 - t
            elif not (0 <= t < n):
                continue
            targets.append(t)
            weights.append(w)
        weights = np.asarray(weights)
        return np.asarray(targets, dtype=int), weights / weights.sum()

    def conditional_probability(self, k: int, x: int, n_context) -> float:
        counts = np.asarray(n_context, dtype=int)
        if counts.ndim != 1:
            raise ValueError("bleeding detector needs the full count configuration per pixel")
        grid = PixelGrid(counts.size)
        targets, weights = self.pixel_kernel(grid, x)
        return float(
            sum(
                w * self.base_povm.conditional_probability(k, int(t), int(counts[t]))
                for t, w in zip(targets, weights)
            )
        )


def bleeding_counter(spec: BleedingSpec) -> BleedingPovm:
    return BleedingPovm(spec)
