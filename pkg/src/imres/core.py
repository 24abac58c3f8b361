"""Pixel grids, images, photon-count field models and detector POVMs.

The data model is a one-dimensional substrate of N pixels recording light
whose state is diagonal in the photon-number basis.  A detector model (POVM)
turns the photon count at (or near) a pixel into a recorded outcome k with
reading value i_k; the expected image is the per-pixel mean recorded value.

Two field models cover every source handled here:

* ``IndependentPixelField`` -- statistically independent photon-count
  distributions pixel by pixel (e.g. Poisson counts from an uncorrelated
  coherent illumination profile).
* ``SingleClusterField`` -- all photons arrive bunched at a single pixel
  whose position is random; an optional coincidence weight accounts for
  shots in which the photons fail to bunch and no pixel sees the full
  cluster.

Every expectation computed in this package interrogates one pixel's count
per realisation (possibly a displaced pixel, for bleeding detectors), so
per-pixel marginal count distributions are sufficient and the exponential
joint configuration space never has to be enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import stats

__all__ = [
    "PROBABILITY_ATOL",
    "COMPLETENESS_ATOL",
    "GridMismatchError",
    "DegenerateImageError",
    "PovmError",
    "PixelGrid",
    "Image",
    "ProbabilityDistribution",
    "CountDistribution",
    "IndependentPixelField",
    "SingleClusterField",
    "Povm",
    "TabulatedPovm",
    "normalize",
    "poisson_pixel_field",
    "expected_image",
    "outcome_distribution",
    "no_detection_probabilities",
]

# Absolute tolerance for any array claiming to be a probability distribution.
PROBABILITY_ATOL = 1e-12
# Tolerance for POVM completeness (sum over outcomes of q_k given a count).
COMPLETENESS_ATOL = 1e-9


class GridMismatchError(ValueError):
    """Two objects built on different pixel grids were combined."""


class DegenerateImageError(ValueError):
    """An image with zero total intensity cannot be normalized."""


class PovmError(ValueError):
    """A detector model violates the POVM constraints."""


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# grids, images, probability distributions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PixelGrid:
    """Uniform one-dimensional pixel grid.

    Pixel j (j = 0 .. n_pixels-1) carries the integer index
    ``origin_index + j`` and sits at physical position index * pixel_width.
    """

    n_pixels: int
    pixel_width: float = 1.0
    origin_index: int = 0

    def __post_init__(self):
        if not isinstance(self.n_pixels, (int, np.integer)) or self.n_pixels < 1:
            raise ValueError(f"n_pixels must be a positive integer (got {self.n_pixels!r})")
        if not (self.pixel_width > 0.0):
            raise ValueError(f"pixel_width must be positive (got {self.pixel_width!r})")
        if not isinstance(self.origin_index, (int, np.integer)):
            raise ValueError(f"origin_index must be an integer (got {self.origin_index!r})")

    @classmethod
    def centered(cls, n_pixels: int, pixel_width: float = 1.0) -> "PixelGrid":
        """Grid whose index range is centred on zero (exactly for odd sizes)."""
        return cls(n_pixels, pixel_width, -(int(n_pixels) // 2))

    @property
    def length(self) -> float:
        return self.n_pixels * self.pixel_width

    def pixel_indices(self) -> np.ndarray:
        """Integer pixel indices, origin_index .. origin_index + n_pixels - 1."""
        return self.origin_index + np.arange(self.n_pixels)

    def positions(self) -> np.ndarray:
        """Physical pixel positions (index times pixel width)."""
        return self.pixel_indices() * self.pixel_width


def _check_same_grid(a: PixelGrid, b: PixelGrid, what: str) -> None:
    if a != b:
        raise GridMismatchError(f"{what} are defined on different grids: {a} vs {b}")


@dataclass(frozen=True)
class Image:
    """Non-negative expected reading per pixel."""

    grid: PixelGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _readonly(self.values)
        if vals.ndim != 1 or vals.size != self.grid.n_pixels:
            raise ValueError(
                f"image needs one value per pixel ({self.grid.n_pixels}), got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("image values must be finite")
        if np.any(vals < 0.0):
            raise ValueError("image values must be non-negative")
        object.__setattr__(self, "values", vals)

    @property
    def normalization(self) -> float:
        """Total intensity (sum over pixels), recomputed on access."""
        return float(self.values.sum())

    def scaled(self, factor: float) -> "Image":
        return Image(self.grid, self.values * float(factor))


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Probability per pixel; must sum to one within PROBABILITY_ATOL."""

    grid: PixelGrid
    probabilities: np.ndarray

    def __post_init__(self):
        probs = _readonly(self.probabilities)
        if probs.ndim != 1 or probs.size != self.grid.n_pixels:
            raise ValueError(
                f"need one probability per pixel ({self.grid.n_pixels}), got shape {probs.shape}"
            )
        if not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite")
        if np.any(probs < 0.0):
            raise ValueError("probabilities must be non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > PROBABILITY_ATOL:
            raise ValueError(f"probabilities must sum to 1 within {PROBABILITY_ATOL} (got {total!r})")
        object.__setattr__(self, "probabilities", probs)


def normalize(image: Image) -> ProbabilityDistribution:
    """Turn an image into the pixel distribution it is proportional to."""
    total = image.normalization
    if total <= 0.0:
        raise DegenerateImageError("degenerate image: zero total intensity")
    return ProbabilityDistribution(image.grid, image.values / total)


# ---------------------------------------------------------------------------
# photon-count distributions and field models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountDistribution:
    """Finite-support distribution over photon counts n = offset .. offset+len-1."""

    offset: int
    probs: np.ndarray

    def __post_init__(self):
        if not isinstance(self.offset, (int, np.integer)) or self.offset < 0:
            raise ValueError(f"offset must be a non-negative integer (got {self.offset!r})")
        probs = _readonly(self.probs)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a non-empty 1-d array")
        if np.any(probs < 0.0) or not np.all(np.isfinite(probs)):
            raise ValueError("count probabilities must be finite and non-negative")
        total = float(probs.sum())
        if abs(total - 1.0) > PROBABILITY_ATOL:
            raise ValueError(f"count probabilities must sum to 1 within {PROBABILITY_ATOL} (got {total!r})")
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "probs", probs)

    @property
    def n_max(self) -> int:
        return self.offset + self.probs.size - 1

    def mean(self) -> float:
        return float(np.dot(self.offset + np.arange(self.probs.size), self.probs))

    def as_mapping(self) -> dict[int, float]:
        return {self.offset + i: float(p) for i, p in enumerate(self.probs)}

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "CountDistribution":
        if not mapping:
            raise ValueError("count distribution needs at least one entry")
        lo = min(mapping)
        hi = max(mapping)
        probs = np.zeros(hi - lo + 1)
        for n, p in mapping.items():
            probs[n - lo] = p
        return cls(lo, probs)

    @classmethod
    def poisson(cls, mean: float, tail_mass: float = 1e-12) -> "CountDistribution":
        """Poisson counts truncated where the excluded tail mass is below
        ``tail_mass``, then renormalized."""
        if not (mean >= 0.0) or not np.isfinite(mean):
            raise ValueError(f"Poisson mean must be non-negative and finite (got {mean!r})")
        if mean == 0.0:
            return cls(0, np.ones(1))
        lo = int(stats.poisson.ppf(tail_mass / 2.0, mean))
        hi = int(stats.poisson.isf(tail_mass / 2.0, mean))
        ns = np.arange(lo, hi + 1)
        probs = stats.poisson.pmf(ns, mean)
        probs = probs / probs.sum()
        return cls(lo, probs)


@dataclass(frozen=True)
class IndependentPixelField:
    """Independent photon-count distribution at every pixel."""

    grid: PixelGrid
    distributions: tuple[CountDistribution, ...]
    kind: str = field(default="independent_pixels", init=False)

    def __post_init__(self):
        dists = tuple(self.distributions)
        if len(dists) != self.grid.n_pixels:
            raise ValueError(
                f"need one count distribution per pixel ({self.grid.n_pixels}), got {len(dists)}"
            )
        object.__setattr__(self, "distributions", dists)

    @property
    def max_count(self) -> int:
        return max(d.n_max for d in self.distributions)

    def marginal(self, x: int) -> CountDistribution:
        return self.distributions[x]

    def expected_values(self, per_count: np.ndarray) -> np.ndarray:
        """Per-pixel expectation of a function of the local count,
        given as an array indexed by count (0 .. max_count)."""
        out = np.empty(self.grid.n_pixels)
        for j, d in enumerate(self.distributions):
            out[j] = np.dot(per_count[d.offset : d.offset + d.probs.size], d.probs)
        return out


@dataclass(frozen=True)
class SingleClusterField:
    """All photons bunched at one random pixel.

    ``weight`` is the coincidence probability that a shot actually delivers
    the full ``cluster_size``-photon bunch to a single pixel; with
    probability 1 - weight nothing above the vacuum reaches the substrate.
    Conditional on bunching, ``location`` gives the pixel the bunch lands on.
    """

    grid: PixelGrid
    cluster_size: int
    location: ProbabilityDistribution
    weight: float = 1.0
    kind: str = field(default="single_cluster", init=False)

    def __post_init__(self):
        if not isinstance(self.cluster_size, (int, np.integer)) or self.cluster_size < 1:
            raise ValueError(f"cluster_size must be a positive integer (got {self.cluster_size!r})")
        if not (0.0 <= self.weight <= 1.0):
            raise ValueError(f"weight must lie in [0, 1] (got {self.weight!r})")
        _check_same_grid(self.location.grid, self.grid, "cluster location and field")
        object.__setattr__(self, "cluster_size", int(self.cluster_size))

    @property
    def max_count(self) -> int:
        return self.cluster_size

    def _pixel_cluster_probs(self) -> np.ndarray:
        return self.weight * self.location.probabilities

    def marginal(self, x: int) -> CountDistribution:
        m = self.cluster_size
        p_here = float(self._pixel_cluster_probs()[x])
        probs = np.zeros(m + 1)
        probs[0] = 1.0 - p_here
        probs[m] = p_here
        return CountDistribution(0, probs)

    def expected_values(self, per_count: np.ndarray) -> np.ndarray:
        p_here = self._pixel_cluster_probs()
        return per_count[0] * (1.0 - p_here) + per_count[self.cluster_size] * p_here


PhotonFieldModel = IndependentPixelField | SingleClusterField


def poisson_pixel_field(
    grid: PixelGrid, means, tail_mass: float = 1e-12
) -> IndependentPixelField:
    """Independent Poisson counts with the given per-pixel means."""
    means = np.asarray(means, dtype=float)
    if means.shape != (grid.n_pixels,):
        raise ValueError(f"need one mean per pixel ({grid.n_pixels}), got shape {means.shape}")
    if np.any(means < 0.0) or not np.all(np.isfinite(means)):
        raise ValueError("Poisson means must be finite and non-negative")

    positive = means > 0.0
    lo = np.zeros(grid.n_pixels, dtype=int)
    hi = np.zeros(grid.n_pixels, dtype=int)
    if np.any(positive):
        mu = means[positive]
        lo[positive] = stats.poisson.ppf(tail_mass / 2.0, mu).astype(int)
        hi[positive] = stats.poisson.isf(tail_mass / 2.0, mu).astype(int)
    lengths = hi - lo + 1

    # one flat pmf evaluation for all pixels, then split
    flat_n = np.concatenate([np.arange(a, b + 1) for a, b in zip(lo, hi)])
    flat_mu = np.repeat(means, lengths)
    flat_p = np.where(flat_mu > 0.0, stats.poisson.pmf(flat_n, np.maximum(flat_mu, 1e-300)), 1.0)
    bounds = np.cumsum(lengths)[:-1]
    dists = []
    for offset, probs in zip(lo, np.split(flat_p, bounds)):
        dists.append(CountDistribution(int(offset), probs / probs.sum()))
    return IndependentPixelField(grid, tuple(dists))


# ---------------------------------------------------------------------------
# detector POVMs
# ---------------------------------------------------------------------------


class Povm:
    """Detector model: conditional outcome probabilities given photon counts.

    Local detectors are fully described by a matrix Q with
    Q[k, n] = q_k(n) = Pr(outcome k | n photons at the read pixel) and a
    list of reading values i_k; non-local detectors (bleeding) additionally
    mix the pixel the count is read from and set ``is_local = False``.
    """

    is_local: bool = True

    def outcome_values(self, n_max: int) -> np.ndarray:
        raise NotImplementedError

    def conditional_matrix(self, n_max: int) -> np.ndarray:
        raise NotImplementedError

    def conditional_probability(self, k: int, x: int, n_context) -> float:
        """q_k(x | count context). Local detectors ignore x and take a scalar count."""
        n = int(n_context)
        matrix = self.conditional_matrix(max(n, 0))
        if k < 0 or k >= matrix.shape[0]:
            return 0.0
        return float(matrix[k, n])


class TabulatedPovm(Povm):
    """Local detector specified by an explicit (outcomes x counts) matrix."""

    def __init__(self, outcome_values, matrix):
        self._values = _readonly(outcome_values)
        self._matrix = _readonly(np.atleast_2d(matrix))
        if self._matrix.shape[0] != self._values.size:
            raise PovmError("invalid POVM: one matrix row per outcome required")

    def outcome_values(self, n_max: int) -> np.ndarray:
        return self._values

    def conditional_matrix(self, n_max: int) -> np.ndarray:
        if n_max + 1 > self._matrix.shape[1]:
            raise PovmError(
                f"invalid POVM: tabulated up to count {self._matrix.shape[1] - 1}, "
                f"field support reaches {n_max}"
            )
        return np.asarray(self._matrix[:, : n_max + 1])


def _local_part(povm: Povm) -> Povm:
    return povm if povm.is_local else povm.base_povm  # type: ignore[attr-defined]


def _validated_conditional(povm: Povm, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Outcome values and conditional matrix of the local part, validated."""
    local = _local_part(povm)
    values = np.asarray(local.outcome_values(n_max), dtype=float)
    matrix = np.asarray(local.conditional_matrix(n_max), dtype=float)
    if matrix.shape != (values.size, n_max + 1):
        raise PovmError(
            f"invalid POVM: conditional matrix shape {matrix.shape}, "
            f"expected {(values.size, n_max + 1)}"
        )
    if np.any(matrix < -1e-12) or np.any(matrix > 1.0 + 1e-12):
        raise PovmError("invalid POVM: conditional probability outside [0, 1]")
    col_sums = matrix.sum(axis=0)
    worst = float(np.max(np.abs(col_sums - 1.0)))
    if worst > COMPLETENESS_ATOL:
        raise PovmError(
            f"POVM completeness violated: outcome probabilities sum to 1 +/- {worst:.3e}"
        )
    return values, matrix


def _mixed(field_values: np.ndarray, field_model: PhotonFieldModel, povm: Povm) -> np.ndarray:
    if povm.is_local:
        return field_values
    return povm.mix_pixelwise(field_model.grid, field_values)  # type: ignore[attr-defined]


def expected_image(field_model: PhotonFieldModel, povm: Povm) -> Image:
    """Expected recorded image: per-pixel mean of the reading value i_k."""
    values, matrix = _validated_conditional(povm, field_model.max_count)
    per_count = values @ matrix  # E[i_k | n] as a function of the count n
    pix = field_model.expected_values(per_count)
    return Image(field_model.grid, np.maximum(_mixed(pix, field_model, povm), 0.0))


def _marginal_outcome_probs(
    field_model: PhotonFieldModel, matrix: np.ndarray, x: int
) -> np.ndarray:
    d = field_model.marginal(x)
    return matrix[:, d.offset : d.offset + d.probs.size] @ d.probs


def outcome_distribution(field_model: PhotonFieldModel, povm: Povm, x: int) -> dict[int, float]:
    """Probability of each outcome index k at pixel x (mapping k -> p_k(x))."""
    if not (0 <= x < field_model.grid.n_pixels):
        raise ValueError(f"pixel index {x} outside grid of {field_model.grid.n_pixels} pixels")
    _, matrix = _validated_conditional(povm, field_model.max_count)
    if povm.is_local:
        probs = _marginal_outcome_probs(field_model, matrix, x)
    else:
        targets, weights = povm.pixel_kernel(field_model.grid, x)  # type: ignore[attr-defined]
        probs = np.zeros(matrix.shape[0])
        for t, w in zip(targets, weights):
            probs += w * _marginal_outcome_probs(field_model, matrix, int(t))
    total = float(probs.sum())
    if abs(total - 1.0) > PROBABILITY_ATOL:
        raise PovmError(f"outcome probabilities at pixel {x} sum to {total!r}, expected 1")
    return {k: float(p) for k, p in enumerate(probs)}


def no_detection_probabilities(field_model: PhotonFieldModel, povm: Povm) -> np.ndarray:
    """Per-pixel probability of the null outcome k = 0."""
    _, matrix = _validated_conditional(povm, field_model.max_count)
    p0 = field_model.expected_values(matrix[0])
    return np.clip(_mixed(p0, field_model, povm), 0.0, 1.0)
