"""Benchmark imaging scenarios.

Three parametrized sources cover the cases of interest:

* interference lithography -- an M-photon bunch whose landing position
  follows the M-fold interference pattern cos^2(M kappa_ell x + M theta / 2);
  the estimated parameter is the fringe phase theta.
* Gaussian coherent dot -- independent Poisson counts with a Gaussian
  intensity profile; the estimated parameter is the dot centre.
* double slit -- the far-field fringe pattern cos^2(pi theta s / lambda)
  captured over s in [-A, A]; the estimated parameter is the slit
  separation theta, and resolving it is a two-point criterion on
  theta^2 F(theta).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import (
    Image,
    IndependentPixelField,
    PixelGrid,
    Povm,
    ProbabilityDistribution,
    SingleClusterField,
    expected_image,
    normalize,
    poisson_pixel_field,
)

__all__ = [
    "LithographySpec",
    "GaussianDotSpec",
    "DoubleSlitSpec",
    "lithography_pattern",
    "lithography_field",
    "lithography_distribution",
    "lithography_distribution_derivative",
    "lithography_images",
    "gaussian_dot_means",
    "gaussian_dot_field",
    "gaussian_dot_images",
    "double_slit_sample_points",
    "double_slit_image",
    "double_slit_images",
]


# ---------------------------------------------------------------------------
# interference lithography
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LithographySpec:
    """Two-beam interference writing with an M-photon bunch.

    kappa_ell is the product of the beam wavenumber and the pixel width, so
    the phase advance per pixel of the order-M pattern is M * kappa_ell.
    Detection efficiency belongs to the absorber POVM, not to the field;
    it is carried here only so a matching absorber can be constructed.
    """

    photon_order: int
    kappa_ell: float
    grid: PixelGrid
    efficiency: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if not isinstance(self.photon_order, (int, np.integer)) or self.photon_order < 1:
            raise ValueError(f"photon_order must be a positive integer (got {self.photon_order!r})")
        if not (self.kappa_ell > 0.0):
            raise ValueError(f"kappa_ell must be positive (got {self.kappa_ell!r})")
        if not (0.0 <= self.efficiency <= 1.0):
            raise ValueError(f"efficiency must lie in [0, 1] (got {self.efficiency!r})")
        object.__setattr__(self, "photon_order", int(self.photon_order))


def lithography_pattern(spec: LithographySpec) -> np.ndarray:
    """Unnormalized interference pattern cos^2(M kappa_ell x + M theta / 2)
    evaluated at the integer pixel indices x."""
    m = spec.photon_order
    phase = m * spec.kappa_ell * spec.grid.pixel_indices() + m * spec.theta / 2.0
    return np.cos(phase) ** 2


def _coincidence_weight(spec: LithographySpec, pattern_sum: float) -> float:
    """Probability that all M photons of a shot bunch at one common pixel.

    A single photon is trivially bunched.  For M >= 2 the two-beam M-photon
    amplitude puts probability 2 cos^2(...) / N^M on each fully-bunched
    configuration (pixel modes normalized to unit total weight per beam),
    so the bunching probability is 2 * sum(pattern) / N^M; shots that fail
    to bunch leave every pixel below the M-photon threshold.
    """
    if spec.photon_order == 1:
        return 1.0
    n = spec.grid.n_pixels
    return min(1.0, 2.0 * pattern_sum / float(n) ** spec.photon_order)


def lithography_field(spec: LithographySpec) -> SingleClusterField:
    """Single-cluster field for the interference pattern.

    The location distribution is the pattern normalized by direct summation;
    detector efficiency is deliberately not folded in here.
    """
    pattern = lithography_pattern(spec)
    location = normalize(Image(spec.grid, pattern))
    weight = _coincidence_weight(spec, float(pattern.sum()))
    return SingleClusterField(spec.grid, spec.photon_order, location, weight)


def lithography_distribution(spec: LithographySpec) -> ProbabilityDistribution:
    """Normalized landing-position distribution of the photon bunch."""
    return normalize(Image(spec.grid, lithography_pattern(spec)))


def lithography_distribution_derivative(spec: LithographySpec) -> np.ndarray:
    """Analytic theta-derivative of the normalized landing distribution.

    d/dtheta cos^2(u + M theta / 2) = -(M/2) sin(2u + M theta); the
    normalization term subtracts the derivative of the pattern sum.
    """
    m = spec.photon_order
    phase = m * spec.kappa_ell * spec.grid.pixel_indices() + m * spec.theta / 2.0
    pattern = np.cos(phase) ** 2
    d_pattern = -(m / 2.0) * np.sin(2.0 * phase)
    z = pattern.sum()
    return d_pattern / z - pattern * (d_pattern.sum() / z**2)


def lithography_images(spec: LithographySpec, povm: Povm) -> Callable[[float], Image]:
    """Family theta -> expected image of the lithography field under ``povm``."""

    def family(theta: float) -> Image:
        return expected_image(lithography_field(replace(spec, theta=theta)), povm)

    return family


# ---------------------------------------------------------------------------
# Gaussian coherent dot
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianDotSpec:
    """Coherent dot with amplitude alpha_0 exp(-(x - x0)^2 / (2 sigma^2)).

    center (x0) and width (sigma) are in pixel units; the per-pixel Poisson
    mean is the squared amplitude.
    """

    peak_amplitude: float
    center: float
    width: float
    grid: PixelGrid

    def __post_init__(self):
        if not (self.peak_amplitude >= 0.0):
            raise ValueError(f"peak_amplitude must be non-negative (got {self.peak_amplitude!r})")
        if not (self.width > 0.0):
            raise ValueError(f"width must be positive (got {self.width!r})")


def gaussian_dot_means(spec: GaussianDotSpec) -> np.ndarray:
    """Per-pixel Poisson means |alpha_x|^2 = alpha_0^2 exp(-(x - x0)^2 / sigma^2)."""
    idx = spec.grid.pixel_indices()
    if spec.center - 4.0 * spec.width < idx[0] or spec.center + 4.0 * spec.width > idx[-1]:
        warnings.warn(
            f"Gaussian dot +/-4 sigma window [{spec.center - 4 * spec.width:g}, "
            f"{spec.center + 4 * spec.width:g}] leaves the grid "
            f"[{idx[0]}, {idx[-1]}]; the recorded profile is clipped",
            stacklevel=2,
        )
    return spec.peak_amplitude**2 * np.exp(-(((idx - spec.center) / spec.width) ** 2))


def gaussian_dot_field(spec: GaussianDotSpec) -> IndependentPixelField:
    """Independent Poisson counts with the dot's intensity profile."""
    return poisson_pixel_field(spec.grid, gaussian_dot_means(spec))


def gaussian_dot_images(
    spec: GaussianDotSpec, povm: Povm, background_mean: float = 0.0
) -> Callable[[float], Image]:
    """Family center -> expected image of the dot under ``povm``.

    ``background_mean`` adds a uniform Poisson-mean pedestal to every pixel,
    modelling a flat illumination floor underneath the dot.
    """
    if background_mean < 0.0:
        raise ValueError(f"background_mean must be non-negative (got {background_mean!r})")

    def family(center: float) -> Image:
        means = gaussian_dot_means(replace(spec, center=center)) + background_mean
        return expected_image(poisson_pixel_field(spec.grid, means), povm)

    return family


# ---------------------------------------------------------------------------
# double slit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DoubleSlitSpec:
    """Far-field fringes of two slits a distance theta apart.

    The captured field spans the aperture window s in [-A, A] with
    A = numerical_aperture (in units where the propagation geometry is
    folded into s), sampled at n_samples points; the recorded intensity is
    cos^2(pi theta s / wavelength), with its s-dependent total retained.
    """

    slit_separation: float
    wavelength: float
    numerical_aperture: float
    n_samples: int = 4096

    def __post_init__(self):
        if not (self.slit_separation >= 0.0):
            raise ValueError(f"slit_separation must be non-negative (got {self.slit_separation!r})")
        if not (self.wavelength > 0.0):
            raise ValueError(f"wavelength must be positive (got {self.wavelength!r})")
        if not (0.0 < self.numerical_aperture <= 1.0):
            raise ValueError(
                f"numerical_aperture must lie in (0, 1] (got {self.numerical_aperture!r})"
            )
        if not isinstance(self.n_samples, (int, np.integer)) or self.n_samples < 100:
            raise ValueError(f"n_samples must be an integer >= 100 (got {self.n_samples!r})")
        object.__setattr__(self, "n_samples", int(self.n_samples))

    def sample_grid(self) -> PixelGrid:
        width = 2.0 * self.numerical_aperture / self.n_samples
        return PixelGrid(self.n_samples, width, -(self.n_samples // 2))


def double_slit_sample_points(spec: DoubleSlitSpec) -> np.ndarray:
    """Midpoint sample positions across [-A, A]; symmetric about s = 0."""
    n = spec.n_samples
    step = 2.0 * spec.numerical_aperture / n
    return (np.arange(n) + 0.5 - n / 2.0) * step


def double_slit_image(spec: DoubleSlitSpec) -> Image:
    """Far-field fringe intensity cos^2(pi theta s / lambda) over the window."""
    s = double_slit_sample_points(spec)
    values = np.cos(np.pi * spec.slit_separation * s / spec.wavelength) ** 2
    return Image(spec.sample_grid(), values)


def double_slit_images(spec: DoubleSlitSpec) -> Callable[[float], Image]:
    """Family slit separation -> fringe image."""

    def family(separation: float) -> Image:
        return double_slit_image(replace(spec, slit_separation=separation))

    return family
