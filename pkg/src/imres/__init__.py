"""Resolution limits of pixelated photodetection, via Fisher information.

The package models a detection substrate as a POVM acting on the photon
number arriving at each pixel, turns a parametrized field into the image
the substrate records, and scores the parameter by the Fisher information
of that image: the Cramer-Rao bound then converts information into a
resolution.  Deposition rates and a rate-vs-resolution utility complete
the picture for exposure-limited substrates.
"""

from .core import (
    CountDistribution,
    DegenerateImageError,
    GridMismatchError,
    Image,
    IndependentPixelField,
    PixelGrid,
    Povm,
    PovmError,
    ProbabilityDistribution,
    SingleClusterField,
    TabulatedPovm,
    expected_image,
    no_detection_probabilities,
    normalize,
    outcome_distribution,
    poisson_pixel_field,
)
from .fisher import (
    FisherReport,
    cramer_rao_resolution,
    fisher_from_distribution,
    fisher_from_images,
    generator_bound,
    statistical_distance_increment,
    two_point_resolution,
)
from .scenarios import (
    DoubleSlitSpec,
    GaussianDotSpec,
    LithographySpec,
    double_slit_image,
    double_slit_images,
    double_slit_sample_points,
    gaussian_dot_field,
    gaussian_dot_images,
    gaussian_dot_means,
    lithography_distribution,
    lithography_distribution_derivative,
    lithography_field,
    lithography_images,
    lithography_pattern,
)
from .substrates import (
    BOUNDARY_POLICIES,
    BleedingPovm,
    BleedingSpec,
    IdealCounter,
    MPhotonAbsorber,
    SaturatingCounter,
    bleeding_counter,
    displacement_kernel,
    ideal_counter,
    m_photon_absorber,
    saturating_counter,
)
from .utility import UtilityReport, deposition_rate, utility, utility_report

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY_POLICIES",
    "BleedingPovm",
    "BleedingSpec",
    "CountDistribution",
    "DegenerateImageError",
    "DoubleSlitSpec",
    "FisherReport",
    "GaussianDotSpec",
    "GridMismatchError",
    "IdealCounter",
    "Image",
    "IndependentPixelField",
    "LithographySpec",
    "MPhotonAbsorber",
    "PixelGrid",
    "Povm",
    "PovmError",
    "ProbabilityDistribution",
    "SaturatingCounter",
    "SingleClusterField",
    "TabulatedPovm",
    "UtilityReport",
    "bleeding_counter",
    "cramer_rao_resolution",
    "deposition_rate",
    "displacement_kernel",
    "double_slit_image",
    "double_slit_images",
    "double_slit_sample_points",
    "expected_image",
    "fisher_from_distribution",
    "fisher_from_images",
    "gaussian_dot_field",
    "gaussian_dot_images",
    "gaussian_dot_means",
    "generator_bound",
    "ideal_counter",
    "lithography_distribution",
    "lithography_distribution_derivative",
    "lithography_field",
    "lithography_images",
    "lithography_pattern",
    "m_photon_absorber",
    "no_detection_probabilities",
    "normalize",
    "outcome_distribution",
    "poisson_pixel_field",
    "saturating_counter",
    "statistical_distance_increment",
    "two_point_resolution",
    "utility",
    "utility_report",
]
