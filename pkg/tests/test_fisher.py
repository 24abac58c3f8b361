"""Fisher information tests.

The workhorse oracle is the two-outcome family p(theta) = (cos^2(theta/2),
sin^2(theta/2)), whose Fisher information is exactly 1 at every theta where
both outcomes have weight; everything else is checked against closed forms
or cross-route agreement.
"""

from dataclasses import replace

import numpy as np
import pytest

import imres

TWO_PIXELS = imres.PixelGrid(2)


def binary_family(theta):
    c = np.cos(theta / 2.0) ** 2
    return imres.ProbabilityDistribution(TWO_PIXELS, [c, 1.0 - c])


def binary_derivative(theta):
    s = np.sin(theta) / 2.0
    return np.array([-s, s])


class TestStatisticalDistance:
    def test_small_frozen_example(self):
        p0 = imres.ProbabilityDistribution(TWO_PIXELS, [0.25, 0.75])
        p1 = imres.ProbabilityDistribution(TWO_PIXELS, [0.30, 0.70])
        # 0.05^2/0.25 + 0.05^2/0.75
        assert imres.statistical_distance_increment(p0, p1) == pytest.approx(
            0.013333333333333334, rel=1e-12
        )

    def test_zero_for_identical_distributions(self):
        p = imres.ProbabilityDistribution(TWO_PIXELS, [0.4, 0.6])
        assert imres.statistical_distance_increment(p, p) == 0.0

    def test_grid_mismatch(self):
        p0 = imres.ProbabilityDistribution(TWO_PIXELS, [0.5, 0.5])
        p1 = imres.ProbabilityDistribution(imres.PixelGrid(2, origin_index=1), [0.5, 0.5])
        with pytest.raises(imres.GridMismatchError):
            imres.statistical_distance_increment(p0, p1)

    def test_approaches_fisher_quadratically(self):
        theta0 = np.pi / 2.0
        for dtheta in (1e-3, 1e-4):
            ds2 = imres.statistical_distance_increment(
                binary_family(theta0), binary_family(theta0 + dtheta)
            )
            assert ds2 / dtheta**2 == pytest.approx(1.0, rel=10.0 * dtheta)


class TestFisherFromDistribution:
    def test_binary_family_analytic(self):
        report = imres.fisher_from_distribution(
            binary_family, np.pi / 2.0, derivative=binary_derivative
        )
        assert report.fisher == pytest.approx(1.0, rel=1e-12)
        assert report.method == "analytic_derivative"
        assert report.step is None

    def test_binary_family_central_difference(self):
        report = imres.fisher_from_distribution(binary_family, np.pi / 2.0)
        assert report.fisher == pytest.approx(1.0, rel=1e-9)
        assert report.method == "central_difference"
        assert report.step == pytest.approx(1e-5 * np.pi / 2.0)

    def test_derivative_array_and_callable_agree(self):
        theta0 = 0.8
        by_callable = imres.fisher_from_distribution(
            binary_family, theta0, derivative=binary_derivative
        )
        by_array = imres.fisher_from_distribution(
            binary_family, theta0, derivative=binary_derivative(theta0)
        )
        assert by_callable.fisher == by_array.fisher

    def test_background_dims_the_information(self):
        theta0 = np.pi / 2.0
        plain = imres.fisher_from_distribution(binary_family, theta0).fisher
        dimmed = imres.fisher_from_distribution(binary_family, theta0, background=0.3).fisher
        assert 0.0 < dimmed < plain

    def test_report_records_the_floor(self):
        report = imres.fisher_from_distribution(binary_family, np.pi / 2.0, floor_scale=1e-6)
        assert report.floor == pytest.approx(1e-6 * 0.5, rel=1e-12)

    def test_rejects_bad_background_and_step(self):
        with pytest.raises(ValueError, match="background"):
            imres.fisher_from_distribution(binary_family, 1.0, background=1.0)
        with pytest.raises(ValueError, match="step"):
            imres.fisher_from_distribution(binary_family, 1.0, step=0.0)

    def test_derivative_shape_must_match(self):
        with pytest.raises(ValueError, match="shape"):
            imres.fisher_from_distribution(binary_family, 1.0, derivative=np.ones(3))

    def test_warns_on_an_unresolved_step(self):
        def wiggly(theta):
            c = np.cos(5.0 * theta) ** 2
            return imres.ProbabilityDistribution(TWO_PIXELS, [c, 1.0 - c])

        with pytest.warns(UserWarning, match="halved"):
            imres.fisher_from_distribution(wiggly, 0.31, step=0.2)
        with np.errstate(all="ignore"):
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("error")
                imres.fisher_from_distribution(wiggly, 0.31, step=0.2, validate_step=False)


class TestFisherFromImages:
    def test_matches_the_distribution_route(self):
        spec = imres.LithographySpec(1, 0.1, imres.PixelGrid(200), theta=0.4)
        by_images = imres.fisher_from_images(
            imres.lithography_images(spec, imres.m_photon_absorber(1, 1.0)), 0.4
        )

        def family(theta):
            return imres.lithography_distribution(replace(spec, theta=theta))

        by_distribution = imres.fisher_from_distribution(family, 0.4)
        assert by_images.fisher == pytest.approx(by_distribution.fisher, rel=1e-10)

    def test_invariant_under_rescaling(self):
        grid = imres.PixelGrid.centered(101)
        spec = imres.GaussianDotSpec(1.0, 0.0, 8.0, grid)
        family = imres.gaussian_dot_images(spec, imres.ideal_counter())

        def scaled(theta):
            return family(theta).scaled(7.3)

        f1 = imres.fisher_from_images(family, 0.0).fisher
        f2 = imres.fisher_from_images(scaled, 0.0).fisher
        assert f2 == pytest.approx(f1, rel=1e-12)

    def test_pure_brightness_change_carries_no_position_information(self):
        # I(theta) = (1 + theta/2) * uniform: the total-intensity term must
        # cancel the per-pixel term exactly
        grid = imres.PixelGrid(16)

        def family(theta):
            return imres.Image(grid, np.full(16, (1.0 + theta / 2.0) / 16.0))

        report = imres.fisher_from_images(family, 0.3)
        assert abs(report.fisher) < 1e-12

    def test_dark_image_raises(self):
        grid = imres.PixelGrid(4)

        def family(theta):
            return imres.Image(grid, np.zeros(4))

        with pytest.raises(imres.DegenerateImageError):
            imres.fisher_from_images(family, 0.0)

    def test_rejects_bad_step(self):
        grid = imres.PixelGrid(4)

        def family(theta):
            return imres.Image(grid, np.ones(4))

        with pytest.raises(ValueError, match="step"):
            imres.fisher_from_images(family, 0.0, step=-1.0)


class TestDetectorOrdering:
    """Degrading the detector can only lose phase information."""

    @pytest.fixture()
    def dot(self):
        grid = imres.PixelGrid.centered(301)
        return imres.GaussianDotSpec(2.0, 0.0, 30.0, grid)

    def test_saturation_loses_information(self, dot):
        ideal = imres.fisher_from_images(
            imres.gaussian_dot_images(dot, imres.ideal_counter()), 0.0
        ).fisher
        saturated = imres.fisher_from_images(
            imres.gaussian_dot_images(dot, imres.saturating_counter(2)), 0.0
        ).fisher
        assert saturated <= ideal + 1e-9

    def test_bleeding_loses_information(self, dot):
        ideal = imres.fisher_from_images(
            imres.gaussian_dot_images(dot, imres.ideal_counter()), 0.0
        ).fisher
        povm = imres.bleeding_counter(imres.BleedingSpec(3.0))
        bled = imres.fisher_from_images(imres.gaussian_dot_images(dot, povm), 0.0).fisher
        assert bled <= ideal + 1e-9


class TestResolutionBounds:
    def test_cramer_rao_value(self):
        assert imres.cramer_rao_resolution(4.0) == 0.5

    def test_cramer_rao_rejects_zero_and_negative(self):
        with pytest.raises(ValueError, match="identifiable"):
            imres.cramer_rao_resolution(0.0)
        with pytest.raises(ValueError):
            imres.cramer_rao_resolution(-1.0)
        with pytest.raises(ValueError):
            imres.cramer_rao_resolution(np.nan)

    def test_two_point_on_a_flat_curve(self):
        # constant F: theta^2 F = 1 at theta = 1/sqrt(F)
        theta_min = imres.two_point_resolution(lambda theta: 4.0, (0.1, 0.9))
        assert theta_min == pytest.approx(0.5, rel=1e-6)

    def test_two_point_needs_a_sign_change(self):
        with pytest.raises(ValueError, match="sign change"):
            imres.two_point_resolution(lambda theta: 100.0, (0.5, 0.9))

    def test_two_point_rejects_bad_bracket(self):
        with pytest.raises(ValueError, match="bracket"):
            imres.two_point_resolution(lambda theta: 1.0, (0.9, 0.5))

    def test_generator_bound(self):
        assert imres.generator_bound(2.25) == 9.0
        with pytest.raises(ValueError):
            imres.generator_bound(-1.0)

    def test_report_resolution_is_the_bound(self):
        report = imres.fisher_from_distribution(binary_family, np.pi / 2.0)
        assert report.resolution == pytest.approx(1.0 / np.sqrt(report.fisher), rel=1e-15)
