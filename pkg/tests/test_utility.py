"""Deposition rate and utility tests."""

import numpy as np
import pytest

import imres


def litho_field(m, n=500, kappa_ell=0.1):
    spec = imres.LithographySpec(m, kappa_ell, imres.PixelGrid(n))
    return imres.lithography_field(spec)


class TestDepositionRate:
    @pytest.mark.parametrize("eta", [1.0, 0.37])
    def test_single_photon_rate_is_the_efficiency(self, eta):
        # every shot bunches (weight 1) and deposits with probability eta
        field = litho_field(1)
        rate = imres.deposition_rate(field, imres.m_photon_absorber(1, eta))
        assert rate == pytest.approx(eta, rel=1e-12)

    def test_multiphoton_rate_is_the_coincidence_weight(self):
        field = litho_field(2)
        rate = imres.deposition_rate(field, imres.m_photon_absorber(2, 1.0))
        assert rate == pytest.approx(field.weight, rel=1e-12)

    def test_vacuum_deposits_nothing(self):
        grid = imres.PixelGrid(8)
        field = imres.poisson_pixel_field(grid, np.zeros(8))
        assert imres.deposition_rate(field, imres.m_photon_absorber(1, 1.0)) == 0.0

    def test_poisson_ideal_counting_rate(self):
        # 1 - p0(x) = 1 - exp(-mu_x) under ideal counting
        grid = imres.PixelGrid(3)
        means = np.array([0.5, 1.0, 2.0])
        field = imres.poisson_pixel_field(grid, means)
        rate = imres.deposition_rate(field, imres.ideal_counter())
        assert rate == pytest.approx(np.sum(1.0 - np.exp(-means)), rel=1e-9)

    def test_normalized_lands_in_unit_interval(self):
        field = litho_field(1, n=100)
        rate = imres.deposition_rate(field, imres.m_photon_absorber(1, 0.8), normalized=True)
        assert rate == pytest.approx(0.8 / 100.0, rel=1e-12)

    def test_global_reading_counts_any_detection(self):
        # exactly one pixel can fire per shot, so N * P(any fires) = N * weight
        field = litho_field(2, n=100)
        per_pixel = imres.deposition_rate(field, imres.m_photon_absorber(2, 1.0))
        global_ = imres.deposition_rate(field, imres.m_photon_absorber(2, 1.0), reading="global")
        assert global_ == pytest.approx(100.0 * per_pixel, rel=1e-9)

    def test_global_reading_on_independent_pixels(self):
        grid = imres.PixelGrid(4)
        means = np.array([0.3, 0.5, 0.1, 0.7])
        field = imres.poisson_pixel_field(grid, means)
        got = imres.deposition_rate(field, imres.ideal_counter(), reading="global")
        assert got == pytest.approx(4.0 * (1.0 - np.exp(-means.sum())), rel=1e-9)

    def test_global_reading_rejects_bleeding(self):
        field = litho_field(1, n=50)
        povm = imres.bleeding_counter(imres.BleedingSpec(1.0, imres.m_photon_absorber(1, 1.0)))
        with pytest.raises(ValueError, match="bleeding"):
            imres.deposition_rate(field, povm, reading="global")

    def test_per_pixel_reading_accepts_bleeding(self):
        # edge clamping folds a little weight back onto the grid, so the
        # rate only approximately matches the unbled detector
        field = litho_field(1, n=50)
        povm = imres.bleeding_counter(imres.BleedingSpec(1.0, imres.m_photon_absorber(1, 1.0)))
        rate = imres.deposition_rate(field, povm)
        assert rate == pytest.approx(1.0, abs=0.05)

    def test_needs_a_null_outcome(self):
        # first outcome reading 1 means there is no quiet state to compare to
        povm = imres.TabulatedPovm([1.0, 2.0], [[0.5, 0.5], [0.5, 0.5]])
        field = litho_field(1, n=10)
        with pytest.raises(ValueError, match="null outcome"):
            imres.deposition_rate(field, povm)

    def test_rejects_unknown_reading(self):
        field = litho_field(1, n=10)
        with pytest.raises(ValueError, match="reading"):
            imres.deposition_rate(field, imres.m_photon_absorber(1, 1.0), reading="typo")


class TestUtility:
    def test_value(self):
        assert imres.utility(4.0, 0.25, 1.0) == 1.0
        assert imres.utility(4.0, 0.25, 2.0) == 0.25

    def test_higher_rate_wins_at_equal_information(self):
        assert imres.utility(1.0, 0.5, 1.0) > imres.utility(1.0, 0.25, 1.0)

    def test_cost_exponent_must_be_positive(self):
        with pytest.raises(ValueError, match="cost_exponent"):
            imres.utility(1.0, 0.5, 0.0)
        with pytest.raises(ValueError, match="cost_exponent"):
            imres.utility(1.0, 0.5, -1.0)

    def test_rejects_negative_inputs(self):
        with pytest.raises(ValueError):
            imres.utility(-1.0, 0.5, 1.0)
        with pytest.raises(ValueError):
            imres.utility(1.0, -0.5, 1.0)

    def test_report_bundles_the_pieces(self):
        field = litho_field(1, n=100)
        povm = imres.m_photon_absorber(1, 0.8)
        report = imres.utility_report(1.0, field, povm, cost_exponent=2.0)
        assert report.deposition == pytest.approx(0.008, rel=1e-12)
        assert report.utility == pytest.approx(1.0 * 0.008**2, rel=1e-12)
        assert report.cost_exponent == 2.0

    def test_report_can_keep_the_raw_rate(self):
        field = litho_field(1, n=100)
        povm = imres.m_photon_absorber(1, 0.8)
        report = imres.utility_report(2.0, field, povm, normalized=False)
        assert report.deposition == pytest.approx(0.8, rel=1e-12)
