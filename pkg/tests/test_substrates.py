"""Detector substrate tests.

The displacement kernel is checked against a seeded Monte Carlo draw of the
same process (Poisson distance, uniform random direction), and the bleeding
detector against the image of a deterministic single-photon point source,
which must reproduce the kernel itself.
"""

import numpy as np
import pytest
from scipy import stats

import imres


class TestIdealCounter:
    def test_matrix_is_identity(self):
        povm = imres.ideal_counter()
        np.testing.assert_array_equal(povm.conditional_matrix(4), np.eye(5))
        np.testing.assert_array_equal(povm.outcome_values(4), [0, 1, 2, 3, 4])


class TestMPhotonAbsorber:
    def test_null_outcome_probabilities(self):
        povm = imres.m_photon_absorber(3, 0.4)
        q = povm.conditional_matrix(5)
        n = np.arange(6)
        expect_q0 = np.where(n < 3, 1.0, 0.6 ** n)
        np.testing.assert_allclose(q[0], expect_q0, rtol=1e-15)
        np.testing.assert_allclose(q[1], 1.0 - expect_q0, rtol=1e-15)
        np.testing.assert_array_equal(povm.outcome_values(5), [0.0, 1.0])

    def test_detection_monotone_in_eta(self):
        n_max = 6
        previous = None
        for eta in (0.1, 0.3, 0.5, 0.9, 1.0):
            fire = imres.m_photon_absorber(2, eta).conditional_matrix(n_max)[1]
            if previous is not None:
                assert np.all(fire >= previous - 1e-15)
            previous = fire

    def test_perfect_efficiency_is_a_threshold(self):
        q = imres.m_photon_absorber(2, 1.0).conditional_matrix(4)
        np.testing.assert_array_equal(q[1], [0.0, 0.0, 1.0, 1.0, 1.0])

    @pytest.mark.parametrize("m,eta", [(0, 0.5), (1.5, 0.5), (1, -0.1), (1, 1.1)])
    def test_rejects_bad_arguments(self, m, eta):
        with pytest.raises(ValueError):
            imres.m_photon_absorber(m, eta)


class TestSaturatingCounter:
    def test_clips_counts(self):
        povm = imres.saturating_counter(2)
        q = povm.conditional_matrix(4)
        # outcome of count n is min(n, 2), with certainty
        for n in range(5):
            k = min(n, 2)
            assert q[k, n] == 1.0
            assert q[:, n].sum() == 1.0
        np.testing.assert_array_equal(povm.outcome_values(4), [0.0, 1.0, 2.0])

    def test_equals_ideal_below_the_well_depth(self):
        grid = imres.PixelGrid(5)
        field = imres.poisson_pixel_field(grid, [0.1, 0.5, 1.0, 0.2, 0.05])
        deep = imres.saturating_counter(field.max_count)
        img_sat = imres.expected_image(field, deep).values
        img_ideal = imres.expected_image(field, imres.ideal_counter()).values
        np.testing.assert_allclose(img_sat, img_ideal, rtol=1e-14)

    def test_rejects_bad_depth(self):
        with pytest.raises(ValueError):
            imres.saturating_counter(0)


class TestDisplacementKernel:
    def test_no_bleed_is_a_delta(self):
        offsets, weights = imres.displacement_kernel(0.0)
        assert offsets.tolist() == [0]
        assert weights.tolist() == [1.0]

    def test_normalized_and_symmetric(self):
        offsets, weights = imres.displacement_kernel(2.0)
        assert weights.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(weights, weights[::-1], rtol=1e-12)
        assert offsets[0] == -offsets[-1]

    def test_against_monte_carlo(self):
        b = 2.0
        offsets, weights = imres.displacement_kernel(b)
        rng = np.random.default_rng(42)
        n_draws = 200_000
        distance = rng.poisson(b, n_draws)
        sign = rng.choice([-1, 1], n_draws)
        draws = distance * sign
        for offset, weight in zip(offsets, weights):
            if weight < 1e-4:
                continue
            count = np.count_nonzero(draws == offset)
            if offset == 0:
                # both signs of a zero distance land here
                assert count / n_draws == pytest.approx(weight, abs=5e-3)
            else:
                assert count / n_draws == pytest.approx(weight, abs=5e-3)

    def test_tail_is_negligible(self):
        b = 1.5
        offsets, _ = imres.displacement_kernel(b)
        d_max = int(offsets[-1])
        assert stats.poisson.sf(d_max, b) < 1e-11

    def test_rejects_negative_distance(self):
        with pytest.raises(ValueError):
            imres.displacement_kernel(-1.0)


class TestBleedingSpec:
    def test_rejects_bad_policy(self):
        with pytest.raises(ValueError, match="boundary_policy"):
            imres.BleedingSpec(1.0, boundary_policy="wrap")

    def test_rejects_negative_distance(self):
        with pytest.raises(ValueError):
            imres.BleedingSpec(-0.5)

    def test_rejects_nonlocal_base(self):
        inner = imres.bleeding_counter(imres.BleedingSpec(1.0))
        with pytest.raises(ValueError, match="local"):
            imres.BleedingSpec(1.0, base_povm=inner)


def point_source_field(n_pixels, center):
    """Deterministic field: exactly one photon at ``center``, none elsewhere."""
    zero = imres.CountDistribution(0, [1.0])
    one = imres.CountDistribution.from_mapping({1: 1.0})
    dists = tuple(one if x == center else zero for x in range(n_pixels))
    return imres.IndependentPixelField(imres.PixelGrid(n_pixels), dists)


class TestBleedingPovm:
    def test_point_source_image_is_the_kernel(self):
        # a single photon at the center smears into the displacement kernel
        n, center, b = 41, 20, 1.5
        field = point_source_field(n, center)
        povm = imres.bleeding_counter(imres.BleedingSpec(b))
        img = imres.expected_image(field, povm).values
        offsets, weights = imres.displacement_kernel(b)
        expect = np.zeros(n)
        for offset, weight in zip(offsets, weights):
            expect[center - offset] += weight
        np.testing.assert_allclose(img, expect, atol=1e-14)
        assert img.sum() == pytest.approx(1.0, abs=1e-12)

    def test_zero_distance_is_transparent(self):
        field = point_source_field(9, 4)
        povm = imres.bleeding_counter(imres.BleedingSpec(0.0, imres.saturating_counter(3)))
        img = imres.expected_image(field, povm).values
        base = imres.expected_image(field, imres.saturating_counter(3)).values
        np.testing.assert_array_equal(img, base)

    def test_clamp_pins_every_read_to_the_grid(self):
        n, b = 11, 2.0
        povm = imres.bleeding_counter(imres.BleedingSpec(b, boundary_policy="clamp"))
        grid = imres.PixelGrid(n)
        for x in (0, 5, 10):
            targets, weights = povm.pixel_kernel(grid, x)
            assert weights.sum() == pytest.approx(1.0, abs=1e-12)
            assert targets.min() >= 0 and targets.max() <= n - 1

    def test_clamp_folds_edge_reads_onto_the_boundary(self):
        # a pixel reads its own displaced target, so a source near the edge
        # is seen only by the displacements whose target stays on the grid,
        # while a source on the boundary pixel is re-read by every pixel
        # whose clamped target folds onto it
        n, b = 11, 2.0
        povm = imres.bleeding_counter(imres.BleedingSpec(b, boundary_policy="clamp"))
        offsets, weights = imres.displacement_kernel(b)

        near_edge = imres.expected_image(point_source_field(n, 1), povm).values
        visible = weights[(offsets >= 1 - (n - 1)) & (offsets <= 1)].sum()
        assert near_edge.sum() == pytest.approx(visible, abs=1e-12)
        assert near_edge.sum() < 1.0

        on_edge = imres.expected_image(point_source_field(n, 0), povm).values
        folded = sum(
            w * (min(-int(d), n - 1) + 1) for d, w in zip(offsets, weights) if d <= 0
        )
        assert on_edge.sum() == pytest.approx(folded, abs=1e-12)
        assert on_edge.sum() > 1.0

    def test_reflect_rejects_kernel_wider_than_grid(self):
        field = point_source_field(3, 1)
        povm = imres.bleeding_counter(imres.BleedingSpec(2.0, boundary_policy="reflect"))
        with pytest.raises(ValueError, match="wider than the grid"):
            imres.expected_image(field, povm)

    def test_discard_renormalizes_per_pixel(self):
        field = point_source_field(41, 20)
        povm = imres.bleeding_counter(imres.BleedingSpec(1.0, boundary_policy="discard"))
        for x in (0, 20, 40):
            probs = imres.outcome_distribution(field, povm, x)
            assert sum(probs.values()) == pytest.approx(1.0, abs=1e-12)

    def test_conditional_probability_needs_count_vector(self):
        povm = imres.bleeding_counter(imres.BleedingSpec(1.0))
        with pytest.raises(ValueError, match="configuration"):
            povm.conditional_probability(0, 0, 3)

    def test_exposes_base_outcomes(self):
        base = imres.saturating_counter(2)
        povm = imres.bleeding_counter(imres.BleedingSpec(0.7, base))
        np.testing.assert_array_equal(povm.outcome_values(5), base.outcome_values(5))
        np.testing.assert_array_equal(povm.conditional_matrix(5), base.conditional_matrix(5))
