import math

import numpy as np
import pytest
from scipy.optimize import nnls

from proxhop import WeightedSampleSet, concentration_threshold, draw_samples, weighted_mean
from proxhop.kernels import LARGE_VALUE


def hull_distance(points, query):
    """Upper bound on the distance from query to the convex hull of points:
    NNLS with an augmented row enforcing the simplex constraint, then an
    exact renormalization of the weights."""
    big = 1e4
    a = np.vstack([points.T, big * np.ones(points.shape[0])])
    b = np.concatenate([query, [big]])
    coeff, _ = nnls(a, b)
    coeff = coeff / coeff.sum()
    return float(np.linalg.norm(points.T @ coeff - query))


class TestDrawSamples:
    def test_deterministic_in_seed(self):
        a = draw_samples(np.random.default_rng(5), np.zeros(3), 0.5, 2.0, 40)
        b = draw_samples(np.random.default_rng(5), np.zeros(3), 0.5, 2.0, 40)
        np.testing.assert_array_equal(a, b)

    def test_mean_concentrates(self):
        # CLT: per-coordinate mean within 4 * sqrt(var / n) of the center
        center = np.array([3.0, -1.0])
        s = draw_samples(np.random.default_rng(11), center, 1.0, 2.0, 1000)
        assert s.shape == (1000, 2)
        bound = 4.0 * math.sqrt(2.0 / 1000.0)
        assert np.all(np.abs(s.mean(axis=0) - center) < bound)

    def test_variance_matches(self):
        s = draw_samples(np.random.default_rng(13), np.zeros(4), 0.5, 4.0, 1000)
        var = s.var(axis=0)
        assert np.all(np.abs(var - 2.0) < 0.4)  # within 20% of delta*gamma

    def test_invalid_parameters(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            draw_samples(rng, np.zeros(2), 0.0, 1.0, 3)
        with pytest.raises(ValueError):
            draw_samples(rng, np.zeros(2), 1.0, 1.0, 0)


class TestWeightedMean:
    def test_two_point_hand_value(self):
        ws = WeightedSampleSet(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]), 1.0)
        expected = math.exp(-1.0) / (1.0 + math.exp(-1.0))
        assert weighted_mean(ws)[0] == pytest.approx(expected, abs=1e-12)
        assert weighted_mean(ws)[0] == pytest.approx(0.268941, abs=1e-6)

    def test_equal_values_give_arithmetic_mean(self, rng):
        pts = rng.uniform(-2, 2, (7, 3))
        ws = WeightedSampleSet(pts, np.full(7, 4.2), 0.3)
        np.testing.assert_allclose(weighted_mean(ws), pts.mean(axis=0), rtol=1e-14)

    def test_winner_take_all_at_tiny_delta(self, rng):
        pts = rng.uniform(-5, 5, (6, 2))
        vals = np.array([3.0, 0.5, 2.0, 4.0, 1.5, 2.5])
        ws = WeightedSampleSet(pts, vals, 1e-12)
        np.testing.assert_array_equal(weighted_mean(ws), pts[1])

    def test_single_point(self):
        ws = WeightedSampleSet(np.array([[2.0, 3.0]]), np.array([7.0]), 0.5)
        np.testing.assert_array_equal(weighted_mean(ws), np.array([2.0, 3.0]))

    def test_shift_invariance_bit_identical(self, rng):
        # dyadic values plus integer shifts: every shifted value is exactly
        # representable, so the stabilized weights are bitwise unchanged
        pts = rng.uniform(-3, 3, (9, 2))
        vals = rng.integers(0, 2**20, 9).astype(float) / 2.0**20
        base = weighted_mean(WeightedSampleSet(pts, vals, 0.7))
        for shift in (1.0, -17.0, 2.0**30, -(2.0**25)):
            shifted = weighted_mean(WeightedSampleSet(pts, vals + shift, 0.7))
            np.testing.assert_array_equal(shifted, base)

    def test_nan_values_rejected(self):
        with pytest.raises(ValueError):
            WeightedSampleSet(np.zeros((2, 1)), np.array([0.0, np.nan]), 1.0)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            WeightedSampleSet(np.zeros((2, 1)), np.array([0.0]), 1.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            WeightedSampleSet(np.zeros((0, 1)), np.array([]), 1.0)

    def test_convex_hull_membership(self, rng):
        for _ in range(50):
            n = rng.integers(2, 9)
            d = rng.integers(1, 5)
            pts = rng.uniform(-4, 4, (int(n), int(d)))
            vals = rng.uniform(0, 3, int(n))
            delta = 10.0 ** rng.uniform(-3, 1)
            mean = weighted_mean(WeightedSampleSet(pts, vals, delta))
            assert hull_distance(pts, mean) <= 1e-10

    def test_monotone_concentration_below_threshold(self, rng):
        # in the winner-dominated regime (delta at or below the provable
        # threshold) the distance to the best point shrinks with delta
        for _ in range(30):
            n = int(rng.integers(3, 8))
            pts = rng.uniform(-3, 3, (n, 2))
            vals = rng.uniform(0, 2, n)
            vals[0] = vals.min() - rng.uniform(0.3, 1.0)  # unique best
            radius = 0.5 * float(np.linalg.norm(pts[1:] - pts[0], axis=1).min() + 1e-6)
            start = concentration_threshold(vals, pts, radius)
            if start >= LARGE_VALUE:
                start = 1.0
            deltas = start * 0.5 ** np.arange(0, 30)
            dists = [
                np.linalg.norm(weighted_mean(WeightedSampleSet(pts, vals, d)) - pts[0])
                for d in deltas
            ]
            for a, b in zip(dists, dists[1:]):
                assert b <= a + 1e-12


class TestConcentrationThreshold:
    def test_closed_form_two_points(self):
        # gap 1, max distance 1, radius 1/4 -> delta* = 1 / ln 4
        got = concentration_threshold(np.array([0.0, 1.0]), np.array([[0.0], [1.0]]), 0.25)
        assert got == pytest.approx(1.0 / math.log(4.0), rel=1e-12)
        assert got == pytest.approx(0.7213, abs=1e-4)

    def test_vacuous_bound_gives_sentinel(self):
        # (N-1) * maxdist <= r: any delta concentrates
        got = concentration_threshold(np.array([0.0, 1.0]), np.array([[0.0], [0.5]]), 0.6)
        assert got == LARGE_VALUE

    def test_tied_minimum_rejected(self):
        with pytest.raises(ValueError):
            concentration_threshold(
                np.array([0.0, 0.0, 1.0]), np.array([[0.0], [1.0], [2.0]]), 0.1
            )

    def test_soundness_on_random_instances(self, rng):
        # whenever delta <= threshold, the weighted mean lies within the
        # basin radius of the best point; exact comparison, no tolerance
        for _ in range(100):
            n = int(rng.integers(2, 11))
            d = int(rng.integers(1, 6))
            pts = rng.uniform(-5, 5, (n, d))
            vals = rng.uniform(1, 4, n)
            vals[0] = vals.min() - rng.uniform(0.1, 1.0)
            radius = float(10.0 ** rng.uniform(-3, 0.5))
            thr = concentration_threshold(vals, pts, radius)
            if thr >= LARGE_VALUE:
                deltas = 10.0 ** rng.uniform(-6, 2, 4)
            else:
                deltas = thr * 0.5 ** np.arange(0, 7)
            for delta in deltas:
                mean = weighted_mean(WeightedSampleSet(pts, vals, float(delta)))
                assert np.linalg.norm(mean - pts[0]) <= radius
