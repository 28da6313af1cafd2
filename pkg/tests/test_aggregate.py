import numpy as np
import pytest

from conftest import random_points
from src.denoise import Aggregator, segmented_means
from src.manifolds import euclidean, geometry_for, sphere2
from src.stats import karcher_mean


def test_segmented_means_marks_empty_ids():
    g = geometry_for(euclidean(1))
    values = np.array([[1.0], [5.0], [3.0], [7.0]])
    means, covered = segmented_means(g, values, np.array([0, 2, 0, 2]), 4)
    assert covered.tolist() == [True, False, True, False]
    assert means[0, 0] == pytest.approx(2.0)
    assert means[2, 0] == pytest.approx(6.0)
    assert np.isnan(means[1]).all() and np.isnan(means[3]).all()


def test_chunking_does_not_change_the_means(rng):
    g = geometry_for(sphere2())
    ids = rng.integers(0, 12, size=90)
    base = random_points(sphere2(), 12, rng)
    values = g.exp(base[ids], 0.3 * rng.normal(size=(90, 2)))
    small, covered_small = segmented_means(g, values, ids, 14, chunk=2)
    large, covered_large = segmented_means(g, values, ids, 14, chunk=10_000)
    assert np.array_equal(covered_small, covered_large)
    np.testing.assert_allclose(small[covered_small], large[covered_large], atol=1e-10)
    for k in np.flatnonzero(covered_small):
        np.testing.assert_allclose(small[k], karcher_mean(g, values[ids == k]), atol=1e-10)


def test_aggregator_averages_overlaps_and_keeps_fallback():
    g = geometry_for(euclidean(1))
    agg = Aggregator(g, (4, 4), 3)
    agg.add(np.array([[0, 0]]), np.full((1, 9, 1), 2.0))
    agg.add(np.array([[1, 1]]), np.full((1, 9, 1), 4.0))
    agg.add(np.zeros((0, 2), dtype=int), np.zeros((0, 9, 1)))
    assert agg.n_estimates == 18

    fallback = np.full((4, 4, 1), -1.0)
    out, uncovered = agg.finalize(fallback)
    assert uncovered == 16 - 14
    assert out[0, 0, 0] == pytest.approx(2.0)
    assert out[3, 3, 0] == pytest.approx(4.0)
    assert out[1, 1, 0] == pytest.approx(3.0)
    assert out[2, 2, 0] == pytest.approx(3.0)
    assert out[0, 3, 0] == -1.0
    assert out[3, 0, 0] == -1.0


def test_patch_components_land_on_their_pixels():
    g = geometry_for(euclidean(1))
    agg = Aggregator(g, (5, 6), 3)
    restored = np.arange(9, dtype=float).reshape(1, 9, 1)
    agg.add(np.array([[2, 3]]), restored)
    out, _ = agg.finalize(np.zeros((5, 6, 1)))
    # component k sits at in-patch offset (k % 3, k // 3)
    np.testing.assert_allclose(out[2:5, 3:6, 0], np.arange(9).reshape(3, 3).T)


def test_empty_aggregator_returns_the_fallback():
    agg = Aggregator(geometry_for(euclidean(1)), (3, 3), 3)
    fallback = np.ones((3, 3, 1))
    out, uncovered = agg.finalize(fallback)
    assert uncovered == 9
    assert np.array_equal(out, fallback)
