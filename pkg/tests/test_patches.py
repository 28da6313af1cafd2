"""
Patch flattening, extraction and the windowed K-nearest search.
"""
import numpy as np
import pytest

from conftest import random_points
from src.errors import OutOfDomainError, ParameterError
from src.manifolds import ManifoldImage, ManifoldPoint, euclidean, geometry_for, sphere2
from src.denoise import PatchSearch, extract_patch, find_similar, patch_offsets, patch_stack, unflatten_patch


@pytest.fixture
def index_image() -> ManifoldImage:
    """Pixel (i, j) holds the real number 10 i + j"""
    i, j = np.meshgrid(np.arange(7), np.arange(9), indexing="ij")
    return ManifoldImage(euclidean(1), (10.0 * i + j)[..., None])


def test_offsets_are_column_major():
    rows, cols = patch_offsets(3)
    assert rows.tolist() == [0, 1, 2, 0, 1, 2, 0, 1, 2]
    assert cols.tolist() == [0, 0, 0, 1, 1, 1, 2, 2, 2]


def test_extract_patch_flattening(index_image):
    patch = extract_patch(index_image, (3, 4), 3)
    assert patch.count == 9
    assert patch.components[:, 0].tolist() == [23, 33, 43, 24, 34, 44, 25, 35, 45]
    np.testing.assert_array_equal(unflatten_patch(patch.components, 3), index_image.data[2:5, 3:6])


def test_patch_stack_agrees_with_extract_patch(index_image):
    stack = patch_stack(index_image.data, 5)
    assert stack.shape == (3, 5, 25, 1)
    for c1 in range(3):
        for c2 in range(5):
            np.testing.assert_array_equal(stack[c1, c2], extract_patch(index_image, (c1 + 2, c2 + 2), 5).components)


def test_extract_patch_rejects_bad_requests(index_image):
    with pytest.raises(ParameterError):
        extract_patch(index_image, (3, 3), 4)
    with pytest.raises(OutOfDomainError):
        extract_patch(index_image, (0, 3), 3)
    with pytest.raises(OutOfDomainError):
        extract_patch(index_image, (3, 8), 3)


def _brute_force(image: ManifoldImage, center, s: int, w: int):
    g = geometry_for(image.descriptor)
    h, reach = s // 2, w // 2
    ref = extract_patch(image, center, s).components
    found = []
    for dc in range(-reach, reach + 1):
        for dr in range(-reach, reach + 1):
            q = (center[0] + dr, center[1] + dc)
            if not (h <= q[0] < image.dims[0] - h and h <= q[1] < image.dims[1] - h):
                continue
            d2 = float(np.sum(g.dist(ref, extract_patch(image, q, s).components) ** 2))
            found.append((q, d2))
    return found


def test_search_matches_brute_force(rng):
    data = random_points(sphere2(), 144, rng).reshape(12, 12, 3)
    image = ManifoldImage(sphere2(), data)
    group = find_similar(image, (6, 5), 3, 5, 6)

    candidates = _brute_force(image, (6, 5), 3, 5)
    others = sorted((c for c in candidates if c[0] != (6, 5)), key=lambda c: c[1])[:5]
    assert tuple(group.members[0]) == (6, 5)
    assert group.distances[0] == 0.0
    assert [tuple(m) for m in group.members[1:]] == [c[0] for c in others]
    np.testing.assert_allclose(group.distances[1:] ** 2, [c[1] for c in others], rtol=1e-10)
    assert not group.reduced
    for member, patch in zip(group.members, group.patches):
        np.testing.assert_array_equal(patch, extract_patch(image, tuple(member), 3).components)


def test_ties_keep_column_major_order():
    image = ManifoldImage.constant(ManifoldPoint(sphere2(), [0.0, 0.0, 1.0]), (8, 8))
    group = find_similar(image, (4, 4), 3, 3, 9)
    expected = [(4, 4)] + [(4 + dr, 4 + dc) for dc in (-1, 0, 1) for dr in (-1, 0, 1) if (dr, dc) != (0, 0)]
    assert [tuple(m) for m in group.members] == expected
    assert np.all(group.distances == 0.0)


def test_reference_leads_even_when_every_candidate_ties():
    # with all distances equal the reference is still first, then the four
    # earliest other candidates in column-major order, not the first five
    image = ManifoldImage.constant(ManifoldPoint(sphere2(), [0.0, 0.0, 1.0]), (8, 8))
    group = find_similar(image, (4, 4), 3, 3, 5)
    assert [tuple(m) for m in group.members] == [(4, 4), (3, 3), (4, 3), (5, 3), (3, 4)]


def test_window_is_clipped_at_the_border():
    image = ManifoldImage(euclidean(1), np.arange(36, dtype=float).reshape(6, 6, 1))
    group = find_similar(image, (1, 1), 3, 3, 5)
    assert group.reduced
    assert group.size == 4
    assert {tuple(m) for m in group.members} == {(1, 1), (2, 1), (1, 2), (2, 2)}


def test_search_precomputes_whole_blocks(rng):
    data = random_points(euclidean(2), 20 * 20, rng).reshape(20, 20, 2)
    search = PatchSearch(ManifoldImage(euclidean(2), data), 3, 7)
    assert search.n_centres == (18, 18)
    assert len(search.offsets) == 49
    refs = [ref for block in range(search.n_blocks) for ref in search.references(block)]
    assert len(refs) == 18 * 18
    assert refs[:2] == [(0, 0), (1, 0)]


def test_weighted_search_uses_the_kernel(rng):
    data = random_points(euclidean(1), 100, rng).reshape(10, 10, 1)
    image = ManifoldImage(euclidean(1), data)
    kernel = np.zeros((3, 3))
    kernel[1, 1] = 1.0
    # a centre-only kernel compares single pixels
    centres, dist2, _ = PatchSearch(image, 3, 5, kernel).select((3, 3), 4)
    np.testing.assert_allclose(dist2[1:], (data[centres[1:, 0] + 1, centres[1:, 1] + 1, 0] - data[4, 4, 0]) ** 2)


def test_search_rejects_bad_sizes():
    image = ManifoldImage(euclidean(1), np.zeros((4, 4, 1)))
    with pytest.raises(ParameterError):
        PatchSearch(image, 2, 5)
    with pytest.raises(OutOfDomainError):
        PatchSearch(image, 5, 7)
    with pytest.raises(ParameterError):
        PatchSearch(image, 3, 5, np.ones((2, 2)))
