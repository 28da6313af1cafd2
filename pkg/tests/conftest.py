"""
Shared fixtures: seeded generators, random points per manifold, small images.
"""
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.manifolds import (  # noqa: E402
    ManifoldDescriptor,
    ManifoldImage,
    ManifoldKind,
    circle,
    euclidean,
    hyperbolic2,
    simplex1,
    spd,
    sphere2,
)

ALL_DESCRIPTORS = [euclidean(1), euclidean(3), circle(), sphere2(), spd(1), spd(2), spd(3), simplex1(), hyperbolic2()]


def descriptor_id(descriptor: ManifoldDescriptor):
    # pytest calls ids= on every parameter; defer to its default id for non-descriptors
    if not isinstance(descriptor, ManifoldDescriptor):
        return None
    return descriptor.tag


def random_points(descriptor: ManifoldDescriptor, n: int, rng: np.random.Generator) -> np.ndarray:
    """n valid points of the manifold, shape (n, ambient_len)"""
    kind = descriptor.kind
    if kind is ManifoldKind.EUCLIDEAN:
        return rng.normal(size=(n, descriptor.param))
    if kind is ManifoldKind.CIRCLE:
        t = rng.uniform(-np.pi, np.pi, size=n)
        return np.stack([np.cos(t), np.sin(t)], axis=-1)
    if kind is ManifoldKind.SPHERE2:
        x = rng.normal(size=(n, 3))
        return x / np.linalg.norm(x, axis=-1, keepdims=True)
    if kind is ManifoldKind.SPD:
        r = descriptor.param
        a = rng.normal(size=(n, r, r))
        m = a @ np.swapaxes(a, -1, -2) + 0.5 * np.eye(r)
        m = 0.5 * (m + np.swapaxes(m, -1, -2))
        return m.reshape(n, r * r)
    if kind is ManifoldKind.SIMPLEX1:
        p = rng.uniform(0.05, 0.95, size=n)
        return np.stack([p, 1.0 - p], axis=-1)
    u = rng.normal(size=(n, 2))
    return np.concatenate([u, np.sqrt(1.0 + np.sum(u * u, axis=-1, keepdims=True))], axis=-1)


def random_tangents(descriptor: ManifoldDescriptor, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Tangent coordinates short enough for exp to be injective along the geodesic"""
    n = x.shape[0]
    v = rng.normal(size=(n, descriptor.dim))
    norm = np.linalg.norm(v, axis=-1, keepdims=True)
    kind = descriptor.kind
    if kind in (ManifoldKind.CIRCLE, ManifoldKind.SPHERE2):
        length = rng.uniform(0.0, 0.9 * np.pi, size=(n, 1))
    elif kind is ManifoldKind.SIMPLEX1:
        # half-angle of sqrt(x) from the first vertex; stay clear of both vertices
        beta = np.arctan2(np.sqrt(x[:, 1]), np.sqrt(x[:, 0]))[:, None]
        length = 2.0 * 0.9 * np.minimum(beta, 0.5 * np.pi - beta) * rng.uniform(size=(n, 1))
    elif kind is ManifoldKind.EUCLIDEAN:
        length = rng.uniform(0.0, 3.0, size=(n, 1))
    else:
        length = rng.uniform(0.0, 1.5, size=(n, 1))
    return v / norm * length


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240229)


@pytest.fixture
def point_factory(rng):
    def make(descriptor: ManifoldDescriptor, n: int) -> np.ndarray:
        return random_points(descriptor, n, rng)
    return make


@pytest.fixture
def smooth_s2_image() -> ManifoldImage:
    """16 x 16 slowly varying S2 image"""
    u, v = np.meshgrid(np.linspace(0.0, 1.0, 16), np.linspace(0.0, 1.0, 16), indexing="ij")
    polar = 0.5 + 0.6 * u
    azimuth = 1.5 * v
    x = np.stack([np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)], axis=-1)
    return ManifoldImage(sphere2(), x / np.linalg.norm(x, axis=-1, keepdims=True))


@pytest.fixture
def noisy_euclidean_image(rng) -> ManifoldImage:
    """16 x 16 real image: two flat regions and a ramp plus Gaussian noise"""
    clean = np.zeros((16, 16))
    clean[:, 8:] = 1.0
    clean[10:, :] = np.linspace(0.0, 2.0, 16)[None, :]
    return ManifoldImage(euclidean(1), (clean + 0.3 * rng.normal(size=clean.shape))[..., None])
