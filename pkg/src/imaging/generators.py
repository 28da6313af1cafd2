"""
Synthetic test images.

Every generator builds piecewise constant shapes, linear or quadratic
ramps and a smooth background on one manifold. Shape parameters are drawn
from the auxiliary random stream of the seed, so a (name, dims, seed)
triple always gives the same image.
"""
from typing import Callable, Dict, Tuple

import numpy as np

from src.errors import ParameterError
from src.manifolds.descriptor import circle, euclidean, hyperbolic2, simplex1, spd, sphere2
from src.manifolds.image import ManifoldImage
from src.noise.rng import RngState

Dims = Tuple[int, int]
MIN_SIDE = 8

# (row, col, radius) in unit coordinates; radii scale with the image
_VORTICES = ((0.25, 0.3, 0.14), (0.7, 0.7, 0.18), (0.75, 0.22, 0.09))
SPD_EIGEN_RANGE = (0.3, 4.0)


def _grid(dims: Dims) -> Tuple[np.ndarray, np.ndarray]:
    """Pixel-centre coordinates in [0, 1]^2, row coordinate first"""
    u = (np.arange(dims[0]) + 0.5) / dims[0]
    v = (np.arange(dims[1]) + 0.5) / dims[1]
    return np.meshgrid(u, v, indexing="ij")


def _rect(u, v, r0, r1, c0, c1) -> np.ndarray:
    return (u >= r0) & (u < r1) & (v >= c0) & (v < c1)


def _disc(u, v, cu, cv, radius) -> np.ndarray:
    return (u - cu) ** 2 + (v - cv) ** 2 < radius ** 2


def _shape_field(dims: Dims, rng: np.random.Generator, spread: float) -> np.ndarray:
    """
    Scalar field with a smooth background, a constant rectangle, a
    constant disc, a paraboloid cap and a linear ramp.
    """
    u, v = _grid(dims)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    field = 0.3 * spread * (u - 0.5) + 0.15 * spread * np.sin(2.0 * np.pi * v + phase)

    levels = rng.uniform(-0.5 * spread, 0.5 * spread, size=4)
    field[_rect(u, v, 0.1, 0.4, 0.1, 0.45)] = levels[0]
    field[_disc(u, v, 0.7, 0.3, 0.17)] = levels[1]
    cap = _disc(u, v, 0.3, 0.75, 0.18)
    field[cap] = levels[2] + 8.0 * spread * ((u[cap] - 0.3) ** 2 + (v[cap] - 0.75) ** 2)
    ramp = _rect(u, v, 0.6, 0.9, 0.55, 0.9)
    field[ramp] = levels[3] + spread * (v[ramp] - 0.55) / 0.35
    return field


def _wrap(t: np.ndarray) -> np.ndarray:
    return np.mod(t + np.pi, 2.0 * np.pi) - np.pi


def _s1_shapes(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    t = _wrap(_shape_field(dims, rng, 2.0 * np.pi))
    return ManifoldImage(circle(), np.stack([np.cos(t), np.sin(t)], axis=-1))


def _eucl1_shapes(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    return ManifoldImage(euclidean(1), _shape_field(dims, rng, 1.0)[..., None])


def _eucl3_shapes(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    channels = [_shape_field(dims, rng, 1.0) for _ in range(3)]
    return ManifoldImage(euclidean(3), np.stack(channels, axis=-1))


def _sphere_point(polar: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
    return np.stack(
        [np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)], axis=-1
    )


def vortex_cores(dims: Dims) -> np.ndarray:
    """Mask of the pixels inside the vortices of `s2-vortex`"""
    u, v = _grid(dims)
    mask = np.zeros(dims, dtype=bool)
    for cu, cv, radius in _VORTICES:
        mask |= _disc(u, v, cu, cv, radius)
    return mask


def _s2_vortex(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    u, v = _grid(dims)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    polar = 0.6 + 0.5 * u
    azimuth = 1.2 * v + phase
    normal = _sphere_point(polar, azimuth)
    # orthonormal frame of the tangent plane along the background
    e1 = np.stack([np.cos(polar) * np.cos(azimuth), np.cos(polar) * np.sin(azimuth), -np.sin(polar)], axis=-1)
    e2 = np.stack([-np.sin(azimuth), np.cos(azimuth), np.zeros_like(azimuth)], axis=-1)

    x = normal.copy()
    for (cu, cv, radius), sign in zip(_VORTICES, rng.choice([-1.0, 1.0], size=len(_VORTICES))):
        du, dv = u - cu, v - cv
        rho = np.hypot(du, dv) / radius
        inside = rho < 1.0
        # tilt vanishes at the core and on the rim, so the field stays continuous
        tilt = 2.0 * np.pi * rho * (1.0 - rho)
        swirl = np.arctan2(dv, du) + sign * 0.5 * np.pi
        direction = np.cos(swirl)[..., None] * e1 + np.sin(swirl)[..., None] * e2
        turned = np.cos(tilt)[..., None] * normal + np.sin(tilt)[..., None] * direction
        x[inside] = turned[inside]
    return ManifoldImage(sphere2(), x / np.linalg.norm(x, axis=-1, keepdims=True))


def _spd_field(r: int, dims: Dims, rng: np.random.Generator) -> np.ndarray:
    u, v = _grid(dims)
    lo, hi = SPD_EIGEN_RANGE
    eig = np.stack([lo + (hi - lo) * (0.2 + 0.6 * ((u + k * v / r) % 1.0)) for k in range(r)], axis=-1)
    angles = np.stack([np.pi * v, 0.5 * np.pi * u, 0.25 * np.pi * (u + v)], axis=-1)

    blocks = (
        _rect(u, v, 0.1, 0.45, 0.1, 0.45),
        _rect(u, v, 0.55, 0.9, 0.1, 0.45),
        _rect(u, v, 0.1, 0.45, 0.55, 0.9),
    )
    for mask in blocks:
        eig[mask] = rng.uniform(lo, hi, size=r)
        angles[mask] = rng.uniform(0.0, np.pi, size=3)
    return _spd_from_spectrum(eig, angles)


def _rotation(angles: np.ndarray, r: int) -> np.ndarray:
    a, b, c = angles[..., 0], angles[..., 1], angles[..., 2]
    if r == 1:
        return np.ones(a.shape + (1, 1))
    if r == 2:
        return np.stack([np.stack([np.cos(a), -np.sin(a)], -1), np.stack([np.sin(a), np.cos(a)], -1)], -2)
    zero, one = np.zeros_like(a), np.ones_like(a)

    def rz(t):
        return np.stack([
            np.stack([np.cos(t), -np.sin(t), zero], -1),
            np.stack([np.sin(t), np.cos(t), zero], -1),
            np.stack([zero, zero, one], -1),
        ], -2)

    ry = np.stack([
        np.stack([np.cos(b), zero, np.sin(b)], -1),
        np.stack([zero, one, zero], -1),
        np.stack([-np.sin(b), zero, np.cos(b)], -1),
    ], -2)
    return rz(a) @ ry @ rz(c)


def _spd_from_spectrum(eig: np.ndarray, angles: np.ndarray) -> np.ndarray:
    r = eig.shape[-1]
    q = _rotation(angles, r)
    m = (q * eig[..., None, :]) @ np.swapaxes(q, -1, -2)
    m = 0.5 * (m + np.swapaxes(m, -1, -2))
    return m.reshape(m.shape[:-2] + (r * r,))


def _spd2_blocks(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    return ManifoldImage(spd(2), _spd_field(2, dims, rng))


def _spd3_blocks(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    return ManifoldImage(spd(3), _spd_field(3, dims, rng))


def _simplex_ramps(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    u, v = _grid(dims)
    p = 0.5 + 0.35 * np.sin(np.pi * (u + 0.5 * v) + rng.uniform(0.0, np.pi))
    p[_rect(u, v, 0.15, 0.45, 0.15, 0.5)] = rng.uniform(0.1, 0.9)
    p[_disc(u, v, 0.7, 0.65, 0.2)] = rng.uniform(0.1, 0.9)
    ramp = _rect(u, v, 0.55, 0.9, 0.05, 0.4)
    p[ramp] = 0.1 + 0.8 * (v[ramp] - 0.05) / 0.35
    return ManifoldImage(simplex1(), np.stack([p, 1.0 - p], axis=-1))


def _h2_blobs(dims: Dims, rng: np.random.Generator) -> ManifoldImage:
    u, v = _grid(dims)
    radius = 1.2 * u
    angle = 2.0 * np.pi * v + rng.uniform(0.0, 2.0 * np.pi)
    for cu, cv, size in ((0.3, 0.3, 0.15), (0.65, 0.7, 0.2)):
        mask = _disc(u, v, cu, cv, size)
        radius[mask] = rng.uniform(0.3, 1.5)
        angle[mask] = rng.uniform(0.0, 2.0 * np.pi)
    x = np.stack([np.sinh(radius) * np.cos(angle), np.sinh(radius) * np.sin(angle), np.cosh(radius)], axis=-1)
    return ManifoldImage(hyperbolic2(), x)


GENERATORS: Dict[str, Callable[[Dims, np.random.Generator], ManifoldImage]] = {
    "s1-shapes": _s1_shapes,
    "s2-vortex": _s2_vortex,
    "spd2-blocks": _spd2_blocks,
    "spd3-blocks": _spd3_blocks,
    "eucl1-shapes": _eucl1_shapes,
    "eucl3-shapes": _eucl3_shapes,
    "simplex-ramps": _simplex_ramps,
    "h2-blobs": _h2_blobs,
}


def generate(name: str, dims: Dims, seed: int = 0) -> ManifoldImage:
    """Synthetic image `name` of size dims = (N1, N2)"""
    if name not in GENERATORS:
        raise ParameterError(f"unknown generator '{name}', expected one of {sorted(GENERATORS)}")
    dims = (int(dims[0]), int(dims[1]))
    if min(dims) < MIN_SIDE:
        raise ParameterError(f"generated images need at least {MIN_SIDE} pixels per side, got {dims}")
    stream = sorted(GENERATORS).index(name)
    return GENERATORS[name](dims, RngState(seed).aux(stream))
