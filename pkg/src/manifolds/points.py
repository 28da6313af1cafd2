"""
Value types for single points and patches, and the point-level operations.

The array-level `Geometry` classes do the work; these wrappers carry the
descriptor along with the numbers and check that operands agree.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from src.errors import ShapeError
from src.manifolds.base import Geometry
from src.manifolds.descriptor import ManifoldDescriptor, ManifoldKind
from src.manifolds.euclidean import EuclideanGeometry
from src.manifolds.hyperbolic import HyperbolicGeometry
from src.manifolds.product import ProductGeometry
from src.manifolds.simplex import SimplexGeometry
from src.manifolds.spd import SpdGeometry
from src.manifolds.sphere import SphereGeometry

_GEOMETRIES = {
    ManifoldKind.EUCLIDEAN: EuclideanGeometry,
    ManifoldKind.CIRCLE: SphereGeometry,
    ManifoldKind.SPHERE2: SphereGeometry,
    ManifoldKind.SPD: SpdGeometry,
    ManifoldKind.SIMPLEX1: SimplexGeometry,
    ManifoldKind.HYPERBOLIC2: HyperbolicGeometry,
}


@lru_cache(maxsize=None)
def geometry_for(descriptor: ManifoldDescriptor) -> Geometry:
    """Array-level geometry of a pixel manifold"""
    return _GEOMETRIES[descriptor.kind](descriptor)


@lru_cache(maxsize=None)
def product_geometry(descriptor: ManifoldDescriptor, count: int) -> ProductGeometry:
    """Geometry of M^count with component-major tangent coordinates"""
    return ProductGeometry(geometry_for(descriptor), count)


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ManifoldPoint:
    """A point stored in ambient coordinates"""
    descriptor: ManifoldDescriptor
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", _readonly(self.coords))
        if self.coords.shape != (self.descriptor.ambient_len,):
            raise ShapeError(
                f"{self.descriptor} point needs {self.descriptor.ambient_len} coordinates, got shape {self.coords.shape}"
            )

    @property
    def geometry(self) -> Geometry:
        return geometry_for(self.descriptor)


@dataclass(frozen=True)
class TangentCoords:
    """Tangent vector at `base` in the canonical orthonormal basis"""
    base: ManifoldPoint
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", _readonly(self.v))
        if self.v.shape != (self.base.descriptor.dim,):
            raise ShapeError(f"expected {self.base.descriptor.dim} tangent coordinates, got shape {self.v.shape}")


@dataclass(frozen=True)
class TangentBasis:
    """Orthonormal basis at `base`, one ambient vector per row"""
    base: ManifoldPoint
    vectors: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ProductPoint:
    """A patch: `count` points of one manifold, shape (count, ambient_len)"""
    descriptor: ManifoldDescriptor
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components", _readonly(self.components))
        c = self.components
        if c.ndim != 2 or c.shape[1] != self.descriptor.ambient_len or c.shape[0] < 1:
            raise ShapeError(f"{self.descriptor} patch needs shape (count, {self.descriptor.ambient_len}), got {c.shape}")

    @property
    def count(self) -> int:
        return self.components.shape[0]

    @property
    def geometry(self) -> ProductGeometry:
        return product_geometry(self.descriptor, self.count)

    def component(self, k: int) -> ManifoldPoint:
        return ManifoldPoint(self.descriptor, self.components[k])


def _same(a: ManifoldDescriptor, b: ManifoldDescriptor) -> None:
    if a != b:
        raise ShapeError(f"descriptor mismatch: {a} vs {b}")


def validate(p: ManifoldPoint) -> bool:
    return bool(p.geometry.is_valid(p.coords))


def dist(x: ManifoldPoint, y: ManifoldPoint) -> float:
    _same(x.descriptor, y.descriptor)
    return float(x.geometry.dist(x.coords, y.coords))


def exp(x: ManifoldPoint, v: TangentCoords) -> ManifoldPoint:
    _same(x.descriptor, v.base.descriptor)
    return ManifoldPoint(x.descriptor, x.geometry.exp(x.coords, v.v))


def log(x: ManifoldPoint, y: ManifoldPoint) -> TangentCoords:
    _same(x.descriptor, y.descriptor)
    return TangentCoords(x, x.geometry.log(x.coords, y.coords))


def tangent_basis(x: ManifoldPoint) -> TangentBasis:
    return TangentBasis(x, x.geometry.basis(x.coords))


def _same_patch(a: ProductPoint, b: ProductPoint) -> None:
    _same(a.descriptor, b.descriptor)
    if a.count != b.count:
        raise ShapeError(f"patch size mismatch: {a.count} vs {b.count}")


def product_dist(a: ProductPoint, b: ProductPoint, weights: Optional[np.ndarray] = None) -> float:
    _same_patch(a, b)
    return float(a.geometry.dist(a.components, b.components, weights))


def product_exp(base: ProductPoint, v) -> ProductPoint:
    return ProductPoint(base.descriptor, base.geometry.exp(base.components, v))


def product_log(base: ProductPoint, q: ProductPoint) -> np.ndarray:
    _same_patch(base, q)
    return base.geometry.log(base.components, q.components)
