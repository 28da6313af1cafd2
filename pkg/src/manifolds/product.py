"""
Product manifold M^n used for patches.

Points have shape (*batch, count, ambient_len); tangent coordinates are the
component-major concatenation of the component coordinates, shape
(*batch, count * dim).
"""
from typing import Optional, Tuple

import numpy as np

from src.errors import ShapeError
from src.manifolds.base import Geometry


class ProductGeometry(Geometry):
    """`count` copies of a component geometry"""

    def __init__(self, component: Geometry, count: int):
        if count < 1:
            raise ShapeError(f"product needs at least one component, got {count}")
        super().__init__(component.descriptor)
        self.component = component
        self.count = int(count)

    def __str__(self) -> str:
        return f"ProductGeometry({self.descriptor}^{self.count})"

    __repr__ = __str__

    @property
    def point_shape(self) -> Tuple[int, ...]:
        return (self.count,) + self.component.point_shape

    @property
    def dim(self) -> int:
        return self.count * self.component.dim

    def split(self, v: np.ndarray) -> np.ndarray:
        return v.reshape(v.shape[:-1] + (self.count, self.component.dim))

    def join(self, v: np.ndarray) -> np.ndarray:
        return v.reshape(v.shape[:-2] + (self.dim,))

    def is_valid(self, x):
        return np.all(self.component.is_valid(self.as_points(x)), axis=-1)

    def project(self, x):
        return self.component.project(self.as_points(x))

    def dist(self, x, y, weights: Optional[np.ndarray] = None):
        """sqrt(sum_k w_k dist(x_k, y_k)^2), unweighted by default"""
        x, y = self.broadcast_points(self.as_points(x), self.as_points(y))
        d2 = self.component.dist(x, y) ** 2
        if weights is not None:
            weights = np.asarray(weights, dtype=float)
            if weights.shape != (self.count,):
                raise ShapeError(f"expected {self.count} component weights, got shape {weights.shape}")
            d2 = d2 * weights
        return np.sqrt(np.sum(d2, axis=-1))

    def inner(self, x, u, w):
        return np.sum(self.component.inner(x, u, w), axis=-1)

    def basis(self, x):
        x = self.as_points(x)
        e = self.component.basis(x)
        d = self.component.dim
        out = np.zeros(self.batch_shape(x) + (self.dim,) + self.point_shape)
        for k in range(self.count):
            out[..., k * d:(k + 1) * d, k, :] = e[..., k, :, :]
        return out

    def _exp(self, x, v):
        return self.component.exp(x, self.split(v))

    def _log(self, x, y):
        v, cut = self.component.log_masked(x, y)
        return self.join(v), cut
