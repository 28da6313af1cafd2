"""
Manifold-valued images.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.errors import ShapeError
from src.manifolds.base import Geometry
from src.manifolds.descriptor import ManifoldDescriptor
from src.manifolds.points import ManifoldPoint, geometry_for


@dataclass
class ManifoldImage:
    """An N1 x N2 grid of points, stored as an array of shape (N1, N2, ambient_len)"""
    descriptor: ManifoldDescriptor
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.ndim != 3 or self.data.shape[2] != self.descriptor.ambient_len:
            raise ShapeError(
                f"{self.descriptor} image needs shape (N1, N2, {self.descriptor.ambient_len}), got {self.data.shape}"
            )

    @classmethod
    def constant(cls, point: ManifoldPoint, dims: Tuple[int, int]) -> "ManifoldImage":
        data = np.broadcast_to(point.coords, tuple(dims) + point.coords.shape).copy()
        return cls(point.descriptor, data)

    @property
    def dims(self) -> Tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def n_pixels(self) -> int:
        return self.data.shape[0] * self.data.shape[1]

    @property
    def geometry(self) -> Geometry:
        return geometry_for(self.descriptor)

    def pixel(self, row: int, col: int) -> ManifoldPoint:
        return ManifoldPoint(self.descriptor, self.data[row, col])

    def valid_mask(self) -> np.ndarray:
        return self.geometry.is_valid(self.data)

    def copy(self) -> "ManifoldImage":
        return ManifoldImage(self.descriptor, self.data.copy())

    def check_compatible(self, other: "ManifoldImage") -> None:
        if self.descriptor != other.descriptor or self.dims != other.dims:
            raise ShapeError(
                f"image mismatch: {self.descriptor} {self.dims} vs {other.descriptor} {other.dims}"
            )
