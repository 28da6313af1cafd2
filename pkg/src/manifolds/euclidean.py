"""
Flat space R^d: exp is addition, log is subtraction.
"""
from typing import Tuple

import numpy as np

from src.manifolds.base import Geometry


class EuclideanGeometry(Geometry):
    """R^d with the canonical basis"""

    def is_valid(self, x):
        x = self.as_points(x)
        return np.all(np.isfinite(x), axis=-1)

    def project(self, x):
        return self.as_points(x)

    def dist(self, x, y):
        x, y = self.broadcast_points(self.as_points(x), self.as_points(y))
        return np.linalg.norm(y - x, axis=-1)

    def inner(self, x, u, w):
        return np.sum(np.asarray(u) * np.asarray(w), axis=-1)

    def basis(self, x):
        x = self.as_points(x)
        eye = np.eye(self.dim)
        return np.broadcast_to(eye, self.batch_shape(x) + eye.shape).copy()

    def _exp(self, x, v):
        return x + v

    def _log(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        return y - x, np.zeros(self.batch_shape(x), dtype=bool)
