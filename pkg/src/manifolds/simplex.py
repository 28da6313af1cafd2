"""
Open probability simplex Delta_1 = {x in R^2 : x > 0, x1 + x2 = 1}
with the Fisher-Rao metric <u, w>_x = sum(u * w / x).

Via q = sqrt(x) the simplex is an open quarter of the circle of radius 1
(scaled by 1/2 in distance), so exp and log reduce to circle rotations of
q. The tangent basis at x is e = sqrt(x1 x2) (1, -1).

The simplex is not complete: exp squares the rotated q, which folds
geodesics running past a vertex back inside, and fails only when the
image lands on a vertex.
"""
import numpy as np

from src.errors import SimplexBoundaryError
from src.manifolds.base import Geometry

SUM_TOL = 1e-12


class SimplexGeometry(Geometry):
    """Delta_1 stored as the two barycentric weights"""

    def is_valid(self, x):
        x = self.as_points(x)
        finite = np.all(np.isfinite(x), axis=-1)
        with np.errstate(invalid="ignore"):
            positive = np.all(x > 0.0, axis=-1)
            return finite & positive & (np.abs(np.sum(x, axis=-1) - 1.0) <= SUM_TOL)

    def project(self, x):
        x = self.as_points(x)
        return x / np.sum(x, axis=-1, keepdims=True)

    @staticmethod
    def _angle(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Signed half-angle from sqrt(x) to sqrt(y), positive towards the first vertex"""
        q = np.sqrt(np.clip(x, 0.0, None))
        p = np.sqrt(np.clip(y, 0.0, None))
        along = p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0]
        return np.arctan2(along, np.sum(p * q, axis=-1))

    def dist(self, x, y):
        x, y = self.broadcast_points(self.as_points(x), self.as_points(y))
        return 2.0 * np.abs(self._angle(x, y))

    def inner(self, x, u, w):
        return np.sum(np.asarray(u) * np.asarray(w) / np.asarray(x), axis=-1)

    def basis(self, x):
        x = self.as_points(x)
        scale = np.sqrt(x[..., 0] * x[..., 1])
        return np.stack([scale, -scale], axis=-1)[..., None, :]

    def _exp(self, x, v):
        q = np.sqrt(x)
        t = np.stack([q[..., 1], -q[..., 0]], axis=-1)
        half = 0.5 * v[..., 0]
        p = np.cos(half)[..., None] * q + np.sin(half)[..., None] * t
        y = p * p
        if np.any(y <= np.finfo(float).tiny):
            raise SimplexBoundaryError()
        return self.project(y)

    def _log(self, x, y):
        return 2.0 * self._angle(x, y)[..., None], np.zeros(self.batch_shape(x), dtype=bool)
