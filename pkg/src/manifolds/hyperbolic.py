"""
Hyperbolic plane H^2 as the upper sheet of the hyperboloid
x1^2 + x2^2 - x3^2 = -1 in Minkowski space.
"""
import numpy as np

from src.manifolds.base import CLAMP_SLACK, Geometry, check_slack, safe_ratio

HYPERBOLOID_TOL = 1e-10


def minkowski(u: np.ndarray, w: np.ndarray) -> np.ndarray:
    u = np.asarray(u)
    w = np.asarray(w)
    return u[..., 0] * w[..., 0] + u[..., 1] * w[..., 1] - u[..., 2] * w[..., 2]


class HyperbolicGeometry(Geometry):
    """
    H^2 with the metric induced by the Minkowski form.

    The tangent basis at x is the image of the standard basis at the origin
    (0, 0, 1) under the Lorentz boost taking the origin to x, so that the
    basis at the origin is {(1, 0, 0), (0, 1, 0)}.
    """

    def is_valid(self, x):
        x = self.as_points(x)
        finite = np.all(np.isfinite(x), axis=-1)
        with np.errstate(invalid="ignore"):
            on_sheet = np.abs(minkowski(x, x) + 1.0) <= HYPERBOLOID_TOL
            return finite & on_sheet & (x[..., 2] > 0.0)

    def project(self, x):
        x = self.as_points(x)
        x = x / np.sqrt(np.abs(minkowski(x, x)))[..., None]
        return x * np.where(x[..., 2] < 0.0, -1.0, 1.0)[..., None]

    def basis(self, x):
        x = self.as_points(x)
        u = x[..., :2]
        scale = u / (1.0 + x[..., 2])[..., None]
        spatial = np.eye(2) + scale[..., :, None] * u[..., None, :]
        return np.concatenate([spatial, u[..., :, None]], axis=-1)

    def _coords(self, x, y):
        return minkowski(self.basis(x), y[..., None, :])

    def dist(self, x, y):
        x, y = self.broadcast_points(self.as_points(x), self.as_points(y))
        # <x - y, x - y> = 4 sinh^2(d / 2) on the hyperboloid
        chord = check_slack(minkowski(x - y, x - y), 0.0, np.inf, CLAMP_SLACK, "Minkowski chord length")
        return 2.0 * np.arcsinh(0.5 * np.sqrt(chord))

    def inner(self, x, u, w):
        return minkowski(u, w)

    def _exp(self, x, v):
        w = np.einsum("...i,...in->...n", v, self.basis(x))
        theta = np.linalg.norm(v, axis=-1)
        y = np.cosh(theta)[..., None] * x + safe_ratio(np.sinh(theta), theta)[..., None] * w
        return self.project(y)

    def _log(self, x, y):
        c = self._coords(x, y)
        s = np.linalg.norm(c, axis=-1)
        return c * safe_ratio(np.arcsinh(s), s)[..., None], np.zeros(self.batch_shape(x), dtype=bool)
