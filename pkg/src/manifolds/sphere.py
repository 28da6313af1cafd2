"""
Unit circle S^1 and unit sphere S^2 embedded in R^2 / R^3.
"""
from typing import Tuple

import numpy as np

from src.manifolds.base import CUT_LOCUS_TOL, CLAMP_SLACK, Geometry, check_slack, safe_ratio

UNIT_TOL = 1e-12


class SphereGeometry(Geometry):
    """
    Great-circle geometry of S^1 or S^2 with the round metric.

    Canonical basis: on S^1 the rotated point (-x2, x1); on S^2 the two
    ambient axes least aligned with x (ties to the lower index), projected
    onto the tangent plane and orthonormalised in axis order.
    """

    def is_valid(self, x):
        x = self.as_points(x)
        finite = np.all(np.isfinite(x), axis=-1)
        with np.errstate(invalid="ignore"):
            return finite & (np.abs(np.linalg.norm(x, axis=-1) - 1.0) <= UNIT_TOL)

    def project(self, x):
        x = self.as_points(x)
        return x / np.linalg.norm(x, axis=-1, keepdims=True)

    def dist(self, x, y):
        x, y = self.broadcast_points(self.as_points(x), self.as_points(y))
        c = np.sum(x * y, axis=-1)
        check_slack(c, -1.0, 1.0, CLAMP_SLACK, "inner product of unit vectors")
        # chord form: symmetric in x and y and accurate at both ends
        return 2.0 * np.arctan2(np.linalg.norm(x - y, axis=-1), np.linalg.norm(x + y, axis=-1))

    def inner(self, x, u, w):
        return np.sum(np.asarray(u) * np.asarray(w), axis=-1)

    def basis(self, x):
        x = self.as_points(x)
        if self.descriptor.ambient_len == 2:
            return np.stack([-x[..., 1], x[..., 0]], axis=-1)[..., None, :]

        axes = np.argsort(np.abs(x), axis=-1, kind="stable")[..., :2]
        axes.sort(axis=-1)
        raw = np.eye(3)[axes] - np.take_along_axis(x, axes, axis=-1)[..., None] * x[..., None, :]
        e1 = raw[..., 0, :] / np.linalg.norm(raw[..., 0, :], axis=-1, keepdims=True)
        b = raw[..., 1, :] - np.sum(raw[..., 1, :] * e1, axis=-1, keepdims=True) * e1
        e2 = b / np.linalg.norm(b, axis=-1, keepdims=True)
        return np.stack([e1, e2], axis=-2)

    def _exp(self, x, v):
        w = np.einsum("...i,...in->...n", v, self.basis(x))
        theta = np.linalg.norm(v, axis=-1)
        y = np.cos(theta)[..., None] * x + safe_ratio(np.sin(theta), theta)[..., None] * w
        return self.project(y)

    def _log(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        coords = np.einsum("...in,...n->...i", self.basis(x), y)
        s = np.linalg.norm(coords, axis=-1)
        c = np.sum(x * y, axis=-1)
        theta = np.arctan2(s, c)
        return coords * safe_ratio(theta, s)[..., None], c <= -1.0 + CUT_LOCUS_TOL
