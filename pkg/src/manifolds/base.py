"""
Common interface of the pixel geometries.

All methods are batched: points are arrays of shape (*batch, *point_shape),
tangent vectors are coordinate arrays of shape (*batch, dim) in the
canonical orthonormal basis returned by `basis`. Leading batch dimensions
broadcast against each other.
"""
import abc
from typing import Tuple

import numpy as np

from src.errors import CutLocusError, DomainError, ShapeError
from src.manifolds.descriptor import ManifoldDescriptor

# slack allowed on arccos/arcosh style arguments before they count as invalid
CLAMP_SLACK = 1e-12
# antipodality threshold for spheres: <x, y> <= -1 + CUT_LOCUS_TOL
CUT_LOCUS_TOL = 1e-12


def check_slack(value: np.ndarray, lo: float, hi: float, slack: float, what: str) -> np.ndarray:
    """Clamp `value` into [lo, hi], raising if it overshoots by more than `slack`"""
    value = np.asarray(value, dtype=float)
    if np.any(value < lo - slack) or np.any(value > hi + slack) or np.any(~np.isfinite(value)):
        raise DomainError(f"{what} outside [{lo}, {hi}] beyond slack {slack:g}")
    return np.clip(value, lo, hi)


def safe_ratio(num: np.ndarray, den: np.ndarray, limit: float = 1.0) -> np.ndarray:
    """num / den with the removable singularity at den == 0 set to `limit`"""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.full(np.broadcast_shapes(num.shape, den.shape), limit, dtype=float)
    np.divide(num, den, out=out, where=den != 0)
    return out


class Geometry(metaclass=abc.ABCMeta):
    """
    Interface of a Riemannian pixel manifold stored in ambient coordinates.
    """

    def __init__(self, descriptor: ManifoldDescriptor):
        self.descriptor = descriptor

    def __str__(self) -> str:
        return f"{type(self).__name__}({self.descriptor})"

    __repr__ = __str__

    @property
    def point_shape(self) -> Tuple[int, ...]:
        return (self.descriptor.ambient_len,)

    @property
    def dim(self) -> int:
        return self.descriptor.dim

    # -- shape plumbing -------------------------------------------------

    def as_points(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = len(self.point_shape)
        if x.ndim < p or x.shape[x.ndim - p:] != self.point_shape:
            raise ShapeError(f"{self}: expected points of shape (..., {self.point_shape}), got {x.shape}")
        return x

    def as_coords(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.ndim < 1 or v.shape[-1] != self.dim:
            raise ShapeError(f"{self}: expected tangent coordinates of length {self.dim}, got {v.shape}")
        return v

    def batch_shape(self, x: np.ndarray) -> Tuple[int, ...]:
        return x.shape[:x.ndim - len(self.point_shape)]

    def broadcast_points(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        batch = np.broadcast_shapes(self.batch_shape(x), self.batch_shape(y))
        shape = batch + self.point_shape
        return np.broadcast_to(x, shape), np.broadcast_to(y, shape)

    def broadcast_tangent(self, x: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        batch = np.broadcast_shapes(self.batch_shape(x), v.shape[:-1])
        return np.broadcast_to(x, batch + self.point_shape), np.broadcast_to(v, batch + (self.dim,))

    # -- geometry ------------------------------------------------------

    @abc.abstractmethod
    def is_valid(self, x: np.ndarray) -> np.ndarray:
        """Boolean array over the batch: True where the point invariants hold"""

    @abc.abstractmethod
    def project(self, x: np.ndarray) -> np.ndarray:
        """Pull a nearly valid point back onto the manifold"""

    @abc.abstractmethod
    def dist(self, x, y) -> np.ndarray:
        """Geodesic distance"""

    @abc.abstractmethod
    def inner(self, x, u, w) -> np.ndarray:
        """Riemannian metric between ambient tangent vectors u, w at x"""

    @abc.abstractmethod
    def basis(self, x) -> np.ndarray:
        """Orthonormal tangent basis at x, shape (*batch, dim, *point_shape)"""

    @abc.abstractmethod
    def _exp(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """exp on broadcast inputs, before the zero-vector shortcut"""

    @abc.abstractmethod
    def _log(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(coordinates, cut-locus mask) on broadcast inputs"""

    def exp(self, x, v) -> np.ndarray:
        x = self.as_points(x)
        v = self.as_coords(v)
        x, v = self.broadcast_tangent(x, v)
        y = self._exp(x, v)
        zero = np.all(v == 0.0, axis=-1)
        if np.any(zero):
            mask = zero.reshape(zero.shape + (1,) * len(self.point_shape))
            y = np.where(mask, x, y)
        return y

    def log_masked(self, x, y) -> Tuple[np.ndarray, np.ndarray]:
        """log together with the cut-locus mask, without raising"""
        x = self.as_points(x)
        y = self.as_points(y)
        x, y = self.broadcast_points(x, y)
        return self._log(x, y)

    def log(self, x, y) -> np.ndarray:
        v, cut = self.log_masked(x, y)
        if np.any(cut):
            raise CutLocusError(tuple(np.argwhere(cut)[0]))
        return v

    def sq_dist(self, x, y) -> np.ndarray:
        return self.dist(x, y) ** 2

    def gram(self, x) -> np.ndarray:
        """Gram matrix of the canonical basis under the metric at x"""
        x = self.as_points(x)
        e = self.basis(x)
        p = len(self.point_shape)
        xs = x.reshape(x.shape[:x.ndim - p] + (1, 1) + self.point_shape)
        return self.inner(xs, e[..., :, None, :], e[..., None, :, :]) if p == 1 else \
            self.inner(xs, e[..., :, None, :, :], e[..., None, :, :, :])
