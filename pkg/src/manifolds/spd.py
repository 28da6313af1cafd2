"""
Symmetric positive definite r x r matrices with the affine invariant metric.

Points are stored row-major as r*r reals. Tangent coordinates are the
symmetric vectorisation of W = Log(x^{-1/2} y x^{-1/2}): the r diagonal
entries first, then the off-diagonal entries (i < j, lexicographic) scaled
by sqrt(2), which is orthonormal for the basis x^{1/2} e_ij x^{1/2}.
"""
from typing import Callable, Tuple

import numpy as np

from src.errors import DomainError
from src.manifolds.base import Geometry

SYMMETRY_TOL = 1e-12
# smallest eigenvalue accepted inside a matrix logarithm
LOG_EIG_FLOOR = 1e-14


def sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def eig_apply(m: np.ndarray, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a batch of symmetric matrices"""
    w, u = np.linalg.eigh(m)
    return (u * fn(w)[..., None, :]) @ np.swapaxes(u, -1, -2)


def sqrt_and_invsqrt(m: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    w, u = np.linalg.eigh(m)
    ut = np.swapaxes(u, -1, -2)
    root = np.sqrt(w)
    return (u * root[..., None, :]) @ ut, (u / root[..., None, :]) @ ut


def sym_to_vec(w: np.ndarray) -> np.ndarray:
    r = w.shape[-1]
    iu, ju = np.triu_indices(r, 1)
    diag = np.diagonal(w, axis1=-2, axis2=-1)
    return np.concatenate([diag, np.sqrt(2.0) * w[..., iu, ju]], axis=-1)


def vec_to_sym(v: np.ndarray, r: int) -> np.ndarray:
    iu, ju = np.triu_indices(r, 1)
    out = np.zeros(v.shape[:-1] + (r, r))
    idx = np.arange(r)
    out[..., idx, idx] = v[..., :r]
    off = v[..., r:] / np.sqrt(2.0)
    out[..., iu, ju] = off
    out[..., ju, iu] = off
    return out


def sym_basis(r: int) -> np.ndarray:
    """Orthonormal basis e_ij of symmetric matrices in coordinate order, shape (d, r, r)"""
    d = r * (r + 1) // 2
    return vec_to_sym(np.eye(d), r)


class SpdGeometry(Geometry):
    """SPD(r), r in {1, 2, 3}"""

    @property
    def r(self) -> int:
        return self.descriptor.param

    def matrices(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=float).reshape(np.shape(x)[:-1] + (self.r, self.r))

    def flatten(self, m: np.ndarray) -> np.ndarray:
        return m.reshape(m.shape[:-2] + (self.r * self.r,))

    def is_valid(self, x):
        x = self.as_points(x)
        m = self.matrices(x)
        finite = np.all(np.isfinite(x), axis=-1)
        m = np.where(finite[..., None, None], m, np.eye(self.r))
        scale = np.maximum(1.0, np.max(np.abs(m), axis=(-2, -1)))
        symmetric = np.max(np.abs(m - np.swapaxes(m, -1, -2)), axis=(-2, -1)) <= SYMMETRY_TOL * scale
        positive = np.linalg.eigvalsh(sym(m))[..., 0] > 0.0
        return finite & symmetric & positive

    def project(self, x):
        x = self.as_points(x)
        return self.flatten(sym(self.matrices(x)))

    def _relative(self, x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Eigendecomposition of x^{-1/2} y x^{-1/2}"""
        _, inv_root = sqrt_and_invsqrt(self.matrices(x))
        w, u = np.linalg.eigh(sym(inv_root @ self.matrices(y) @ inv_root))
        if np.any(w <= LOG_EIG_FLOOR) or not np.all(np.isfinite(w)):
            raise DomainError(f"matrix logarithm of a non positive definite argument (min eigenvalue {np.min(w):.3e})")
        return w, u

    def dist(self, x, y):
        x, y = self.broadcast_points(self.as_points(x), self.as_points(y))
        w, _ = self._relative(x, y)
        return np.sqrt(np.sum(np.log(w) ** 2, axis=-1))

    def inner(self, x, u, w):
        xinv = np.linalg.inv(self.matrices(x))
        a = self.matrices(u) @ xinv
        b = self.matrices(w) @ xinv
        return np.einsum("...ij,...ji->...", a, b)

    def basis(self, x):
        x = self.as_points(x)
        root, _ = sqrt_and_invsqrt(self.matrices(x))
        e = root[..., None, :, :] @ sym_basis(self.r) @ root[..., None, :, :]
        return e.reshape(e.shape[:-2] + (self.r * self.r,))

    def _exp(self, x, v):
        root, _ = sqrt_and_invsqrt(self.matrices(x))
        e = eig_apply(vec_to_sym(v, self.r), np.exp)
        return self.flatten(sym(root @ e @ root))

    def _log(self, x, y):
        w, u = self._relative(x, y)
        log_m = (u * np.log(w)[..., None, :]) @ np.swapaxes(u, -1, -2)
        return sym_to_vec(log_m), np.zeros(self.batch_shape(x), dtype=bool)
