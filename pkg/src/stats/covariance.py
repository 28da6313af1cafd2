"""
Second-order statistics in tangent coordinates and the MMSE shrinkage.
"""
import numpy as np

from src.errors import ShapeError
from src.manifolds.base import Geometry

SYMMETRY_TOL = 1e-12
FLOOR_FACTOR = 1e-10


def covariance_from_coords(coords: np.ndarray) -> np.ndarray:
    """Biased second moment (1/K) sum v_k v_k^T of tangent coordinates (K, n)"""
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[0] == 0:
        raise ShapeError(f"expected a non-empty (K, n) coordinate array, got {coords.shape}")
    cov = coords.T @ coords / coords.shape[0]
    return 0.5 * (cov + cov.T)


def empirical_covariance(geometry: Geometry, points: np.ndarray, mean: np.ndarray) -> np.ndarray:
    """(1/K) sum log_mean(x_k) log_mean(x_k)^T"""
    return covariance_from_coords(geometry.log(mean, points))


def pooled_variance(geometry: Geometry, patches: np.ndarray, scalar_mean: np.ndarray) -> float:
    """
    Per-coordinate variance of every pixel value in a patch group:
    sum of dist(m, y_jk)^2 over all K * s^2 values, divided by d * K * s^2.

    `geometry` is the pixel geometry and `patches` has shape
    (K, s^2, ambient_len).
    """
    values = geometry.as_points(patches)
    d2 = geometry.dist(scalar_mean, values) ** 2
    return float(np.sum(d2) / (geometry.dim * d2.size))


def _check_symmetric(cov: np.ndarray) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ShapeError(f"covariance must be square, got shape {cov.shape}")
    scale = max(1.0, float(np.max(np.abs(cov))) if cov.size else 1.0)
    if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise ShapeError("covariance matrix is not symmetric")
    return 0.5 * (cov + cov.T)


def shrinkage_matrix(cov: np.ndarray, sigma2: float) -> np.ndarray:
    """
    (Sigma_Y - sigma^2 I) Sigma_Y^{-1} via the eigendecomposition of Sigma_Y.

    Shrunk eigenvalues below the floor 1e-10 * max(sigma^2, tr/n) are lifted
    to it, which also keeps the inverse well defined.
    """
    cov = _check_symmetric(cov)
    n = cov.shape[0]
    lam, q = np.linalg.eigh(cov)
    floor = max(FLOOR_FACTOR * max(float(sigma2), float(np.trace(cov)) / n), np.finfo(float).tiny)
    factors = np.maximum(lam - sigma2, floor) / np.maximum(lam, floor)
    return (q * factors) @ q.T


def shrinkage_apply(cov: np.ndarray, sigma2: float, v: np.ndarray) -> np.ndarray:
    """Apply the MMSE shrinkage to one vector (n,) or a stack of vectors (K, n)"""
    m = shrinkage_matrix(cov, sigma2)
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != m.shape[0]:
        raise ShapeError(f"vector length {v.shape[-1]} does not match covariance size {m.shape[0]}")
    return v @ m.T
