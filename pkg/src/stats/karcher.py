"""
Karcher (Riemannian centre of mass) means by gradient descent.
"""
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from src.config import config
from src.errors import ConvergenceError, ParameterError, ShapeError
from src.manifolds.base import Geometry


class KarcherConfig(BaseModel):
    """Gradient descent settings: m <- exp_m(step * mean gradient)"""
    max_iters: int = Field(default_factory=lambda: config.karcher.max_iters, ge=1)
    grad_tol: float = Field(default_factory=lambda: config.karcher.grad_tol, gt=0.0)
    step: float = Field(default_factory=lambda: config.karcher.step, gt=0.0)


def _weights(weights: Optional[np.ndarray], n: int) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (n,):
        raise ShapeError(f"expected {n} weights, got shape {weights.shape}")
    if np.any(weights < 0.0) or not np.all(np.isfinite(weights)):
        raise ParameterError("weights must be finite and non-negative")
    return weights


def karcher_mean(
    geometry: Geometry,
    points: np.ndarray,
    weights: Optional[np.ndarray] = None,
    cfg: Optional[KarcherConfig] = None,
) -> np.ndarray:
    """
    Weighted Karcher mean of `points` (shape (K, *point_shape)).

    Starts at points[0]; stops as soon as the weighted mean of the log
    vectors has norm <= grad_tol, so identical inputs return points[0].

    Raises:
        ConvergenceError: gradient still above tolerance after max_iters updates
        CutLocusError: a sample fell into the cut locus of an iterate
    """
    cfg = cfg or KarcherConfig()
    points = geometry.as_points(points)
    if points.ndim != len(geometry.point_shape) + 1 or points.shape[0] == 0:
        raise ShapeError(f"karcher_mean needs a non-empty stack of points, got shape {points.shape}")
    w = _weights(weights, points.shape[0])
    total = w.sum()
    if total <= 0.0:
        raise ParameterError("weights must have a positive sum")

    mean = points[0].copy()
    for iteration in range(cfg.max_iters + 1):
        grad = np.sum(w[:, None] * geometry.log(mean, points), axis=0) / total
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= cfg.grad_tol:
            return mean
        if iteration == cfg.max_iters:
            raise ConvergenceError(grad_norm, iteration)
        mean = geometry.exp(mean, cfg.step * grad)
    raise AssertionError("unreachable")


def karcher_mean_segments(
    geometry: Geometry,
    values: np.ndarray,
    segment_ids: np.ndarray,
    n_segments: int,
    weights: Optional[np.ndarray] = None,
    cfg: Optional[KarcherConfig] = None,
) -> np.ndarray:
    """
    One Karcher mean per segment, iterated jointly.

    values has shape (M, *point_shape) and segment_ids shape (M,) with
    entries in [0, n_segments). Every segment starts at its first value in
    input order and is frozen once its own gradient criterion holds, so the
    result for a segment matches `karcher_mean` on that segment alone.
    """
    cfg = cfg or KarcherConfig()
    values = geometry.as_points(values)
    segment_ids = np.asarray(segment_ids, dtype=np.int64)
    if segment_ids.shape != values.shape[:1]:
        raise ShapeError(f"segment ids {segment_ids.shape} do not match values {values.shape[:1]}")
    w = _weights(weights, values.shape[0])

    present, first = np.unique(segment_ids, return_index=True)
    if present.size != n_segments or (n_segments and (present[0] != 0 or present[-1] != n_segments - 1)):
        missing = np.setdiff1d(np.arange(n_segments), present)
        raise ShapeError(f"{missing.size} segments have no values (first: {missing[:1].tolist()})")
    totals = np.bincount(segment_ids, weights=w, minlength=n_segments)
    if np.any(totals <= 0.0):
        raise ParameterError("every segment needs a positive weight sum")

    means = values[first].copy()
    active = np.ones(n_segments, dtype=bool)
    for iteration in range(cfg.max_iters + 1):
        rows = np.flatnonzero(active[segment_ids])
        seg = segment_ids[rows]
        v = geometry.log(means[seg], values[rows]) * w[rows, None]
        grad = np.stack(
            [np.bincount(seg, weights=v[:, j], minlength=n_segments) for j in range(geometry.dim)],
            axis=-1,
        ) / totals[:, None]
        grad_norm = np.linalg.norm(grad, axis=-1)
        active &= grad_norm > cfg.grad_tol
        if not np.any(active):
            return means
        if iteration == cfg.max_iters:
            raise ConvergenceError(float(np.max(grad_norm[active])), iteration)
        means[active] = geometry.exp(means[active], cfg.step * grad[active])
    raise AssertionError("unreachable")
