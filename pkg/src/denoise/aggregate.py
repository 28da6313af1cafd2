"""
Per-pixel aggregation of restored patches by Karcher means.
"""
from typing import List, Optional, Tuple

import numpy as np

from src.config import config
from src.manifolds.base import Geometry
from src.stats.karcher import KarcherConfig, karcher_mean_segments


def segmented_means(
    geometry: Geometry,
    values: np.ndarray,
    ids: np.ndarray,
    n: int,
    weights: Optional[np.ndarray] = None,
    cfg: Optional[KarcherConfig] = None,
    chunk: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Karcher mean of the values belonging to each id in [0, n).

    Values are reduced in their given order within each id, in chunks of
    at most `chunk` rows (a single id is never split). Returns the means,
    shape (n, L), and a mask of ids that received at least one value;
    rows of ids without values are NaN.
    """
    chunk = chunk or config.denoise.aggregation_chunk
    order = np.argsort(ids, kind="stable")
    ids = ids[order]
    values = values[order]
    weights = None if weights is None else np.asarray(weights)[order]

    counts = np.bincount(ids, minlength=n)
    covered = np.flatnonzero(counts)
    row_end = np.cumsum(counts)[covered]
    row_start = row_end - counts[covered]
    out = np.full((n,) + values.shape[1:], np.nan)

    p0 = 0
    while p0 < covered.size:
        p1 = max(p0 + 1, int(np.searchsorted(row_end, row_start[p0] + chunk, side="right")))
        lo, hi = row_start[p0], row_end[p1 - 1]
        local = np.searchsorted(covered[p0:p1], ids[lo:hi])
        out[covered[p0:p1]] = karcher_mean_segments(
            geometry, values[lo:hi], local, p1 - p0,
            None if weights is None else weights[lo:hi], cfg,
        )
        p0 = p1
    return out, counts > 0


class Aggregator:
    """
    Collects restored patches group by group and reduces every pixel to
    the unweighted Karcher mean of its estimates, taken in group order.
    """

    def __init__(self, geometry: Geometry, dims: Tuple[int, int], s: int):
        self.geometry = geometry
        self.dims = dims
        self.s = s
        self._pixel_ids: List[np.ndarray] = []
        self._values: List[np.ndarray] = []
        rows, cols = np.arange(s * s) % s, np.arange(s * s) // s
        self._in_patch = rows * dims[1] + cols

    def add(self, top_left: np.ndarray, restored: np.ndarray) -> None:
        """
        top_left: (K, 2) top-left pixels (= centre indices) of the patches;
        restored: (K, s*s, L) restored patches.
        """
        if top_left.shape[0] == 0:
            return
        base = top_left[:, 0] * self.dims[1] + top_left[:, 1]
        self._pixel_ids.append((base[:, None] + self._in_patch[None, :]).ravel())
        self._values.append(restored.reshape(-1, restored.shape[-1]))

    @property
    def n_estimates(self) -> int:
        return int(sum(ids.size for ids in self._pixel_ids))

    def finalize(self, fallback: np.ndarray, cfg: Optional[KarcherConfig] = None) -> Tuple[np.ndarray, int]:
        """
        Aggregated image of shape (N1, N2, L); pixels without any estimate
        keep their `fallback` value. Returns the image and the number of
        such pixels.
        """
        n = self.dims[0] * self.dims[1]
        flat_fallback = fallback.reshape(n, -1)
        if not self._pixel_ids:
            return fallback.copy(), n
        means, covered = segmented_means(
            self.geometry, np.concatenate(self._values), np.concatenate(self._pixel_ids), n, cfg=cfg
        )
        means[~covered] = flat_fallback[~covered]
        return means.reshape(fallback.shape), int(np.count_nonzero(~covered))
