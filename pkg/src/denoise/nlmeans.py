"""
Nonlocal means for manifold-valued images.

Patch similarity is the product distance with Gaussian spatial weights
exp(-(k1^2 + k2^2) / (2 delta^2)); every pixel becomes the weighted
Karcher mean of the centres of its K most similar patches, with weights
exp(-d^2 / (2 tau^2)) and the centre patch given the largest weight of
the others.
"""
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from rich.console import Console

from src.config import config
from src.denoise.aggregate import segmented_means
from src.denoise.patches import PatchSearch
from src.errors import GroupError, ManifoldError, ParameterError
from src.manifolds.image import ManifoldImage
from src.stats.karcher import KarcherConfig

console = Console(stderr=True)


def gaussian_kernel(s: int, delta: float) -> np.ndarray:
    """s x s spatial weights exp(-(k1^2 + k2^2) / (2 delta^2)), k measured from the patch centre"""
    if delta <= 0.0:
        raise ParameterError(f"delta must be positive, got {delta}")
    k = np.arange(s) - s // 2
    return np.exp(-(k[:, None] ** 2 + k[None, :] ** 2) / (2.0 * delta * delta))


def similarity_weights(dist2: np.ndarray, tau: float) -> np.ndarray:
    """
    Weights of a group whose first entry is the reference itself.

    The reference weight is the largest weight of the other members, or 1
    when there are no other members or all their weights underflow.
    """
    if tau <= 0.0:
        raise ParameterError(f"tau must be positive, got {tau}")
    weights = np.exp(-np.asarray(dist2, dtype=float) / (2.0 * tau * tau))
    top = float(np.max(weights[1:])) if weights.size > 1 else 0.0
    weights[0] = top if top > 0.0 else 1.0
    return weights


def _border_offsets(index: int, n_centres: int, h: int) -> np.ndarray:
    """Offsets of the pixels whose nearest valid centre is `index` along one axis"""
    lo = -h if index == 0 else 0
    hi = h if index == n_centres - 1 else 0
    return np.arange(lo, hi + 1)


def nlmeans(
    image: ManifoldImage,
    s: int,
    w: int,
    k: int,
    delta: float,
    tau: float,
    workers: Optional[int] = None,
    cfg: Optional[KarcherConfig] = None,
    quiet: bool = False,
) -> ManifoldImage:
    """
    Restore every pixel of `image` from the centres of its similar patches.

    Pixels closer than s//2 to the border use the group of the nearest
    valid centre and take the value at their own offset inside each
    similar patch, with the same weights.
    """
    if k < 1:
        raise ParameterError(f"K must be at least 1, got {k}")
    if tau <= 0.0:
        raise ParameterError(f"tau must be positive, got {tau}")
    start = time.perf_counter()
    workers = max(1, workers if workers is not None else config.denoise.workers)
    search = PatchSearch(image, s, w, kernel=gaussian_kernel(s, delta))
    h = s // 2
    data = image.data
    out = np.empty_like(data)
    n_c = search.n_centres
    reduced = 0

    def group(ref: Tuple[int, int]):
        try:
            centres, dist2, short = search.select(ref, k)
            return centres, similarity_weights(dist2, tau), short
        except ManifoldError as e:
            raise GroupError((ref[0] + h, ref[1] + h), e) from e

    for block in range(search.n_blocks):
        refs = list(search.references(block))
        search.load_block(block)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                groups = list(pool.map(group, refs))
        else:
            groups = [group(ref) for ref in refs]

        pixels: List[Tuple[int, int]] = []
        values: List[np.ndarray] = []
        weights: List[np.ndarray] = []
        ids: List[np.ndarray] = []
        for (r, c), (centres, omega, short) in zip(refs, groups):
            reduced += int(short)
            for dr in _border_offsets(r, n_c[0], h):
                for dc in _border_offsets(c, n_c[1], h):
                    ids.append(np.full(len(centres), len(pixels)))
                    pixels.append((r + h + dr, c + h + dc))
                    values.append(data[centres[:, 0] + h + dr, centres[:, 1] + h + dc])
                    weights.append(omega)

        means, _ = segmented_means(
            image.geometry, np.concatenate(values), np.concatenate(ids), len(pixels),
            weights=np.concatenate(weights), cfg=cfg,
        )
        target = np.asarray(pixels)
        out[target[:, 0], target[:, 1]] = means

    if not quiet:
        console.print(
            f"[green]✓[/green] NL-means: {n_c[0] * n_c[1]} groups, {reduced} reduced "
            f"({time.perf_counter() - start:.1f}s)"
        )
    return ManifoldImage(image.descriptor, out)
