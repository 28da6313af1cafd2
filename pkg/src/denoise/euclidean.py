"""
Two-step NL-MMSE for real-valued images with plain vector arithmetic.

This is the flat-space algorithm written out directly (arithmetic means,
explicit patch distances, the MMSE formula mu + (Sigma - sigma^2 I)
Sigma^{-1} (y - mu)); the manifold denoiser must agree with it on
Euclidean images. Scan order, tie-breaks, acceleration and the
eigenvalue floor are the same as in `nlmmse`.
"""
from typing import List, Optional, Tuple

import numpy as np

from src.denoise.params import DenoiseParams
from src.errors import ShapeError

FLOOR_FACTOR = 1e-10


def _anchored_mean(values: np.ndarray) -> np.ndarray:
    """Mean written as values[0] + mean(values - values[0])"""
    first = values[0]
    return first + np.sum(values - first, axis=0) / values.shape[0]


def _patches(data: np.ndarray, s: int) -> np.ndarray:
    """(C1, C2, s*s, d) complete patches; component dc * s + dr is pixel (dr, dc) of the patch"""
    c1, c2 = data.shape[0] - s + 1, data.shape[1] - s + 1
    out = np.empty((c1, c2, s * s, data.shape[2]))
    for dc in range(s):
        for dr in range(s):
            out[:, :, dc * s + dr] = data[dr:dr + c1, dc:dc + c2]
    return out


def _shrink(y: np.ndarray, mu: np.ndarray, cov: np.ndarray, sigma2: float) -> np.ndarray:
    """
    mu + (Sigma - sigma^2 I) Sigma^{-1} (y - mu) as a dense solve.

    Sigma and Sigma - sigma^2 I have their spectra lifted to the floor
    1e-10 * max(sigma^2, tr/n) before the solve.
    """
    n = cov.shape[0]
    lam, q = np.linalg.eigh(cov)
    floor = max(FLOOR_FACTOR * max(sigma2, float(np.trace(cov)) / n), np.finfo(float).tiny)
    total = (q * np.maximum(lam, floor)) @ q.T
    signal = (q * np.maximum(lam - sigma2, floor)) @ q.T
    return mu + (y - mu) @ np.linalg.solve(total, signal)


def _window(ref: Tuple[int, int], w: int, n_centres: Tuple[int, int]) -> np.ndarray:
    """Candidate centre indices of a clipped window, column index slowest"""
    reach_r = min(w // 2, n_centres[0] - 1)
    reach_c = min(w // 2, n_centres[1] - 1)
    cols, rows = np.meshgrid(
        np.arange(ref[1] - reach_c, ref[1] + reach_c + 1),
        np.arange(ref[0] - reach_r, ref[0] + reach_r + 1),
        indexing="ij",
    )
    cand = np.stack([rows.ravel(), cols.ravel()], axis=-1)
    inside = (cand[:, 0] >= 0) & (cand[:, 0] < n_centres[0]) & (cand[:, 1] >= 0) & (cand[:, 1] < n_centres[1])
    return cand[inside]


def _similar(stack: np.ndarray, ref: Tuple[int, int], w: int, k: int) -> np.ndarray:
    cand = _window(ref, w, stack.shape[:2])
    diff = stack[cand[:, 0], cand[:, 1]] - stack[ref]
    d2 = np.sum(np.sum(diff ** 2, axis=-1), axis=-1)
    is_ref = (cand[:, 0] == ref[0]) & (cand[:, 1] == ref[1])
    others = np.flatnonzero(~is_ref)
    order = others[np.argsort(d2[others], kind="stable")][:max(k - 1, 0)]
    return np.concatenate([cand[is_ref], cand[order]])


def _restore(noisy: np.ndarray, guide: Optional[np.ndarray], sigma2: float, gamma: float) -> np.ndarray:
    n_members, n_px, n_ch = noisy.shape
    values = noisy.reshape(-1, n_ch)
    m = _anchored_mean(values)
    if np.sum((values - m) ** 2) / values.size <= gamma * sigma2:
        return np.broadcast_to(m, noisy.shape).copy()

    y = noisy.reshape(n_members, -1)
    mu = _anchored_mean(y)
    if guide is None:
        centred = y - mu
        cov = centred.T @ centred / n_members
    else:
        centred = guide.reshape(n_members, -1) - mu
        cov = centred.T @ centred / n_members + sigma2 * np.eye(y.shape[1])
    restored = _shrink(y, mu, 0.5 * (cov + cov.T), sigma2)
    return restored.reshape(noisy.shape)


def _step(
    noisy: np.ndarray, guide: Optional[np.ndarray], s: int, w: int, k: int, params: DenoiseParams
) -> np.ndarray:
    n1, n2, n_ch = noisy.shape
    noisy_stack = _patches(noisy, s)
    search_stack = noisy_stack if guide is None else _patches(guide, s)
    guide_stack = None if guide is None else search_stack
    n_centres = noisy_stack.shape[:2]
    rows, cols = np.arange(s * s) % s, np.arange(s * s) // s

    pixel_ids: List[np.ndarray] = []
    estimates: List[np.ndarray] = []
    used = np.zeros(n_centres, dtype=bool)
    for c in range(n_centres[1]):
        for r in range(n_centres[0]):
            if params.accelerate and used[r, c]:
                continue
            members = _similar(search_stack, (r, c), w, k)
            restored = _restore(
                noisy_stack[members[:, 0], members[:, 1]],
                None if guide_stack is None else guide_stack[members[:, 0], members[:, 1]],
                params.sigma2,
                params.gamma,
            )
            ids = (members[:, 0, None] + rows[None, :]) * n2 + members[:, 1, None] + cols[None, :]
            pixel_ids.append(ids.ravel())
            estimates.append(restored.reshape(-1, n_ch))
            used[r, c] = True
            used[members[:, 0], members[:, 1]] = True

    ids = np.concatenate(pixel_ids)
    values = np.concatenate(estimates)
    n = n1 * n2
    counts = np.bincount(ids, minlength=n)
    first = np.zeros((n, n_ch))
    # first estimate of every pixel, in group order
    order = np.argsort(ids, kind="stable")
    starts = np.cumsum(counts) - counts
    covered = counts > 0
    first[covered] = values[order[starts[covered]]]
    diff = values - first[ids]
    sums = np.stack([np.bincount(ids, weights=diff[:, j], minlength=n) for j in range(n_ch)], axis=-1)
    out = noisy.reshape(n, n_ch).copy()
    out[covered] = first[covered] + sums[covered] / counts[covered, None]
    return out.reshape(noisy.shape)


def nlmmse_euclidean(data: np.ndarray, params: DenoiseParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two-step NL-MMSE of an (N1, N2, d) real array; returns (oracle, final).
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 3:
        raise ShapeError(f"expected an (N1, N2, d) array, got shape {data.shape}")
    if min(data.shape[:2]) < max(params.s1, params.s2):
        raise ShapeError(f"a {data.shape[0]}x{data.shape[1]} image is smaller than the patches")
    oracle = _step(data, None, params.s1, params.w1, params.k1, params)
    final = _step(data, oracle, params.s2, params.w2, params.k2, params)
    return oracle, final
