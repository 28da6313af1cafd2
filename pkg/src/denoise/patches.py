"""
Patch extraction and similar-patch search.

Grid indices are 0-based (row, column) pixel coordinates. A patch of odd
side s centred at pixel c covers rows c0 - s//2 .. c0 + s//2 (same for
columns) and is flattened column-major: component k holds the pixel at
in-patch offset (k % s, k // s). Only patches lying completely inside
the image are used; search windows are clipped to the valid centres.
"""
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.errors import OutOfDomainError, ParameterError
from src.manifolds.descriptor import ManifoldDescriptor
from src.manifolds.image import ManifoldImage
from src.manifolds.points import ProductPoint

# float64 entries kept per block of precomputed patch distances
BLOCK_BUDGET = 1 << 23


def patch_offsets(s: int) -> Tuple[np.ndarray, np.ndarray]:
    """In-patch (row, column) offsets of the flattened components, relative to the top-left pixel"""
    k = np.arange(s * s)
    return k % s, k // s


def patch_stack(data: np.ndarray, s: int) -> np.ndarray:
    """
    All complete patches of an (N1, N2, L) array, indexed by centre index:
    result[c1, c2] is the flattened patch centred at pixel (c1 + s//2, c2 + s//2),
    shape (N1 - s + 1, N2 - s + 1, s*s, L).
    """
    windows = sliding_window_view(data, (s, s), axis=(0, 1))  # (C1, C2, L, s_row, s_col)
    windows = np.transpose(windows, (0, 1, 4, 3, 2))  # column offset slowest
    return windows.reshape(windows.shape[:2] + (s * s, data.shape[2]))


def unflatten_patch(components: np.ndarray, s: int) -> np.ndarray:
    """Inverse of the column-major flattening: (s*s, L) -> (s, s, L)"""
    return np.swapaxes(np.asarray(components).reshape(s, s, -1), 0, 1)


def extract_patch(image: ManifoldImage, center: Tuple[int, int], s: int) -> ProductPoint:
    """The s x s patch around `center` as a point of M^(s*s)"""
    if s < 1 or s % 2 == 0:
        raise ParameterError(f"patch side must be odd, got {s}")
    h = s // 2
    r, c = int(center[0]), int(center[1])
    n1, n2 = image.dims
    if r - h < 0 or c - h < 0 or r + h >= n1 or c + h >= n2:
        raise OutOfDomainError(f"{s}x{s} patch at {(r, c)} crosses the border of a {n1}x{n2} image")
    block = image.data[r - h:r + h + 1, c - h:c + h + 1]
    return ProductPoint(image.descriptor, np.swapaxes(block, 0, 1).reshape(s * s, -1))


@dataclass
class PatchGroup:
    """
    A reference patch and its similar patches.

    `members` are pixel coordinates of the patch centres, reference first;
    `distances` are the (possibly weighted) product distances to the
    reference; `reduced` marks groups with fewer than K candidates.
    """
    descriptor: ManifoldDescriptor
    reference_center: Tuple[int, int]
    members: np.ndarray
    distances: np.ndarray
    patches: np.ndarray
    reduced: bool = False

    @property
    def size(self) -> int:
        return self.members.shape[0]

    def product_points(self) -> list:
        return [ProductPoint(self.descriptor, p) for p in self.patches]


class PatchSearch:
    """
    K nearest patches within a clipped w x w window, for every reference.

    Squared patch distances are computed per search offset for a block of
    reference columns at a time: one vectorised pixel distance per offset,
    then an s x s (optionally weighted) window sum. Candidates are listed
    in column-major order, which is also the tie-break order.
    """

    def __init__(self, image: ManifoldImage, s: int, w: int, kernel: Optional[np.ndarray] = None):
        if s < 1 or s % 2 == 0 or w < 1 or w % 2 == 0:
            raise ParameterError(f"patch and window sides must be odd, got s={s}, w={w}")
        n1, n2 = image.dims
        if s > n1 or s > n2:
            raise OutOfDomainError(f"{s}x{s} patches do not fit a {n1}x{n2} image")
        self.image = image
        self.geometry = image.geometry
        self.s = s
        self.half = s // 2
        self.n_centres = (n1 - s + 1, n2 - s + 1)
        self.kernel = np.ones((s, s)) if kernel is None else np.asarray(kernel, dtype=float)
        if self.kernel.shape != (s, s):
            raise ParameterError(f"similarity kernel must be {s}x{s}, got {self.kernel.shape}")

        reach_r = min(w // 2, self.n_centres[0] - 1)
        reach_c = min(w // 2, self.n_centres[1] - 1)
        dc, dr = np.meshgrid(np.arange(-reach_c, reach_c + 1), np.arange(-reach_r, reach_r + 1), indexing="ij")
        self.offsets = np.stack([dr.ravel(), dc.ravel()], axis=-1)  # column offset slowest
        self.self_offset = int(np.flatnonzero((self.offsets == 0).all(axis=1))[0])

        self.block_width = max(1, BLOCK_BUDGET // (len(self.offsets) * self.n_centres[0]))
        self._block_id = -1
        self._table: Optional[np.ndarray] = None

    # -- blocks ---------------------------------------------------------

    @property
    def n_blocks(self) -> int:
        return -(-self.n_centres[1] // self.block_width)

    def block_columns(self, block: int) -> range:
        a = block * self.block_width
        return range(a, min(a + self.block_width, self.n_centres[1]))

    def references(self, block: int) -> Iterator[Tuple[int, int]]:
        """Centre indices of a block in column-major order"""
        for c in self.block_columns(block):
            for r in range(self.n_centres[0]):
                yield r, c

    def load_block(self, block: int) -> None:
        if block == self._block_id:
            return
        cols = self.block_columns(block)
        a, b = cols.start, cols.stop
        n_r, n_c = self.n_centres
        s = self.s
        data = self.image.data
        table = np.full((len(self.offsets), n_r, b - a), np.inf)
        for k, (dr, dc) in enumerate(self.offsets):
            r0, r1 = max(0, -dr), min(n_r, n_r - dr)
            c0, c1 = max(a, -dc), min(b, n_c - dc)
            if r0 >= r1 or c0 >= c1:
                continue
            x = data[r0:r1 + s - 1, c0:c1 + s - 1]
            y = data[r0 + dr:r1 + s - 1 + dr, c0 + dc:c1 + s - 1 + dc]
            d2 = self.geometry.dist(x, y) ** 2
            windows = sliding_window_view(d2, (s, s))
            table[k, r0:r1, c0 - a:c1 - a] = np.einsum("ijab,ab->ij", windows, self.kernel)
        self._table = table
        self._block_id = block

    # -- selection ------------------------------------------------------

    def select(self, ref: Tuple[int, int], k: int) -> Tuple[np.ndarray, np.ndarray, bool]:
        """
        Centre indices (k', 2) and squared distances of the k nearest
        candidates of reference centre `ref`; the reference comes first,
        the rest follow by distance, ties in column-major order.
        """
        r, c = ref
        self.load_block(c // self.block_width)
        d2 = self._table[:, r, c - self.block_width * self._block_id]
        valid = np.flatnonzero(np.isfinite(d2))
        others = valid[valid != self.self_offset]
        order = others[np.argsort(d2[others], kind="stable")][:max(k - 1, 0)]
        chosen = np.concatenate([[self.self_offset], order])
        centres = np.asarray(ref) + self.offsets[chosen]
        dist2 = d2[chosen]
        dist2[0] = 0.0
        return centres, dist2, valid.size < k

    def group(self, center: Tuple[int, int], k: int, patches: Optional[np.ndarray] = None) -> PatchGroup:
        """PatchGroup around pixel `center`"""
        ref = (int(center[0]) - self.half, int(center[1]) - self.half)
        if not (0 <= ref[0] < self.n_centres[0] and 0 <= ref[1] < self.n_centres[1]):
            raise OutOfDomainError(f"no complete {self.s}x{self.s} patch at {tuple(center)}")
        centres, dist2, reduced = self.select(ref, k)
        if patches is None:
            patches = patch_stack(self.image.data, self.s)
        return PatchGroup(
            descriptor=self.image.descriptor,
            reference_center=(int(center[0]), int(center[1])),
            members=centres + self.half,
            distances=np.sqrt(dist2),
            patches=patches[centres[:, 0], centres[:, 1]],
            reduced=reduced,
        )


def find_similar(image: ManifoldImage, center: Tuple[int, int], s: int, w: int, k: int) -> PatchGroup:
    """The k most similar s x s patches to the one at `center` within a w x w window"""
    return PatchSearch(image, s, w).group(center, k)
