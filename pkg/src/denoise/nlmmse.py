"""
Two-step nonlocal MMSE denoising of manifold-valued images.

Step 1 restores every group of similar noisy patches by shrinking their
log coordinates at the Karcher mean patch. Step 2 repeats the search and
the covariance estimate on the Step 1 image (the oracle) while the mean
and the restoration still use the noisy patches. Each step ends with a
per-pixel Karcher mean over all restored patches covering the pixel.
"""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn

from src.config import config
from src.denoise.aggregate import Aggregator
from src.denoise.params import DenoiseParams
from src.denoise.patches import PatchGroup, PatchSearch, patch_stack
from src.errors import CutLocusError, GroupError, ManifoldError, ShapeError
from src.manifolds.base import Geometry
from src.manifolds.image import ManifoldImage
from src.manifolds.points import geometry_for, product_geometry
from src.stats.covariance import covariance_from_coords, pooled_variance, shrinkage_apply
from src.stats.karcher import KarcherConfig, karcher_mean

console = Console(stderr=True)


@dataclass
class GroupResult:
    """Restored patches of one group; `kept` masks members that survived the cut-locus check"""
    kept: np.ndarray
    restored: np.ndarray
    flat: bool = False

    @property
    def dropped(self) -> int:
        return int(np.count_nonzero(~self.kept))


@dataclass
class PassStats:
    """Counters of one denoising pass"""
    step: int
    groups: int = 0
    flat: int = 0
    reduced: int = 0
    dropped: int = 0
    uncovered: int = 0
    seconds: float = 0.0

    def summary(self) -> str:
        return (
            f"step {self.step}: {self.groups} groups, {self.flat} flat, {self.reduced} reduced, "
            f"{self.dropped} members dropped at the cut locus ({self.seconds:.1f}s)"
        )


# -- group level -------------------------------------------------------------

def _homogeneous(
    geometry: Geometry, patches: np.ndarray, gamma: float, sigma2: float, cfg: Optional[KarcherConfig]
) -> Tuple[bool, np.ndarray]:
    values = patches.reshape(-1, patches.shape[-1])
    m = _mean_patch(geometry, values, np.ones(values.shape[0], dtype=bool), cfg)
    return pooled_variance(geometry, patches, m) <= gamma * sigma2, m


def homogeneous_test(
    group: PatchGroup, gamma: float, sigma2: float, cfg: Optional[KarcherConfig] = None
) -> Tuple[bool, np.ndarray]:
    """
    (is_flat, m): m is the Karcher mean of all pixel values in the group and
    the group is flat when their pooled variance is <= gamma * sigma^2.
    Values in the cut locus of the running mean are left out of m.
    """
    return _homogeneous(geometry_for(group.descriptor), group.patches, gamma, sigma2, cfg)


def _mean_patch(geometry: Geometry, patches: np.ndarray, kept: np.ndarray, cfg) -> np.ndarray:
    """Karcher mean of the kept rows, dropping rows that hit the cut locus"""
    while True:
        rows = np.flatnonzero(kept)
        if rows.size == 0:
            raise CutLocusError(message="every member of the group lies in the cut locus")
        try:
            return karcher_mean(geometry, patches[rows], cfg=cfg)
        except CutLocusError as e:
            kept[rows[e.index[0]]] = False


def _restore(
    patches: np.ndarray,
    sigma2: float,
    descriptor,
    guide: Optional[np.ndarray] = None,
    cfg: Optional[KarcherConfig] = None,
) -> GroupResult:
    geometry = product_geometry(descriptor, patches.shape[1])
    kept = np.ones(patches.shape[0], dtype=bool)
    while True:
        mean = _mean_patch(geometry, patches, kept, cfg)
        rows = np.flatnonzero(kept)
        coords, cut = geometry.log_masked(mean, patches[rows])
        bad = cut.any(axis=-1)
        if guide is not None:
            guide_coords, guide_cut = geometry.log_masked(mean, guide[rows])
            bad |= guide_cut.any(axis=-1)
        if bad.any():
            kept[rows[bad]] = False
            continue
        break

    if guide is None:
        cov = covariance_from_coords(coords)
    else:
        cov = covariance_from_coords(guide_coords) + sigma2 * np.eye(geometry.dim)
    restored = geometry.exp(mean, shrinkage_apply(cov, sigma2, coords))
    return GroupResult(kept=kept, restored=restored)


def denoise_group_step1(group: PatchGroup, sigma2: float, cfg: Optional[KarcherConfig] = None) -> GroupResult:
    """exp_mu((Sigma - sigma^2 I) Sigma^{-1} log_mu(y_j)) for every member patch"""
    return _restore(group.patches, sigma2, group.descriptor, cfg=cfg)


def denoise_group_step2(
    noisy_group: PatchGroup, oracle_group: PatchGroup, sigma2: float, cfg: Optional[KarcherConfig] = None
) -> GroupResult:
    """
    Mean of the noisy patches, covariance of the oracle patches about that
    mean plus sigma^2 I, shrinkage applied to the noisy patches.
    """
    if not np.array_equal(noisy_group.members, oracle_group.members):
        raise ShapeError("noisy and oracle groups must share their member patches")
    return _restore(noisy_group.patches, sigma2, noisy_group.descriptor, guide=oracle_group.patches, cfg=cfg)


# -- image level -------------------------------------------------------------

class _Pass:
    """One step of the denoiser over all reference patches"""

    def __init__(
        self,
        noisy: ManifoldImage,
        guide: Optional[ManifoldImage],
        s: int,
        w: int,
        k: int,
        params: DenoiseParams,
        step: int,
        cfg: Optional[KarcherConfig],
    ):
        self.noisy = noisy
        self.guide = guide
        self.s = s
        self.k = k
        self.params = params
        self.cfg = cfg
        self.geometry = noisy.geometry
        self.search = PatchSearch(guide if guide is not None else noisy, s, w)
        self.noisy_patches = patch_stack(noisy.data, s)
        self.guide_patches = None if guide is None else patch_stack(guide.data, s)
        self.stats = PassStats(step=step)

    def process(self, ref: Tuple[int, int]) -> Tuple[np.ndarray, GroupResult, bool]:
        centres, _, reduced = self.search.select(ref, self.k)
        noisy = self.noisy_patches[centres[:, 0], centres[:, 1]]
        try:
            flat, m = _homogeneous(self.geometry, noisy, self.params.gamma, self.params.sigma2, self.cfg)
            if flat:
                restored = np.broadcast_to(m, noisy.shape).copy()
                return centres, GroupResult(np.ones(len(centres), dtype=bool), restored, flat=True), reduced
            guide = None if self.guide_patches is None else self.guide_patches[centres[:, 0], centres[:, 1]]
            return centres, _restore(noisy, self.params.sigma2, self.noisy.descriptor, guide, self.cfg), reduced
        except GroupError:
            raise
        except ManifoldError as e:
            h = self.s // 2
            raise GroupError((ref[0] + h, ref[1] + h), e) from e

    def _record(self, aggregator: Aggregator, centres, result: GroupResult, reduced: bool) -> np.ndarray:
        kept = centres[result.kept]
        aggregator.add(kept, result.restored)
        self.stats.groups += 1
        self.stats.flat += int(result.flat)
        self.stats.reduced += int(reduced)
        self.stats.dropped += result.dropped
        return kept

    def run(self, workers: int) -> np.ndarray:
        start = time.perf_counter()
        aggregator = Aggregator(self.geometry, self.noisy.dims, self.s)
        used = np.zeros(self.search.n_centres, dtype=bool)
        total = used.size

        with Progress(
            TextColumn(f"[bold blue]step {self.stats.step}"), BarColumn(), TextColumn("{task.completed}/{task.total}"),
            console=console, disable=not config.denoise.verbose, transient=True,
        ) as progress:
            task = progress.add_task("references", total=total)
            for block in range(self.search.n_blocks):
                refs: List[Tuple[int, int]] = list(self.search.references(block))
                if self.params.accelerate:
                    cols = self.search.block_columns(block)
                    if used[:, cols.start:cols.stop].all():
                        progress.advance(task, len(refs))
                        continue
                    for ref in refs:
                        progress.advance(task)
                        if used[ref]:
                            continue
                        centres, result, reduced = self.process(ref)
                        kept = self._record(aggregator, centres, result, reduced)
                        used[kept[:, 0], kept[:, 1]] = True
                    continue

                self.search.load_block(block)
                if workers > 1:
                    with ThreadPoolExecutor(max_workers=workers) as pool:
                        outcomes = list(pool.map(self.process, refs))
                else:
                    outcomes = [self.process(ref) for ref in refs]
                for outcome in outcomes:
                    self._record(aggregator, *outcome)
                progress.advance(task, len(refs))

        data, self.stats.uncovered = aggregator.finalize(self.noisy.data, self.cfg)
        self.stats.seconds = time.perf_counter() - start
        return data


def _report(stats: PassStats) -> None:
    if stats.dropped:
        console.print(f"[yellow]⚠ {stats.summary()}[/yellow]")
    else:
        console.print(f"[green]✓[/green] {stats.summary()}")
    if stats.uncovered:
        console.print(f"[yellow]⚠ {stats.uncovered} pixels received no estimate and keep their noisy value[/yellow]")


def nlmmse(
    image: ManifoldImage,
    params: DenoiseParams,
    workers: Optional[int] = None,
    cfg: Optional[KarcherConfig] = None,
    quiet: bool = False,
) -> Tuple[ManifoldImage, ManifoldImage]:
    """
    Run both steps on a noisy image and return (oracle, final).

    References are scanned column-major over the centres of complete
    patches. With `params.accelerate` every centre that was a member of
    a processed group is skipped as a reference (it may still be restored
    again by later groups) and the scan is serial; otherwise the groups of
    each block of references are processed by `workers` threads and
    aggregated in scan order, so the result does not depend on `workers`.

    Raises:
        GroupError: processing the group of a reference failed; carries the centre
    """
    n1, n2 = image.dims
    if min(n1, n2) < max(params.s1, params.s2):
        raise ShapeError(f"a {n1}x{n2} image is smaller than the patches")
    workers = max(1, workers if workers is not None else config.denoise.workers)

    first = _Pass(image, None, params.s1, params.w1, params.k1, params, 1, cfg)
    oracle = ManifoldImage(image.descriptor, first.run(workers))
    second = _Pass(image, oracle, params.s2, params.w2, params.k2, params, 2, cfg)
    final = ManifoldImage(image.descriptor, second.run(workers))
    if not quiet:
        _report(first.stats)
        _report(second.stats)
    return oracle, final
