"""
Patch-based denoising: NL-MMSE in two steps and the NL-means baseline
"""
from src.denoise.aggregate import Aggregator, segmented_means
from src.denoise.euclidean import nlmmse_euclidean
from src.denoise.metrics import mse
from src.denoise.nlmeans import gaussian_kernel, nlmeans, similarity_weights
from src.denoise.nlmmse import (
    GroupResult,
    PassStats,
    denoise_group_step1,
    denoise_group_step2,
    homogeneous_test,
    nlmmse,
)
from src.denoise.params import (
    PHOTO_DEFAULTS,
    PUBLISHED_DEFAULTS,
    DenoiseParams,
    max_candidates,
    nlmeans_defaults,
    rule_of_thumb_k,
)
from src.denoise.patches import (
    PatchGroup,
    PatchSearch,
    extract_patch,
    find_similar,
    patch_offsets,
    patch_stack,
    unflatten_patch,
)

__all__ = [
    "DenoiseParams",
    "PUBLISHED_DEFAULTS",
    "PHOTO_DEFAULTS",
    "rule_of_thumb_k",
    "max_candidates",
    "nlmeans_defaults",
    "PatchGroup",
    "PatchSearch",
    "extract_patch",
    "find_similar",
    "patch_offsets",
    "patch_stack",
    "unflatten_patch",
    "Aggregator",
    "segmented_means",
    "GroupResult",
    "PassStats",
    "homogeneous_test",
    "denoise_group_step1",
    "denoise_group_step2",
    "nlmmse",
    "nlmmse_euclidean",
    "nlmeans",
    "gaussian_kernel",
    "similarity_weights",
    "mse",
]
