"""
Intrinsic statistics: Karcher means, tangent covariances, shrinkage
"""
from src.stats.covariance import (
    covariance_from_coords,
    empirical_covariance,
    pooled_variance,
    shrinkage_apply,
    shrinkage_matrix,
)
from src.stats.karcher import KarcherConfig, karcher_mean, karcher_mean_segments

__all__ = [
    "KarcherConfig",
    "karcher_mean",
    "karcher_mean_segments",
    "covariance_from_coords",
    "empirical_covariance",
    "pooled_variance",
    "shrinkage_apply",
    "shrinkage_matrix",
]
