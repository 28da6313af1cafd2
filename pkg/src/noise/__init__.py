"""
Intrinsic Gaussian noise: random streams, densities and samplers
"""
from src.noise.densities import (
    h2_radial_pdf,
    lognormal_pdf,
    lognormal_pdf_lebesgue,
    simplex_angle,
    simplex_cdf_delta1,
    simplex_pdf_delta1,
    wrap_angle,
    wrapped_gaussian_cdf_s1,
    wrapped_gaussian_pdf_s1,
)
from src.noise.rng import RngState, as_generator
from src.noise.sampling import (
    NoiseModel,
    NoiseSpec,
    add_noise,
    cholesky_factor,
    haar_orthogonal,
    said_bound,
    said_log_ratio,
    said_proposal_variance,
    sample_said_eigenvalues,
    sample_said_spd,
    sample_tangent_gaussian,
)

__all__ = [
    "RngState",
    "as_generator",
    "NoiseModel",
    "NoiseSpec",
    "add_noise",
    "cholesky_factor",
    "sample_tangent_gaussian",
    "sample_said_spd",
    "sample_said_eigenvalues",
    "haar_orthogonal",
    "said_bound",
    "said_log_ratio",
    "said_proposal_variance",
    "wrapped_gaussian_pdf_s1",
    "wrapped_gaussian_cdf_s1",
    "wrap_angle",
    "lognormal_pdf",
    "lognormal_pdf_lebesgue",
    "simplex_pdf_delta1",
    "simplex_cdf_delta1",
    "simplex_angle",
    "h2_radial_pdf",
]
