"""
Closed-form densities of the tangent Gaussian on one-dimensional manifolds
and on H^2.

Each function states its reference measure:

- wrapped_gaussian_pdf_s1: Lebesgue dt on the angle t
- lognormal_pdf: the manifold measure dx/x on R_{>0} (lognormal_pdf_lebesgue: dx)
- simplex_pdf_delta1: Lebesgue dt for x(t) = ((1 + cos t) / 2, (1 - cos t) / 2), t in (0, pi)
- h2_radial_pdf: the hyperbolic area sinh(r) d(alpha) dr in geodesic polar coordinates

The wrapped sums are truncated at |j| <= terms; the omitted mass is below
exp(-(2 pi terms)^2 / (8 sigma^2)).
"""
from typing import Optional

import numpy as np
from scipy.special import ndtr

from src.config import config
from src.errors import DomainError

TWO_PI = 2.0 * np.pi


def _check_sigma2(sigma2: float) -> float:
    sigma2 = float(sigma2)
    if not sigma2 > 0.0 or not np.isfinite(sigma2):
        raise DomainError(f"variance must be positive, got {sigma2}")
    return sigma2


def _terms(terms: Optional[int]) -> np.ndarray:
    terms = config.noise.wrap_terms if terms is None else int(terms)
    if terms < 1:
        raise DomainError(f"need at least one wrap term, got {terms}")
    return np.arange(-terms, terms + 1)


def wrap_angle(t) -> np.ndarray:
    """Map angles to [-pi, pi)"""
    return np.mod(np.asarray(t, dtype=float) + np.pi, TWO_PI) - np.pi


def _gauss_sum(delta: np.ndarray, sigma2: float, j: np.ndarray) -> np.ndarray:
    shifted = delta[..., None] + TWO_PI * j
    return np.sum(np.exp(-shifted ** 2 / (2.0 * sigma2)), axis=-1) / np.sqrt(TWO_PI * sigma2)


def wrapped_gaussian_pdf_s1(t, t_mu: float, sigma2: float, terms: Optional[int] = None) -> np.ndarray:
    """2 pi-wrapped Gaussian density of the angle t around t_mu"""
    sigma2 = _check_sigma2(sigma2)
    # reduce to |delta| in [0, pi] so the result is exactly even and periodic
    delta = np.abs(wrap_angle(np.asarray(t, dtype=float) - t_mu))
    return _gauss_sum(delta, sigma2, _terms(terms))


def wrapped_gaussian_cdf_s1(delta, sigma2: float, terms: Optional[int] = None) -> np.ndarray:
    """P(wrap(T - t_mu) <= delta) for delta in [-pi, pi]"""
    sigma = np.sqrt(_check_sigma2(sigma2))
    delta = np.clip(np.asarray(delta, dtype=float), -np.pi, np.pi)
    j = _terms(terms)
    upper = ndtr((delta[..., None] + TWO_PI * j) / sigma)
    lower = ndtr((-np.pi + TWO_PI * j) / sigma)
    return np.sum(upper - lower, axis=-1)


def lognormal_pdf(x, mu: float, sigma2: float) -> np.ndarray:
    """Log-normal density w.r.t. dx/x"""
    sigma2 = _check_sigma2(sigma2)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0) or mu <= 0.0:
        raise DomainError("log-normal density needs positive arguments")
    return np.exp(-np.log(x / mu) ** 2 / (2.0 * sigma2)) / np.sqrt(TWO_PI * sigma2)


def lognormal_pdf_lebesgue(x, mu: float, sigma2: float) -> np.ndarray:
    """Log-normal density w.r.t. dx, as in the usual textbook form"""
    return lognormal_pdf(x, mu, sigma2) / np.asarray(x, dtype=float)


def simplex_pdf_delta1(t, t_mu: float, sigma2: float, terms: Optional[int] = None) -> np.ndarray:
    """Sum of the wrapped images of the Gaussian at t_mu and at its reflection -t_mu"""
    sigma2 = _check_sigma2(sigma2)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0) or np.any(t >= np.pi) or not 0.0 < t_mu < np.pi:
        raise DomainError("simplex angles must lie in the open interval (0, pi)")
    j = _terms(terms)
    return _gauss_sum(t + t_mu, sigma2, j) + _gauss_sum(t - t_mu, sigma2, j)


def simplex_cdf_delta1(t, t_mu: float, sigma2: float, terms: Optional[int] = None) -> np.ndarray:
    """P(T <= t) for the simplex density, t in [0, pi]"""
    sigma = np.sqrt(_check_sigma2(sigma2))
    t = np.clip(np.asarray(t, dtype=float), 0.0, np.pi)
    j = _terms(terms)
    shift = TWO_PI * j
    total = np.zeros(t.shape)
    for centre in (-t_mu, t_mu):
        total = total + np.sum(
            ndtr((t[..., None] - centre + shift) / sigma) - ndtr((-centre + shift) / sigma), axis=-1
        )
    return total


def simplex_angle(x) -> np.ndarray:
    """Parameter t in (0, pi) of a Delta_1 point"""
    x = np.asarray(x, dtype=float)
    return np.arccos(np.clip(x[..., 0] - x[..., 1], -1.0, 1.0))


def h2_radial_pdf(r, sigma: float) -> np.ndarray:
    """Tangent Gaussian density on H^2 at geodesic radius r, w.r.t. the hyperbolic area"""
    sigma2 = _check_sigma2(float(sigma) ** 2)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise DomainError("radius must be non-negative")
    # r / sinh(r) -> 1 at the origin
    ratio = np.ones_like(r)
    np.divide(r, np.sinh(r), out=ratio, where=r > 0.0)
    return np.exp(-r ** 2 / (2.0 * sigma2)) * ratio / (TWO_PI * sigma2)
