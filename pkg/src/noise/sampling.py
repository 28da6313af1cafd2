"""
Samplers for intrinsic Gaussian noise and the image-level noise model.

- Tangent Gaussian: exp_mu(h(A z)) with z standard normal and Sigma = A A^T
- Said et al. SPD Gaussian: Haar-distributed eigenvectors and eigenvalue
  logarithms drawn by acceptance-rejection from an isotropic normal
"""
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.config import config
from src.errors import DomainError, ParameterError, ShapeError, SimplexBoundaryError
from src.manifolds.base import Geometry
from src.manifolds.descriptor import ManifoldDescriptor, ManifoldKind
from src.manifolds.image import ManifoldImage
from src.manifolds.spd import sqrt_and_invsqrt, sym
from src.noise.rng import RngState, as_generator

RngLike = Union[RngState, np.random.Generator, int, None]


class NoiseModel(str, Enum):
    TANGENT = "tangent"
    SAID = "said"


class NoiseSpec(BaseModel):
    """Noise model, level and (tangent model only) covariance"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: NoiseModel = NoiseModel.TANGENT
    sigma: float = Field(ge=0.0)
    covariance: Optional[np.ndarray] = None

    @field_validator("covariance", mode="before")
    @classmethod
    def _as_matrix(cls, v):
        if v is None:
            return None
        v = np.asarray(v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"covariance must be a square matrix, got shape {v.shape}")
        return v

    def check_compatible(self, descriptor: ManifoldDescriptor) -> None:
        if self.model is NoiseModel.SAID:
            if self.covariance is not None:
                raise ParameterError("the Said model is isotropic and takes no covariance")
            if descriptor.kind is not ManifoldKind.SPD or descriptor.param not in (2, 3):
                raise ParameterError(f"the Said model needs SPD(2) or SPD(3) pixels, got {descriptor}")
            check_said_variance(descriptor.param, self.sigma ** 2)
        elif self.covariance is not None and self.covariance.shape[0] != descriptor.dim:
            raise ShapeError(f"covariance of size {self.covariance.shape[0]} does not match dim {descriptor.dim}")

    def tangent_covariance(self, dim: int) -> np.ndarray:
        if self.covariance is not None:
            return self.covariance
        return self.sigma ** 2 * np.eye(dim)


# -- tangent Gaussian ---------------------------------------------------

def cholesky_factor(cov: np.ndarray) -> Optional[np.ndarray]:
    """Lower triangular A with A A^T = cov, or None for the zero matrix"""
    cov = np.asarray(cov, dtype=float)
    if not np.any(cov):
        return None
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:
        raise ShapeError(f"covariance is not positive definite: {e}") from e


def _retrying() -> Retrying:
    return Retrying(
        stop=stop_after_attempt(config.noise.simplex_retries),
        retry=retry_if_exception_type(SimplexBoundaryError),
        reraise=True,
    )


def sample_tangent_gaussian(
    geometry: Geometry,
    mu: np.ndarray,
    cov: np.ndarray,
    rng: RngLike = None,
    size: Optional[int] = None,
) -> np.ndarray:
    """
    Draw from N_M(mu, cov): exp_mu(h(A z)).

    With size=None a single point is returned, otherwise `size` points.
    Draws that leave the open simplex are redrawn from the same stream.
    """
    mu = geometry.as_points(mu)
    gen = as_generator(rng)
    factor = cholesky_factor(cov)
    if factor is not None and factor.shape[0] != geometry.dim:
        raise ShapeError(f"covariance of size {factor.shape[0]} does not match dim {geometry.dim}")
    shape = () if size is None else (int(size),)
    if factor is None:
        return np.broadcast_to(mu, shape + mu.shape).copy()

    def draw() -> np.ndarray:
        z = gen.standard_normal(shape + (geometry.dim,))
        return geometry.exp(mu, z @ factor.T)

    for attempt in _retrying():
        with attempt:
            return draw()


# -- Said et al. SPD Gaussian -------------------------------------------

def check_said_variance(r: int, sigma2: float) -> None:
    if r not in (2, 3):
        raise ShapeError(f"the Said sampler supports r = 2 or 3, got {r}")
    if sigma2 >= 1.0 / (r - 1):
        raise DomainError(f"Said sampling needs sigma^2 < 1/(r-1) = {1.0 / (r - 1):g}, got {sigma2:g}")


def said_proposal_variance(r: int, sigma2: float) -> float:
    """Variance of the isotropic normal proposal for the eigenvalue logarithms"""
    return 2.0 * sigma2 / (2.0 - 2.0 * (r - 1) * sigma2)


def said_bound(r: int) -> float:
    """Constant C with f(rho) / g(rho) <= C"""
    pairs = r * (r - 1)
    return float(np.exp(pairs / 8.0) * 2.0 ** (-pairs / 2.0))


def said_log_ratio(rho: np.ndarray, sigma2: float) -> np.ndarray:
    """
    log f(rho) / g(rho) for the unnormalised eigenvalue density f and the
    unnormalised proposal g; rho has shape (..., r).
    """
    rho = np.asarray(rho, dtype=float)
    r = rho.shape[-1]
    i, j = np.triu_indices(r, 1)
    gaps = np.abs(rho[..., i] - rho[..., j]) / 2.0
    with np.errstate(divide="ignore"):
        log_sinh = np.log(np.sinh(gaps))
    return np.sum(log_sinh, axis=-1) - 0.5 * (r - 1) * np.sum(rho ** 2, axis=-1)


def sample_said_eigenvalues(
    r: int, sigma2: float, rng: RngLike = None, size: int = 1, batch: Optional[int] = None
) -> Tuple[np.ndarray, float]:
    """Accepted eigenvalue logarithms, shape (size, r), and the acceptance rate"""
    check_said_variance(r, sigma2)
    gen = as_generator(rng)
    batch = batch or config.noise.said_batch
    scale = np.sqrt(said_proposal_variance(r, sigma2))
    log_c = np.log(said_bound(r))
    out = np.empty((size, r))
    accepted = proposed = 0
    while accepted < size:
        rho = scale * gen.standard_normal((batch, r))
        u = gen.uniform(size=batch)
        keep = rho[np.log(u) + log_c <= said_log_ratio(rho, sigma2)]
        proposed += batch
        take = min(keep.shape[0], size - accepted)
        out[accepted:accepted + take] = keep[:take]
        accepted += take
    return out, size / proposed


def haar_orthogonal(r: int, rng: RngLike = None, size: int = 1) -> np.ndarray:
    """Haar-distributed O(r) matrices via QR with a positive diagonal of R"""
    gen = as_generator(rng)
    q, rr = np.linalg.qr(gen.standard_normal((size, r, r)))
    signs = np.sign(np.diagonal(rr, axis1=-2, axis2=-1))
    signs[signs == 0.0] = 1.0
    return q * signs[..., None, :]


def sample_said_spd(mu: np.ndarray, sigma2: float, rng: RngLike = None, size: Optional[int] = None) -> np.ndarray:
    """
    Draw from the Said et al. Gaussian on SPD(r) centred at mu (stored
    row-major, r*r reals). sigma2 = 0 returns mu.
    """
    mu = np.asarray(mu, dtype=float)
    r = int(round(np.sqrt(mu.shape[-1])))
    if r * r != mu.shape[-1]:
        raise ShapeError(f"SPD point needs r*r coordinates, got {mu.shape[-1]}")
    check_said_variance(r, sigma2)
    n = 1 if size is None else int(size)
    if sigma2 == 0.0:
        out = np.broadcast_to(mu, (n,) + mu.shape).copy()
        return out[0] if size is None else out

    gen = as_generator(rng)
    u = haar_orthogonal(r, gen, n)
    rho, _ = sample_said_eigenvalues(r, sigma2, gen, n)
    x = (u * np.exp(rho)[..., None, :]) @ np.swapaxes(u, -1, -2)
    root, _ = sqrt_and_invsqrt(mu.reshape(r, r))
    y = sym(root @ x @ root).reshape(n, r * r)
    return y[0] if size is None else y


# -- images -------------------------------------------------------------

def _tangent_image(image: ManifoldImage, spec: NoiseSpec, rng: RngState) -> np.ndarray:
    geometry = image.geometry
    flat = image.data.reshape(-1, image.descriptor.ambient_len)
    factor = cholesky_factor(spec.tangent_covariance(geometry.dim))
    if factor is None:
        return flat.copy()
    z = np.stack([rng.generator(k).standard_normal(geometry.dim) for k in range(flat.shape[0])])
    try:
        return geometry.exp(flat, z @ factor.T)
    except SimplexBoundaryError:
        # redraw pixel by pixel; the first draw of every stream is the same as above
        cov = spec.tangent_covariance(geometry.dim)
        return np.stack([
            sample_tangent_gaussian(geometry, flat[k], cov, rng.generator(k)) for k in range(flat.shape[0])
        ])


def add_noise(image: ManifoldImage, spec: NoiseSpec, rng: RngLike = None) -> ManifoldImage:
    """
    Corrupt every pixel independently, with the clean pixel as mean.

    Pixel k (row-major) draws from stream k of `rng`, so the result does
    not depend on processing order.
    """
    spec.check_compatible(image.descriptor)
    rng = rng if isinstance(rng, RngState) else RngState(0 if rng is None else int(rng))
    if spec.sigma == 0.0 and spec.covariance is None:
        return image.copy()

    if spec.model is NoiseModel.SAID:
        flat = image.data.reshape(-1, image.descriptor.ambient_len)
        noisy = np.stack([
            sample_said_spd(flat[k], spec.sigma ** 2, rng.generator(k)) for k in range(flat.shape[0])
        ])
    else:
        noisy = _tangent_image(image, spec, rng)
    return ManifoldImage(image.descriptor, noisy.reshape(image.data.shape))
