"""
Parameters of the two-step NL-MMSE denoiser and the NL-means baseline.
"""
from typing import Dict, Tuple

from pydantic import BaseModel, Field, ValidationError, model_validator

from src.errors import ParameterError
from src.manifolds.descriptor import ManifoldDescriptor, ManifoldKind

# (s1, s2, w1, w2, K1, K2, gamma) tuned on the synthetic benchmarks
PUBLISHED_DEFAULTS: Dict[Tuple[ManifoldKind, int], Tuple[int, int, int, int, int, int, float]] = {
    (ManifoldKind.CIRCLE, 0): (9, 7, 119, 123, 186, 86, 1.1),
    (ManifoldKind.SPHERE2, 0): (3, 5, 127, 127, 65, 54, 0.8),
    (ManifoldKind.SPD, 2): (9, 9, 115, 115, 1038, 1038, 1.0),
    (ManifoldKind.SPD, 3): (5, 5, 59, 59, 415, 415, 0.8),
}
# hue and chroma rows of the photographic experiments
PHOTO_DEFAULTS: Dict[Tuple[ManifoldKind, int], Tuple[int, int, int, int, int, int, float]] = {
    (ManifoldKind.CIRCLE, 0): (7, 7, 81, 81, 70, 70, 1.0),
    (ManifoldKind.SPHERE2, 0): (5, 5, 37, 37, 110, 110, 1.0),
}
PRESETS = ("synthetic", "photo")
FALLBACK_PATCH = 5
FALLBACK_WINDOW = 31


def rule_of_thumb_k(s: int, dim: int) -> int:
    """K = 3 s^2 d"""
    return 3 * s * s * dim


def _check_odd(name: str, value: int) -> None:
    if value < 1 or value % 2 == 0:
        raise ValueError(f"{name} must be a positive odd integer, got {value}")


class DenoiseParams(BaseModel):
    """Patch sizes, search windows and group sizes of both steps"""
    s1: int
    s2: int
    w1: int
    w2: int
    k1: int = Field(ge=1)
    k2: int = Field(ge=1)
    gamma: float = Field(ge=0.0)
    sigma: float = Field(ge=0.0)
    accelerate: bool = True

    @model_validator(mode="after")
    def _check_sizes(self) -> "DenoiseParams":
        for name in ("s1", "s2", "w1", "w2"):
            _check_odd(name, getattr(self, name))
        if self.w1 <= self.s1 or self.w2 <= self.s2:
            raise ValueError("search windows must be larger than the patches")
        return self

    @property
    def sigma2(self) -> float:
        return self.sigma ** 2

    @classmethod
    def build(cls, **kwargs) -> "DenoiseParams":
        """Validate, reporting violations as ParameterError"""
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise ParameterError(f"invalid denoising parameters: {e}") from e

    @classmethod
    def for_image(
        cls,
        descriptor: ManifoldDescriptor,
        dims: Tuple[int, int],
        sigma: float,
        preset: str = "synthetic",
        **overrides,
    ) -> "DenoiseParams":
        """
        Published parameters for the manifold (K = 3 s^2 d otherwise),
        scaled down so windows fit the image and K fits the window.

        `preset` picks the synthetic-image rows or, for S1 and S2, the
        rows tuned on photographs.
        """
        if preset not in PRESETS:
            raise ParameterError(f"unknown parameter preset '{preset}', expected one of {PRESETS}")
        key = (descriptor.kind, descriptor.param if descriptor.kind is ManifoldKind.SPD else 0)
        table = dict(PUBLISHED_DEFAULTS)
        if preset == "photo":
            table.update(PHOTO_DEFAULTS)
        if key in table:
            s1, s2, w1, w2, k1, k2, gamma = table[key]
        else:
            s1 = s2 = FALLBACK_PATCH
            w1 = w2 = FALLBACK_WINDOW
            k1 = k2 = rule_of_thumb_k(FALLBACK_PATCH, descriptor.dim)
            gamma = 1.0
        values = dict(s1=s1, s2=s2, w1=w1, w2=w2, k1=k1, k2=k2, gamma=gamma, sigma=sigma)
        values.update({k: v for k, v in overrides.items() if v is not None})

        limit = min(dims)
        limit -= 1 - limit % 2
        for s, w, k in (("s1", "w1", "k1"), ("s2", "w2", "k2")):
            if values[s] > limit:
                raise ParameterError(f"patch size {values[s]} does not fit a {dims[0]}x{dims[1]} image")
            values[w] = max(min(values[w], limit), values[s] + 2)
            values[k] = max(1, min(values[k], max_candidates(dims, values[s], values[w])))
        return cls.build(**values)


def max_candidates(dims: Tuple[int, int], s: int, w: int) -> int:
    """Largest number of candidate centres any search window can hold"""
    rows = min(w, dims[0] - s + 1)
    cols = min(w, dims[1] - s + 1)
    return max(rows, 0) * max(cols, 0)


def nlmeans_defaults(descriptor: ManifoldDescriptor, dims: Tuple[int, int]) -> Dict[str, float]:
    """Starting values for NL-means: s, w, K from the NL-MMSE defaults, delta = s/2, tau = 1"""
    p = DenoiseParams.for_image(descriptor, dims, 0.0)
    return dict(s=p.s1, w=p.w1, k=p.k1, delta=p.s1 / 2.0, tau=1.0)
