"""
Reproducible random streams.

Every stream is a numpy Philox generator (counter based, identical output
on every platform) keyed by the 64-bit seed and a 64-bit stream number,
so pixel k of an image always draws from stream k regardless of the
order or thread in which pixels are processed.
"""
from dataclasses import dataclass
from typing import Union

import numpy as np

from src.errors import ParameterError

_U64 = 1 << 64

# stream numbers at or above this offset are reserved for non-pixel draws
AUX_STREAM_BASE = 1 << 63


@dataclass(frozen=True)
class RngState:
    """Seed of a family of independent random streams"""
    seed: int = 0

    def __post_init__(self):
        if not 0 <= int(self.seed) < _U64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def generator(self, stream: int = 0) -> np.random.Generator:
        if not 0 <= int(stream) < _U64:
            raise ParameterError(f"stream must be an unsigned 64-bit integer, got {stream}")
        return np.random.Generator(np.random.Philox(key=(int(stream) << 64) | int(self.seed)))

    def aux(self, n: int = 0) -> np.random.Generator:
        """Stream for draws not attached to a pixel (generators, tests)"""
        return self.generator(AUX_STREAM_BASE + int(n))


def as_generator(rng: Union[RngState, np.random.Generator, int, None], stream: int = 0) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        rng = RngState()
    elif not isinstance(rng, RngState):
        rng = RngState(int(rng))
    return rng.generator(stream)
