"""
Manifold descriptors: which manifold a pixel lives on and how it is stored.
"""
from dataclasses import dataclass
from enum import Enum

from src.errors import ShapeError


class ManifoldKind(Enum):
    """Supported pixel manifolds"""
    EUCLIDEAN = "eucl"
    CIRCLE = "s1"
    SPHERE2 = "s2"
    SPD = "spd"
    SIMPLEX1 = "simplex"
    HYPERBOLIC2 = "h2"


@dataclass(frozen=True)
class ManifoldDescriptor:
    """
    A manifold kind together with its size parameter.

    `param` is d for Euclidean(d), r for Spd(r) and 1 for Simplex1; it is
    ignored (0) for the other kinds.
    """
    kind: ManifoldKind
    param: int = 0

    def __post_init__(self):
        if self.kind is ManifoldKind.EUCLIDEAN and self.param < 1:
            raise ShapeError(f"Euclidean dimension must be >= 1, got {self.param}")
        if self.kind is ManifoldKind.SPD and self.param not in (1, 2, 3):
            raise ShapeError(f"SPD size must be 1, 2 or 3, got {self.param}")

    @property
    def dim(self) -> int:
        """Intrinsic dimension d"""
        if self.kind is ManifoldKind.EUCLIDEAN:
            return self.param
        if self.kind is ManifoldKind.SPD:
            return self.param * (self.param + 1) // 2
        if self.kind in (ManifoldKind.CIRCLE, ManifoldKind.SIMPLEX1):
            return 1
        return 2

    @property
    def ambient_len(self) -> int:
        """Number of stored reals per point"""
        if self.kind is ManifoldKind.EUCLIDEAN:
            return self.param
        if self.kind is ManifoldKind.SPD:
            return self.param * self.param
        if self.kind in (ManifoldKind.CIRCLE, ManifoldKind.SIMPLEX1):
            return 2
        return 3

    @property
    def tag(self) -> str:
        """ASCII tag used in MVI headers and on the command line"""
        if self.kind is ManifoldKind.EUCLIDEAN:
            return f"eucl:{self.param}"
        if self.kind is ManifoldKind.SPD:
            return f"spd:{self.param}"
        if self.kind is ManifoldKind.SIMPLEX1:
            return "simplex:1"
        return self.kind.value

    def __str__(self) -> str:
        return self.tag

    @classmethod
    def from_tag(cls, tag: str) -> "ManifoldDescriptor":
        """Parse an ASCII manifold tag such as 'spd:3' or 's2'"""
        name, _, arg = tag.strip().partition(":")
        try:
            if name == "eucl":
                return cls(ManifoldKind.EUCLIDEAN, int(arg))
            if name == "spd":
                return cls(ManifoldKind.SPD, int(arg))
            if name == "simplex" and arg == "1":
                return cls(ManifoldKind.SIMPLEX1, 1)
            if name in ("s1", "s2", "h2") and not arg:
                return cls(ManifoldKind(name))
        except ValueError as e:
            raise ShapeError(f"Malformed manifold tag '{tag}': {e}") from e
        raise ShapeError(f"Unknown manifold tag '{tag}'")


def euclidean(d: int = 1) -> ManifoldDescriptor:
    return ManifoldDescriptor(ManifoldKind.EUCLIDEAN, d)


def circle() -> ManifoldDescriptor:
    return ManifoldDescriptor(ManifoldKind.CIRCLE)


def sphere2() -> ManifoldDescriptor:
    return ManifoldDescriptor(ManifoldKind.SPHERE2)


def spd(r: int) -> ManifoldDescriptor:
    return ManifoldDescriptor(ManifoldKind.SPD, r)


def simplex1() -> ManifoldDescriptor:
    return ManifoldDescriptor(ManifoldKind.SIMPLEX1, 1)


def hyperbolic2() -> ManifoldDescriptor:
    return ManifoldDescriptor(ManifoldKind.HYPERBOLIC2)
