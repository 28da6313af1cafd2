"""
Exception hierarchy for manifold-valued image processing.

Every data-dependent failure derives from ManifoldError, which the CLI maps
to exit code 2.
"""
from typing import Optional, Tuple


class ManifoldError(ValueError):
    """Base class for all data errors"""


class ShapeError(ManifoldError):
    """Mismatched descriptors, counts or matrix dimensions"""


class DomainError(ManifoldError):
    """Input outside the domain of a geometric or statistical function"""


class SimplexBoundaryError(DomainError):
    """The exponential map left the open simplex"""

    def __init__(self, message: str = "exp leaves open simplex"):
        super().__init__(message)


class CutLocusError(ManifoldError):
    """log requested for a point in the cut locus of the base point"""

    def __init__(self, index: Tuple[int, ...] = (), message: Optional[str] = None):
        self.index = tuple(int(i) for i in index)
        super().__init__(message or f"point at component {self.index} lies in the cut locus")


class ConvergenceError(ManifoldError):
    """Karcher mean iteration did not reach the gradient tolerance"""

    def __init__(self, grad_norm: float, iterations: int):
        self.grad_norm = float(grad_norm)
        self.iterations = int(iterations)
        super().__init__(
            f"Karcher mean did not converge after {iterations} iterations "
            f"(gradient norm {grad_norm:.3e})"
        )


class OutOfDomainError(ManifoldError):
    """A patch does not fit inside the image grid"""


class ParameterError(ManifoldError):
    """Invalid algorithm or experiment parameters"""


class GroupError(ManifoldError):
    """Failure while processing the patch group of a reference centre"""

    def __init__(self, center: Tuple[int, int], cause: Exception):
        self.center = (int(center[0]), int(center[1]))
        self.cause = cause
        super().__init__(f"group at centre {self.center} failed: {cause}")


class MviParseError(ManifoldError):
    """Malformed MVI file"""

    def __init__(self, message: str, offset: int):
        self.offset = int(offset)
        super().__init__(f"{message} (byte offset {self.offset})")


class PixelValidationError(MviParseError):
    """A decoded pixel is not a valid manifold point"""

    def __init__(self, pixel: int, offset: int, kind: str):
        self.pixel = int(pixel)
        super().__init__(f"pixel {self.pixel} is not a valid {kind} point", offset)
