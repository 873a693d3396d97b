"""Parameter pair (s, t) and the error/warning types shared by the package."""

from __future__ import annotations

import math
from dataclasses import dataclass


class FreeSBError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(FreeSBError, ValueError):
    """An input violates the documented precondition of an operation."""


class NonInvertibleError(PreconditionError):
    """Series reversion requested for a series with vanishing linear term."""


class SolverError(FreeSBError, RuntimeError):
    """An iterative solver failed to converge.

    ``residual`` holds the last residual reached before giving up.
    """

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class DomainError(FreeSBError, ValueError):
    """A point lies outside the domain where the quantity is defined."""


class BoundaryProximityWarning(UserWarning):
    """A point lies within the guard tolerance of a domain boundary."""


class UnitarityWarning(UserWarning):
    """s = 4: the transform is bounded only from one side."""


@dataclass(frozen=True)
class Params:
    """The variance parameter ``s`` of the boundary measure and the time ``t``."""

    s: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise PreconditionError(f"s must be positive, got {self.s}")
        if not (math.isfinite(self.t) and self.t >= 0):
            raise PreconditionError(f"t must be >= 0, got {self.t}")

    @property
    def in_transform_regime(self) -> bool:
        return self.t > 0 and self.s >= self.t / 2

    @property
    def strict_unitary(self) -> bool:
        return self.in_transform_regime and self.s != 4

    def require_regime(self) -> None:
        if not self.in_transform_regime:
            raise PreconditionError(
                f"(s, t) = ({self.s}, {self.t}) is outside the regime s >= t/2 > 0"
            )
