"""Exception taxonomy shared across the package.

Every failure that callers are expected to handle programmatically gets its
own class here; the CLI maps them to exit codes (3 for domain/range problems,
4 for quadrature failures). ConfigError is deliberately a Warning subclass:
a jump cutoff that removes every jump is reported but does not abort a run.
"""

from __future__ import annotations


class LevyArcError(Exception):
    """Base class for package errors."""


class MalformedMeasure(LevyArcError):
    """A measure, component, or triplet violates a structural invariant."""


class DomainError(LevyArcError):
    """Input lies outside the mathematical domain of the operation."""


class RangeError(LevyArcError):
    """A transform produced output outside the admissible class."""


class NotInRange(LevyArcError):
    """Inversion input is provably not in the range of the forward transform."""


class GridMismatch(LevyArcError):
    """Two grids that must coincide do not."""


class QuadratureNonConvergence(LevyArcError):
    """Adaptive quadrature could not meet the requested tolerance.

    Carries the best available value and the estimated error bound so a
    caller can decide whether the partial result is still usable.
    """

    def __init__(self, message: str, partial: float = float("nan"),
                 bound: float = float("inf")):
        super().__init__(message)
        self.partial = partial
        self.bound = bound

    def __str__(self) -> str:
        base = super().__str__()
        return f"{base} (partial value {self.partial!r}, error bound {self.bound!r})"


class ConfigError(UserWarning):
    """Simulation configuration is admissible but almost certainly wrong.

    Emitted via warnings.warn, e.g. when the jump cutoff eps removes every
    jump of a nonzero Levy measure. Warn, not fail.
    """
