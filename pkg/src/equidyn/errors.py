"""Exception hierarchy for equidyn."""


class EquidynError(Exception):
    """Base class for all library errors."""


class DimensionUnsupportedError(EquidynError, ValueError):
    """Raised when k lies outside the supported range."""


class HolomorphyViolationError(EquidynError, ArithmeticError):
    """A map sent a nonzero point to the origin (indeterminacy point)."""


class DegenerateMapError(EquidynError, ValueError):
    pass


class UnsupportedDivisorError(EquidynError, ValueError):
    """Division is only implemented for products of linear forms."""


class NotDivisibleError(EquidynError, ArithmeticError):
    """Exact division failed; ``remainder`` holds the nonzero witness."""

    def __init__(self, remainder, message=None):
        self.remainder = remainder
        super().__init__(message or f"not divisible, remainder {remainder}")


class NotAFlatError(EquidynError, ValueError):
    """The hyperplanes have no common point in projective space."""


class InvarianceViolationError(EquidynError, ArithmeticError):
    pass


class NumericOverflowError(EquidynError, FloatingPointError):
    pass


class RootSolverError(EquidynError, ArithmeticError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class GroupClosureError(EquidynError, RuntimeError):
    """Group closure produced more elements than the order bound allows."""
