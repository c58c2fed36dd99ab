"""Exception types shared across the package."""


class SkewGibbsError(Exception):
    """Base class for library errors."""


class NotPositiveDefinite(SkewGibbsError):
    """A matrix required to be symmetric positive definite is not."""


class DimensionMismatch(SkewGibbsError, ValueError):
    """Operand shapes do not agree."""


class IndexOutOfRange(SkewGibbsError, IndexError):
    """Pivot or coordinate index outside the valid range."""


class EmptyInterval(SkewGibbsError, ValueError):
    """Truncation interval [lo, hi] has lo >= hi."""


class DofTooSmall(SkewGibbsError, ValueError):
    """Wishart degrees of freedom below the matrix dimension."""


class NonPositiveParameter(SkewGibbsError, ValueError):
    """A shape/rate/scale parameter that must be positive is not."""


class InfeasibleStart(SkewGibbsError):
    """Hit-and-Run called from a point outside the feasible ellipsoid."""


class NoConvergence(SkewGibbsError):
    """Iterative mode search failed to converge."""


class UnknownKind(SkewGibbsError, ValueError):
    """Unrecognized enumeration value."""


class SchemaError(SkewGibbsError, ValueError):
    """Configuration document violates the schema."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class FormatError(SkewGibbsError, ValueError):
    """Malformed persisted file."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ChainAborted(SkewGibbsError):
    """A sampler sweep failed; carries the sweep index."""

    def __init__(self, sweep, cause):
        self.sweep = sweep
        self.cause = cause
        super().__init__(f"chain aborted at sweep {sweep}: {cause}")
