"""Exception taxonomy shared by all bjapprox modules."""


class BjApproxError(Exception):
    """Base class for all errors raised by this package."""


class InvalidExponentError(BjApproxError):
    """Exponent outside the open interval (1, inf) or not finite."""


class DimensionMismatchError(BjApproxError):
    """Operands live in spaces of different dimension or exponent."""


class InvalidParameterError(BjApproxError):
    """A tolerance, seed, radius or similar parameter is out of range."""


class DegenerateInputError(BjApproxError):
    """An input that must be nonzero (or nontrivial) is degenerate."""


class RankDeficiencyError(BjApproxError):
    """A family of vectors or functionals that must be independent is not."""


class CapacityError(BjApproxError):
    """Problem size exceeds the supported desk scale."""


class PreconditionError(BjApproxError):
    """A mathematical precondition of the routine fails on these inputs."""


class InternalInconsistencyError(BjApproxError):
    """Two internal computations that must agree do not; likely a bug."""
