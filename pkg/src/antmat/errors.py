"""Exception types shared across the package.

Every error that a caller can act on gets its own class; the CLI maps them to
exit codes (usage errors -> 2, numerical failures -> 3).
"""


class AntmatError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpecError(AntmatError, ValueError):
    """An ensemble/density spec is malformed; the message names the offending field."""


class DimensionCapError(AntmatError, ValueError):
    """A combinatorial routine was asked for a dimension above its cap."""


class DegenerateExtremesError(AntmatError, ValueError):
    """Extremal diagonal values are degenerate; the degenerate predictor must be used."""


class NotDegenerateError(AntmatError, ValueError):
    """No degenerate extreme cluster exists; the nondegenerate predictor must be used."""


class EmptySpectrumError(AntmatError, ValueError):
    """A spectrum-consuming operation received zero eigenvalues."""


class SingularDiagonalError(AntmatError, ValueError):
    """Diagonal conjugation requires an invertible diagonal."""


class ZeroVarianceError(AntmatError, ValueError):
    """A density with zero marginal variance cannot be normalized."""


class NumericalError(AntmatError, RuntimeError):
    """An eigensolve or downstream consistency check failed to converge/agree."""
