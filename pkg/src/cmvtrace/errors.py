"""Exception hierarchy and warning categories used across the package."""


class CmvTraceError(Exception):
    """Base class for every error this package raises on purpose."""


class ValidationError(CmvTraceError, ValueError):
    """Bad user-supplied data: coefficient words, documents, parameters."""


class ParseError(CmvTraceError, ValueError):
    """Malformed input document (JSON syntax, missing or mistyped fields)."""


class OddPeriod(ValidationError):
    """Coefficient words must have even length."""


class EmptyWord(ValidationError):
    pass


class CoefficientOutsideDisk(ValidationError):
    """A Verblunsky coefficient must satisfy |alpha| < 1."""


class OddDimension(ValidationError):
    """Finalized words (and CMV matrices) need even dimension."""


class BetaNotUnimodular(ValidationError):
    pass


class LambdaNotUnimodular(ValidationError):
    pass


class IndexOutOfRange(CmvTraceError, IndexError):
    pass


class DegreeExceedsK(CmvTraceError, ValueError):
    """reverse_poly called with a reference degree below the actual degree."""


class NotOnCircle(CmvTraceError, ValueError):
    pass


class NotNormalized(CmvTraceError, ValueError):
    """(alpha, rho) pair does not satisfy |alpha|^2 + rho^2 = 1."""


class UnsupportedPower(CmvTraceError, ValueError):
    """trace_power only handles first and second powers."""


class NotUnitary(CmvTraceError, ValueError):
    pass


class PeriodTooSmall(CmvTraceError, ValueError):
    """The second-power identity needs p >= 4."""


class NumericalError(CmvTraceError):
    """Base class for runtime numerical failures (exit code 3 at the CLI)."""


class LayoutUnavailable(NumericalError):
    """Band/gap layout could not be established for this word."""


class NoConvergence(NumericalError):
    pass


class RootCountMismatch(NumericalError):
    """A root search found the wrong number of circle zeros."""


class PatternMismatch(NumericalError):
    """Sorted band edge labels never match the (+,-,-,+) cyclic pattern."""


class PairingFailure(NumericalError):
    """No gap/Dirichlet-point pairing exists within tolerance."""


class NonpositiveDenominator(NumericalError):
    """Weight denominator came out <= 0; signals an upstream error."""


class IllConditioned(UserWarning):
    """alpha_{p-1} is so close to -1 that the tilde twist is unstable."""
