"""Exception hierarchy shared by every stage of the package."""


class PronyAdaptError(ValueError):
    """Base class for all errors raised by ``prony_adapt``."""

    stage = None


class OrderOutOfRange(PronyAdaptError):
    pass


class ClassicLengthMismatch(PronyAdaptError):
    pass


class InvalidPolynomial(PronyAdaptError):
    pass


class DegenerateInput(PronyAdaptError):
    """Non-finite entries where a finite matrix is required."""


class TLSNonExistence(PronyAdaptError):
    """The total least-squares problem has no generic solution."""


class IndeterminateForm(PronyAdaptError):
    """Vandermonde matrix holds saturated or non-finite entries (TLS path)."""


class DivergenceError(PronyAdaptError):
    """LMS weights became non-finite."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class DegenerateReconstruction(PronyAdaptError):
    """Precision Measure denominator is zero."""


class LengthMismatch(PronyAdaptError):
    pass


class NyquistViolation(PronyAdaptError):
    pass


class MalformedInput(PronyAdaptError):
    """A signal file could not be parsed."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ConfigError(PronyAdaptError):
    """Invalid experiment configuration."""
