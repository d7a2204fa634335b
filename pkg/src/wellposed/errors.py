"""Exception types shared across the package.

Everything user-facing raises one of these instead of bare ValueError /
RuntimeError so callers (and the CLI) can map failures to exit reasons.
"""


class WellposedError(Exception):
    """Base class for all package errors."""


class InputError(WellposedError, ValueError):
    """Malformed input: wrong dimension, empty list, bad parameter value."""


class ConeValidationError(InputError):
    """Generator/dual-generator data does not describe a pointed solid cone."""


class NotInteriorPoint(InputError):
    """A vector required to lie in the cone interior does not."""


class HypothesisNotMet(InputError):
    """A routine with a mathematical hypothesis was called without it holding."""


class NumericalFailure(WellposedError, RuntimeError):
    """A numerical subroutine (projection, LP) did not converge."""


class NoBoundingFunctional(WellposedError, RuntimeError):
    """No dual functional with bounded-below scalarization was found.

    Raised by the density pipeline when its boundedness gate fails; carries
    the scan evidence so the refusal is auditable.
    """

    def __init__(self, message, scanned=None):
        super().__init__(message)
        self.scanned = scanned if scanned is not None else []


class CertificateFailure(WellposedError, RuntimeError):
    """A constructed certificate failed verification.

    ``clause`` names the failing check so batch callers can aggregate.
    """

    def __init__(self, message, clause=""):
        super().__init__(message)
        self.clause = clause


class ConfigError(InputError):
    """Problem config file could not be parsed or validated."""
