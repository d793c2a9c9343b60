"""Exception hierarchy shared by all modules."""


class QGWError(Exception):
    """Base class for workbench errors."""


class StructureError(QGWError, ValueError):
    """Input data violates a structural precondition (parent mismatch, bad table, ...)."""


class DecompositionError(StructureError):
    """Wedderburn decomposition failed, e.g. the algebra has a nonzero radical."""


class NumericalError(QGWError, ArithmeticError):
    """An iterative or floating-point procedure did not converge or was ill-conditioned."""


class InvariantViolation(QGWError, AssertionError):
    """Items that must agree by theory disagree; signals a bug rather than bad input."""


class CertificateError(QGWError):
    """A Kac-quotient candidate ideal could not be certified (no descent at the cap)."""
