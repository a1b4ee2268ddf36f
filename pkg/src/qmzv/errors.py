"""Exception types shared across the package.

Everything derives from QmzvError so callers (and the CLI) can distinguish
domain errors, which are reported with exit code 1, from genuine bugs.
"""


class QmzvError(ValueError):
    """A violated precondition of some documented operation."""


class OrderMismatchError(QmzvError):
    """Binary series operation on operands with different truncation orders."""


class NonInvertibleError(QmzvError):
    """Series inversion requested for a series with zero constant term."""


class MembershipError(QmzvError):
    """Word or element lies outside the submodule required by an operation."""


class AdmissibilityError(QmzvError):
    """Index fails the admissibility condition of the requested model."""


class ParameterError(QmzvError):
    """Malformed numeric parameter (window bounds, degrees, q sample, ...)."""
