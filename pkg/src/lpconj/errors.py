"""Exception hierarchy shared by every lpconj module."""


class LpConjError(ValueError):
    """Base class for all library errors."""

    code = "error"


class ExponentMismatch(LpConjError):
    """Operands live in l^p spaces with different exponents."""

    code = "exponent_mismatch"


class DescriptorError(LpConjError):
    """A weight or exponent descriptor is malformed or out of range."""

    code = "bad_descriptor"


class HypothesisViolation(LpConjError):
    """The input violates the hypothesis a construction relies on."""

    code = "hypothesis_violation"


class CertificateMismatch(LpConjError):
    """Two conjugacy maps cannot be composed: target and source differ."""

    code = "certificate_mismatch"
