"""Exception hierarchy.

Two branches matter operationally: :class:`SpecificationError` covers bad
inputs and contract violations (CLI exit code 2), :class:`NumericalError`
covers failures arising during computation (CLI exit code 3).
"""


class InarError(Exception):
    """Base class for all library errors."""


class SpecificationError(InarError):
    """Invalid model specification, data, or arguments."""


class NumericalError(InarError):
    """Numerical failure during an otherwise valid computation."""


class CoefficientOutOfRange(SpecificationError):
    """An autoregressive coefficient lies outside [0, 1]."""


class MalformedInnovation(SpecificationError):
    """Innovation distribution parameters are invalid or missing."""


class AllCoefficientsZero(SpecificationError):
    """Operation requires at least one positive coefficient."""


class DegenerateModel(SpecificationError):
    """Spectral operation requires a nonzero leading coefficient."""


class NotPrimitive(SpecificationError):
    """Operation requires gcd of the coefficient support to be 1."""


class WrongRegime(SpecificationError):
    """Operation requires a different stability regime."""


class InsufficientData(SpecificationError):
    """Too few observations for the requested fit."""


class HorizonExceeded(SpecificationError):
    """Requested time index lies beyond the simulated horizon."""


class HorizonTooLarge(SpecificationError):
    """Requested horizon exceeds the supported range."""


class ParseError(SpecificationError):
    """A data file contains a token that is not a nonnegative integer."""


class EmptyFile(SpecificationError):
    """A data file contains no observations."""


class SingularDesign(NumericalError):
    """Least-squares design matrix is rank deficient."""


class HorizonOverflow(NumericalError):
    """A simulated count exceeded the 64-bit capacity."""
