"""Exception types raised across the package."""


class EisencubicError(Exception):
    """Base class for all package errors."""


class NotCoprimeToThree(EisencubicError, ValueError):
    pass


class BothZero(EisencubicError, ValueError):
    pass


class ZeroModulus(EisencubicError, ZeroDivisionError):
    pass


class ZeroInput(EisencubicError, ValueError):
    pass


class BoundTooSmall(EisencubicError, ValueError):
    pass


class ModulusNotCoprimeToThree(EisencubicError, ValueError):
    pass


class CapExceeded(EisencubicError, ValueError):
    pass


class NotPrimitive(EisencubicError, ValueError):
    pass


class NotHecke(EisencubicError, ValueError):
    pass


class QuadratureFailure(EisencubicError, RuntimeError):
    pass


class InsufficientTruncation(EisencubicError, RuntimeError):
    pass


class CountMismatch(EisencubicError, RuntimeError):
    pass


class SupportExceeded(EisencubicError, ValueError):
    pass


class UnsupportedRange(EisencubicError, ValueError):
    pass


class IdentityViolation(EisencubicError, AssertionError):
    pass


class InvalidRange(EisencubicError, ValueError):
    pass
