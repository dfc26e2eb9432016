"""Exception types raised by the package."""


class PyramidFEError(Exception):
    """Base class for all package errors."""


class DivergentIntegralError(PyramidFEError, ValueError):
    pass


class OutsideReferenceError(PyramidFEError, ValueError):
    pass


class NoApexLimitError(PyramidFEError, ValueError):
    """The function has no continuous extension to the apex."""


class NonPolynomialTraceError(PyramidFEError, ValueError):
    pass


class GeometryError(PyramidFEError, ValueError):
    pass


class SingularSystemError(PyramidFEError, ArithmeticError):
    pass


class NotDivisibleError(PyramidFEError, ArithmeticError):
    pass
