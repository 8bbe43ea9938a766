"""Exception types raised across the package."""


class GFIError(Exception):
    """Base class for all package errors."""


class AllZero(GFIError, ValueError):
    """Every log-value on the grid is -inf, so nothing can be normalized."""


class OutOfDomain(GFIError, ValueError):
    pass


class GridMismatch(GFIError, ValueError):
    pass


class SingularDesign(GFIError, ValueError):
    pass


class SingularInformation(GFIError, ValueError):
    pass


class DimensionUnsupported(GFIError, ValueError):
    pass


class InitInvalid(GFIError, ValueError):
    pass


class InfeasibleGeometry(GFIError, ValueError):
    pass


class UnknownCell(GFIError, KeyError):
    pass


class ConfigError(GFIError, ValueError):
    pass


class InvalidModel(GFIError, ValueError):
    """Spline parameters violate the knot-spacing or coefficient constraints."""
