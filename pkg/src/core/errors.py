"""
Exception hierarchy shared by the core, oracle and report layers.

app.py maps each class to exactly one exit code.
"""


class GenusToolkitError(Exception):
    """Base class for every error raised by the toolkit"""


class InstanceError(GenusToolkitError):
    """Malformed or invalid instance data (files, inline strings, search bounds)"""


class PreconditionError(GenusToolkitError):
    """An operation was called outside its domain"""


class SeriesShapeError(PreconditionError):
    """Multivariate series with incompatible shapes, or an exponent out of range"""


class NonInvertibleError(PreconditionError):
    """Inverting a series whose constant term is zero"""


class InsufficientOrderError(PreconditionError):
    """A characteristic series is truncated below the order a computation needs"""


class ConvergenceError(GenusToolkitError):
    """Numeric quadrature did not converge or the contour left the analytic region"""
