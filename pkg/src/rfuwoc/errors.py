"""Exception hierarchy shared by every module of the package."""


class RfuwocError(Exception):
    """Base class for all package errors."""


class PoleError(RfuwocError, ValueError):
    """A gamma function was evaluated at one of its poles."""


class DomainError(RfuwocError, ValueError):
    """An argument lies outside the domain of the requested function."""


class NoContourError(RfuwocError, ValueError):
    """No vertical contour separates the pole families of a kernel."""


class ConvergenceError(RfuwocError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance.

    ``axis`` names the integration variable that failed (``"s"``, ``"t"``)
    and ``term`` the index of the closed-form term being evaluated, when
    known.
    """

    def __init__(self, message, *, axis=None, term=None):
        self.axis = axis
        self.term = term
        parts = [message]
        if axis is not None:
            parts.append(f"axis={axis}")
        if term is not None:
            parts.append(f"term={term}")
        super().__init__(" ".join(parts) if len(parts) > 1 else message)


class InfeasibleError(RfuwocError):
    """A power target cannot be met anywhere in the search range."""


class ConfigError(RfuwocError, ValueError):
    """A scenario or preset file is malformed."""
