"""Exception types raised across the package."""


class RaneyError(Exception):
    """Base class for all package errors."""


class DomainError(RaneyError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class OutOfSupport(DomainError):
    """A spectral point lies outside the support of a density."""


class OnCutError(DomainError):
    """A resolvent was requested on (or numerically on) its branch cut."""


class NonConvergence(RaneyError, ArithmeticError):
    """An iterative solver failed to converge."""


class BranchAmbiguity(RaneyError, ArithmeticError):
    """Two roots of an algebraic equation satisfy the branch rule."""


class ExtrapolationUnstable(RaneyError, ArithmeticError):
    """Successive Richardson estimates disagree."""


class DivergentMoment(RaneyError, ValueError):
    """A requested moment does not exist for a heavy-tailed density."""


class InvalidFamily(RaneyError, ValueError):
    """A family or edge specification is not supported."""


class InvalidBottomParameter(RaneyError, ValueError):
    """A hypergeometric lower parameter is a pole (non-positive integer)."""


class SingularMatrix(RaneyError, ArithmeticError):
    """A matrix that must be inverted is numerically singular."""


class PolynomialZero(RaneyError, ArithmeticError):
    """A logarithmic derivative was requested at a root of the polynomial."""


class UnnormalizedCurve(RaneyError, ValueError):
    """A density curve does not carry the mass required by a functional."""
