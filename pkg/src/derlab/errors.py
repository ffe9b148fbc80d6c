"""Exception and warning types shared across the package."""


class DerlabError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(DerlabError):
    """Operands live over different point spaces or module shapes."""


class NotInvertible(DerlabError):
    """An algebra element has an entry too close to zero to invert."""


class RankAmbiguous(DerlabError):
    """The singular spectrum gives no trustworthy rank cut.

    Raised instead of guessing a nullspace dimension: either the gap
    between kept and dropped singular values is too small, or the
    requested tolerance is below the numerical resolution of the
    factorization.
    """

    def __init__(self, message: str, gap_ratio: float | None = None):
        super().__init__(message)
        self.gap_ratio = gap_ratio


class NotADerivation(DerlabError):
    """A map offered as a derivation fails the product rule."""


class NotALinear(DerlabError):
    """A map fails commutation with the scalar (multiplication) action."""


class UnitPairInvalid(DerlabError):
    """The supplied (x0, f0) pair does not satisfy f0(x0) = unit."""


class ZeroOperator(DerlabError):
    """An operation that needs a nonzero operator received (numerical) zero."""


class MissingProbe(DerlabError):
    """A point map table lacks a point required by the requested check."""


class SearchBudgetExceeded(DerlabError):
    """A seeded parametric search ran out of attempts without success."""


class DegenerateSpecWarning(UserWarning):
    """Every fiber is one-dimensional; zero-product triples collapse to B=0."""
