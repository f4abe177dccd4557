"""Exception hierarchy shared by all bhlab modules."""


class BHLabError(Exception):
    """Base class for all bhlab errors."""


class BadShape(BHLabError):
    """Input matrix is not square / has bad entries."""


class Singular(BHLabError):
    """Matrix has determinant zero."""


class NotInvertiblePolynomial(BHLabError):
    """Matrix admits no chain/loop decomposition."""


class NotAnAtom(BHLabError):
    """Operation requires a single chain or loop atom."""


class Inhomogeneous(BHLabError):
    """Element is not homogeneous / not an eigenvector."""


class NotInSA(BHLabError):
    """Element lies outside the x-admissible subcomplex."""


class PrimeDividesDet(BHLabError):
    """The chosen prime divides the matrix determinant."""


class WindowTooSmall(BHLabError):
    """Truncation window below the largest matrix entry."""


class Unstable(BHLabError):
    """Cohomology ranks not stable between windows; enlarge the window."""


class NotACocycle(BHLabError):
    """Element is not closed under the differential."""


class NotInWindow(BHLabError):
    """Element has exponents outside the truncation window."""


class BasisDeficient(BHLabError):
    """Given classes do not span the cocycle's class."""


class NotTopDegree(BHLabError):
    """Closed-form reduction needs top exterior degree in its sector."""


class MixedSectors(BHLabError):
    """Closed-form reduction needs a single sector."""


class PrecisionLoss(BHLabError):
    """p-adic precision budget exceeded."""


class OracleFallbackFailed(BHLabError):
    """Oracle reduction failed while computing a Frobenius entry."""
