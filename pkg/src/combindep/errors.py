"""Exception types raised across the package."""


class CombindepError(Exception):
    """Base class for all package errors."""


class UnsupportedSpec(CombindepError):
    """Operation is not defined for this kind of subshift."""


class EmptyLanguage(CombindepError):
    """The shift of finite type has no bi-infinite points."""


class WordTooLong(CombindepError):
    """An empirical measure was asked about a word longer than its horizon."""


class BudgetExceeded(CombindepError):
    """An enumeration cap was hit.

    ``partial`` carries the best result found before the cap, when there is one.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DepthCapExceeded(CombindepError):
    """A joined partition or cover would have too many atoms."""


class NonDisjointNeighbourhoods(CombindepError):
    """The cylinder neighbourhoods of an IE-pair candidate intersect."""


class PremiseFailed(CombindepError):
    """The entropy premise of the partition approximation does not hold."""

    def __init__(self, message, entropy_per_step=None):
        super().__init__(message)
        self.entropy_per_step = entropy_per_step


class CertificateInvalid(CombindepError):
    """A stored witness no longer satisfies its constraints."""


class Degenerate(CombindepError):
    """Empty or otherwise degenerate input."""
