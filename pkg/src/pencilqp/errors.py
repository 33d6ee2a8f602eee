"""Exception and warning types raised across the package."""


class PencilError(Exception):
    """Base class for all errors raised by pencilqp."""


class NotSymmetric(PencilError, ValueError):
    pass


class DimensionMismatch(PencilError, ValueError):
    pass


class NonConvergence(PencilError, RuntimeError):
    pass


class NotPSD(PencilError, ValueError):
    pass


class BNotIndefinite(PencilError, ValueError):
    """The second matrix of the pencil is semidefinite, so the interval theory does not apply."""


class VNotIndefinite(PencilError, ValueError):
    pass


class EmptyInterval(PencilError, ValueError):
    pass


class IntervalNotOpen(PencilError, ValueError):
    pass


class OutsideInterval(PencilError, ValueError):
    pass


class NotPositiveDefiniteAtRho(PencilError, ValueError):
    pass


class NotPositiveDefiniteAtLambda(PencilError, ValueError):
    pass


class RhoZero(PencilError, ValueError):
    pass


class RhoOutsideInterior(PencilError, ValueError):
    pass


class NoSamplesOnSide(PencilError, RuntimeError):
    pass


class InconsistentChecks(PencilError, RuntimeError):
    """Two independent numerical criteria disagreed; usually a rank decision near the threshold."""


class NoCandidatesWarning(UserWarning):
    pass


class DegenerateAtRhoWarning(UserWarning):
    pass


class DefiniteTTWarning(UserWarning):
    pass


class SingularGram(PencilError, ValueError):
    pass
