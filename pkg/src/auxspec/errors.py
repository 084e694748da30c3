"""Exception types shared by the auxspec modules."""


class AuxspecError(Exception):
    """Base class for every error raised on purpose by auxspec."""


class DomainError(AuxspecError, ValueError):
    """An argument lies outside the domain of the requested formula."""


class NoBoundStateError(DomainError):
    """The potential has no bound spectrum for the requested parameters."""


class PoleError(DomainError):
    """A rational coefficient has a vanishing denominator."""


class BracketError(AuxspecError):
    """A bracketing search could not enclose the requested root or extremum."""


class MonotonicityError(AuxspecError):
    """K(r) changes monotonicity on the bracket, so it cannot be inverted."""


class ScalingConstraintError(AuxspecError, ValueError):
    """Two parameter sets are not related by the scaling transformation."""


class RankError(AuxspecError):
    """A least-squares system is rank deficient."""


class ConvergenceError(AuxspecError):
    """An iterative procedure stopped before reaching its tolerance.

    ``best`` holds the best estimate found and ``uncertainty`` its error
    estimate, when available.
    """

    def __init__(self, message, best=None, uncertainty=None):
        super().__init__(message)
        self.best = best
        self.uncertainty = uncertainty
