"""Exception hierarchy shared by all solver modules."""


class SpecRadiusError(Exception):
    """Base class for every error raised by this package."""


class EigenFailure(SpecRadiusError):
    """The eigensolver did not converge or returned an inaccurate pair."""


class IllConditionedEigenpair(SpecRadiusError):
    """Left and right eigenvectors are (numerically) orthogonal."""


class ShapeMismatch(SpecRadiusError, ValueError):
    pass


class InvalidStructure(SpecRadiusError, ValueError):
    pass


class DegenerateObjective(SpecRadiusError):
    """The objective vanishes on every unsaturated edge, so theta is undefined."""


class InfeasibleEnergy(SpecRadiusError):
    """Saturated entries already use more energy than the budget allows."""


class FullySaturated(SpecRadiusError):
    """Every perturbable edge is pinned to a bound (non-saturation assumption fails)."""


class TooLarge(SpecRadiusError, ValueError):
    pass


class SingularShift(SpecRadiusError):
    pass


class EmptyCloud(SpecRadiusError, ValueError):
    pass


class ParseError(SpecRadiusError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedField(ParseError):
    pass


class MaxIterations(SpecRadiusError, RuntimeWarning):
    """An iteration cap was reached; the best iterate so far is returned."""
