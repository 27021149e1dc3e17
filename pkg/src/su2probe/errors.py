"""Exception types raised by the estimation routines."""


class EstimationError(ValueError):
    """Base class for invalid inputs to the estimation routines."""


class InvalidBloch(EstimationError):
    pass


class InvalidAxis(EstimationError):
    pass


class InvalidWeight(EstimationError):
    pass


class RequiresPureState(EstimationError):
    pass


class DegenerateRotation(EstimationError):
    pass


class SingularReparam(EstimationError):
    pass


class Infeasible(EstimationError):
    """The encoding/probe pair carries no usable two-parameter information."""


class SingularQFIM(Infeasible):
    pass


class NoOptimalProbe(Infeasible):
    pass
