"""Exception hierarchy shared across the package."""


class ContestError(Exception):
    """Base class for everything raised deliberately by seqcontest."""


class ModelError(ContestError, ValueError):
    """Invalid marginal-benefit parameters or a failed shape check on h."""


class DomainError(ContestError, ValueError):
    """Query point outside the domain where h (or the g-tower) is defined."""


class JetDivisionError(ContestError, ZeroDivisionError):
    pass


class InvalidContest(ContestError, ValueError):
    pass


class SolverError(ContestError):
    """The characterization solver could not produce an interior equilibrium."""


class NoRootFound(SolverError):
    pass


class NonMonotoneAtRoot(SolverError):
    pass


class NegativeEffort(SolverError):
    def __init__(self, period: int, effort: float):
        super().__init__(f"negative equilibrium effort {effort:.3e} in period {period + 1}")
        self.period = period
        self.effort = effort


class OracleError(ContestError):
    pass


class NoConvergence(OracleError):
    def __init__(self, message: str, cycle_length: int | None = None):
        super().__init__(message)
        self.cycle_length = cycle_length


class ResolutionTooCoarse(OracleError):
    pass
