"""Exception types raised by stiffgas."""


class StiffGasError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StiffGasError, ValueError):
    """An argument lies outside the domain of a formula (e.g. rho <= 0)."""


class NonPhysicalStateError(DomainError):
    """The thermodynamic state is not physical for the model (e.g. p + p_inf <= 0)."""


class DegenerateWindowError(StiffGasError):
    """A fit window cannot be fitted.

    ``reason`` names the failing condition; ``rank`` is the estimated
    rank of the design matrix when the failure came from the solver.
    """

    def __init__(self, reason, rank=None):
        self.reason = reason
        self.rank = rank
        msg = reason if rank is None else f"{reason} (estimated rank {rank})"
        super().__init__(msg)


class InvalidFitError(StiffGasError):
    """A fit produced parameters violating the model constraints (gamma <= 1, c_v <= 0)."""


class RangeError(StiffGasError, ValueError):
    """A table query falls outside the tabulated pressure/temperature domain."""


class DataFormatError(StiffGasError, ValueError):
    """An input data file is malformed."""
