"""Exception and warning classes raised by savgol_ci."""


class SavgolError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(SavgolError, ValueError):
    """Invalid filter parameters (n, m, weighting)."""


class SeriesTooShortError(SavgolError, ValueError):
    """The input series is shorter than the filter window requires."""

    def __init__(self, message, minimum=None):
        super().__init__(message)
        self.minimum = minimum


class ConditioningError(SavgolError, ArithmeticError):
    """A least-squares system is too ill-conditioned to trust."""


class BiasStateError(SavgolError, ValueError):
    """A noise estimate has the wrong bias state for the requested operation."""


class PlateauNotFoundError(SavgolError):
    """No stable plateau of the differenced residual SD could be located."""


class DegenerateDataError(SavgolError, ValueError):
    """Data with zero variance where a positive variance is required."""


class DataFormatError(SavgolError, ValueError):
    """Malformed input data file."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class GapError(DataFormatError):
    """Missing years in what should be a consecutive annual series."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)


class DomainError(SavgolError, ValueError):
    """Input outside the domain of a transform (e.g. log of a non-positive value)."""


class PipelineError(SavgolError):
    """An analysis stage failed; ``stage`` names which one."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


class EvenParameterCountWarning(UserWarning):
    """Issued when the polynomial parameter count n is even.

    An odd n gives the same interior output as n + 1 with narrower
    confidence bands, so even values are legal but rarely a good choice.
    """
