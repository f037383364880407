"""Exception hierarchy shared by the library and the CLI."""


class CompositePulseError(ValueError):
    """Base class for everything this toolkit raises on purpose."""


class InvalidPulseError(CompositePulseError):
    pass


class InvalidParameterError(CompositePulseError):
    pass


class SeriesConsistencyError(CompositePulseError):
    """A probability series coefficient came out with a non-negligible imaginary part."""


class OrderExceedsError(CompositePulseError):
    """Every series coefficient up to the requested order vanished."""

    def __init__(self, message: str, order: int):
        super().__init__(message)
        self.order = order


class SolverConvergenceError(CompositePulseError):
    pass


class DocumentError(CompositePulseError):
    pass


class ReferenceDataError(CompositePulseError):
    pass


class WindowUnreachableError(CompositePulseError):
    """No family member up to the size limit reaches the requested window."""
