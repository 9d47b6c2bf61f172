"""Exception hierarchy shared by every module."""


class AmpsynthError(Exception):
    """Base class for all library errors."""


class ArgumentError(AmpsynthError, ValueError):
    """Bad index, width mismatch, unnormalized input and similar caller mistakes."""


class SpecError(AmpsynthError, ValueError):
    """Amplitude or probability table that violates its constraints."""


class ResourceError(AmpsynthError):
    """Register wider than the configured cap."""


class DegenerateOverlapError(AmpsynthError):
    """Source and target sets have zero overlap, so nothing can be amplified."""


class EmptySampleError(AmpsynthError):
    """No shot survived ancilla conditioning."""


class AdaptiveFailureError(AmpsynthError):
    def __init__(self, rounds: int, total_iterations: int):
        super().__init__(
            f"ancilla never measured 0 after {rounds} rounds "
            f"({total_iterations} iterations)"
        )
        self.rounds = rounds
        self.total_iterations = total_iterations
