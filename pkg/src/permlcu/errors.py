"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to the
documented process status without a lookup table.
"""


class PermLCUError(Exception):
    exit_code = 2


class DimensionError(PermLCUError, ValueError):
    pass


class DomainError(PermLCUError, ValueError):
    pass


class RangeError(PermLCUError, IndexError):
    pass


class StructureError(PermLCUError, ValueError):
    pass


class ResourceError(PermLCUError, MemoryError):
    pass


class NonConvergenceError(PermLCUError, RuntimeError):
    exit_code = 4

    def __init__(self, message, deviation=None, iterations=None):
        super().__init__(message)
        self.deviation = deviation
        self.iterations = iterations


class InfeasibleError(PermLCUError, ValueError):
    pass


class NumericalDegradationError(PermLCUError, RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class VerificationError(PermLCUError):
    exit_code = 3
