"""Exception hierarchy."""


class PerpsysError(Exception):
    pass


class SingularMatrixError(PerpsysError, ValueError):
    pass


class AmbientMismatchError(PerpsysError, ValueError):
    pass


class TooLargeError(PerpsysError, ValueError):
    pass


class DegenerateFormError(PerpsysError, ValueError):
    pass


class NonIntegralError(PerpsysError, ValueError):
    pass


class CapExceededError(PerpsysError, RuntimeError):
    pass


class NotInLError(PerpsysError, ValueError):
    pass


class PipelineInvariantViolated(PerpsysError, AssertionError):
    pass


class UniquenessViolatedError(PipelineInvariantViolated):
    pass


class RecoveryAmbiguousError(PipelineInvariantViolated):
    pass


class WitnessNotFoundError(PerpsysError, RuntimeError):
    pass


class NotAGQError(PerpsysError, ValueError):
    pass


class NotAPartialGeometryError(PerpsysError, ValueError):
    pass


class NotSRGError(PerpsysError, ValueError):
    pass


class NotAPartialLinearSpaceError(PerpsysError, ValueError):
    pass
