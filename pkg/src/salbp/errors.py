"""Exception hierarchy shared by all modules."""


class SalbpError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(SalbpError, ValueError):
    pass


class MalformedHeader(InstanceError):
    pass


class BadTaskTime(InstanceError):
    pass


class BadArc(InstanceError):
    pass


class CycleDetected(InstanceError):
    pass


class MissingSentinel(InstanceError):
    pass


class BadParameters(InstanceError):
    pass


class BoundsError(SalbpError, ValueError):
    pass


class BadCycleTime(BoundsError):
    pass


class BadStationCount(BoundsError):
    pass


class InfeasibleWindows(BoundsError):
    pass


class FormulationError(SalbpError, ValueError):
    pass


class IncompatibleConfig(FormulationError):
    pass


class DimensionMismatch(FormulationError):
    pass


class SolverError(SalbpError, RuntimeError):
    pass


class NumericalBreakdown(SolverError):
    pass


class NameTooLong(SolverError, ValueError):
    pass


class TooLarge(SalbpError, ValueError):
    pass
