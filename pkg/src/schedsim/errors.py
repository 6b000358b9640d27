"""Exception hierarchy shared across the package."""


class ScheduleSimError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ScheduleSimError, ValueError):
    """Invalid schedule, responder, session or experiment configuration."""


class InfeasibleError(ScheduleSimError):
    """No (T, p) pair on the search grid meets the tolerance constraints."""


class DegenerateFitError(ScheduleSimError, ValueError):
    """Data with zero total variance, for which R^2 is undefined."""
