"""Exception hierarchy. Every numerical failure mode has its own class so the
CLI can map them to exit codes and tests can target them precisely."""


class LefError(Exception):
    """Base class for all solver errors."""


class SpecError(LefError, ValueError):
    """Invalid problem definition (e.g. N < 3 or a outside (0, 1))."""


class EvalDomainError(LefError, ValueError):
    def __init__(self, name, t, value):
        super().__init__(f"{name} returned non-finite value {value!r} at t={t!r}")
        self.name = name
        self.t = t
        self.value = value


class PreconditionError(LefError, ValueError):
    pass


class BracketError(LefError):
    """Infimum of g+f sits on the probe boundary; carries the boundary value."""

    def __init__(self, message, m, t):
        super().__init__(message)
        self.m = m
        self.t = t


class HSolveError(LefError):
    pass


class EigenError(LefError):
    pass


class HopfError(LefError):
    pass


class ConstantSearchError(LefError):
    pass


class CertificateError(LefError):
    def __init__(self, message, name=None, worst_index=None, slack=None):
        super().__init__(message)
        self.name = name
        self.worst_index = worst_index
        self.slack = slack


class InvertError(LefError):
    pass


class SolveError(LefError):
    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class MonotonicityError(LefError):
    pass


class DomainError(LefError, ValueError):
    pass


class ConfigError(LefError, ValueError):
    pass
