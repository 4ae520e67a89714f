"""Exception types shared across the package."""


class MatchstreamError(ValueError):
    """Base class for all library errors."""


class DomainError(MatchstreamError):
    """An element or subset lies outside an oracle's ground set."""


class SizeError(MatchstreamError):
    """An exact routine was asked for an instance above its size cap."""


class PreconditionError(MatchstreamError):
    """A caller violated a documented precondition."""


class InfeasibilityError(MatchstreamError):
    """A constraint produced an impossible configuration."""


class ConfigError(MatchstreamError):
    """Bad experiment, schedule, or instance-file configuration."""
