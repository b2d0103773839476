"""Errors that port implementations raise across the contract boundary."""


class PortError(Exception):
    pass


class NotFound(PortError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class InvalidPath(PortError, ValueError):
    pass


class UnknownDelivery(PortError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class InvalidMetric(PortError, ValueError):
    pass


class InvalidCursor(PortError, ValueError):
    pass


class ConfigError(PortError, ValueError):
    pass


class CorruptData(PortError, ValueError):
    """A persisted file could not be decoded; the message names file and line."""


class BadRequest(PortError, ValueError):
    """Client input rejected by a handler; web adapters answer 400."""


class StartupError(PortError, OSError):
    pass
