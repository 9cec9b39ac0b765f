"""Exception types shared across the engine."""


class ModkitError(Exception):
    """Base class for all engine errors."""


class MalformedRecord(ModkitError):
    """An input line could not be decoded into a domain record."""

    def __init__(self, detail: str, position: int | None = None):
        self.detail = detail
        self.position = position
        where = f" (line {position})" if position is not None else ""
        super().__init__(f"malformed record{where}: {detail}")


class RemoteUnavailable(ModkitError):
    """A remote scoring endpoint timed out or returned a failure."""


class CorruptSnapshot(ModkitError):
    """Snapshot file failed magic/checksum/schema validation."""


class UnknownProfile(ModkitError):
    """No profile archived for the requested user."""


class UnknownPrompt(ModkitError):
    """Decision referenced a prompt id that does not exist."""


class AlreadyDecided(ModkitError):
    """Decision referenced a prompt that is no longer pending."""


class CapabilityUnsupported(ModkitError):
    """Gateway adapter does not advertise the requested capability."""


class RateLimited(ModkitError):
    """Live platform API refused the call; retry after the given delay."""

    def __init__(self, retry_after_s: float):
        self.retry_after_s = retry_after_s
        super().__init__(f"rate limited, retry after {retry_after_s:.0f}s")


class SourceUnavailable(ModkitError):
    """Event or profile source missing or unreadable."""


class ConfigInvalid(ModkitError):
    """Configuration failed validation; carries the list of violations."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("invalid config: " + "; ".join(violations))
