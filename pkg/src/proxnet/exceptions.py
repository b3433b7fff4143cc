"""Exception hierarchy.

Everything raised on purpose by proxnet derives from :class:`ProxnetError`.
The CLI maps :class:`ConfigError` to exit code 2 and any other
``ProxnetError`` to exit code 1.
"""


class ProxnetError(Exception):
    """Base class for domain errors."""


class ValidationError(ProxnetError, ValueError):
    """Input does not satisfy a type invariant or operation precondition."""


class DomainError(ProxnetError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(ProxnetError, ValueError):
    """Value or time window outside the configured coverage."""


class EmptyInputError(ValidationError):
    """No usable records were found in an input source."""


class ConfigError(ProxnetError):
    """Unreadable or invalid configuration / scenario file."""
