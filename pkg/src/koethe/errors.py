"""Exception hierarchy shared across the package."""


class KoetheError(Exception):
    """Base class for all errors raised by this package."""


class WindowError(KoetheError, IndexError):
    """Access outside a tabulated window, or a truncation cap exceeded."""


class InvariantError(KoetheError, ValueError):
    """A domain-type invariant would be violated by the requested construction."""


class NotWellDefinedError(KoetheError):
    """The requested operator is not well defined between the given spaces."""


class UnsupportedCombinationError(KoetheError):
    """No decision rule covers this (variant, domain, codomain) combination."""


class ConfigurationError(KoetheError, ValueError):
    """Invalid window, search bounds, or experiment configuration."""
