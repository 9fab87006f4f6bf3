"""Exception types shared across the package.

All subclass ValueError so callers that don't care about the distinction can
catch the builtin; the CLI maps them onto its data-error exit code.
"""


class DimensionError(ValueError):
    """Operands have incompatible shapes or lengths."""


class EmptyInputError(ValueError):
    """An operation received no data where at least one element is required."""


class InsufficientDataError(ValueError):
    """More rows are required (e.g. covariance needs at least two samples)."""


class ConfigError(ValueError):
    """A configuration value is out of its legal range."""


class FormatError(ValueError):
    """A file does not conform to its declared on-disk format."""
