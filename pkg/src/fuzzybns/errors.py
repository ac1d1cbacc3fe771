"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
NumericError -> 4.  Plain ValueError is reserved for caller bugs
(out-of-domain arguments) and is not translated.
"""


class FuzzyBnsError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(FuzzyBnsError):
    """Invalid configuration: unknown key, bad value, missing section."""


class DataError(FuzzyBnsError):
    """Data-quality failure: malformed bars, schema mismatch, empty result."""

    def __init__(self, message, *, bar=None, line=None):
        super().__init__(message)
        self.bar = bar
        self.line = line


class NumericError(FuzzyBnsError):
    """Numerical failure: unstable step size, nonfinite activations,
    correlation bound violation."""
