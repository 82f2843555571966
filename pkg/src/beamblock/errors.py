"""Error types shared across the package.

ConfigError maps to CLI exit code 2 (bad usage, bad scenario/config values),
DataError to exit code 1 (malformed or inconsistent input data).
"""


class BlockageError(Exception):
    """Base class for all package errors."""


class ConfigError(BlockageError):
    """Invalid configuration: bad grid steps, array parameters, CLI flags."""


class DataError(BlockageError):
    """Invalid data: malformed CSV, grid mismatches, empty selections."""
