"""Exception hierarchy shared by all webometer modules."""

from __future__ import annotations

import datetime


class WebometerError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(WebometerError):
    """An invalid configuration value; carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class QueryError(WebometerError):
    """A malformed search query."""


class RangeError(WebometerError):
    """A paging request outside the backend's allowed window."""


class QuotaError(WebometerError):
    """Daily query quota exhausted; carries the next reset date."""

    def __init__(self, reset: datetime.date, remaining: int = 0):
        self.reset = reset
        self.remaining = remaining
        super().__init__(f"daily quota exhausted; resets {reset.isoformat()}")


class BackendUnavailableError(WebometerError):
    """Transport-level failure talking to a search backend."""

    def __init__(self, message: str, retryable: bool = True):
        self.retryable = retryable
        super().__init__(message)


class UrlParseError(WebometerError):
    """Input that cannot be interpreted as an absolute URL."""


class InsufficientDataError(WebometerError):
    """Too few data points for the requested statistic or fit."""


class UndefinedCorrelationError(WebometerError):
    """Pearson correlation requested for a constant series."""


class StoreError(WebometerError):
    """I/O failure reading or writing a sample store or checkpoint."""


class LoadError(WebometerError):
    """A malformed input file; carries the failing line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
