"""Exception hierarchy shared by every module of the package."""


class ReorderError(Exception):
    """Base class for all package errors."""

    #: process exit code used by the command-line front end
    exit_code = 2


class DimensionMismatch(ReorderError, ValueError):
    pass


class ParseError(ReorderError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedField(ParseError):
    pass


class UnsupportedFormat(ParseError):
    pass


class FetchError(ReorderError):
    def __init__(self, message, url=None):
        if url is not None:
            message = f"{message} (url: {url})"
        super().__init__(message)
        self.url = url


class CorruptArchive(FetchError):
    pass


class IncompleteRecord(ReorderError, ValueError):
    pass


class ConfigError(ReorderError, ValueError):
    exit_code = 1


class EmptyDataset(ReorderError, ValueError):
    pass


class SchemaError(ReorderError, ValueError):
    pass


class UnsupportedVersion(ReorderError):
    pass


class ReportError(ReorderError, ValueError):
    pass
