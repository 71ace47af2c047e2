"""Exception types shared across the package.

Every error raised deliberately by dupseek derives from DupseekError, so
callers (the CLI in particular) can distinguish our failures from bugs.
"""

from __future__ import annotations


class DupseekError(Exception):
    """Base class for all errors raised by this package."""


class XmlParseError(DupseekError):
    """The export is not well-formed XML, or uses an unsupported encoding."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class RecordError(DupseekError):
    """A bug element inside an otherwise well-formed export is unusable."""

    def __init__(self, message: str, element_index: int):
        super().__init__(f"bug element {element_index}: {message}")
        self.element_index = element_index


class DuplicateIdError(DupseekError):
    """The same report id appeared more than once."""

    def __init__(self, ids):
        self.ids = tuple(ids)
        super().__init__("duplicate report id(s): " + ", ".join(self.ids))


class StoreNotFoundError(DupseekError):
    """The corpus store file does not exist."""

    def __init__(self, path):
        super().__init__(f"corpus store not found: {path}")
        self.path = str(path)


class StoreFormatError(DupseekError):
    """The corpus store file exists but does not follow the store format."""

    def __init__(self, message: str, path, line: int | None = None):
        where = f"{path}" if line is None else f"{path}:{line}"
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.line = line


class StoreIOError(DupseekError):
    """Reading or writing a store-related file failed at the OS level."""

    def __init__(self, path, cause: OSError):
        super().__init__(f"{path}: {cause}")
        self.path = str(path)


class EmptyVocabularyError(DupseekError):
    """Preprocessing left no terms at all to index."""

    def __init__(self):
        super().__init__("empty vocabulary")


class ParameterError(DupseekError):
    """An operation was called with an argument outside its domain."""


class UndefinedMetricError(DupseekError):
    """A metric has no defined value for the given inputs."""
