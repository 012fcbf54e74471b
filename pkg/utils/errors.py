#!/usr/bin/env python3
"""
Exception hierarchy shared by the library and the command-line pipeline
"""


class EntanglementError(Exception):
    """Base class for every error raised by this package"""


class ValidationError(EntanglementError, ValueError):
    """A precondition or invariant of an operation was violated"""


class FormatError(ValidationError):
    """
    A matrix, state or config file could not be parsed

    Args:
        message (str): What went wrong
        source (str): File name (or "<string>")
        line (int): 1-based line number of the offending line, 0 if unknown
    """

    def __init__(self, message: str, source: str = "<string>", line: int = 0):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")
