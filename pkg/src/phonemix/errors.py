"""Exception types shared across the package.

User/input problems raise subclasses of :class:`PhonemixError` (or plain
``ValueError`` for bad arguments); the CLI maps those to exit code 2.
Anything else is treated as an internal error (exit code 1).
"""


class PhonemixError(Exception):
    """Base class for errors caused by user input or malformed data."""


class ParseError(PhonemixError):
    """Malformed input document. Carries a position when one is known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaError(PhonemixError):
    """Well-formed document that violates the supported subset."""


class MissingTierError(SchemaError):
    """Requested annotation tier is not present in the document."""


class LexiconError(PhonemixError):
    """Syllable or phoneme that the lexicon cannot resolve."""


class AlignmentError(PhonemixError):
    """Score pairs and annotation track cannot be brought together."""
