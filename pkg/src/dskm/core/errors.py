"""Exceptions raised for invalid input (never for algorithmic FAIL)."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class StreamFormatError(DomainError):
    """A stream or coreset file is malformed or violates the stream model."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
