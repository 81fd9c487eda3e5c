class ParseError(ValueError):
    """Malformed input text (ragged rows, bad numbers, empty cells)."""


class UsageError(ValueError):
    """A call that violates a documented precondition or option contract."""
