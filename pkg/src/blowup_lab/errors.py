"""Exception types shared across the package.

Every operation distinguishes malformed input text (ParseError) from
structurally valid input that violates an operation's preconditions
(PreconditionError).  The service maps these to HTTP 400 responses with a
machine-readable code, and the CLI maps them to exit codes 2 and 3.
"""


class ParseError(ValueError):
    """Input text could not be decoded (edge list, graph6, weight file, rational)."""


class PreconditionError(ValueError):
    """Structurally valid input that violates an operation's contract."""
