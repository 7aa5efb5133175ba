"""Exception hierarchy. Exit codes used by the CLI hang off these classes."""


class BlockVerifyError(Exception):
    exit_code = 1


class InputError(BlockVerifyError, ValueError):
    """Malformed user input: bad permutation, schema violation, bad config."""

    exit_code = 2


class ResourceLimitError(BlockVerifyError):
    """A configured size bound was exceeded."""

    exit_code = 3


class DomainError(BlockVerifyError, ArithmeticError):
    """Value outside the domain of an operation, e.g. reducing a non-integer mod p."""

    exit_code = 1


class PreconditionError(BlockVerifyError):
    """A mathematical hypothesis of an operation does not hold for the given input."""

    exit_code = 1


class InvariantFailure(BlockVerifyError, AssertionError):
    """A runtime consistency check failed. Signals a bug or a theorem violation."""

    exit_code = 1
