"""Exact verification of block-theoretic counting identities on small permutation groups."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BlockVerifyError,
    DomainError,
    InputError,
    InvariantFailure,
    PreconditionError,
    ResourceLimitError,
)

__all__ = [
    "__version__",
    "BlockVerifyError",
    "DomainError",
    "InputError",
    "InvariantFailure",
    "PreconditionError",
    "ResourceLimitError",
]
