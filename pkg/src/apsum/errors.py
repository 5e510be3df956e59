"""Exception types shared across the package.

Each error class carries the process exit code the CLI reports when it
surfaces: 1 for failed verifications, 2 for malformed usage, 3 for broken
internal invariants (always a bug, never a user error).
"""


class ApsumError(Exception):
    exit_code = 2


class UsageError(ApsumError):
    """Malformed input or arguments outside an operation's contract."""

    exit_code = 2


class BudgetExceededError(UsageError):
    """An enumeration would exceed its configured size budget."""

    exit_code = 2


class VerificationError(ApsumError):
    """A checked property does not hold for the given data."""

    exit_code = 1


class SparsityViolationError(VerificationError):
    """A set exceeds its claimed per-window element bound."""


class DecodeFailureError(VerificationError):
    """No progression element lies in the decoding window; the caller's
    heavy-sum precondition was violated."""


class InternalInvariantError(ApsumError):
    """A condition the theory guarantees has failed; report loudly."""

    exit_code = 3
