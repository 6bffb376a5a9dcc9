"""Exception types shared across the package.

Grouped by how the CLI maps them to exit codes: usage/validation errors
exit 2, failed numerical verdicts exit 3, resource-limit errors exit 4.
"""


class PsqrError(Exception):
    """Base class for all package-specific errors."""


# -- usage / validation (CLI exit 2) --

class EmptySet(PsqrError):
    """The element set is empty."""


class DuplicateElement(PsqrError):
    """The element set contains a repeated value."""


class BasisIncomplete(PsqrError):
    """An odd-exponent prime of the input lies outside the given basis."""


class EvenModulus(PsqrError):
    """Jacobi symbol requested for an even or nonpositive modulus."""


class NotPrime(PsqrError):
    """A prime argument failed its primality check."""


class BadPrimeFile(PsqrError):
    """Prime-list file is malformed: unsorted, non-integer, or composite entry."""


class WindowTooSmall(PsqrError):
    """Census window does not dominate the product of the set elements."""


class PreconditionViolated(PsqrError):
    """A documented precondition of an operation was not met."""


# -- numerical verdicts (CLI exit 3) --

class CheckFailed(PsqrError):
    """A self-check (identity, majorant, rearrangement) exceeded tolerance."""


# -- resource limits (CLI exit 4) --

class SetTooLarge(PsqrError):
    """Set size exceeds the supported enumeration ceiling."""


class Overflow(PsqrError):
    """An intermediate value exceeds the configured integer-width budget."""


class XTooSmallWarning(UserWarning):
    """Asymptotic main term evaluated below its validity threshold."""
