"""Exception types shared across the package."""


class CheblabError(Exception):
    """Base class for all package-specific errors."""


class NotPrimeError(CheblabError, ValueError):
    """A parameter that must be prime is composite."""


class TooSmallError(CheblabError, ValueError):
    """A parameter is below the supported range."""


class MixedTablesError(CheblabError, ValueError):
    """Characters from different group tables were combined."""


class BruteForceTooLargeError(CheblabError, ValueError):
    """Enumeration size exceeds the brute-force limit."""


class NonPositiveShapeError(CheblabError, ValueError):
    """A Gaussian shape parameter must be positive."""


class RamifiedError(CheblabError, ValueError):
    """The prime divides a*p and has no unramified Frobenius class."""


class AdmissibilityError(CheblabError, ValueError):
    """The (a, p) pair violates an admissibility condition."""


class SieveRangeError(CheblabError, OverflowError):
    """Requested sieve bound exceeds the supported range."""


class DatasetFormatError(CheblabError, ValueError):
    """Base class for dataset file format problems."""


class BadMagicError(DatasetFormatError):
    """Dataset file does not start with the expected magic header."""


class VersionMismatchError(DatasetFormatError):
    """Dataset file uses an unsupported format version."""


class ChecksumMismatchError(DatasetFormatError):
    """Dataset file checksum does not match its contents."""


class TruncatedFileError(DatasetFormatError):
    """Dataset file ends before the trailer line."""


class ConfigMismatchError(CheblabError, ValueError):
    """Loaded dataset parameters differ from the expected ones."""


class InsufficientSieveDepthError(CheblabError, ValueError):
    """The evaluation window extends beyond the sieved range."""


class CombinatorialBlowupError(CheblabError, ValueError):
    """A character-tuple expansion exceeds the configured budget."""


class ZeroClassFunctionError(CheblabError, ValueError):
    """An operation requires a non-zero class function."""


class PreconditionError(CheblabError, ValueError):
    """A stated precondition of a numeric check is not met."""
