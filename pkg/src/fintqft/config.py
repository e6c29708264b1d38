"""Resource caps and the exception hierarchy shared across the package."""

import os

DEFAULT_ENUM_CAP = 10**8
DEFAULT_APEX_CAP = 10**7


class TQFTError(Exception):
    """Base class for user-facing errors (bad input, failed validation)."""


class ArityError(TQFTError, ValueError):
    pass


class ValidationError(TQFTError, ValueError):
    pass


class ResourceLimitError(TQFTError, RuntimeError):
    """An enumeration would exceed the configured cap."""


def enum_cap():
    """Cap on brute-force homomorphism trials; ``TQFT_ENUM_CAP`` overrides."""
    value = os.environ.get("TQFT_ENUM_CAP")
    if value:
        return int(value)
    return DEFAULT_ENUM_CAP


def apex_cap():
    return DEFAULT_APEX_CAP
