"""Exception classes raised when an input or a computation leaves the supported range.

Classes:
    ResourceLimitError
    SieveLimitError
    RationalBlowupError
    SeriesSingularityError
    DomainError
    PowerSumMismatchError
"""

import logging


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured resource limit."""


class SieveLimitError(ResourceLimitError):
    """The requested sieve bound is above the memory-safe cap.

    Args:
        limit (int): The requested inclusive bound.
        cap (int): The configured cap.
    """

    def __init__(self, limit: int, cap: int) -> None:
        self.limit = limit
        self.cap = cap
        message = f"Sieve bound {limit} exceeds the configured cap of {cap}.\n\n"
        logging.error(message)
        super().__init__(message)


class RationalBlowupError(ResourceLimitError):
    """The exact-rational backend was asked for more odd primes than its hard cap allows."""

    def __init__(self, z: int, t_max: int, cap: int) -> None:
        self.z = z
        self.t_max = t_max
        self.cap = cap
        message = (
            f"Exact-rational series at z={z}, t_max={t_max} is above the hard cap z <= {cap}."
            " Use the compensated-float backend or raise the cap.\n\n"
        )
        logging.error(message)
        super().__init__(message)


class SeriesSingularityError(ZeroDivisionError):
    """The truncated denominator series vanished, so the correction factor is undefined."""

    def __init__(self, z: int, t_max: int) -> None:
        self.z = z
        self.t_max = t_max
        message = f"Truncated denominator is zero at z={z}, t_max={t_max}.\n\n"
        logging.error(message)
        super().__init__(message)


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""

    def __init__(self, message: str) -> None:
        logging.error(message)
        super().__init__(message)


class PowerSumMismatchError(ValueError):
    """The power sums handed to Newton's identities do not describe a single variable set."""

    def __init__(self, detail: str) -> None:
        message = f"Inconsistent power sums: {detail}.\n\n"
        logging.error(message)
        super().__init__(message)
