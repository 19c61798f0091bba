"""Prime generation, exact twin prime counting and reciprocal power sums over odd primes.

The sieve works on odd numbers only: slot ``j`` of a segment stands for the odd number
``2 * j + 1``, so a segment of ``n`` slots covers ``2 * n`` integers. Segments only depend
on the base primes up to the square root of the bound, so they can be sieved in any order
(or concurrently) and merged afterwards.

Classes:
    Backend
    PrimeTable
    PowerSum

Functions:
    sieve_primes
    count_twin_primes
    odd_primes_up_to
    power_sum
    resolve_backend
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from numpy.typing import NDArray

from ._exceptions import DomainError, SieveLimitError


DEFAULT_SIEVE_CAP = 10**10
DEFAULT_SEGMENT_SIZE = 1 << 18  # odd slots, 256 KiB of flags
RATIONAL_BACKEND_MAX_Z = 10**3


class Backend(str, Enum):
    """Arithmetic used for sums over prime reciprocals."""

    RATIONAL = "exact-rational"
    FLOAT = "compensated-float"


def resolve_backend(z: int, backend: Backend | str | None = None) -> Backend:
    """Return ``backend`` or, when it is None, the default for the sieving limit ``z``:
    exact rationals up to ``z = 1000`` and compensated floats above."""
    if backend is not None:
        return Backend(backend)
    return Backend.RATIONAL if z <= RATIONAL_BACKEND_MAX_Z else Backend.FLOAT


@dataclass(frozen=True)
class PrimeTable:
    """Immutable table of all primes up to ``limit``.

    Only the odd numbers are stored, as a bit-packed flag array in which bit ``j`` tells
    whether ``2 * j + 1`` is prime. The prime 2 is implicit.

    Args:
        limit (int): Inclusive upper bound of the table.
        odd_bits (NDArray[np.uint8]): Packed odd-only primality flags.
    """

    limit: int
    odd_bits: NDArray[np.uint8] = field(repr=False, compare=False)

    @cached_property
    def _odd_flags(self) -> NDArray[np.bool_]:
        flags = np.unpackbits(self.odd_bits, count=(self.limit + 1) // 2).astype(bool)
        flags.flags.writeable = False
        return flags

    @cached_property
    def primes(self) -> NDArray[np.int64]:
        """Ordered array with every prime up to ``limit``."""
        odd = 2 * np.flatnonzero(self._odd_flags).astype(np.int64) + 1
        primes = np.concatenate([np.array([2], dtype=np.int64), odd]) if self.limit >= 2 else odd
        primes.flags.writeable = False
        return primes

    def odd_primes(self, z: int | None = None) -> NDArray[np.int64]:
        """Primes ``3 <= p <= z`` (``z`` defaults to the table limit)."""
        primes = self.primes[1:]
        if z is None or z >= self.limit:
            return primes
        return primes[: np.searchsorted(primes, z, side="right")]

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def __contains__(self, n: object) -> bool:
        if not isinstance(n, int | np.integer) or n < 2 or n > self.limit:
            return False
        if n == 2:
            return True
        return n % 2 == 1 and bool(self._odd_flags[n // 2])


@dataclass(frozen=True)
class PowerSum:
    """The sum of ``p**-k`` over the odd primes ``p <= z``.

    Args:
        k (int): Exponent of the reciprocals.
        z (int): Sieving limit.
        value (Fraction | float): The sum, exact under the rational backend.
        backend (Backend): Arithmetic the value was computed with.
    """

    k: int
    z: int
    value: Fraction | float
    backend: Backend


def _check_cap(limit: int, cap: int) -> None:
    if limit < 0:
        raise DomainError(f"Sieve bound must be nonnegative, got {limit}.\n\n")
    if limit > cap:
        raise SieveLimitError(limit, cap)


def _base_odd_primes(limit: int) -> NDArray[np.int64]:
    """Odd primes up to ``limit`` from a plain (unsegmented) sieve."""
    if limit < 3:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime)[1:].astype(np.int64)


def _segment_bounds(limit: int, segment_size: int | None) -> list[tuple[int, int]]:
    """Half-open ranges of odd slots covering ``1, 3, ..., limit``."""
    slots = (limit + 1) // 2
    if slots == 0:
        return []
    if segment_size is None:
        return [(0, slots)]
    # Whole bytes per segment, so packed segments can be concatenated.
    step = max(8, -(-segment_size // 8) * 8)
    return [(start, min(start + step, slots)) for start in range(0, slots, step)]


def _sieve_segment(start: int, stop: int, base: NDArray[np.int64]) -> NDArray[np.bool_]:
    """Primality flags for the odd numbers ``2*start+1, ..., 2*stop-1``."""
    low = 2 * start + 1
    high = 2 * stop - 1
    flags = np.ones(stop - start, dtype=bool)
    if start == 0:
        flags[0] = False  # 1 is not prime
    for p in base.tolist():
        square = p * p
        if square > high:
            break
        first = max(square, -(-low // p) * p)
        if first % 2 == 0:
            first += p
        flags[(first - low) // 2 :: p] = False
    return flags


def _map_segments(
    func: Callable[[tuple[int, int]], object], bounds: list[tuple[int, int]], workers: int
) -> list:
    """Apply ``func`` to every segment, keeping segment order whatever the worker count."""
    if workers <= 1 or len(bounds) <= 1:
        return [func(bound) for bound in bounds]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, bounds))


def sieve_primes(
    limit: int,
    *,
    segment_size: int | None = DEFAULT_SEGMENT_SIZE,
    cap: int = DEFAULT_SIEVE_CAP,
    workers: int = 1,
) -> PrimeTable:
    """Build the table of all primes up to ``limit`` with a segmented sieve of Eratosthenes.

    Args:
        limit (int): Inclusive bound.
        segment_size (int | None, optional): Odd slots per segment; None disables
            segmentation. Defaults to 2**18.
        cap (int, optional): Largest bound accepted. Defaults to 10**10.
        workers (int, optional): Threads sieving segments concurrently. Defaults to 1.

    Raises:
        SieveLimitError: ``limit`` is above ``cap``.

    Returns:
        PrimeTable: The primes up to ``limit``.
    """
    _check_cap(limit, cap)
    base = _base_odd_primes(math.isqrt(limit))
    bounds = _segment_bounds(limit, segment_size)
    logging.info(f"Sieving up to {limit} in {len(bounds)} segment(s).")

    packed = _map_segments(
        lambda bound: np.packbits(_sieve_segment(*bound, base)), bounds, workers
    )
    odd_bits = np.concatenate(packed) if packed else np.empty(0, dtype=np.uint8)
    odd_bits.flags.writeable = False
    return PrimeTable(limit=limit, odd_bits=odd_bits)


def count_twin_primes(
    x: int,
    *,
    segment_size: int | None = DEFAULT_SEGMENT_SIZE,
    cap: int = DEFAULT_SIEVE_CAP,
    workers: int = 1,
) -> int:
    """Count the primes ``p <= x`` for which ``p + 2`` is also prime.

    The partner ``p + 2`` may exceed ``x``; at every tabulated power of ten this gives
    the same count as requiring both members to be at most ``x``. The range is streamed
    segment by segment, so no full prime table is held in memory.

    Raises:
        DomainError: ``x < 2``.
        SieveLimitError: ``x + 2`` is above ``cap``.
    """
    if x < 2:
        raise DomainError(f"Twin prime counts need x >= 2, got {x}.\n\n")
    limit = x + 2
    _check_cap(limit, cap)
    base = _base_odd_primes(math.isqrt(limit))

    def summarize(bound: tuple[int, int]) -> tuple[int, bool, bool]:
        flags = _sieve_segment(*bound, base)
        return int(np.count_nonzero(flags[:-1] & flags[1:])), bool(flags[0]), bool(flags[-1])

    summaries = _map_segments(summarize, _segment_bounds(limit, segment_size), workers)
    count = 0
    previous_last = False
    for inner, first, last in summaries:
        count += inner + (previous_last and first)
        previous_last = last
    return count


@lru_cache(maxsize=128)
def odd_primes_up_to(z: int) -> tuple[int, ...]:
    """Odd primes ``3 <= p <= z`` in ascending order (empty when ``z < 3``)."""
    if z < 3:
        return ()
    return tuple(int(p) for p in sieve_primes(z).odd_primes())


def power_sum(k: int, z: int, backend: Backend | str | None = None) -> PowerSum:
    """Sum of ``p**-k`` over the odd primes ``p <= z``.

    Args:
        k (int): Positive exponent.
        z (int): Sieving limit.
        backend (Backend | str | None, optional): Exact rationals or compensated
            floats; None picks by ``z``. Defaults to None.

    Returns:
        PowerSum: The sum together with its parameters.
    """
    if k < 1:
        raise DomainError(f"Power sum exponent must be positive, got {k}.\n\n")
    backend = resolve_backend(z, backend)
    primes = odd_primes_up_to(z)
    if backend is Backend.RATIONAL:
        value: Fraction | float = sum((Fraction(1, p**k) for p in primes), Fraction(0))
    else:
        value = math.fsum(np.asarray(primes, dtype=float) ** -k)
    return PowerSum(k=k, z=z, value=value, backend=backend)
