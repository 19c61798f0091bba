"""The conftest.py file allows us to initialise test functions
that can be repeatedly used across several tests.
"""

import math
from collections.abc import Callable

import numpy as np
import pytest

from twinsieve import ModelConfig, TableRow, run_table


ORACLE_LIMIT = 10**5


def trial_division(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@pytest.fixture(scope="session")
def is_prime() -> Callable[[int], bool]:
    """Primality by trial division, independent of any sieve."""
    return trial_division


@pytest.fixture(scope="session")
def twin_staircase() -> np.ndarray:
    """``staircase[x]`` is the number of primes ``p <= x`` with ``p + 2`` prime,
    for every ``x <= 10**5``, found by trial division."""
    flags = np.array([trial_division(n) for n in range(ORACLE_LIMIT + 3)])
    starts = flags[:-2] & flags[2:]
    return np.cumsum(starts)


@pytest.fixture(scope="session")
def default_config() -> ModelConfig:
    return ModelConfig()


@pytest.fixture(scope="session")
def default_rows(default_config: ModelConfig) -> list[TableRow]:
    """The comparison table at x = 10**4 ... 10**7 with every default."""
    return run_table(default_config)
