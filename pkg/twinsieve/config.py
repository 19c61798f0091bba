"""Validated configuration of an experiment run.

The ModelConfig class uses Pydantic so that values typed on the command line (``1e6``,
``exact-rational``, ...) are checked and normalised before any sieving starts. Its
defaults are the standard protocol: ``z = floor(x**(1/4))`` and series truncated at
``t = 4``.

Classes:
    OutputFormat
    ModelConfig

Functions:
    parse_x_value
"""

from __future__ import annotations

import logging
from decimal import Decimal, InvalidOperation
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_core.core_schema import ValidationInfo

from .model import DEFAULT_HL_CUTOFF, DEFAULT_T_MAX, DEFAULT_THETA, HLMode
from .primes import DEFAULT_SEGMENT_SIZE, DEFAULT_SIEVE_CAP, Backend


DEFAULT_X_VALUES = (10**4, 10**5, 10**6, 10**7)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    PRETTY = "pretty-table"


def parse_x_value(value: str | int | float) -> int:
    """Read a positive integer written as ``10000``, ``1e4`` or ``1E4``."""
    if isinstance(value, bool):
        raise ValueError(f"\n{value!r} is not an integer.\n\n")
    if isinstance(value, int):
        return value
    try:
        number = Decimal(str(value).strip().replace("_", ""))
    except InvalidOperation as exc:
        raise ValueError(f"\n{value!r} is not a number.\n\n") from exc
    if not number.is_finite() or number != number.to_integral_value():
        raise ValueError(f"\n{value!r} is not an integer.\n\n")
    return int(number)


class ModelConfig(BaseModel):
    """All parameters of a table or sweep run; every output echoes them.

    Args:
        x_values (list[int]): Bounds of the twin prime counts, sorted and de-duplicated.
        theta (float): Exponent of the sieving limit ``z = floor(x**theta)``.
        t_max (int): Truncation degree of both series.
        backend (Backend | None): Arithmetic of the series; None picks per ``z``.
        hl_mode (HLMode): Hardy-Littlewood prediction with the plain or integral density.
        hl_cutoff (int): Prime bound of the ``2C_2`` partial product.
        output_format (OutputFormat): csv, json or pretty-table.
        sieve_cap (int): Largest sieve bound accepted.
        segment_size (int): Odd slots per sieve segment.
        workers (int): Threads used for sieve segments and table rows.
    """

    model_config = ConfigDict(frozen=True)

    x_values: list[int] = Field(default_factory=lambda: list(DEFAULT_X_VALUES))
    theta: float = DEFAULT_THETA
    t_max: int = DEFAULT_T_MAX
    backend: Backend | None = None
    hl_mode: HLMode = HLMode.INTEGRAL
    hl_cutoff: int = DEFAULT_HL_CUTOFF
    output_format: OutputFormat = OutputFormat.CSV
    sieve_cap: int = DEFAULT_SIEVE_CAP
    segment_size: int = DEFAULT_SEGMENT_SIZE
    workers: int = 1

    @field_validator("x_values", mode="before")
    def parse_x_values(cls, values: str | list, info: ValidationInfo) -> list[int]:
        """Accept a comma separated string as well as a list."""
        if isinstance(values, str):
            values = [item for item in values.split(",") if item.strip()]
        return [parse_x_value(value) for value in values]

    @field_validator("x_values")
    def positive_sorted(cls, values: list[int], info: ValidationInfo) -> list[int]:
        if not values:
            raise ValueError(f"\n{info.field_name} must contain at least one value.\n\n")
        if any(value < 1 for value in values):
            raise ValueError(f"\n{info.field_name} must be positive integers.\n\n")
        logging.info(f"{info.field_name} = {sorted(set(values))}")
        return sorted(set(values))

    @field_validator("theta")
    def open_unit_interval(cls, theta: float, info: ValidationInfo) -> float:
        if not 0 < theta < 1:
            raise ValueError(f"\n{info.field_name} must lie strictly between 0 and 1.\n\n")
        return theta

    @field_validator("t_max")
    def nonnegative(cls, value: int, info: ValidationInfo) -> int:
        if value < 0:
            raise ValueError(f"\n{info.field_name} must be nonnegative.\n\n")
        return value

    @field_validator("hl_cutoff")
    def odd_prime_cutoff(cls, value: int, info: ValidationInfo) -> int:
        if value < 3:
            raise ValueError(f"\n{info.field_name} must be at least 3.\n\n")
        return value

    @field_validator("sieve_cap", "segment_size", "workers")
    def positive(cls, value: int, info: ValidationInfo) -> int:
        if value < 1:
            raise ValueError(f"\n{info.field_name} must be positive.\n\n")
        return value

    def snapshot(self) -> dict:
        """JSON-ready copy of every field."""
        return self.model_dump(mode="json")
