r"""Sieve correction factors and twin prime predictors.

The heuristic model counts twin primes up to $x$ as

$$ \pi_2(x) \approx \mathcal{D}(z) \frac{x}{(\ln x)^2}, \qquad
   \mathcal{D}(z) = 2 \prod_{3 \le p \le z} \frac{1 - 2/p}{(1 - 1/p)^2}, $$

and replaces both products by their expansions in $f(t;z)$ truncated at degree $t_{max}$:

$$ \mathcal{D}_{approx}(z) = 2\, \frac{\sum_{t \le t_{max}} (-2)^t f(t;z)}
   {\left(\sum_{t \le t_{max}} (-1)^t f(t;z)\right)^2}. $$

The Hardy-Littlewood predictions use the partial product of $2C_2$, either with the
plain $x / (\ln x)^2$ or with $\int_2^x dt / (\ln t)^2$.

Classes:
    CorrectionMode
    HLMode
    PredictionMethod
    CorrectionFactor
    HLConstant
    Prediction

Functions:
    sieving_limit
    correction_exact
    correction_series
    hl_constant
    li2_quadrature
    li2_identity
    li2_integral
    predict_this_work
    predict_hl
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import pairwise

import mpmath
import numpy as np
from scipy.integrate import quad

from ._exceptions import DomainError, SeriesSingularityError
from .primes import Backend, odd_primes_up_to, resolve_backend, sieve_primes
from .symmetric import esp_direct


DEFAULT_THETA = 0.25
DEFAULT_T_MAX = 4
DEFAULT_HL_CUTOFF = 10**7
THETA_MAX_DENOMINATOR = 1000
THETA_WORKING_DPS = 60
LI2_ROUTE_TOLERANCE = 1e-9


class CorrectionMode(str, Enum):
    EXACT_PRODUCT = "exact-product"
    TRUNCATED_SERIES = "truncated-series"


class HLMode(str, Enum):
    """How the Hardy-Littlewood density is integrated up to ``x``."""

    PLAIN = "plain"
    INTEGRAL = "integral"


class PredictionMethod(str, Enum):
    THIS_WORK = "this-work"
    HL_PLAIN = "hl-plain"
    HL_INTEGRAL = "hl-integral"


@dataclass(frozen=True)
class CorrectionFactor:
    """Correction factor ``2 N / D**2`` together with its numerator and denominator.

    Args:
        z (int): Sieving limit.
        mode (CorrectionMode): Exact product or truncated series.
        backend (Backend): Arithmetic used.
        numerator (Fraction | float): ``prod (1 - 2/p)`` or its truncated expansion.
        denominator (Fraction | float): ``prod (1 - 1/p)`` or its truncated expansion.
        value (Fraction | float): ``2 * numerator / denominator**2``.
        t_max (int | None): Truncation degree, series mode only.
    """

    z: int
    mode: CorrectionMode
    backend: Backend
    numerator: Fraction | float
    denominator: Fraction | float
    value: Fraction | float
    t_max: int | None = None


@dataclass(frozen=True)
class HLConstant:
    """Partial product ``2 prod_{2 < p <= cutoff} (1 - 1/(p-1)**2)`` approximating ``2 C_2``."""

    cutoff: int
    value: float


@dataclass(frozen=True)
class Prediction:
    """One predicted value of the twin prime counting function.

    Args:
        x (int): Bound of the count.
        method (PredictionMethod): Predictor used.
        raw (float): Unrounded prediction.
        rounded (int): Nearest integer to ``raw``.
        config (dict): Parameters the prediction depends on.
        factor (float | None): Correction factor used, for the this-work predictor.
    """

    x: int
    method: PredictionMethod
    raw: float
    rounded: int
    config: dict = field(default_factory=dict)
    factor: float | None = None


def round_nearest(value: float) -> int:
    """Round half up (table entries are integers obtained this way)."""
    return math.floor(value + 0.5)


def sieving_limit(x: int, theta: float = DEFAULT_THETA) -> int:
    """Return ``floor(x**theta)`` computed exactly.

    When ``theta`` is the float nearest to a fraction ``a/b`` with ``b <= 1000`` (0.25, 1/3,
    0.4, ...) the result is the largest integer ``z`` with ``z**b <= x**a``, so
    ``floor(10**4 ** 0.25)`` stays at 10. Any other ``theta`` is taken at its exact binary
    value and the power is evaluated with mpmath at ``THETA_WORKING_DPS`` digits.
    """
    if not 0 < theta < 1:
        raise DomainError(f"theta must lie strictly between 0 and 1, got {theta}.\n\n")
    ratio = Fraction(theta).limit_denominator(THETA_MAX_DENOMINATOR)
    if float(ratio) != theta:
        with mpmath.workdps(THETA_WORKING_DPS):
            return int(mpmath.floor(mpmath.power(mpmath.mpf(x), mpmath.mpf(theta))))
    power, root = ratio.numerator, ratio.denominator
    target = x**power
    z = int(x ** float(ratio))
    while z > 0 and z**root > target:
        z -= 1
    while (z + 1) ** root <= target:
        z += 1
    return z


def _log_sum(offsets: np.ndarray) -> float:
    """Compensated ``sum log1p(-offsets)``."""
    return math.fsum(np.log1p(-offsets))


def correction_exact(z: int, backend: Backend | str | None = None) -> CorrectionFactor:
    """Correction factor ``2 prod_{3 <= p <= z} (1 - 2/p) / (1 - 1/p)**2`` (2 when empty).

    The floating backend sums logarithms with ``math.fsum`` so that every new prime
    lowers the value, even for factors within ``1e-12`` of one.
    """
    backend = resolve_backend(z, backend)
    primes = odd_primes_up_to(z)
    if backend is Backend.RATIONAL:
        numerator = math.prod((Fraction(p - 2, p) for p in primes), start=Fraction(1))
        denominator = math.prod((Fraction(p - 1, p) for p in primes), start=Fraction(1))
        value: Fraction | float = 2 * numerator / denominator**2
    else:
        array = np.asarray(primes, dtype=float)
        log_numerator = _log_sum(2.0 / array)
        log_denominator = _log_sum(1.0 / array)
        numerator, denominator = math.exp(log_numerator), math.exp(log_denominator)
        value = 2.0 * math.exp(log_numerator - 2.0 * log_denominator)
    return CorrectionFactor(z, CorrectionMode.EXACT_PRODUCT, backend, numerator, denominator, value)


def correction_series(
    z: int, t_max: int = DEFAULT_T_MAX, backend: Backend | str | None = None
) -> CorrectionFactor:
    """Correction factor from the expansions of both products truncated at ``t_max``.

    Raises:
        SeriesSingularityError: The truncated denominator is zero.
    """
    series = esp_direct(z, t_max, backend)
    numerator = series.alternating_sum(2)
    denominator = series.alternating_sum(1)
    if denominator == 0:
        raise SeriesSingularityError(z, t_max)
    value = 2 * numerator / denominator**2
    return CorrectionFactor(
        z, CorrectionMode.TRUNCATED_SERIES, series.backend, numerator, denominator, value, t_max
    )


@lru_cache(maxsize=16)
def hl_constant(cutoff: int = DEFAULT_HL_CUTOFF) -> HLConstant:
    """Partial product of the twin prime constant over the odd primes up to ``cutoff``.

    No tail correction is applied; at the default cutoff of ``10**7`` the omitted
    factors change the value by about ``1e-8``.
    """
    if cutoff < 3:
        raise DomainError(f"The partial product needs a cutoff >= 3, got {cutoff}.\n\n")
    primes = sieve_primes(cutoff).odd_primes().astype(float)
    value = 2.0 * math.exp(_log_sum(1.0 / (primes - 1.0) ** 2))
    logging.info(f"2C2 partial product up to {cutoff}: {value:.10f}")
    return HLConstant(cutoff=cutoff, value=value)


def _inverse_log_squared(t: float) -> float:
    return 1.0 / math.log(t) ** 2


def li2_quadrature(x: float) -> float:
    """``int_2^x dt / (ln t)**2`` by adaptive quadrature over the octaves ``[2**k, 2**(k+1)]``."""
    if x < 2:
        raise DomainError(f"The integral starts at 2, got x={x}.\n\n")
    edges = [2.0]
    while 2.0 * edges[-1] < x:
        edges.append(2.0 * edges[-1])
    edges.append(float(x))
    pieces = [
        quad(_inverse_log_squared, low, high, epsabs=0.0, epsrel=1e-12, limit=200)[0]
        for low, high in pairwise(edges)
    ]
    return math.fsum(pieces)


def li2_identity(x: float, dps: int = 30) -> float:
    """``int_2^x dt / (ln t)**2 = li(x) - li(2) - x / ln x + 2 / ln 2``."""
    if x < 2:
        raise DomainError(f"The integral starts at 2, got x={x}.\n\n")
    with mpmath.workdps(dps):
        x_mp = mpmath.mpf(x)
        two = mpmath.mpf(2)
        value = mpmath.li(x_mp) - mpmath.li(two) - x_mp / mpmath.log(x_mp) + two / mpmath.log(two)
        return float(value)


def li2_integral(x: float) -> float:
    """``int_2^x dt / (ln t)**2``, cross-checked between quadrature and the ``li`` identity.

    Returns the identity route; a relative disagreement above ``1e-9`` is logged.
    """
    exact = li2_identity(x)
    numeric = li2_quadrature(x)
    if exact and abs(numeric - exact) > LI2_ROUTE_TOLERANCE * abs(exact):
        logging.warning(f"li2 routes disagree at x={x}: quadrature {numeric}, identity {exact}.")
    return exact


def predict_this_work(
    x: int,
    theta: float = DEFAULT_THETA,
    t_max: int = DEFAULT_T_MAX,
    backend: Backend | str | None = None,
) -> Prediction:
    """Predict ``pi_2(x)`` as ``D_approx(z) x / (ln x)**2`` with ``z = floor(x**theta)``.

    Raises:
        DomainError: ``x < 10`` or ``theta`` outside ``(0, 1)``.
        SeriesSingularityError: The truncated denominator vanishes.
    """
    if x < 10:
        raise DomainError(f"Predictions need x >= 10, got {x}.\n\n")
    z = sieving_limit(x, theta)
    factor = correction_series(z, t_max, backend)
    raw = float(factor.value) * x / math.log(x) ** 2
    config = {"theta": theta, "t_max": t_max, "backend": factor.backend.value, "z": z}
    return Prediction(
        x, PredictionMethod.THIS_WORK, raw, round_nearest(raw), config, float(factor.value)
    )


def predict_hl(
    x: int, mode: HLMode | str = HLMode.INTEGRAL, constant: HLConstant | None = None
) -> Prediction:
    """Hardy-Littlewood prediction ``2C_2 x / (ln x)**2`` (plain) or
    ``2C_2 int_2^x dt / (ln t)**2`` (integral)."""
    if x < 3:
        raise DomainError(f"Hardy-Littlewood predictions need x >= 3, got {x}.\n\n")
    mode = HLMode(mode)
    constant = hl_constant() if constant is None else constant
    if mode is HLMode.PLAIN:
        raw = constant.value * x / math.log(x) ** 2
        method = PredictionMethod.HL_PLAIN
    else:
        raw = constant.value * li2_integral(x)
        method = PredictionMethod.HL_INTEGRAL
    config = {"hl_mode": mode.value, "hl_cutoff": constant.cutoff}
    return Prediction(x, method, raw, round_nearest(raw), config)
