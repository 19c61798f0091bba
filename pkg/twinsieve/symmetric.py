r"""Elementary symmetric polynomials of odd-prime reciprocals.

For a sieving limit $z$ the functions

$$ f(t;z) = \sum_{3 \le p_1 < \dots < p_t \le z} \frac{1}{p_1 \cdots p_t}, \qquad f(0;z) = 1, $$

are evaluated by three independent routes (a degree-by-degree dynamic program, Newton's
identities on the power sums $S_k(z)$, and the recursion over the largest prime), under
exact rational or compensated floating point arithmetic. The module also holds the
leading-order asymptotic $f(t;z) \approx (\ln\ln z + M')^t / t!$ with $M' = M - 1/2$.

Classes:
    SymmetricSeries
    AsymptoticContext
    IdentityReport

Functions:
    esp_direct
    esp_via_newton
    esp_recursive
    leading_order_f
    second_order_f2
    odd_prime_zeta
    mertens_partial
    check_identities
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

import mpmath
import numpy as np

from ._exceptions import DomainError, PowerSumMismatchError, RationalBlowupError
from .primes import Backend, PowerSum, odd_primes_up_to, power_sum, resolve_backend, sieve_primes


Number = Fraction | float

MEISSEL_MERTENS_DIGITS = "0.26149721284764278375542683860869585905156664826120"
MEISSEL_MERTENS = float(MEISSEL_MERTENS_DIGITS)

# Denominators of exact f(t;z) grow like the primorial of z.
RATIONAL_WARN_Z = 10**4
RATIONAL_WARN_T = 12


@dataclass(frozen=True)
class SymmetricSeries:
    """The values ``f(0;z), ..., f(t_max;z)`` of one sieving limit.

    Args:
        z (int): Sieving limit.
        t_max (int): Largest degree computed.
        values (tuple[Fraction | float, ...]): ``values[t] = f(t;z)``.
        backend (Backend): Arithmetic the values were computed with.
    """

    z: int
    t_max: int
    values: tuple[Number, ...]
    backend: Backend

    def __getitem__(self, t: int) -> Number:
        return self.values[t]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def odd_prime_count(self) -> int:
        """Number of variables, i.e. odd primes up to ``z``."""
        return len(odd_primes_up_to(self.z))

    def alternating_sum(self, weight: int, t_max: int | None = None) -> Number:
        """Truncated series ``sum_{t <= t_max} (-weight)**t f(t;z)``.

        With ``weight=2`` this expands ``prod (1 - 2/p)`` and with ``weight=1`` it
        expands ``prod (1 - 1/p)``.
        """
        t_max = self.t_max if t_max is None else min(t_max, self.t_max)
        terms = [(-weight) ** t * self.values[t] for t in range(t_max + 1)]
        if self.backend is Backend.RATIONAL:
            return sum(terms, Fraction(0))
        return math.fsum(terms)


@dataclass(frozen=True)
class AsymptoticContext:
    """Constants of the large-``z`` behaviour of ``f(t;z)``.

    Args:
        L (float): ``ln(ln z)``.
        M (float, optional): Meissel-Mertens constant.
    """

    L: float
    M: float = MEISSEL_MERTENS

    @property
    def M_odd(self) -> float:
        """Mertens constant of the odd primes: dropping ``p = 2`` removes exactly ``1/2``."""
        return self.M - 0.5

    @classmethod
    def from_limit(cls, z: float, M: float = MEISSEL_MERTENS) -> AsymptoticContext:
        if z <= math.e:
            raise DomainError(f"ln(ln z) is only defined for z > e, got z={z}.\n\n")
        return cls(L=math.log(math.log(z)), M=M)


@dataclass
class IdentityReport:
    """Maximum absolute residual of every identity checked for one ``(z, t_max)``.

    Args:
        z (int): Sieving limit.
        t_max (int): Largest degree checked.
        backend (Backend): Arithmetic used.
        tolerance (float): Largest residual counted as a pass.
        residuals (dict[str, Fraction | float]): Residual per identity name.
    """

    z: int
    t_max: int
    backend: Backend
    tolerance: float
    residuals: dict[str, Number] = field(default_factory=dict)

    @property
    def passed(self) -> dict[str, bool]:
        return {name: residual <= self.tolerance for name, residual in self.residuals.items()}

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


def _reciprocals(primes: Sequence[int], backend: Backend) -> list[Number]:
    if backend is Backend.RATIONAL:
        return [Fraction(1, p) for p in primes]
    return [1.0 / p for p in primes]


def _sum(terms: Sequence[Number], backend: Backend) -> Number:
    if backend is Backend.RATIONAL:
        return sum(terms, Fraction(0))
    return math.fsum(terms)


def esp_direct(
    z: int, t_max: int, backend: Backend | str | None = None, *, rational_cap: int | None = None
) -> SymmetricSeries:
    """Compute ``f(0;z), ..., f(t_max;z)`` with the one-pass dynamic program.

    Every reciprocal ``1/p`` is folded in once through ``e_t <- e_t + e_{t-1} / p``,
    updating all degrees from the values before the update.
    Under the compensated-float backend each degree also carries a Neumaier error term,
    added back at the end.

    Args:
        z (int): Sieving limit.
        t_max (int): Largest degree.
        backend (Backend | str | None, optional): None picks by ``z``. Defaults to None.
        rational_cap (int | None, optional): Refuse the rational backend above this
            ``z``. Defaults to None (no cap).

    Raises:
        RationalBlowupError: Rational backend requested above ``rational_cap``.

    Returns:
        SymmetricSeries: The series values.
    """
    if t_max < 0:
        raise DomainError(f"t_max must be nonnegative, got {t_max}.\n\n")
    backend = resolve_backend(z, backend)
    primes = odd_primes_up_to(z)

    if backend is Backend.RATIONAL:
        if rational_cap is not None and z > rational_cap:
            raise RationalBlowupError(z, t_max, rational_cap)
        if z > RATIONAL_WARN_Z and t_max > RATIONAL_WARN_T:
            logging.warning(
                f"Exact rationals at z={z}, t_max={t_max} carry huge denominators;"
                " expect a slow run."
            )
        values = np.full(t_max + 1, Fraction(0), dtype=object)
        values[0] = Fraction(1)
        for reciprocal in _reciprocals(primes, backend):
            values[1:] = values[1:] + reciprocal * values[:-1]
        return SymmetricSeries(z, t_max, tuple(values), backend)

    values = np.zeros(t_max + 1)
    values[0] = 1.0
    # Neumaier running error per degree; degree t reads the corrected degree t - 1.
    errors = np.zeros(t_max + 1)
    for reciprocal in _reciprocals(primes, backend):
        increments = reciprocal * (values[:-1] + errors[:-1])
        totals = values[1:] + increments
        errors[1:] += np.where(
            np.abs(values[1:]) >= np.abs(increments),
            (values[1:] - totals) + increments,
            (increments - totals) + values[1:],
        )
        values[1:] = totals
    return SymmetricSeries(z, t_max, tuple(float(v) for v in values + errors), backend)


def esp_via_newton(
    power_sums: Sequence[PowerSum], t_max: int, *, z: int | None = None
) -> SymmetricSeries:
    """Compute ``f(t;z)`` from the power sums with Newton's identities,
    ``t f(t) = sum_{i=1}^{t} (-1)**(i-1) f(t-i) S_i``.

    Args:
        power_sums (Sequence[PowerSum]): Power sums with exponents covering ``1..t_max``,
            all at the same ``z`` and in the same backend.
        t_max (int): Largest degree.
        z (int | None, optional): Sieving limit to record when ``power_sums`` is empty.

    Raises:
        PowerSumMismatchError: The power sums mix limits or backends, or an exponent
            in ``1..t_max`` is missing.
    """
    limits = {s.z for s in power_sums}
    backends = {s.backend for s in power_sums}
    if len(limits) > 1:
        raise PowerSumMismatchError(f"several sieving limits {sorted(limits)}")
    if len(backends) > 1:
        raise PowerSumMismatchError("mixed exact and floating backends")
    by_exponent = {s.k: s.value for s in power_sums}
    missing = [k for k in range(1, t_max + 1) if k not in by_exponent]
    if missing:
        raise PowerSumMismatchError(f"exponents {missing} are missing")

    z = limits.pop() if limits else (z or 0)
    backend = backends.pop() if backends else Backend.RATIONAL
    one: Number = Fraction(1) if backend is Backend.RATIONAL else 1.0

    values: list[Number] = [one]
    for t in range(1, t_max + 1):
        terms = [(-1) ** (i - 1) * values[t - i] * by_exponent[i] for i in range(1, t + 1)]
        values.append(_sum(terms, backend) / t)
    return SymmetricSeries(z, t_max, tuple(values), backend)


def esp_recursive(t: int, z: int, backend: Backend | str | None = None) -> Number:
    """Evaluate ``f(t;z) = sum_{3 <= p <= z} f(t-1; p-1) / p`` literally.

    The odd primes below ``p_j`` are exactly the first ``j`` odd primes, so the
    recursion runs on prefix lengths and is memoised per call.
    """
    if t < 0:
        raise DomainError(f"Degree must be nonnegative, got {t}.\n\n")
    backend = resolve_backend(z, backend)
    reciprocals = _reciprocals(odd_primes_up_to(z), backend)
    zero: Number = Fraction(0) if backend is Backend.RATIONAL else 0.0
    one: Number = Fraction(1) if backend is Backend.RATIONAL else 1.0

    @cache
    def prefix_esp(degree: int, count: int) -> Number:
        if degree == 0:
            return one
        if degree > count:
            return zero
        return _sum(
            [reciprocals[j] * prefix_esp(degree - 1, j) for j in range(count)], backend
        )

    return prefix_esp(t, len(reciprocals))


def leading_order_f(t: int, z: float, ctx: AsymptoticContext | None = None) -> float:
    """Leading-order asymptotic ``(L(z) + M')**t / t!``.

    Args:
        t (int): Degree.
        z (float): Sieving limit, larger than ``e``.
        ctx (AsymptoticContext | None, optional): Precomputed context for ``z``.
            Built from ``z`` when omitted.

    Raises:
        DomainError: ``z <= e`` or ``t < 0``.
    """
    if t < 0:
        raise DomainError(f"Degree must be nonnegative, got {t}.\n\n")
    if ctx is None:
        ctx = AsymptoticContext.from_limit(z)
    elif z <= math.e:
        raise DomainError(f"ln(ln z) is only defined for z > e, got z={z}.\n\n")
    return (ctx.L + ctx.M_odd) ** t / math.factorial(t)


def odd_prime_zeta(k: int, dps: int = 30) -> float:
    """Prime zeta function restricted to odd primes, ``P(k) - 2**-k``."""
    if k < 2:
        raise DomainError(f"The prime zeta series converges only for k >= 2, got {k}.\n\n")
    with mpmath.workdps(dps):
        return float(mpmath.primezeta(k) - mpmath.mpf(2) ** -k)


def second_order_f2(z: float, ctx: AsymptoticContext | None = None) -> float:
    """Two-term asymptotic ``f(2;z) ~ ((L + M')**2 - P_odd(2)) / 2``, from
    ``2 f(2;z) = S_1(z)**2 - S_2(z)`` with ``S_2(z) -> P_odd(2)``."""
    ctx = AsymptoticContext.from_limit(z) if ctx is None else ctx
    return ((ctx.L + ctx.M_odd) ** 2 - odd_prime_zeta(2)) / 2


def mertens_partial(z: int) -> float:
    """``sum_{p <= z} 1/p - ln(ln z)``, which tends (slowly) to the Meissel-Mertens constant."""
    if z <= math.e:
        raise DomainError(f"ln(ln z) is only defined for z > e, got z={z}.\n\n")
    primes = sieve_primes(z).primes
    return math.fsum(1.0 / primes.astype(float)) - math.log(math.log(z))


def check_identities(
    z: int, t_max: int, tolerance: float = 0.0, backend: Backend | str | None = None
) -> IdentityReport:
    """Check the exact identities between the evaluation routes.

    Residuals recorded (each the maximum absolute difference over the degrees):

    - ``newton_f2``: ``2 f(2;z)`` against ``S_1**2 - S_2``.
    - ``direct_vs_newton`` and ``direct_vs_recursive``: the three routes agree.
    - ``zero_tail``: ``f(t;z)`` vanishes for ``t`` above the number of odd primes.

    Failures are part of the report; nothing is raised for them.
    """
    if tolerance < 0:
        raise DomainError(f"Tolerance must be nonnegative, got {tolerance}.\n\n")
    backend = resolve_backend(z, backend)
    zero: Number = Fraction(0) if backend is Backend.RATIONAL else 0.0

    direct = esp_direct(z, max(t_max, 2), backend)
    sums = [power_sum(k, z, backend) for k in range(1, max(t_max, 2) + 1)]
    newton = esp_via_newton(sums[:t_max], t_max, z=z)
    recursive = [esp_recursive(t, z, backend) for t in range(t_max + 1)]

    s1, s2 = sums[0].value, sums[1].value
    count = direct.odd_prime_count
    residuals: dict[str, Number] = {
        "newton_f2": abs(2 * direct[2] - (s1 * s1 - s2)),
        "direct_vs_newton": max(
            (abs(direct[t] - newton[t]) for t in range(t_max + 1)), default=zero
        ),
        "direct_vs_recursive": max(
            (abs(direct[t] - recursive[t]) for t in range(t_max + 1)), default=zero
        ),
        "zero_tail": max((abs(direct[t]) for t in range(count + 1, t_max + 1)), default=zero),
    }
    report = IdentityReport(z, t_max, backend, tolerance, residuals)
    for name, ok in report.passed.items():
        if not ok:
            logging.warning(f"Identity {name} fails at z={z}: residual {float(residuals[name])}.")
    return report
