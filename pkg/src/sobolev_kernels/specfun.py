"""Exact integer combinatorics and half-integer special functions.

All combinatorial quantities are Python integers (arbitrary precision);
conversion to floating point happens only where a transcendental factor
(``sqrt(pi)``, ``exp``) enters.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "factorial",
    "double_factorial",
    "binomial",
    "gamma_half_integer",
    "gamma_half_integer_exact",
    "bessel_k_half",
    "bessel_k_half_coefficients",
    "sphere_volume",
]

_SQRT_PI = math.sqrt(math.pi)


def _check_int(name, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{name} must be an integer, got {value!r}")


def factorial(m: int) -> int:
    """Return ``m!`` exactly."""
    _check_int("m", m)
    if m < 0:
        raise DomainError(f"factorial undefined for negative argument {m}")
    return math.factorial(m)


def double_factorial(m: int) -> int:
    """Return ``m!!`` exactly, with ``(-1)!! = 0!! = 1``."""
    _check_int("m", m)
    if m < -1:
        raise DomainError(f"double factorial undefined for {m} < -1")
    result = 1
    for k in range(m, 1, -2):
        result *= k
    return result


def binomial(a: int, b: int) -> int:
    """Binomial coefficient, zero when ``b`` is outside ``[0, a]``."""
    _check_int("a", a)
    _check_int("b", b)
    if a < 0:
        raise DomainError(f"binomial requires a >= 0, got {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def gamma_half_integer_exact(m: int) -> Fraction:
    """Rational part of ``Gamma(m + 1/2) = q * sqrt(pi)``; returns ``q``."""
    _check_int("m", m)
    if m < 0:
        raise DomainError(f"gamma_half_integer requires m >= 0, got {m}")
    return Fraction(math.factorial(2 * m), 4**m * math.factorial(m))


def gamma_half_integer(m: int) -> float:
    """Return ``Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)``."""
    q = gamma_half_integer_exact(m)
    # Fraction -> float is correctly rounded; one more rounding for the product.
    return float(q) * _SQRT_PI


def bessel_k_half_coefficients(m: int) -> list[Fraction]:
    """Coefficients ``(m+k)! / (k! (m-k)!)`` of the half-integer K sum.

    ``K_{m+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_k coeff[k] (2z)^{-k}``.
    """
    _check_int("m", m)
    if m < 0:
        raise DomainError(f"order index must be >= 0, got {m}")
    return [
        Fraction(math.factorial(m + k), math.factorial(k) * math.factorial(m - k))
        for k in range(m + 1)
    ]


def bessel_k_half(m: int, z: float) -> float:
    """Modified Bessel function of the second kind of order ``m + 1/2``.

    Evaluated from the terminating series, not from a general Bessel routine.

    Parameters
    ----------
    m : int
        Order index, the order being ``m + 1/2``.
    z : float
        Positive argument.
    """
    coeffs = bessel_k_half_coefficients(m)
    z = float(z)
    if not z > 0:
        raise DomainError(f"bessel_k_half requires z > 0, got {z}")
    u = 1.0 / (2.0 * z)
    total = 0.0
    for c in reversed(coeffs):
        total = total * u + float(c)
    return math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * total


def sphere_volume(m: int) -> float:
    """Surface measure of the unit sphere ``S^m`` in ``R^{m+1}``.

    ``vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2)``; ``vol(S^0) = 2``.
    """
    _check_int("m", m)
    if m < 0:
        raise DomainError(f"sphere dimension must be >= 0, got {m}")
    if m % 2 == 1:
        # (m+1)/2 is an integer k: 2 pi^k / (k-1)!
        k = (m + 1) // 2
        return 2.0 * math.pi**k / math.factorial(k - 1)
    # (m+1)/2 = j + 1/2, so the sqrt(pi) in Gamma(j + 1/2) cancels
    j = m // 2
    return 2.0 * math.pi**j / float(gamma_half_integer_exact(j))
