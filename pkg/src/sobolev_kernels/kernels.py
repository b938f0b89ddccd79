"""Closed-form reproducing kernels of the Sobolev spaces H_s(R^n).

Every closed form has the same radial shape

    K(r) = prefactor * exp(-r) * sum_{k=0}^{A-1} c_k r^{A-1-k},    r = |x - y|,

with ``c_k = (A+k-1)! / (k! (A-k-1)!) * 2^{-k}``.  Only the prefactor and the
effective order ``A`` depend on the dimension and on the constant convention.
Prefactors are kept as an exact rational times an integer power of pi.

Three conventions are available (:class:`KernelMode`):

``corrected``
    Radial moment from the Beta/Gamma closed form.  Agrees with the
    quadrature oracle for every valid index.
``paper-odd``
    Odd ``n``, constants exactly as printed for the odd-dimensional case.
``paper-even``
    Even ``n``, ``s`` odd, ``s >= n + 3``; constants exactly as printed for the
    even-dimensional case, whose effective order is ``(s - n + 1)/2``.

``exp(-r)`` underflows to zero for ``r`` beyond roughly 745; no log-domain
evaluation is offered.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, HalfIntegerOrderError
from .specfun import (
    binomial,
    double_factorial,
    factorial,
    gamma_half_integer_exact,
)

__all__ = [
    "KernelMode",
    "SobolevIndex",
    "KernelSeries",
    "effective_order",
    "series_coefficients",
    "series_1d",
    "diagonal_1d",
    "eval_kernel",
    "radial_moment_paper_odd",
    "radial_moment_gamma",
    "radial_moment_paper_even",
    "paper_even_constant",
    "kernel_nd",
    "kernel_special_s_n_plus_3",
    "diagonal_nd",
    "printed_diagonal",
]


class KernelMode(str, enum.Enum):
    PAPER_ODD = "paper-odd"
    PAPER_EVEN = "paper-even"
    CORRECTED = "corrected"

    @classmethod
    def parse(cls, value, n: Optional[int] = None) -> "KernelMode":
        """Accept a mode, its tag, or ``"paper"`` (resolved by parity of ``n``)."""
        if isinstance(value, cls):
            return value
        if value == "paper":
            if n is None:
                raise DomainError("mode 'paper' needs the dimension to pick a parity")
            return cls.PAPER_ODD if n % 2 else cls.PAPER_EVEN
        try:
            return cls(value)
        except ValueError:
            raise DomainError(f"unknown kernel mode {value!r}") from None


@dataclass(frozen=True)
class SobolevIndex:
    """Smoothness order ``s`` and ambient dimension ``n``."""

    s: int
    n: int

    def __post_init__(self):
        for name in ("s", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.s < 1:
            raise DomainError(f"s must be >= 1, got {self.s}")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")


def effective_order(idx: SobolevIndex, mode: KernelMode = KernelMode.CORRECTED) -> Fraction:
    """Order of the one-dimensional Fourier factor after dimension reduction."""
    mode = KernelMode.parse(mode, idx.n)
    if mode is KernelMode.PAPER_EVEN:
        return Fraction(idx.s - idx.n + 1, 2)
    return Fraction(2 * idx.s - idx.n + 1, 2)


def series_coefficients(A: int) -> tuple[Fraction, ...]:
    """``c_k = (A+k-1)! / (k! (A-k-1)!) 2^{-k}`` for ``k = 0..A-1``."""
    if A < 1:
        raise DomainError(f"effective order must be >= 1, got {A}")
    return tuple(
        Fraction(factorial(A + k - 1), factorial(k) * factorial(A - k - 1) * 2**k)
        for k in range(A)
    )


@dataclass(frozen=True)
class KernelSeries:
    """Radial kernel ``scale * pi**pi_power * exp(-r) * sum c_k r^(A-1-k)``.

    Immutable; calling the instance evaluates it (see :func:`eval_kernel`).
    """

    A: int
    coefficients: tuple[Fraction, ...]
    scale: Fraction
    pi_power: int
    mode: KernelMode
    idx: SobolevIndex

    @property
    def prefactor(self) -> float:
        return float(self.scale) * math.pi**self.pi_power

    @property
    def diagonal(self) -> float:
        """Exact ``r -> 0`` limit: only the ``k = A-1`` term survives."""
        return float(self.scale * self.coefficients[-1]) * math.pi**self.pi_power

    def __call__(self, r):
        return eval_kernel(self, r)


def _series(A, scale, pi_power, mode, idx):
    return KernelSeries(
        A=int(A),
        coefficients=series_coefficients(int(A)),
        scale=Fraction(scale),
        pi_power=int(pi_power),
        mode=mode,
        idx=idx,
    )


def series_1d(s: int) -> KernelSeries:
    """Reproducing kernel of H_s(R): ``exp(-r) r^{s-1}/(2^s (s-1)!) sum ...``."""
    idx = SobolevIndex(s, 1)
    return _series(s, Fraction(1, 2**s * factorial(s - 1)), 0, KernelMode.CORRECTED, idx)


def diagonal_1d(s: int) -> float:
    """``d_x(x) = C(2s-2, s-1) 2^{1-2s}`` in H_s(R)."""
    SobolevIndex(s, 1)
    return float(Fraction(binomial(2 * s - 2, s - 1), 2 ** (2 * s - 1)))


def eval_kernel(series: KernelSeries, r):
    """Evaluate a kernel series at distance(s) ``r >= 0``.

    Accepts a scalar (returns ``float``) or an array (returns an array of the
    same shape).  ``r == 0`` takes the exact limit branch.
    """
    scalar = np.ndim(r) == 0
    r = np.asarray(r, dtype=float)
    if np.any(~(r >= 0)):
        raise DomainError("kernel distance must be a non-negative real")
    coeffs = [float(c) for c in series.coefficients]
    acc = np.full_like(r, coeffs[0])
    for c in coeffs[1:]:
        acc = acc * r + c
    with np.errstate(under="ignore"):
        out = series.prefactor * np.exp(-r) * acc
    out = np.where(r == 0, series.diagonal, out)
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# radial moments  int_0^inf (1 + r^2)^{-s} r^{n-2} dr


def _radial_moment_paper_odd_exact(idx: SobolevIndex) -> Fraction:
    s, n = idx.s, idx.n
    if n % 2 == 0 or n < 3:
        raise DomainError(f"paper-odd radial moment needs odd n >= 3, got n={n}")
    if 2 * s - n + 1 < 2:
        raise DomainError(f"paper-odd radial moment needs 2s - n + 1 >= 2, got s={s}, n={n}")
    return Fraction(
        double_factorial(2 * s - 2) * double_factorial(n - 3),
        (2 * s - n + 1) * 2 ** (n - 3) * double_factorial(2 * s - n + 1),
    )


def radial_moment_paper_odd(idx: SobolevIndex) -> float:
    """The odd-n radial moment exactly as printed (integration-by-parts chain).

    ``(2s-2)!! (n-3)!! / ((2s-n+1) 2^{n-3} (2s-n+1)!!)``.  Differs from the
    true integral for ``n >= 5``.
    """
    return float(_radial_moment_paper_odd_exact(idx))


def _radial_moment_gamma_exact(idx: SobolevIndex) -> tuple[Fraction, int]:
    """``(q, k)`` with moment ``= q * pi**k``."""
    s, n = idx.s, idx.n
    if n < 2:
        raise DomainError(f"radial moment needs n >= 2, got {n}")
    if not 2 * s > n - 1:
        raise DomainError(f"radial moment diverges unless 2s > n - 1 (s={s}, n={n})")
    if n % 2 == 1:
        # Gamma((n-1)/2) Gamma(s-(n-1)/2) / (2 Gamma(s)), integer arguments
        g1 = factorial((n - 1) // 2 - 1)
        g2 = factorial(s - (n - 1) // 2 - 1)
        return Fraction(g1 * g2, 2 * factorial(s - 1)), 0
    # both arguments half-integers: each Gamma carries one sqrt(pi)
    g1 = gamma_half_integer_exact(n // 2 - 1)
    g2 = gamma_half_integer_exact(s - n // 2)
    return g1 * g2 / (2 * factorial(s - 1)), 1


def radial_moment_gamma(idx: SobolevIndex) -> float:
    """``Gamma((n-1)/2) Gamma(s-(n-1)/2) / (2 Gamma(s))`` (Beta integral)."""
    q, k = _radial_moment_gamma_exact(idx)
    return float(q) * math.pi**k


def _printed_product(start: Fraction, stop: Fraction, step: int) -> Fraction:
    """Descending product ``start (start-step) ...`` over factors ``>= stop``."""
    out = Fraction(1)
    v = Fraction(start)
    while v >= stop:
        out *= v
        v -= step
    return out


def _check_paper_even(idx: SobolevIndex):
    s, n = idx.s, idx.n
    if n % 2 or s % 2 == 0 or s < n + 3:
        raise DomainError(
            f"paper-even constants need n even, s odd and s >= n + 3 (got s={s}, n={n})"
        )


def _half_s_product(idx: SobolevIndex) -> Fraction:
    # (s/2 - 1)(s/2 - 3) ... down to s/2 - n/2 + 1
    s, n = idx.s, idx.n
    return _printed_product(Fraction(s, 2) - 1, Fraction(s - n, 2) + 1, 2)


def _radial_moment_paper_even_exact(idx: SobolevIndex) -> Fraction:
    _check_paper_even(idx)
    s, n = idx.s, idx.n
    m = s - n + 3
    return (
        Fraction(2**m, binomial(m, m // 2))
        * _half_s_product(idx)
        * double_factorial(n - 3)
        / 2 ** (n // 2 - 1)
    )


def radial_moment_paper_even(idx: SobolevIndex) -> float:
    """The even-n radial-moment chain as printed.

    ``2^{s-n+3} / C(s-n+3, (s-n+3)/2) * (s/2-1)(s/2-3)... (n-3)!! / 2^{n/2-1}``.
    The printed chain states it for the weight ``(1 + r^2)^{-s/2}``.
    """
    return float(_radial_moment_paper_even_exact(idx))


def paper_even_constant(idx: SobolevIndex) -> tuple[Fraction, int]:
    """Printed even-n kernel constant ``C_{s,n}`` as ``(q, k)``, value ``q pi**k``."""
    _check_paper_even(idx)
    s, n = idx.s, idx.n
    num = (
        2 ** ((s + 5) // 2)
        * factorial((s - n + 3) // 2) ** 2
        * _half_s_product(idx)
        * factorial(n - 1)
    )
    den = factorial(s - n + 3) * factorial((s - n - 1) // 2) * factorial(2 * n - 2)
    return num / den, -(n // 2 + 1)


def _series_normalization(A: int) -> Fraction:
    return Fraction(1, 2**A * factorial(A - 1))


def _check_closed_form_range(idx: SobolevIndex):
    if idx.n >= 2 and not 2 * idx.s > idx.n + 1:
        raise DomainError(
            f"closed forms for n >= 2 need s > (n+1)/2 (got s={idx.s}, n={idx.n})"
        )


def kernel_nd(idx: SobolevIndex, mode=KernelMode.CORRECTED) -> KernelSeries:
    """Closed-form reproducing kernel of H_s(R^n) as a :class:`KernelSeries`.

    Raises
    ------
    HalfIntegerOrderError
        Corrected mode with even ``n``: the effective order ``s - (n-1)/2`` is a
        half-integer and no finite series exists.
    DomainError
        The index violates the mode's validity conditions.
    """
    mode = KernelMode.parse(mode, idx.n)
    s, n = idx.s, idx.n

    if mode is KernelMode.CORRECTED:
        if n == 1:
            return series_1d(s)
        _check_closed_form_range(idx)
        if n % 2 == 0:
            raise HalfIntegerOrderError(
                f"effective order s - (n-1)/2 = {effective_order(idx)} is a half-integer "
                f"for n={n}; evaluate with oracle.kernel_oracle_nd / OracleKernel"
            )
        A = s - (n - 1) // 2
        moment, _ = _radial_moment_gamma_exact(idx)
        # vol(S^{n-2}) = 2 pi^{(n-1)/2} / ((n-3)/2)!
        vol = Fraction(2, factorial((n - 3) // 2))
        scale = Fraction(2, 2**n) * _series_normalization(A) * moment * vol
        return _series(A, scale, -(n - 1) // 2, mode, idx)

    if mode is KernelMode.PAPER_ODD:
        if n % 2 == 0 or n < 3:
            raise DomainError(f"paper-odd mode needs odd n >= 3, got n={n}")
        _check_closed_form_range(idx)
        A = s - (n - 1) // 2
        scale = (
            _series_normalization(A)
            * Fraction(
                double_factorial(2 * s - 2) * double_factorial(n - 3),
                (2 * s - n + 1) * 2 ** (2 * n - 4) * double_factorial(2 * s - n + 1),
            )
            / factorial((n - 3) // 2)
        )
        return _series(A, scale, -(n + 1) // 2, mode, idx)

    _check_paper_even(idx)
    q, k = paper_even_constant(idx)
    return _series((s - n + 1) // 2, q, k, mode, idx)


def kernel_special_s_n_plus_3(n: int) -> KernelSeries:
    """Simplified kernels for ``s = n + 3``: ``C * exp(-r) (1 + r)``.

    Odd ``n >= 3`` uses ``C_n = (n-1)! / (pi^{(n+1)/2} 2^{n+4})``; even ``n``
    uses the printed even-dimensional constant.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n == 1:
        raise DomainError("n = 1 has no s = n + 3 simplification; use series_1d(4)")
    idx = SobolevIndex(n + 3, n)
    if n % 2:
        return _series(2, Fraction(factorial(n - 1), 2 ** (n + 4)), -(n + 1) // 2,
                       KernelMode.PAPER_ODD, idx)
    # ((n+1)/2)((n-3)/2)((n-7)/2) ... (5/2)
    prod = _printed_product(Fraction(n + 1, 2), Fraction(5, 2), 2)
    scale = (
        Fraction(2 ** (n // 2 + 5) * factorial(3) ** 2 * factorial(n - 1),
                 factorial(6) * factorial(2 * n - 2))
        * prod
    )
    return _series(2, scale, -(n // 2 + 1), KernelMode.PAPER_EVEN, idx)


def diagonal_nd(idx: SobolevIndex, mode=KernelMode.CORRECTED) -> float:
    """``d_x(x)``: the exact ``r = 0`` limit of :func:`kernel_nd`."""
    return kernel_nd(idx, mode).diagonal


def printed_diagonal(idx: SobolevIndex, mode) -> float:
    """The ``x = y`` value as printed for the paper modes.

    For odd ``n`` this coincides with :func:`diagonal_nd`.  The printed even-n
    value divides by ``((s-n+1)/2)!`` where the series limit has
    ``((s-n-1)/2)!``.
    """
    mode = KernelMode.parse(mode, idx.n)
    s, n = idx.s, idx.n
    if mode is KernelMode.PAPER_ODD:
        series = kernel_nd(idx, mode)
        m = 2 * s - n - 1
        series_diag = Fraction(binomial(m, m // 2), 2 ** (2 * s - n))
        return float(series.scale / _series_normalization(series.A) * series_diag) * math.pi**series.pi_power
    if mode is KernelMode.PAPER_EVEN:
        q, k = paper_even_constant(idx)
        val = q * Fraction(factorial(s - n - 1), factorial((s - n + 1) // 2)) / Fraction(2) ** ((s - n - 1) // 2)
        return float(val) * math.pi**k
    return diagonal_nd(idx, mode)
