import math

import pytest
from hypothesis import given, strategies as st
from scipy.special import kv

from sobolev_kernels.errors import DomainError
from sobolev_kernels.oracle import fourier_quadrature_1d
from sobolev_kernels.specfun import (
    bessel_k_half,
    binomial,
    double_factorial,
    factorial,
    gamma_half_integer,
    sphere_volume,
)

EPS = 2.0**-52


@pytest.mark.parametrize("m, expected", [(0, 1), (5, 120), (12, 479001600)])
def test_factorial(m, expected):
    assert factorial(m) == expected


@pytest.mark.parametrize("m, expected", [(-1, 1), (0, 1), (6, 48), (7, 105)])
def test_double_factorial(m, expected):
    assert double_factorial(m) == expected


@pytest.mark.parametrize("fn, arg", [(factorial, -1), (double_factorial, -2), (gamma_half_integer, -1)])
def test_domain_errors(fn, arg):
    with pytest.raises(DomainError):
        fn(arg)


def test_binomial():
    assert binomial(4, 2) == 6
    assert binomial(3, 5) == 0
    assert binomial(3, -1) == 0
    # C(2s-2, s-1) 2^{1-2s} at s = 3
    assert binomial(4, 2) / 2**5 == 3 / 16


def test_large_arguments_stay_exact():
    # largest combinatorics reached for s <= 40, n <= 15
    assert double_factorial(78) == 2**39 * factorial(39)
    assert binomial(78, 39) == factorial(78) // factorial(39) ** 2


@pytest.mark.parametrize("m", range(21))
def test_double_factorial_identities(m):
    assert double_factorial(2 * m) == 2**m * factorial(m)
    assert double_factorial(2 * m + 1) * double_factorial(2 * m) == factorial(2 * m + 1)


def test_gamma_half_integer_values():
    sp = math.sqrt(math.pi)
    assert gamma_half_integer(0) == pytest.approx(sp, rel=4 * EPS)
    assert gamma_half_integer(1) == pytest.approx(sp / 2, rel=4 * EPS)
    assert gamma_half_integer(2) == pytest.approx(3 * sp / 4, rel=4 * EPS)


@pytest.mark.parametrize("m", range(31))
def test_gamma_half_integer_recurrence(m):
    lhs = gamma_half_integer(m + 1)
    rhs = (m + 0.5) * gamma_half_integer(m)
    assert abs(lhs - rhs) <= 4 * EPS * abs(lhs)
    assert lhs == pytest.approx(math.gamma(m + 1.5), rel=4 * EPS)


def test_bessel_k_half_spot_values():
    assert bessel_k_half(0, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1), rel=1e-15)
    assert bessel_k_half(0, 1.0) == pytest.approx(0.4610685, abs=5e-8)
    assert bessel_k_half(1, 2.0) == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2) * 1.5, rel=1e-15)


def test_bessel_k_half_against_cosine_integral():
    # K_nu(z) = Gamma(nu+1/2) (2z)^nu / sqrt(pi) int_0^inf cos(z t) z^{-2nu} (t^2+1)^{-nu-1/2} dt
    z, m = 0.7, 3
    p = m + 1  # nu + 1/2
    integral = math.pi * fourier_quadrature_1d(p, z).value
    via_integral = math.gamma(p) * (2 / z) ** (m + 0.5) / math.sqrt(math.pi) * integral
    assert bessel_k_half(m, z) == pytest.approx(via_integral, rel=1e-10)
    # frozen from the same route; scipy's kv agrees
    assert bessel_k_half(m, z) == pytest.approx(62.42329927564586, rel=1e-10)
    assert bessel_k_half(m, z) == pytest.approx(kv(3.5, 0.7), rel=1e-12)


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 5.0])
def test_bessel_three_term_recurrence(m, z):
    nu = m + 0.5
    lhs = bessel_k_half(m + 1, z)
    rhs = bessel_k_half(m - 1, z) + 2 * nu / z * bessel_k_half(m, z)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_bessel_requires_positive_argument():
    with pytest.raises(DomainError):
        bessel_k_half(2, 0.0)


@given(st.integers(0, 20), st.floats(0.05, 30.0))
def test_bessel_positive_and_decreasing(m, z):
    assert bessel_k_half(m, z) > bessel_k_half(m, z * 1.01) > 0


@pytest.mark.parametrize("m, expected", [(0, 2.0), (1, 2 * math.pi), (2, 4 * math.pi),
                                         (3, 2 * math.pi**2), (4, 8 * math.pi**2 / 3)])
def test_sphere_volume(m, expected):
    assert sphere_volume(m) == pytest.approx(expected, rel=1e-15)
