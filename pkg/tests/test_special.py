import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.special import betainc

from centroidlab.special import (
    gen_binomial,
    log_gamma,
    reg_inc_beta,
    rising_factorial,
)


class TestLogGamma:
    def test_examples(self):
        assert log_gamma(1.0) == 0.0
        assert math.isclose(log_gamma(0.5), math.log(math.sqrt(math.pi)), abs_tol=1e-15)
        assert math.isclose(log_gamma(5.0), math.log(24), abs_tol=1e-14)

    def test_domain(self):
        for bad in (0.0, -1.0, math.inf):
            with pytest.raises(ValueError):
                log_gamma(bad)

    def test_against_mpmath_small_range(self):
        # absolute accuracy where |log Gamma| is moderate
        mpmath.mp.dps = 40
        for i in range(1, 300):
            x = 0.1 + i * 0.1
            ref = float(mpmath.loggamma(x))
            assert abs(log_gamma(x) - ref) <= 1e-13, x

    def test_against_mpmath_large_x_relative(self):
        # the value grows like x log x, so only relative accuracy is
        # meaningful in float64 out here
        mpmath.mp.dps = 40
        for x in (1e3, 1e6, 1e9):
            ref = float(mpmath.loggamma(x))
            assert abs(log_gamma(x) - ref) <= 5e-14 * abs(ref)


class TestRisingFactorial:
    def test_examples(self):
        assert rising_factorial(2.0, 3) == 24.0
        assert rising_factorial(0.5, 0) == 1.0
        assert rising_factorial(0.5, 2) == 0.75

    def test_large_m_matches_log_route(self):
        direct = 1.0
        for i in range(60):
            direct *= 1.5 + i
        assert math.isclose(rising_factorial(1.5, 60), direct, rel_tol=1e-12)

    def test_rejects_negative_m(self):
        with pytest.raises(ValueError):
            rising_factorial(1.0, -1)


class TestGenBinomial:
    def test_examples(self):
        assert gen_binomial(5.0, 5) == 1.0  # alpha=1, m=5 -> C(5, 5)
        assert gen_binomial(2.5, 0) == 1.0
        assert gen_binomial(3.5, 2) == 4.375

    def test_integer_exactness(self):
        # times k! recovers the falling factorial exactly for small ints
        for a in range(0, 12):
            for k in range(0, a + 1):
                falling = 1
                for i in range(k):
                    falling *= a - i
                assert gen_binomial(float(a), k) * math.factorial(k) == falling

    def test_zero_factor(self):
        assert gen_binomial(3.0, 5) == 0.0

    def test_large_k_log_route(self):
        got = gen_binomial(0.5 + 200 - 1, 200)  # C(alpha+k-1, k) shape
        ref = math.exp(
            math.lgamma(200.5) - math.lgamma(0.5) - math.lgamma(201.0)
        )
        assert math.isclose(got, ref, rel_tol=1e-11)


class TestRegIncBeta:
    def test_trivial_examples(self):
        assert reg_inc_beta(0.5, 1, 1.0) == 0.5
        assert math.isclose(reg_inc_beta(0.5, 2, 2.0), 0.5, abs_tol=1e-15)

    def test_binary_family_identity(self):
        # I_{1/2}(k-1, 2) = (k+1) 2^-k
        for k in range(2, 30):
            assert math.isclose(
                reg_inc_beta(0.5, k - 1, 2.0), (k + 1) * 2.0**-k, abs_tol=1e-13
            )

    def test_endpoints_exact(self):
        assert reg_inc_beta(0.0, 7, 0.5) == 0.0
        assert reg_inc_beta(1.0, 7, 0.5) == 1.0

    def test_domain(self):
        with pytest.raises(ValueError):
            reg_inc_beta(0.5, 0, 1.0)
        with pytest.raises(ValueError):
            reg_inc_beta(0.5, 2, 0.0)
        with pytest.raises(ValueError):
            reg_inc_beta(1.5, 2, 1.0)

    def test_monotone_in_x(self):
        for a in (1, 2, 5, 17, 33):
            for b in (0.5, 1.0, 2.0):
                prev = 0.0
                for i in range(1, 50):
                    cur = reg_inc_beta(i / 50, a, b)
                    assert cur >= prev - 1e-14
                    prev = cur

    def test_quadrature_grid(self):
        # a in 1..40, b grid, x grid: absolute agreement with the defining
        # integral to 1e-10
        for a in range(1, 41):
            for b in (0.5, 1.0, 1.25, 2.0):
                norm = math.exp(
                    math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
                )
                for xi in range(1, 10):
                    x = xi / 10
                    quad, _ = integrate.quad(
                        lambda t: t ** (a - 1) * (1 - t) ** (b - 1),
                        0.0,
                        x,
                        epsabs=1e-14,
                        epsrel=1e-12,
                        limit=200,
                    )
                    assert abs(reg_inc_beta(x, a, b) - quad / norm) <= 1e-10

    def test_against_scipy(self):
        for a in (1, 3, 10, 25, 26, 40, 120):
            for b in (0.5, 1.0, 1.25, 2.0, 3.7):
                for x in (0.05, 0.25, 0.5, 0.75, 0.95):
                    assert abs(reg_inc_beta(x, a, b) - betainc(a, b, x)) <= 1e-12

    @settings(max_examples=150, deadline=None)
    @given(
        a=st.integers(min_value=1, max_value=80),
        b=st.floats(min_value=0.05, max_value=8.0),
        x=st.floats(min_value=0.0, max_value=1.0),
        y=st.floats(min_value=0.0, max_value=1.0),
    )
    def test_bounds_and_monotonicity(self, a, b, x, y):
        lo, hi = sorted((x, y))
        v_lo, v_hi = reg_inc_beta(lo, a, b), reg_inc_beta(hi, a, b)
        assert 0.0 <= v_lo <= 1.0
        assert v_hi >= v_lo - 1e-12
