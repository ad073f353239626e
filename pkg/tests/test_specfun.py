import math
from fractions import Fraction

import numpy as np
import pytest

from skhpot.specfun import (
    LogScaled,
    dawson,
    erfi,
    erfi_log,
    jacobi,
    jacobi_derivative,
    ln_gamma,
    logscaled_sum,
)


def dawson_series_oracle(x: float, tol: Fraction = Fraction(1, 10**28)) -> float:
    """Exact-rational Maclaurin sum: D(x) = sum (-2)^k x^(2k+1) / (2k+1)!!.

    Rational arithmetic makes the alternating series cancellation-free, so
    this is a valid oracle at any x (just slow for large arguments).
    """
    xf = Fraction(x)
    term = xf
    total = Fraction(0)
    k = 0
    while True:
        total += term
        term *= -2 * xf * xf
        term /= 2 * k + 3
        k += 1
        if abs(term) < tol * abs(total):
            return float(total)


class TestLnGamma:
    def test_known_values(self):
        assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
        assert ln_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-14)

    def test_functional_equation(self):
        rng = np.random.default_rng(7)
        for x in rng.uniform(0.5, 100.0, 200):
            lhs = ln_gamma(x + 1.0) - ln_gamma(x)
            assert lhs == pytest.approx(math.log(x), rel=1e-12, abs=1e-12)

    def test_against_stdlib_over_wide_range(self):
        for x in (0.5, 0.75, 1.0, 1.5, 3.25, 10.0, 123.456, 1e4, 1e6):
            assert ln_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ln_gamma(0.0)
        with pytest.raises(ValueError):
            ln_gamma(-2.5)


def jacobi_sum_oracle(n, a, b, x):
    """Explicit finite-sum definition via log-gamma binomials."""

    def binom(top, k):
        return math.exp(math.lgamma(top + 1) - math.lgamma(k + 1) - math.lgamma(top - k + 1))

    total = 0.0
    for s in range(n + 1):
        total += (binom(n + a, n - s) * binom(n + b, s)
                  * ((x - 1.0) / 2.0) ** s * ((x + 1.0) / 2.0) ** (n - s))
    return total


class TestJacobi:
    def test_degree_zero_and_one(self):
        assert jacobi(0, 0.3, 1.2, 0.7) == 1.0
        a, b, x = 1.7, -0.2, 0.35
        assert jacobi(1, a, b, x) == pytest.approx((a - b) / 2 + (a + b + 2) * x / 2, rel=1e-15)

    def test_endpoint_identity(self):
        # P_n^{(a,b)}(1) = Gamma(n+a+1) / (n! Gamma(a+1)); n=2, a=1.5 gives 4.375
        got = jacobi(2, 1.5, 0.7, 1.0)
        expected = math.exp(math.lgamma(4.5) - math.lgamma(3.0) - math.lgamma(2.5))
        assert expected == pytest.approx(4.375, rel=1e-14)
        assert got == pytest.approx(expected, rel=1e-13)

    def test_recurrence_matches_finite_sum(self):
        rng = np.random.default_rng(11)
        for _ in range(150):
            n = int(rng.integers(0, 9))
            a = float(rng.uniform(-0.9, 10.0))
            b = float(rng.uniform(-0.9, 10.0))
            x = float(rng.uniform(-1.0, 1.0))
            want = jacobi_sum_oracle(n, a, b, x)
            assert jacobi(n, a, b, x) == pytest.approx(want, rel=1e-10, abs=1e-10)

    def test_vectorized(self):
        x = np.linspace(-1, 1, 5)
        vals = jacobi(3, 0.5, 0.5, x)
        assert vals.shape == x.shape
        assert vals[2] == pytest.approx(jacobi(3, 0.5, 0.5, 0.0), rel=1e-15)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            jacobi(-1, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            jacobi(2, -1.0, 0.0, 0.0)


class TestJacobiDerivative:
    def test_low_degrees(self):
        assert jacobi_derivative(0, 0.3, 0.4, 0.9) == 0.0
        a, b = 1.1, 2.2
        assert jacobi_derivative(1, a, b, -0.4) == pytest.approx((a + b + 2) / 2, rel=1e-15)

    def test_against_central_difference(self):
        n, a, b, x = 2, 0.5, 0.5, 0.3
        h = 1e-6
        fd = (jacobi(n, a, b, x + h) - jacobi(n, a, b, x - h)) / (2 * h)
        assert jacobi_derivative(n, a, b, x) == pytest.approx(fd, abs=1e-8)


class TestDawson:
    def test_zero_and_oddness(self):
        assert dawson(0.0) == 0.0
        rng = np.random.default_rng(3)
        for x in rng.uniform(0.01, 12.0, 50):
            assert dawson(-x) == -dawson(x)

    @pytest.mark.parametrize("x", [0.25, 1.0, 2.0, 3.0, 4.5, 6.0, 8.0, 10.0])
    def test_against_rational_series_oracle(self, x):
        assert dawson(x) == pytest.approx(dawson_series_oracle(x), rel=1e-13)

    def test_frozen_reference_point(self):
        # oracle value confirmed by the rational series before freezing
        assert dawson(1.0) == pytest.approx(0.5380795069127684, rel=1e-13)

    def test_ode_residual(self):
        # D'(x) + 2 x D(x) - 1 = 0
        h = 1e-5
        for x in np.linspace(-6.0, 6.0, 49):
            dp = (dawson(x + h) - dawson(x - h)) / (2 * h)
            assert dp + 2 * x * dawson(x) - 1.0 == pytest.approx(0.0, abs=1e-8)

    def test_regime_boundaries_are_smooth(self):
        for b in (2.5, 7.5):
            lo, hi = dawson(b - 1e-9), dawson(b + 1e-9)
            slope = 1.0 - 2.0 * b * dawson(b)
            assert hi - lo == pytest.approx(2e-9 * slope, abs=1e-13)


class TestErfi:
    def test_zero(self):
        assert erfi_log(0.0).sign == 0
        assert erfi(0.0) == 0.0

    def test_small_argument_series(self):
        x = 1e-4
        series = 2.0 / math.sqrt(math.pi) * (x + x**3 / 3.0)
        assert erfi(x) == pytest.approx(series, rel=1e-12)

    def test_log_form_survives_huge_arguments(self):
        ls = erfi_log(30.0)
        assert ls.sign == 1
        expected = 900.0 + math.log(2.0 * dawson(30.0) / math.sqrt(math.pi))
        assert ls.log_magnitude == pytest.approx(expected, rel=1e-15)
        # leading asymptotics D(x) ~ 1/(2x): log ~ 900 - ln(30 sqrt(pi))
        assert ls.log_magnitude == pytest.approx(900.0 - math.log(30.0 * math.sqrt(math.pi)),
                                                 abs=1e-3)
        assert math.isinf(ls.value())  # plain exp overflows, the log form must not

    def test_direct_accessor_agrees_with_log_form(self):
        for x in (-20.0, -3.0, -0.7, 0.4, 1.0, 8.0, 25.0):
            ls = erfi_log(x)
            assert erfi(x) == pytest.approx(ls.sign * math.exp(ls.log_magnitude), rel=1e-12)

    def test_oddness_and_monotonicity(self):
        xs = np.linspace(-5.0, 5.0, 101)
        vals = [erfi(float(x)) for x in xs]
        for x, v in zip(xs, vals):
            assert erfi(float(-x)) == -v
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestLogScaled:
    def test_round_trip(self):
        # log/exp round trips amplify rounding by |log v|, so ~1e-13 at 1e300
        for v in (-1234.5, -1e-12, 3.7, 2.5e300):
            ls = LogScaled.from_value(v)
            assert ls.value() == pytest.approx(v, rel=1e-12)
        assert LogScaled.from_value(0.0).sign == 0
        assert LogScaled.from_value(0.0).value() == 0.0

    def test_signed_sum(self):
        a = LogScaled.from_value(5.0)
        b = LogScaled.from_value(-3.0)
        total = logscaled_sum([a, b])
        assert total.value() == pytest.approx(2.0, rel=1e-14)
        cancel = logscaled_sum([a, LogScaled.from_value(-5.0)])
        assert cancel.sign == 0
