import math

import numpy as np
import pytest

from skhpot.quadrature import (
    NonConvergence,
    QuadraturePolicy,
    gauss_legendre_rule,
    integrate_finite,
    integrate_semi_infinite,
    sine_transform,
)


class TestRule:
    def test_order_two_is_textbook(self):
        nodes, weights = gauss_legendre_rule(2)
        assert nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], rel=1e-15)
        assert weights == pytest.approx([1.0, 1.0], rel=1e-15)

    @pytest.mark.parametrize("order", [2, 3, 8, 16, 64, 101, 256])
    def test_weights_and_symmetry(self, order):
        nodes, weights = gauss_legendre_rule(order)
        assert float(weights.sum()) == pytest.approx(2.0, abs=1e-14)
        assert np.max(np.abs(nodes + nodes[::-1])) == 0.0
        # odd powers integrate to zero by symmetry
        assert float(weights @ nodes ** (2 * order - 1)) == pytest.approx(0.0, abs=1e-13)
        # highest even power below the exactness degree
        exact = 2.0 / (2.0 * order - 1.0)
        assert float(weights @ nodes ** (2 * order - 2)) == pytest.approx(exact, abs=1e-13)

    def test_order_bounds(self):
        with pytest.raises(ValueError):
            gauss_legendre_rule(1)
        with pytest.raises(ValueError):
            gauss_legendre_rule(257)


class TestIntegrateFinite:
    def test_polynomial(self):
        assert integrate_finite(lambda x: x**2, 0.0, 1.0) == pytest.approx(1 / 3, rel=1e-14)

    def test_sine(self):
        assert integrate_finite(np.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-13)

    def test_empty_interval(self):
        assert integrate_finite(np.exp, 1.5, 1.5) == 0.0

    def test_mild_endpoint_singularity(self):
        got = integrate_finite(lambda x: x**-0.3, 0.0, 1.0)
        assert got == pytest.approx(1.0 / 0.7, rel=1e-9)

    def test_deterministic(self):
        f = lambda x: np.exp(-x) * np.sin(3.0 * x)
        assert integrate_finite(f, 0.0, 20.0) == integrate_finite(f, 0.0, 20.0)

    def test_tightening_tolerance_stays_within_previous(self):
        # the two-estimate gauge is a bound for smooth integrands (the
        # accuracy contract's scope); cusps get their own looser test below
        f = lambda x: np.exp(-x) * np.sin(3.0 * x) + 5.0 * np.exp(-50.0 * (x - 2.0) ** 2)
        for rel in (1e-6, 1e-8, 1e-10):
            loose = integrate_finite(f, 0.0, 10.0, QuadraturePolicy(rel_tol=rel))
            tight = integrate_finite(f, 0.0, 10.0, QuadraturePolicy(rel_tol=rel / 2))
            assert abs(tight - loose) <= rel * abs(loose) + 1e-14

    def test_cusped_integrand_converges(self):
        f = lambda x: np.sqrt(np.abs(np.sin(5 * x))) * np.exp(-0.3 * x)
        loose = integrate_finite(f, 0.0, 10.0, QuadraturePolicy(rel_tol=1e-8))
        tight = integrate_finite(f, 0.0, 10.0, QuadraturePolicy(rel_tol=1e-12))
        assert loose == pytest.approx(tight, rel=1e-7)

    def test_budget_exhaustion_reports_estimate(self):
        f = lambda x: np.abs(x - 0.1234567) ** -0.9
        with pytest.raises(NonConvergence) as exc:
            integrate_finite(f, 0.0, 1.0, QuadraturePolicy(max_panels=8))
        assert exc.value.estimate > 0.0
        assert exc.value.error_bound > 0.0

    def test_bounds_must_be_ordered(self):
        with pytest.raises(ValueError):
            integrate_finite(np.exp, 1.0, 0.0)


class TestSemiInfinite:
    def test_exponential(self):
        got = integrate_semi_infinite(lambda r: np.exp(-r), 1.0)
        assert got == pytest.approx(1.0, rel=1e-12)

    def test_gamma_like(self):
        got = integrate_semi_infinite(lambda r: r**2 * np.exp(-2.0 * r), 2.0)
        assert got == pytest.approx(0.25, rel=1e-12)

    def test_far_peak_is_still_captured(self):
        # peak at r = 30 with unit-rate decay; the probe must extend the cut
        f = lambda r: np.exp(-np.abs(r - 30.0))
        assert integrate_semi_infinite(f, 1.0) == pytest.approx(2.0 - math.exp(-30.0), rel=1e-9)

    def test_decay_rate_domain(self):
        with pytest.raises(ValueError):
            integrate_semi_infinite(lambda r: np.exp(-r), 0.0)


class TestSineTransform:
    def test_exponential_against_closed_form(self):
        for p in (0.5, 1.0, 10.0):
            got = sine_transform(lambda r: np.exp(-r), 1.0, p)
            assert got == pytest.approx(math.sqrt(2 / math.pi) * p / (1 + p * p), rel=1e-12)

    def test_hydrogen_ground_momentum_profile(self):
        a = 2.0
        u = lambda r: 2.0 * a**-1.5 * r * np.exp(-r / a)
        for p in (0.2, 0.5, 1.0, 2.0, 5.0):
            closed = math.sqrt(2 / math.pi) * 4.0 * a**1.5 * p / (1 + a * a * p * p) ** 2
            assert sine_transform(u, 1.0 / a, p) == pytest.approx(closed, rel=1e-8)

    def test_parseval(self):
        # int w(p)^2 dp = int u(r)^2 dr; the omitted tail above p = 24 holds
        # a few 1e-9 for this profile, well inside the 1e-7 budget
        a = 2.0
        u = lambda r: 2.0 * a**-1.5 * r * np.exp(-r / a)
        w2 = lambda p: np.asarray(
            [sine_transform(u, 1 / a, float(pi)) ** 2 for pi in np.atleast_1d(p)]
        )
        policy = QuadraturePolicy(panel_order=24, rel_tol=1e-8, abs_tol=1e-12, max_panels=96)
        norm_p = integrate_finite(w2, 1e-6, 24.0, policy)
        norm_r = integrate_semi_infinite(lambda r: u(r) ** 2, 2.0 / a)
        assert norm_p == pytest.approx(norm_r, abs=1e-7)

    def test_argument_domains(self):
        with pytest.raises(ValueError):
            sine_transform(lambda r: np.exp(-r), 1.0, 0.0)
        with pytest.raises(ValueError):
            sine_transform(lambda r: np.exp(-r), -1.0, 1.0)
