import itertools
import math

import numpy as np
import pytest
from scipy.special import expit

from sigtron.exceptions import DomainError, OverflowGuardError, UnsupportedParameterError
from sigtron.extfun import (
    SigtronParams,
    derivative_coefficient,
    ext_exp,
    ext_ln,
    f_integral,
    f_integral_array,
    f_integral_limit,
    f_quadrature,
    inflection_point,
    sigtron,
    sigtron_grad,
    sigtron_nth_deriv,
    stirling_first,
    stirling_second,
    unit_order,
)

ALPHAS = (0.0, 0.5, 0.75, 0.9, 1.1, 1.5, 2.0)


def _params(alpha, mag=2.0):
    return SigtronParams.from_c_alpha(alpha, mag if alpha > 1 else -mag)


class TestParams:
    def test_validation(self):
        with pytest.raises(UnsupportedParameterError):
            SigtronParams(2.5, 1.0)
        with pytest.raises(UnsupportedParameterError):
            SigtronParams(1.5, 0.0)
        with pytest.raises(UnsupportedParameterError):
            SigtronParams(1.5, math.inf)

    def test_from_c_alpha_roundtrip(self):
        for a in ALPHAS:
            for mag in (0.5, 1.0, 2.0, 7.0):
                p = _params(a, mag)
                assert p.c_alpha == pytest.approx(mag if a > 1 else -mag, rel=1e-12)

    def test_from_c_alpha_rejects_wrong_sign(self):
        with pytest.raises(UnsupportedParameterError):
            SigtronParams.from_c_alpha(1.5, -2.0)
        with pytest.raises(UnsupportedParameterError):
            SigtronParams.from_c_alpha(1.0, 2.0)

    def test_from_order(self):
        p = SigtronParams.from_order(4, 2.0, side=-1)
        assert p.alpha == 0.75
        assert p.order == 4
        assert p.c_alpha == pytest.approx(-2.0)

    def test_slope_scale_equals_c_power(self):
        for a in ALPHAS:
            p = _params(a)
            assert p.slope_scale == pytest.approx(p.c ** (p.alpha - 1.0), rel=1e-12)
        assert SigtronParams(1.0, 3.0).slope_scale == 1.0

    def test_mirror(self):
        p = SigtronParams(0.5, 4.0)
        assert p.mirror() == SigtronParams(1.5, 0.25)
        assert p.mirror().mirror() == p

    def test_unit_order(self):
        assert unit_order(0.1) == 10
        assert unit_order(1.0) == 1
        assert unit_order(0.3) is None
        assert unit_order(-1.0) is None


class TestExtendedFunctions:
    def test_alpha_one_is_scaled_exp_and_log(self):
        p = SigtronParams(1.0, 2.5)
        x = np.linspace(-3, 3, 13)
        np.testing.assert_allclose(ext_exp(p, x), 2.5 * np.exp(x), rtol=1e-15)
        np.testing.assert_allclose(ext_ln(p, np.exp(x)), x - math.log(2.5), rtol=1e-14, atol=1e-15)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.9, 1.1, 1.5, 1.9])
    def test_inverse_pair(self, alpha):
        p = SigtronParams(alpha, 1.7)
        y = np.geomspace(1e-3, 1e3, 40)
        np.testing.assert_allclose(ext_exp(p, ext_ln(p, y)), y, rtol=1e-10)

    def test_closed_form_definition(self):
        # exp_{alpha,c}(x) = c (1 - x/c_alpha)^(1/(1-alpha)) on the domain
        p = SigtronParams(1.5, 3.0)
        x = np.array([-5.0, -1.0, 0.0, 0.5])
        expected = 3.0 * (1.0 - x / p.c_alpha) ** (1.0 / (1.0 - 1.5))
        np.testing.assert_allclose(ext_exp(p, x), expected, rtol=1e-14)
        assert ext_exp(p, 0.0) == pytest.approx(3.0)

    def test_ext_exp_blows_up_past_kink(self):
        p = SigtronParams(1.5, 1.0)
        assert ext_exp(p, p.c_alpha + 1.0) == math.inf

    def test_ext_exp_domain_below_one(self):
        p = SigtronParams(0.5, 1.0)
        with pytest.raises(DomainError):
            ext_exp(p, p.c_alpha - 1.0)
        assert ext_exp(p, p.c_alpha) == 0.0
        assert ext_exp(p, p.c_alpha + 1.0) > 0.0

    def test_ext_ln_domain(self):
        with pytest.raises(DomainError):
            ext_ln(SigtronParams(1.5, 1.0), 0.0)
        with pytest.raises(DomainError):
            ext_ln(SigtronParams(0.5, 1.0), -1.0)
        assert ext_ln(SigtronParams(0.5, 1.0), 0.0) == pytest.approx(SigtronParams(0.5, 1.0).c_alpha)

    def test_scalar_in_scalar_out(self):
        p = SigtronParams(1.5, 1.0)
        assert isinstance(ext_exp(p, 0.3), float)
        assert isinstance(sigtron(p, 0.3), float)
        assert sigtron(p, np.array([0.3])).shape == (1,)


class TestSigtron:
    def test_alpha_one_is_logistic_shifted_by_log_c(self):
        x = np.linspace(-20, 20, 81)
        np.testing.assert_allclose(sigtron(SigtronParams(1.0, 1.0), x), expit(x), rtol=1e-15)

    def test_definition_inside_domain(self):
        # s = c / (c + exp_{alpha,c}(-x))
        p = SigtronParams(1.5, 2.0)
        x = np.linspace(-p.c_alpha + 0.1, 10, 30)
        direct = p.c / (p.c + ext_exp(p, -x))
        np.testing.assert_allclose(sigtron(p, x), direct, rtol=1e-13)

    def test_perceptron_branches(self):
        up, down = _params(1.5), _params(0.5)
        assert sigtron(up, -up.c_alpha - 1.0) == 0.0
        assert sigtron(down, -down.c_alpha + 1.0) == 1.0

    def test_continuous_at_kink(self):
        for a in (0.5, 0.9, 1.1, 1.5):
            p = _params(a)
            k = -p.c_alpha
            side = 1.0 if a > 1 else -1.0
            assert sigtron(p, k) == (0.0 if a > 1 else 1.0)
            assert abs(sigtron(p, k + side * 1e-9) - sigtron(p, k)) < 1e-4

    def test_half_at_zero_for_unit_kink_ratio(self):
        # |c_alpha| = 2 puts the probability-half point at the origin
        for a in ALPHAS:
            assert sigtron(_params(a), 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_monotone_and_bounded(self):
        x = np.linspace(-30, 30, 2001)
        for a in ALPHAS:
            s = sigtron(_params(a, 1.0), x)
            assert np.all(np.diff(s) >= 0)
            assert s.min() >= 0.0 and s.max() <= 1.0

    def test_gradient_formula_against_fd(self):
        for a in (0.25, 0.5, 0.9, 1.1, 1.5, 1.75):
            p = _params(a)
            side = 1.0 if a > 1 else -1.0
            x = -p.c_alpha + side * np.linspace(0.1, 8.0, 50)
            h = 1e-6
            fd = (sigtron(p, x + h) - sigtron(p, x - h)) / (2 * h)
            np.testing.assert_allclose(sigtron_grad(p, x), fd, rtol=1e-6, atol=1e-10)

    def test_gradient_at_origin(self):
        for a in (0.5, 1.0, 1.5):
            p = SigtronParams(a, 1.0)
            assert sigtron_grad(p, 0.0) == pytest.approx(0.25, rel=1e-12)

    def test_gradient_rejects_endpoints(self):
        with pytest.raises(UnsupportedParameterError):
            sigtron_grad(SigtronParams(2.0, 1.0), 0.0)
        with pytest.raises(UnsupportedParameterError):
            sigtron_grad(SigtronParams(0.0, 1.0), 0.0)

    def test_gradient_zero_off_domain(self):
        p = _params(1.5)
        assert sigtron_grad(p, -p.c_alpha - 3.0) == 0.0


def _perm_cycles(perm):
    seen, cycles = set(), 0
    for i in range(len(perm)):
        if i not in seen:
            cycles += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = perm[j]
    return cycles


def _brute_second(n, k):
    # surjections from n labelled items onto k labelled blocks, divided by k!
    if n == 0:
        return int(k == 0)
    count = sum(1 for f in itertools.product(range(k), repeat=n) if len(set(f)) == k)
    return count // math.factorial(k)


class TestStirling:
    @pytest.mark.parametrize("n", range(0, 8))
    def test_first_kind_counts_cycles(self, n):
        counts = [0] * (n + 1)
        for perm in itertools.permutations(range(n)):
            counts[_perm_cycles(perm)] += 1
        if n == 0:
            counts = [1]
        assert [stirling_first(n, k) for k in range(n + 1)] == counts

    @pytest.mark.parametrize("n", range(0, 8))
    def test_second_kind_counts_partitions(self, n):
        assert [stirling_second(n, k) for k in range(n + 1)] == [
            _brute_second(n, k) for k in range(n + 1)]

    def test_boundary_conventions(self):
        assert stirling_first(0, 0) == stirling_second(0, 0) == 1
        assert stirling_first(5, 0) == stirling_second(5, 0) == 0
        assert stirling_first(3, 5) == stirling_second(3, 5) == 0
        assert stirling_first(6, 1) == math.factorial(5)
        assert stirling_second(6, 1) == 1

    def test_overflow_guard(self):
        with pytest.raises(OverflowGuardError):
            stirling_first(21, 3)
        assert stirling_first(21, 3, cap=30) > 0

    def test_coefficients_at_alpha_one_reduce_to_logistic(self):
        # d^n/dz^n expit = sum_k (-1)^(n+k) k! S(n,k) s (1-s)^k ... with alpha = 1
        for n in range(1, 6):
            for k in range(1, n + 1):
                expected = (-1) ** (n + k) * math.factorial(k) * stirling_second(n, k)
                assert derivative_coefficient(n, k, 1.0) == expected


class TestNthDerivative:
    def test_order_one_matches_gradient(self):
        p = _params(1.25)
        x = np.linspace(-1.5, 6, 40)
        np.testing.assert_allclose(sigtron_nth_deriv(p, 1, x), sigtron_grad(p, x), rtol=1e-12)

    def test_logistic_second_derivative(self):
        p = SigtronParams(1.0, 1.0)
        x = np.linspace(-8, 8, 33)
        s = expit(x)
        np.testing.assert_allclose(sigtron_nth_deriv(p, 2, x), s * (1 - s) * (1 - 2 * s),
                                   rtol=1e-10, atol=1e-16)

    def test_window_enforced(self):
        with pytest.raises(UnsupportedParameterError):
            sigtron_nth_deriv(_params(1.5), 2, 0.0)
        with pytest.raises(ValueError):
            sigtron_nth_deriv(_params(1.1), 0, 0.0)

    def test_zero_off_domain(self):
        p = _params(1.2)
        assert sigtron_nth_deriv(p, 3, -p.c_alpha - 1.0) == 0.0


class TestInflection:
    def test_reference_value(self):
        assert inflection_point(SigtronParams(1.5, 4.0)) == pytest.approx(-0.42264973, abs=1e-8)

    @pytest.mark.parametrize("alpha", [0.6, 0.8, 1.0, 1.2, 1.4])
    def test_second_derivative_vanishes(self, alpha):
        p = SigtronParams(alpha, 1.3)
        assert sigtron_nth_deriv(p, 2, inflection_point(p)) == pytest.approx(0.0, abs=1e-12)

    def test_probability_at_inflection(self):
        # the sigmoid value at the inflection point is (2 - alpha) / 2
        for a in (0.3, 0.7, 1.3, 1.7):
            p = SigtronParams(a, 2.0)
            assert sigtron(p, inflection_point(p)) == pytest.approx((2 - a) / 2, rel=1e-12)


def _midpoint(z, b, n=2_000_000):
    t = (np.arange(n) + 0.5) * (z / n)
    return float(np.sum(1.0 / (1.0 + t ** (1.0 / b))) * (z / n))


class TestFIntegral:
    def test_riemann_oracle_order_ten(self):
        assert f_integral(2.5, 0.1) == pytest.approx(_midpoint(2.5, 0.1), abs=1e-8)

    def test_riemann_oracle_fractional_order(self):
        assert f_integral(3.0, 0.3) == pytest.approx(_midpoint(3.0, 0.3), abs=1e-8)

    @pytest.mark.parametrize("k", range(1, 13))
    def test_integer_orders_match_quadrature(self, k):
        z = np.array([0.0, 1e-3, 0.5, 1.0, 2.0, 7.5, 40.0, 300.0])
        np.testing.assert_allclose(f_integral_array(z, 1.0 / k), f_quadrature(z, 1.0 / k),
                                   atol=1e-9, rtol=0)

    @pytest.mark.parametrize("k", [2, 3, 7, 10])
    def test_limit_and_tail(self, k):
        big = 1e12
        assert f_integral_array(big, 1.0 / k) == pytest.approx(
            f_integral_limit(k) - big ** (1 - k) / (k - 1), rel=1e-14)
        just_below = f_integral_array(1e8 * (1 - 1e-12), 1.0 / k)
        just_above = f_integral_array(1e8 * (1 + 1e-12), 1.0 / k)
        assert just_above == pytest.approx(just_below, abs=1e-12)

    def test_known_values(self):
        assert f_integral(1.0, 1.0) == pytest.approx(math.log(2.0), rel=1e-15)
        assert f_integral(1.0, 0.5) == pytest.approx(math.pi / 4, rel=1e-15)
        assert f_integral(0.0, 0.2) == 0.0

    def test_scalar_matches_array(self):
        z = np.linspace(0, 5, 11)
        scal = [f_integral(v, 0.25) for v in z]
        np.testing.assert_allclose(f_integral_array(z, 0.25), scal, rtol=1e-14)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            f_integral(-1.0, 0.5)
        with pytest.raises(DomainError):
            f_integral(1.0, 0.0)
        with pytest.raises(DomainError):
            f_integral_array(np.array([1.0, np.nan]), 0.5)

    def test_increasing_and_below_limit(self):
        z = np.geomspace(1e-4, 5.0, 60)
        far = np.geomspace(5.0, 1e12, 60)
        for k in (2, 5, 9):
            assert np.all(np.diff(f_integral_array(z, 1.0 / k)) > 0)
            v = f_integral_array(far, 1.0 / k)
            # flat to within a few ulps once increments drop below resolution
            ulps = 8 * np.finfo(float).eps
            assert np.all(np.diff(v) >= -ulps)
            assert np.all(v <= f_integral_limit(k) + ulps)
