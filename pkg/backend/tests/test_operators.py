import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from app.calculus.kspecial import k_gamma, ml_k
from app.calculus.operators import (
    complementary_params,
    derivative_order,
    kernel_eval,
    kernel_jet,
    kernel_values,
    power_integral,
    prabhakar_derivative,
    prabhakar_integral,
)
from app.schemas import GridFunction, MLParams, QuadratureRule
from app.utils.errors import DomainError, QuadratureError


def random_params(rng, count, omega_range=(-0.5, 0.5)):
    """Parameter sets with beta/k in (2, 3]"""
    out = []
    for _ in range(count):
        k = rng.uniform(0.7, 1.6)
        out.append(
            MLParams(
                k=k,
                rho=rng.uniform(0.5, 1.5),
                beta=k * rng.uniform(2.05, 3.0),
                gamma=rng.uniform(-0.5, 1.0),
                omega=rng.uniform(*omega_range),
            )
        )
    return out


@pytest.mark.unit
@pytest.mark.operators
class TestKernel:
    """Test cases for the k-Prabhakar kernel and its jet"""

    def test_causality(self, general_params):
        """Test that the kernel vanishes for t <= 0"""
        assert kernel_eval(-1.0, general_params) == 0.0
        assert kernel_eval(0.0, general_params) == 0.0
        np.testing.assert_array_equal(kernel_values([-2.0, 0.0], general_params), [0.0, 0.0])

    def test_reduction_value(self, rl_params):
        """Test t = 1, omega = 0, k = 1, beta = 2.5 gives 1/Gamma(2.5)"""
        assert kernel_eval(1.0, rl_params) == pytest.approx(0.75225277806367, rel=1e-12)

    def test_exponential_kernel(self):
        """Test the E^1_{1,1} kernel equals exp(omega t)"""
        params = MLParams(k=1.0, rho=1.0, beta=1.0, gamma=1.0, omega=1.0)
        assert kernel_eval(0.5, params) == pytest.approx(math.exp(0.5), rel=1e-12)

    def test_shift(self, general_params):
        """Test the shift parameter lowers beta by shift * k"""
        t = 0.8
        series = ml_k(general_params.omega * t, general_params, beta=general_params.beta - 2.0)
        assert kernel_eval(t, general_params, 2) == pytest.approx(t ** (0.5 - 1.0) * series.value, rel=1e-13)

    def test_vectorised_matches_scalar(self):
        """Test kernel_values against kernel_eval"""
        params = MLParams(k=1.4, rho=0.8, beta=3.5, gamma=-0.3, omega=-0.7)
        t = np.array([0.1, 0.5, 1.0, 2.2])
        for shift in (0, 1, 2):
            expected = [kernel_eval(float(v), params, shift) for v in t]
            np.testing.assert_allclose(kernel_values(t, params, shift), expected, rtol=1e-11)

    def test_jet_zero_is_k_times_kernel(self, general_params):
        """Test that the jet carries no 1/k factor"""
        params = general_params.model_copy(update={"k": 1.3, "beta": 3.1})
        assert kernel_jet(0.7, params, 0) == pytest.approx(1.3 * kernel_eval(0.7, params), rel=1e-13)

    def test_jet_first_derivative_reduction(self, rl_params):
        """Test d/dx x^1.5/Gamma(2.5) = 1/Gamma(1.5) at x = 1"""
        assert kernel_jet(1.0, rl_params, 1) == pytest.approx(1.1283791670955126, rel=1e-12)

    @pytest.mark.parametrize("j", [1, 2])
    @pytest.mark.parametrize("x", [0.3, 0.7, 1.3])
    def test_jet_against_finite_differences(self, general_params, j, x):
        """Test the closed-form jet against central differences of j = 0"""
        h = 1e-2 * x
        f = [kernel_jet(x + i * h, general_params, 0) for i in (-2, -1, 0, 1, 2)]
        if j == 1:
            fd = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
        else:
            fd = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h**2)
        assert fd == pytest.approx(kernel_jet(x, general_params, j), rel=1e-5)

    def test_jet_domain(self, general_params):
        """Test that x <= 0 and negative j are rejected"""
        with pytest.raises(DomainError):
            kernel_jet(0.0, general_params, 1)
        with pytest.raises(DomainError):
            kernel_jet(1.0, general_params, -1)


@pytest.mark.unit
@pytest.mark.operators
class TestPrabhakarIntegral:
    """Test cases for the k-Prabhakar integral"""

    def test_zero_function(self, general_params):
        """Test P 0 = 0"""
        assert prabhakar_integral(0.0, 0.8, general_params) == 0.0

    def test_constant_one_reduction(self):
        """Test P 1 at omega = 0 equals 1/Gamma_k(beta + k)"""
        params = MLParams(k=1.5, rho=1.0, beta=2.4, gamma=0.7, omega=0.0)
        expected = 1.0 / k_gamma(3.9, 1.5)
        assert prabhakar_integral(1.0, 1.0, params) == pytest.approx(expected, rel=1e-9)
        assert power_integral(0.0, 1.0, params) == pytest.approx(expected, rel=1e-13)

    def test_closed_form_battery(self):
        """Test P 1 against the integrated series for random parameters"""
        rng = np.random.default_rng(5)
        for params in random_params(rng, 5):
            for x in (0.25, 0.5, 1.0):
                expected = power_integral(0.0, x, params)
                assert prabhakar_integral(1.0, x, params) == pytest.approx(expected, rel=1e-7)

    def test_small_order_singular_kernel(self):
        """Test beta/k < 1, where the kernel is unbounded at the endpoint"""
        params = MLParams(k=1.0, rho=1.0, beta=0.4, gamma=0.5, omega=0.3)
        assert prabhakar_integral(1.0, 0.9, params) == pytest.approx(power_integral(0.0, 0.9, params), rel=1e-8)

    def test_power_functions(self, general_params):
        """Test P (t - a)^p against its closed form with a shifted base"""
        base = 0.4
        for p in (1.0, 2.0, 3.0):
            value = prabhakar_integral(lambda t, p=p: (t - base) ** p, 1.3, general_params, base=base)
            assert value == pytest.approx(power_integral(p, 1.3, general_params, base=base), rel=1e-8)

    def test_array_points(self, general_params):
        """Test evaluation at several points in one call"""
        x = np.array([0.0, 0.3, 0.9])
        values = prabhakar_integral(1.0, x, general_params)
        assert values.shape == (3,)
        assert values[0] == 0.0
        np.testing.assert_allclose(values, power_integral(0.0, x, general_params), rtol=1e-8)

    def test_grid_function_source(self, general_params):
        """Test a sampled linear function"""
        grid = GridFunction(nodes=(0.0, 0.5, 1.0), values=(0.0, 0.5, 1.0))
        value = prabhakar_integral(grid, 0.8, general_params)
        assert value == pytest.approx(power_integral(1.0, 0.8, general_params), rel=1e-8)

    def test_causality(self, general_params):
        """Test that f supported beyond x contributes nothing"""
        x = 0.6

        def late(t):
            return np.where(t > x, 1.0, 0.0)

        assert prabhakar_integral(late, x, general_params) == 0.0

    def test_linearity(self, general_params):
        """Test linearity on a fixed node set"""
        rule = QuadratureRule(max_refinements=0)
        f1 = lambda t: np.sin(3.0 * t)
        f2 = lambda t: t**3 - t
        combined = lambda t: 2.5 * f1(t) - 0.7 * f2(t)
        p1 = prabhakar_integral(f1, 0.9, general_params, rule)
        p2 = prabhakar_integral(f2, 0.9, general_params, rule)
        assert prabhakar_integral(combined, 0.9, general_params, rule) == pytest.approx(
            2.5 * p1 - 0.7 * p2, rel=1e-12
        )

    def test_semigroup_riemann_liouville(self):
        """Test I^b1 I^b2 1 = I^(b1+b2) 1 at x = 1 for k = 1, gamma = 0, omega = 0"""
        first = MLParams(k=1.0, rho=1.0, beta=0.7, gamma=0.0)
        second = MLParams(k=1.0, rho=1.0, beta=1.6, gamma=0.0)
        inner = lambda t: power_integral(0.0, t, second)
        nested = prabhakar_integral(inner, 1.0, first)
        assert nested == pytest.approx(1.0 / gamma_fn(0.7 + 1.6 + 1.0), rel=1e-9)

    def test_domain(self, general_params):
        """Test that x below the base point is rejected"""
        with pytest.raises(DomainError):
            prabhakar_integral(1.0, 0.1, general_params, base=0.2)


@pytest.mark.unit
@pytest.mark.operators
class TestPrabhakarDerivative:
    """Test cases for the k-Prabhakar derivative"""

    def test_order(self, general_params):
        """Test m = floor(beta/k) + 1"""
        assert derivative_order(general_params) == 3
        assert derivative_order(MLParams(k=1.0, rho=1.0, beta=3.0, gamma=0.0)) == 4

    def test_complementary_params(self, general_params):
        """Test beta -> m k - beta and gamma -> -gamma"""
        inner = complementary_params(general_params, 3)
        assert inner.beta == pytest.approx(0.5)
        assert inner.gamma_p == -0.7
        assert inner.omega == general_params.omega

    def test_zero_function(self, general_params):
        """Test D 0 = 0"""
        assert prabhakar_derivative(0.0, 0.6, general_params) == 0.0

    def test_riemann_liouville_power(self):
        """Test D^2.5 t^3.5 = Gamma(4.5) t for k = 1, gamma = 0"""
        params = MLParams(k=1.0, rho=1.0, beta=2.5, gamma=0.0, omega=0.8)
        x = 0.6
        value = prabhakar_derivative(lambda t: t**3.5, x, params)
        assert value == pytest.approx(gamma_fn(4.5) * x, rel=1e-5)

    def test_left_inverse_battery(self):
        """Test D P f = f for degree <= 4 polynomials and ten parameter sets"""
        rng = np.random.default_rng(17)
        param_sets = random_params(rng, 10)
        worst = 0.0
        for index in range(20):
            params = param_sets[index % 10]
            coefficients = rng.uniform(-1.0, 1.0, int(rng.integers(1, 6)))
            coefficients[0] += 3.0 * np.sign(coefficients[0])

            def integrated(t, params=params, coefficients=coefficients):
                return sum(c * power_integral(float(p), t, params) for p, c in enumerate(coefficients))

            for x in (0.3, 0.55, 0.8):
                value = prabhakar_derivative(integrated, x, params, upper=1.0)
                expected = np.polynomial.polynomial.polyval(x, coefficients)
                worst = max(worst, abs(value - expected) / abs(expected))
        assert worst <= 1e-4

    @pytest.mark.slow
    def test_left_inverse_nested_quadrature(self, small_rule):
        """Test D P t^2 at x = 0.6 with both operators computed numerically"""
        params = MLParams(k=1.0, rho=1.0, beta=2.5, gamma=0.7, omega=0.4)

        def integrated(t):
            t = np.asarray(t, dtype=float)
            values = prabhakar_integral(lambda s: s**2, t.ravel(), params, small_rule)
            return np.reshape(values, t.shape)

        value = prabhakar_derivative(integrated, 0.6, params, small_rule, upper=1.0)
        assert value == pytest.approx(0.36, rel=1e-4)

    def test_tolerates_rounding_level_noise(self, general_params):
        """Test that third differences of slightly noisy values still pass the level check"""

        def integrated(t, scale=1e-13):
            exact = 3.0 * power_integral(0.0, t, general_params) + power_integral(1.0, t, general_params)
            return exact * (1.0 + scale * np.sin(1e7 * np.asarray(t)))

        assert derivative_order(general_params) == 3
        value = prabhakar_derivative(integrated, 0.55, general_params, upper=1.0)
        assert value == pytest.approx(3.55, rel=1e-2)

        with pytest.raises(QuadratureError):
            prabhakar_derivative(lambda t: integrated(t, 1e-6), 0.55, general_params, upper=1.0)

    def test_stencil_must_fit(self, general_params):
        """Test DomainError when the stencil leaves the domain"""
        with pytest.raises(DomainError):
            prabhakar_derivative(1.0, 0.001, general_params, upper=1.0)
        with pytest.raises(DomainError):
            prabhakar_derivative(1.0, 0.999, general_params, upper=1.0)
