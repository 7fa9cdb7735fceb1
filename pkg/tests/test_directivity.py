import math

import numpy as np
import pytest
from scipy import integrate

from arraydirectivity import ArrayLayout, DirectionSpec
from arraydirectivity.directivity import (
    ISOTROPIC,
    OMNI,
    DirectivityReport,
    ElementPattern,
    array_factor,
    beta_fn,
    directivity_analytic,
    directivity_quadrature,
    pattern_pair_weight,
    radiation_intensity,
    self_term,
    sinc_kernel_derivative,
    to_dbi,
)
from arraydirectivity.errors import NonPositiveDenominator


def sphere_average_cos(pattern, p, k):
    """Direct double integral of pattern * cos(k p . a) over the sphere, divided by 4 pi."""
    def f(phi, theta):
        a = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        return pattern.power(theta) * math.cos(k * np.dot(p, a)) * math.sin(theta)
    val, _ = integrate.dblquad(f, 0, math.pi, 0, 2 * math.pi, epsabs=1e-12, epsrel=1e-12)
    return val / (4 * math.pi)


class TestPattern:
    def test_power(self):
        p = ElementPattern(1, 2)
        assert p.power(0.3) == pytest.approx(math.sin(0.3) ** 2 * math.cos(0.3) ** 4)

    @pytest.mark.parametrize("u, v", [(-1, 0), (0, 1.5)])
    def test_invalid_exponents(self, u, v):
        with pytest.raises(ValueError):
            ElementPattern(u, v)


class TestBetaAndSelfTerm:
    def test_beta_known_values(self):
        assert beta_fn(1, 0.5) == pytest.approx(2.0)
        assert beta_fn(1, 1.5) == pytest.approx(2.0 / 3.0)
        assert beta_fn(2, 0.5) == pytest.approx(4.0 / 3.0)

    def test_beta_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            beta_fn(0, 1)

    @pytest.mark.parametrize("u, v", [(0, 0), (0, 1), (1, 0), (1, 1), (2, 3)])
    def test_self_term_is_half_pattern_average(self, u, v):
        pat = ElementPattern(u, v)
        avg, _ = integrate.quad(lambda t: pat.power(t) * math.sin(t), 0, math.pi)
        assert self_term(pat) == pytest.approx(0.25 * avg, rel=1e-12)


class TestKernels:
    @pytest.mark.parametrize("order", [0, 4, 6])
    def test_higher_orders_match_finite_difference(self, order):
        rng = np.random.default_rng(order)
        b = rng.uniform(0.2, 6, 30)
        z = rng.uniform(-6, 6, 30)
        if order == 0:
            r = np.hypot(b, z)
            np.testing.assert_allclose(sinc_kernel_derivative(b, z, 1.0, 0), np.sin(r) / r, atol=1e-14)
            return
        lower = order - 2
        h = 1e-3
        def f(zz):
            return sinc_kernel_derivative(b, zz, 1.0, lower)
        fd = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)
        np.testing.assert_allclose(sinc_kernel_derivative(b, z, 1.0, order), fd, atol=1e-6)

    def test_phase_units(self):
        assert sinc_kernel_derivative(0.5, 0.3, 2.0, 2) == pytest.approx(sinc_kernel_derivative(1.0, 0.6, 1.0, 2))

    def test_odd_order_rejected(self):
        with pytest.raises(ValueError):
            sinc_kernel_derivative(1.0, 1.0, 1.0, 3)

    def test_origin_limits(self):
        # d^n/dz^n sinc at 0 equals (-1)^(n/2) / (n + 1).
        for n in (0, 2, 4, 6):
            assert sinc_kernel_derivative(0.0, 0.0, 1.0, n) == pytest.approx((-1) ** (n // 2) / (n + 1), abs=1e-14)

    @pytest.mark.parametrize("u, v", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_pair_weight_matches_direct_integral(self, u, v):
        pat = ElementPattern(u, v)
        p = np.array([0.7, -0.4, 1.1])
        k = 2.3
        expected = sphere_average_cos(pat, p, k)
        got = pattern_pair_weight(math.hypot(p[0], p[1]), p[2], k, pat)
        assert got == pytest.approx(expected, abs=1e-10)


class TestDirectivity:
    def test_single_isotropic_element_is_unity(self):
        lay = ArrayLayout([[0, 0, 0]])
        rep = directivity_analytic(lay, ISOTROPIC, DirectionSpec(0.3, 0.2))
        assert rep.linear == pytest.approx(1.0)
        assert rep.dbi == pytest.approx(0.0, abs=1e-12)

    def test_single_omni_element_peak(self):
        lay = ArrayLayout([[1.0, 2.0, 3.0]])
        assert directivity_analytic(lay, OMNI, DirectionSpec(0.0, 0.0)).linear == pytest.approx(3.0)
        assert directivity_analytic(lay, OMNI, DirectionSpec(math.pi / 3, 0.0)).linear == pytest.approx(0.75)

    def test_half_wave_broadside_pair(self):
        # Two isotropic elements lambda/2 apart: D = 2 / (1 + sinc(pi)) = 2.
        lay = ArrayLayout([[0, 0, 0], [math.pi, 0, 0]])
        rep = directivity_analytic(lay, ISOTROPIC, DirectionSpec(0.0, 0.0))
        assert rep.linear == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("u, v", [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)])
    def test_analytic_matches_quadrature(self, u, v):
        rng = np.random.default_rng(10 * u + v)
        lay = ArrayLayout(rng.uniform(-3, 3, (5, 3)), rng.uniform(0.5, 1.5, 5), rng.uniform(0, 6, 5))
        d = DirectionSpec(0.6, 1.1)
        a = directivity_analytic(lay, ElementPattern(u, v), d)
        q = directivity_quadrature(lay, ElementPattern(u, v), d)
        assert a.linear == pytest.approx(q.linear, rel=1e-8)
        assert a.f1 == pytest.approx(q.f1, rel=1e-12)

    def test_array_factor_and_intensity(self):
        lay = ArrayLayout([[0, 0, 0], [0, 0, 1.0]], phases=[0.0, math.pi])
        assert abs(array_factor(lay, (0.0, 0.0), k=math.pi)) == pytest.approx(2.0)
        assert radiation_intensity(lay, ISOTROPIC, 0.0, 0.0, k=math.pi) == pytest.approx(4.0)
        out = radiation_intensity(lay, OMNI, np.array([0.0, math.pi / 2]), 0.0, k=math.pi)
        assert out.shape == (2,)
        assert out[1] == pytest.approx(0.0, abs=1e-30)

    def test_nonpositive_denominator(self):
        with pytest.raises(NonPositiveDenominator):
            DirectivityReport.from_parts(1.0, 0.0)

    def test_to_dbi(self):
        assert to_dbi(10.0) == pytest.approx(10.0)
