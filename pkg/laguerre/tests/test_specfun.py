import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose
from scipy import special

from laguerre import quadrature
from laguerre.exceptions import DivergentMoment, InvalidInput
from laguerre.specfun import (
    bessel_k,
    bessel_k_integral,
    laguerre_overlap,
    log_bessel_k,
    monic_laguerre,
    scalar_moment,
    scalar_moment_quadrature,
)


class BesselTests(SimpleTestCase):
    def test_half_order_closed_form(self):
        z = 2.0
        expected = np.sqrt(np.pi / (2 * z)) * np.exp(-z)
        self.assertAlmostEqual(bessel_k(0.5, z) / expected, 1.0, places=13)
        self.assertAlmostEqual(bessel_k_integral(0.5, z) / expected, 1.0, places=11)

    def test_integral_representation_matches(self):
        for nu in (0.0, 1.3, 4.0):
            for z in (0.5, 2.0, 7.5):
                assert_allclose(bessel_k_integral(nu, z), bessel_k(nu, z), rtol=1e-10)

    def test_log_form_survives_large_argument(self):
        value = log_bessel_k(2.0, 2000.0)
        self.assertTrue(np.isfinite(value))
        self.assertLess(value, -1990.0)

    def test_recurrence_on_grid(self):
        for nu in np.linspace(0.5, 5.0, 10):
            for z in np.linspace(0.5, 10.0, 12):
                terms = [bessel_k(nu + 1, z), bessel_k(nu - 1, z), 2 * nu / z * bessel_k(nu, z)]
                residual = abs(terms[0] - terms[1] - terms[2])
                self.assertLessEqual(residual, 1e-10 * max(terms), f"nu={nu} z={z}")

    def test_rejects_nonpositive_argument(self):
        with self.assertRaises(InvalidInput):
            bessel_k(1.0, 0.0)


class ScalarMomentTests(SimpleTestCase):
    def test_closed_form_against_quadrature(self):
        for alpha in (0.5, 1.0, 2.0):
            for s in (0.25, 1.0, 4.0):
                for k in (-1, 0, 3, 8, 12):
                    sigma = alpha + k + 1
                    assert_allclose(scalar_moment(sigma, s), scalar_moment_quadrature(sigma, s), rtol=1e-10)

    def test_derivative_in_s_lowers_the_order(self):
        h = 1e-4
        for sigma in (1.5, 2.0, 3.5):
            for s in (0.5, 1.0, 2.0):
                slope = (scalar_moment(sigma, s + h) - scalar_moment(sigma, s - h)) / (2 * h)
                assert_allclose(slope, -scalar_moment(sigma - 1, s), rtol=1e-6)

    def test_continuous_as_deformation_vanishes(self):
        for sigma in (2.0, 3.0, 5.0):
            assert_allclose(scalar_moment(sigma, 1e-6), special.gamma(sigma), rtol=1e-4)

    def test_large_deformation_where_kv_underflows(self):
        sigma, s = 60.0, 1.6e5
        self.assertEqual(special.kv(sigma, 2 * np.sqrt(s)), 0.0)
        value = scalar_moment(sigma, s)
        self.assertGreater(value, 0.0)
        assert_allclose(value, scalar_moment_quadrature(sigma, s), rtol=1e-8)

    def test_gamma_at_zero_deformation(self):
        self.assertEqual(scalar_moment(3.0, 0.0), 2.0)
        assert_allclose(scalar_moment(2.5, 0.0), special.gamma(2.5))

    def test_negative_order_converges_when_deformed(self):
        value = scalar_moment(-1.5, 1.0)
        assert_allclose(value, scalar_moment_quadrature(-1.5, 1.0), rtol=1e-10)

    def test_divergence_at_zero_deformation(self):
        with self.assertRaises(DivergentMoment):
            scalar_moment(0.0, 0.0)
        with self.assertRaises(DivergentMoment):
            scalar_moment_quadrature(-0.5, 0.0)

    def test_quadrature_level_floor(self):
        with self.assertRaises(InvalidInput):
            quadrature.half_line(quadrature.log_laguerre_factor(1.0, 0.0), max_level=2)

    def test_half_line_with_array_part(self):
        value = quadrature.half_line(quadrature.log_laguerre_factor(1.0, 0.0), lambda x: np.stack([x, x * x]).T)
        assert_allclose(value, [2.0, 6.0], rtol=1e-12)


class LaguerreTests(SimpleTestCase):
    def test_low_degree_coefficients(self):
        a = 1.5
        assert_allclose(monic_laguerre(0, a), [1.0])
        assert_allclose(monic_laguerre(1, a), [-(a + 1), 1.0])
        assert_allclose(monic_laguerre(2, a), [(a + 1) * (a + 2), -2 * (a + 2), 1.0])

    def test_overlap_norm_and_orthogonality(self):
        a = 1.0
        # ||Lhat_n||^2 = n! Gamma(n + a + 1)
        assert_allclose(laguerre_overlap(2, 2, a, a, a + 1), 2 * special.gamma(4.0), rtol=1e-13)
        self.assertAlmostEqual(laguerre_overlap(2, 1, a, a, a + 1), 0.0, places=10)
        self.assertAlmostEqual(laguerre_overlap(3, 0, a, a, a + 1), 0.0, places=10)

    def test_overlap_matches_quadrature(self):
        n, m, a, sigma = 3, 2, 2.0, 2.0
        p, q = np.polynomial.Polynomial(monic_laguerre(n, a)), np.polynomial.Polynomial(monic_laguerre(m, a))
        value = quadrature.half_line(quadrature.log_laguerre_factor(sigma - 1, 0.0), lambda x: p(x) * q(x))
        assert_allclose(laguerre_overlap(n, m, a, a, sigma), value, rtol=1e-11)

    def test_overlap_divergent_weight(self):
        with self.assertRaises(DivergentMoment):
            laguerre_overlap(1, 1, 1.0, 1.0, 0.0)
