import math

import numpy as np
from scipy import special

import choquard.exceptions as exceptions
import choquard.specfun as specfun
import unit_tests.test_utils


class TestLibChoquardSpecfun(unit_tests.test_utils.ChoquardTestCase):

    def test_alpha_param_bounds(self):
        self.assertEqual(float(specfun.AlphaParam(1)), 1.0)
        for bad in (0.0, 2.0, -1.0, 2.5, float('nan'), float('inf')):
            with self.assertRaises(exceptions.DomainError):
                specfun.AlphaParam(bad)

    def test_as_alpha_passthrough(self):
        alpha = specfun.AlphaParam(0.5)
        self.assertIs(specfun.as_alpha(alpha), alpha)
        self.assertEqual(specfun.as_alpha(1.5).value, 1.5)

    def test_ln_gamma_against_scipy(self):
        x = np.array([0.05, 0.3, 0.5, 1.0, 1.5, 2.75, 7.0, 42.5])
        np.testing.assert_allclose(specfun.ln_gamma(x), special.gammaln(x),
                                   rtol=1e-13, atol=1e-14)

    def test_ln_gamma_mixed_arguments_raise_no_float_errors(self):
        x = np.array([[0.3, 1.5], [2.5, 0.1]])
        with np.errstate(invalid='raise', divide='raise'):
            values = specfun.ln_gamma(x)
        self.assertEqual(values.shape, (2, 2))
        np.testing.assert_allclose(values, special.gammaln(x), rtol=1e-13)

    def test_ln_gamma_known_values(self):
        self.assertAlmostEqual(specfun.ln_gamma(1.0), 0.0, places=14)
        self.assertAlmostEqual(specfun.ln_gamma(2.0), 0.0, places=14)
        self.assertAlmostEqual(specfun.ln_gamma(0.5),
                               0.5 * math.log(math.pi), places=13)
        self.assertIsInstance(specfun.ln_gamma(3.0), float)

    def test_ln_gamma_domain(self):
        for bad in (0.0, -1.5, float('inf')):
            with self.assertRaises(exceptions.DomainError):
                specfun.ln_gamma(bad)
        with self.assertRaises(exceptions.DomainError):
            specfun.ln_gamma(np.array([1.0, -2.0]))

    def test_gamma_ratio(self):
        self.assertAlmostEqual(specfun.gamma_ratio([5.0], [4.0]), 4.0,
                               places=12)
        self.assertAlmostEqual(
            specfun.gamma_ratio([0.5, 0.5], [1.0]), math.pi, places=12)

    def test_c_alpha(self):
        self.assertAlmostEqual(specfun.c_alpha(1.0),
                               (3.0 / math.pi) ** (1.0 / 3.0), places=14)
        for alpha in (0.3, 1.0, 1.7):
            self.assertRelClose(specfun.c_alpha(alpha) ** (4.0 - alpha),
                                specfun.c_alpha_power(alpha), 1e-13)

    def test_hls_constant(self):
        expected = math.sqrt(math.pi) * math.gamma(0.5) / math.gamma(1.5)
        self.assertRelClose(specfun.hls_constant(2, 1.0), expected, 1e-13)

    def test_hls_constant_domain(self):
        with self.assertRaises(exceptions.DomainError):
            specfun.hls_constant(2, 2.0)
        with self.assertRaises(exceptions.DomainError):
            specfun.hls_constant(0, 0.5)
        with self.assertRaises(exceptions.PoleError) as ctx:
            specfun.hls_constant(2, 2.0 - 1e-14)
        self.assertEqual(ctx.exception.value, 2.0 - 1e-14)

    def test_legendre_p(self):
        t = np.linspace(-1.0, 1.0, 11)
        for k in range(0, 9):
            np.testing.assert_allclose(specfun.legendre_p(k, t),
                                       special.eval_legendre(k, t),
                                       atol=1e-13)
        self.assertEqual(specfun.legendre_p(0, 0.3), 1.0)
        self.assertAlmostEqual(specfun.legendre_p(2, 0.5), -0.125)

    def test_legendre_p_domain(self):
        with self.assertRaises(exceptions.DomainError):
            specfun.legendre_p(2, 1.5)
        with self.assertRaises(exceptions.DomainError):
            specfun.legendre_p(-1, 0.0)

    def test_legendre_and_derivative(self):
        t = np.array([-0.7, -0.1, 0.4, 0.9])
        p, dp = specfun.legendre_and_derivative(5, t)
        np.testing.assert_allclose(p, special.eval_legendre(5, t),
                                   atol=1e-13)
        expected = 5 * (t * special.eval_legendre(5, t)
                        - special.eval_legendre(4, t)) / (t * t - 1.0)
        np.testing.assert_allclose(dp, expected, atol=1e-12)

    def test_assoc_legendre_normalized(self):
        t = np.array([-0.9, -0.2, 0.0, 0.35, 0.8])
        table = specfun.assoc_legendre_normalized(6, t)
        for k in range(7):
            for m in range(k + 1):
                norm = math.sqrt((2 * k + 1) / (4 * math.pi)
                                 * math.factorial(k - m)
                                 / math.factorial(k + m))
                # scipy includes the Condon-Shortley phase
                expected = norm * (-1) ** m * special.lpmv(m, k, t)
                np.testing.assert_allclose(table[k, m], expected,
                                           atol=1e-12)
