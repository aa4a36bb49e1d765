import logging
import math

import numpy as np

import choquard.exceptions as exceptions
import choquard.spheregeo as spheregeo
import unit_tests.test_utils


class TestLibChoquardSpheregeo(unit_tests.test_utils.ChoquardTestCase):

    def test_sphere_point_normalized(self):
        point = spheregeo.SpherePoint((0.0, 0.0, 2.0))
        self.assertEqual(point.xi, (0.0, 0.0, 1.0))
        np.testing.assert_array_equal(point.as_array(), [0.0, 0.0, 1.0])
        with self.assertRaises(exceptions.DomainError):
            spheregeo.SpherePoint((0.0, 0.0, 0.0))

    def test_harmonic_index(self):
        self.assertEqual(spheregeo.HarmonicIndex(2, 1).azimuthal, (0, None))
        self.assertEqual(spheregeo.HarmonicIndex(2, 2).azimuthal,
                         (1, 'cos'))
        self.assertEqual(spheregeo.HarmonicIndex(2, 5).azimuthal,
                         (2, 'sin'))
        for k, j in ((1, 4), (1, 0), (-1, 1)):
            with self.assertRaises(exceptions.DomainError):
                spheregeo.HarmonicIndex(k, j)

    def test_harmonic_indices(self):
        self.assertEqual(len(spheregeo.harmonic_indices(2)), 9)
        indices = spheregeo.harmonic_indices(3, start=1)
        self.assertEqual(len(indices), 15)
        self.assertEqual(indices[0], spheregeo.HarmonicIndex(1, 1))

    def test_plane_field_validation(self):
        with self.assertRaises(exceptions.DomainError):
            spheregeo.PlaneField(np.ones_like, decay_class='fast')
        with self.assertRaises(exceptions.DomainError):
            spheregeo.PlaneField(np.ones_like,
                                 decay_class=spheregeo.ALGEBRAIC)

    def test_stereo_known_points(self):
        np.testing.assert_allclose(spheregeo.stereo([0.0, 0.0]),
                                   [0.0, 0.0, 1.0])
        np.testing.assert_allclose(spheregeo.stereo([1.0, 0.0]),
                                   [1.0, 0.0, 0.0])
        self.assertAlmostEqual(float(spheregeo.rho([0.0, 0.0])),
                               math.sqrt(2.0))

    def test_stereo_round_trip(self):
        x = unit_tests.test_utils.random_plane_points(7, 50, 0.0, 20.0)
        xi = spheregeo.stereo(x)
        np.testing.assert_allclose(np.linalg.norm(xi, axis=-1), 1.0,
                                   atol=1e-14)
        np.testing.assert_allclose(spheregeo.stereo_inv(xi), x,
                                   rtol=1e-12, atol=1e-13)

    def test_stereo_inv_south_pole(self):
        with self.assertRaises(exceptions.DomainError):
            spheregeo.stereo_inv(np.array([0.0, 0.0, -1.0]))
        with self.assertRaises(exceptions.DomainError):
            spheregeo.stereo_inv(spheregeo.SpherePoint((0.0, 0.0, -1.0)))

    def test_pushforward_pullback(self):
        f = spheregeo.PlaneField(lambda x: np.sum(x * x, axis=-1))
        x = unit_tests.test_utils.random_plane_points(3, 20)
        back = spheregeo.pullback(spheregeo.pushforward(f))
        np.testing.assert_allclose(back(x), f(x), rtol=1e-12)
        self.assertEqual(back.decay_class, spheregeo.BOUNDED)

    def test_real_sph_harm_degree_one(self):
        c = math.sqrt(3.0 / (4.0 * math.pi))
        self.assertAlmostEqual(
            spheregeo.real_sph_harm(spheregeo.HarmonicIndex(1, 1),
                                    (0.0, 0.0, 1.0)), c, places=14)
        self.assertAlmostEqual(
            spheregeo.real_sph_harm(spheregeo.HarmonicIndex(1, 2),
                                    (1.0, 0.0, 0.0)), c, places=14)
        self.assertAlmostEqual(
            spheregeo.real_sph_harm(spheregeo.HarmonicIndex(1, 3),
                                    spheregeo.SpherePoint((0.0, 1.0, 0.0))),
            c, places=14)

    def test_harmonic_basis_matches_real_sph_harm(self):
        xi = unit_tests.test_utils.random_sphere_points(11, 6)
        basis = spheregeo.harmonic_basis(3, xi)
        for column, idx in enumerate(spheregeo.harmonic_indices(3)):
            np.testing.assert_allclose(
                basis[:, column], spheregeo.real_sph_harm(idx, xi),
                atol=1e-13)

    def test_harmonic_basis_orthonormal(self):
        rule = spheregeo.sphere_quadrature(8)
        basis = spheregeo.harmonic_basis(5, rule.nodes)
        gram = basis.T @ (rule.weights[:, None] * basis)
        np.testing.assert_allclose(gram, np.eye(basis.shape[1]),
                                   atol=1e-12)

    def test_sphere_quadrature(self):
        rule = spheregeo.sphere_quadrature(6)
        self.assertEqual(rule.exactness_degree, 11)
        self.assertEqual(rule.nodes.shape, (72, 3))
        self.assertAlmostEqual(rule.integrate(lambda xi: np.ones(len(xi))),
                               4.0 * math.pi, places=12)
        self.assertAlmostEqual(rule.integrate(lambda xi: xi[:, 2] ** 2),
                               4.0 * math.pi / 3.0, places=12)
        self.assertEqual(len(rule.points()), 72)
        with self.assertRaises(exceptions.DomainError):
            spheregeo.sphere_quadrature(0)

    def test_plane_quadrature(self):
        rule = spheregeo.plane_quadrature(8)
        value = rule.integrate(
            lambda x: (1.0 + np.sum(x * x, axis=-1)) ** -2)
        self.assertAlmostEqual(value, math.pi, places=12)

    def test_rotation_to_pole(self):
        for xi in unit_tests.test_utils.random_sphere_points(5, 4):
            rot = spheregeo.rotation_to_pole(xi)
            np.testing.assert_allclose(rot.T @ rot, np.eye(3), atol=1e-14)
            np.testing.assert_allclose(rot @ [0.0, 0.0, 1.0], xi,
                                       atol=1e-14)

    def test_pole_rule_plain(self):
        nodes, weights = spheregeo.pole_rule((1.0, 0.0, 0.0), 6)
        self.assertAlmostEqual(float(np.sum(weights)), 4.0 * math.pi,
                               places=12)
        np.testing.assert_allclose(np.linalg.norm(nodes, axis=-1), 1.0,
                                   atol=1e-14)

    def test_pole_rule_riesz(self):
        # integral of |xi - eta|^-1 over the sphere is 4 pi
        xi = unit_tests.test_utils.random_sphere_points(2, 1)[0]
        nodes, weights = spheregeo.pole_rule(xi, 8, spheregeo.RIESZ, 1.0)
        self.assertAlmostEqual(float(np.sum(weights)), 4.0 * math.pi,
                               places=11)

    def test_pole_rule_log(self):
        xi = unit_tests.test_utils.random_sphere_points(4, 1)[0]
        nodes, weights = spheregeo.pole_rule(xi, 24, spheregeo.LOG)
        expected = 2.0 * math.pi * (2.0 * math.log(2.0) - 1.0)
        self.assertAlmostEqual(float(np.sum(weights)), expected, places=9)

    def test_pole_rule_invalid(self):
        with self.assertRaises(exceptions.DomainError):
            spheregeo.pole_rule((0.0, 0.0, 1.0), 4, spheregeo.RIESZ)
        with self.assertRaises(exceptions.DomainError):
            spheregeo.pole_rule((0.0, 0.0, 1.0), 4, 'gauss')

    def test_degree_one_normalization(self):
        with self.assertLogs('choquard.spheregeo', level=logging.WARNING):
            result = spheregeo.degree_one_normalization()
        self.assertAlmostEqual(result.adopted_norm, 1.0, places=12)
        self.assertAlmostEqual(result.stated_norm, math.sqrt(2.0),
                               places=12)
