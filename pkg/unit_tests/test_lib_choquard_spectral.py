import logging
import math

import numpy as np

import choquard.exceptions as exceptions
import choquard.specfun as specfun
import choquard.spectral as spectral
import choquard.spheregeo as spheregeo
import unit_tests.test_utils


class TestLibChoquardSpectral(unit_tests.test_utils.ChoquardTestCase):

    def test_mu_k_alpha_one(self):
        self.assertEqual(spectral.mu_k(0, 1.0), 4.0 * math.pi)
        for k in range(1, 8):
            self.assertRelClose(spectral.mu_k(k, 1.0),
                                4.0 * math.pi / (2 * k + 1), 1e-13)

    def test_mu_k_decreasing(self):
        for alpha in (0.1, 0.9, 1.9):
            values = [spectral.mu_k(k, alpha) for k in range(10)]
            self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_mu_k_pole(self):
        with self.assertRaises(exceptions.PoleError):
            spectral.mu_k(1, 2.0 - 1e-13)
        with self.assertRaises(exceptions.DomainError):
            spectral.mu_k(-1, 1.0)

    def test_mu_tilde_k(self):
        self.assertAlmostEqual(spectral.mu_tilde_k(1).value, -math.pi)
        self.assertFalse(spectral.mu_tilde_k(3).flagged)
        with self.assertLogs('choquard.spectral', level=logging.WARNING):
            zero = spectral.mu_tilde_k(0)
        self.assertTrue(zero.flagged)
        self.assertAlmostEqual(zero.value,
                               2.0 * math.pi * (2.0 * math.log(2.0) - 1.0))
        self.assertAlmostEqual(zero.stated,
                               2.0 * math.pi * (math.log(2.0) - 1.0))

    def test_lambda_k_closed_values(self):
        self.assertAlmostEqual(spectral.lambda_k(1, 1.0), 1.0, places=13)
        self.assertAlmostEqual(spectral.lambda_k(2, 1.0), 0.3, places=13)
        self.assertAlmostEqual(spectral.lambda_k(3, 1.0), 1.0 / 7.0,
                               places=13)
        with self.assertRaises(exceptions.DomainError):
            spectral.lambda_k(0, 1.0)

    def test_lambda_one_is_one(self):
        for alpha in (0.1, 0.5, 1.5, 1.9):
            self.assertAlmostEqual(spectral.lambda_k(1, alpha), 1.0,
                                   places=12)

    def test_funk_hecke_oracle(self):
        for k in (1, 2, 4):
            riesz, logk = spectral.funk_hecke_oracle(1.0, k)
            self.assertRelClose(riesz.value, spectral.mu_k(k, 1.0), 1e-10)
            self.assertRelClose(logk.value, spectral.mu_tilde_k(k).value,
                                1e-9)

    def test_spectral_table(self):
        table = spectral.spectral_table(1.0, 4)
        self.assertEqual(table.alpha, specfun.AlphaParam(1.0))
        self.assertEqual(len(table.mu), 5)
        self.assertIsNone(table.lambda_[0])
        self.assertAlmostEqual(table.lambda_[2], 0.3)
        data = table.as_dict()
        self.assertEqual(data['alpha'], 1.0)
        self.assertIsNone(data['lambda'][0])
        with self.assertRaises(exceptions.DomainError):
            spectral.spectral_table(1.0, 0)

    def test_spectral_table_validation(self):
        with self.assertRaises(exceptions.DomainError):
            spectral.SpectralTable(specfun.AlphaParam(1.0), 1, (1.0, 2.0),
                                   (0.0, 0.0), (None, 1.0))
        with self.assertRaises(exceptions.DomainError):
            spectral.SpectralTable(specfun.AlphaParam(1.0), 1, (2.0, 1.0),
                                   (0.0, 0.0), (None, 0.9))
        with self.assertRaises(exceptions.DomainError):
            spectral.SpectralTable(specfun.AlphaParam(1.0), 2,
                                   (3.0, 2.0, 1.0), (0.0, 0.0, 0.0),
                                   (None, 1.0, 0.5))

    def test_symmetric_matrix(self):
        m = spectral.SymmetricMatrix.from_array([[1.0, 2.0], [2.0, 1.0]])
        self.assertEqual(m.dimension, 2)
        self.assertEqual(m.symmetry_defect, 0.0)
        with self.assertRaises(exceptions.DomainError):
            spectral.SymmetricMatrix.from_array([[1.0, 2.0, 3.0]])
        with self.assertRaises(exceptions.DomainError):
            spectral.SymmetricMatrix.from_array([[1.0, 2.0], [2.5, 1.0]])
        with self.assertRaises(exceptions.DomainError):
            spectral.SymmetricMatrix.from_array([[float('nan')]])

    def test_jacobi_diagonal(self):
        m = spectral.SymmetricMatrix.from_array(np.diag([3.0, 1.0, 2.0]))
        system = spectral.jacobi_eigensolve(m)
        np.testing.assert_array_equal(system.values, [3.0, 2.0, 1.0])
        self.assertEqual(system.sweeps, 0)

    def test_jacobi_two_by_two(self):
        m = spectral.SymmetricMatrix.from_array([[2.0, 1.0], [1.0, 2.0]])
        system = spectral.jacobi_eigensolve(m)
        np.testing.assert_allclose(system.values, [3.0, 1.0], atol=1e-14)
        top = system.vectors[:, 0]
        np.testing.assert_allclose(np.abs(top), [2 ** -0.5, 2 ** -0.5],
                                   atol=1e-14)

    def test_jacobi_random(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=(12, 12))
        m = spectral.SymmetricMatrix.from_array(a + a.T)
        system = spectral.jacobi_eigensolve(m)
        np.testing.assert_allclose(system.values,
                                   np.linalg.eigvalsh(a + a.T)[::-1],
                                   atol=1e-12)
        v = system.vectors
        np.testing.assert_allclose(v.T @ v, np.eye(12), atol=1e-12)
        np.testing.assert_allclose(m.entries @ v, v * system.values,
                                   atol=1e-11)

    def test_jacobi_sweep_limit(self):
        m = spectral.SymmetricMatrix.from_array([[2.0, 1.0], [1.0, 2.0]])
        with self.assertRaises(exceptions.ConvergenceError):
            spectral.jacobi_eigensolve(m, max_sweeps=0)

    def test_assemble_t_matrix(self):
        m = spectral.assemble_t_matrix(1.0, 3, level=8)
        self.assertEqual(m.dimension, 15)
        expected = [1.0] * 3 + [0.3] * 5 + [1.0 / 7.0] * 7
        np.testing.assert_allclose(np.diag(m.entries), expected, atol=1e-8)
        off = m.entries - np.diag(np.diag(m.entries))
        self.assertLess(float(np.max(np.abs(off))), 1e-12)
        self.assertLess(m.accuracy, 1e-6)

    def test_kernel_report(self):
        for alpha in (0.5, 1.0, 1.5):
            report = spectral.kernel_report(alpha, 3, level=8)
            self.assertEqual(report.unit_multiplicity, 3)
            self.assertGreater(report.spectral_gap, 0.6)
            self.assertIsNone(report.hint)
            self.assertLess(spectral.k1_block_residual(report), 1e-8)
        self.assertAlmostEqual(report.as_dict()['eigenvalues'][0], 1.0,
                               places=7)

    def test_kernel_report_unresolvable_tolerance(self):
        with self.assertLogs('choquard.spectral', level=logging.WARNING):
            report = spectral.kernel_report(1.0, 3, tol=1e-15, level=8)
        self.assertEqual(report.unit_multiplicity, 0)
        self.assertIn('assembly accuracy', report.hint)
        # the gap ignores the degree-one block whatever the tolerance
        self.assertGreater(report.spectral_gap, 0.6)
        self.assertLess(spectral.k1_block_residual(report), 1e-8)

    def test_assemble_t_matrix_degree_above_level(self):
        m = spectral.assemble_t_matrix(1.0, 8, level=8)
        self.assertEqual(m.dimension, 80)
        self.assertLess(m.accuracy, 1e-6)
        np.testing.assert_allclose(np.diag(m.entries)[:3], 1.0, atol=1e-8)

    def test_kernel_report_degree_above_level(self):
        report = spectral.kernel_report(1.0, 8, 1e-6, 8)
        self.assertEqual(report.unit_multiplicity, 3)
        self.assertIsNone(report.hint)
        self.assertAlmostEqual(report.spectral_gap, 0.7, places=6)

    def test_log_layer_matrix(self):
        estimate = spectral.log_layer_matrix(3, level=8)
        matrix = estimate.value
        self.assertEqual(matrix.shape, (15, 15))
        expected = ([-math.pi] * 3 + [-math.pi / 3.0] * 5
                    + [-math.pi / 6.0] * 7)
        np.testing.assert_allclose(np.diag(matrix), expected, atol=1e-8)
        off = matrix - np.diag(np.diag(matrix))
        self.assertLess(float(np.max(np.abs(off))), 1e-8)
        deviation, error = spectral.log_layer_deviation(3, level=8)
        self.assertLess(deviation, 1e-8)
        self.assertLess(error, 1e-6)
        with self.assertRaises(exceptions.DomainError):
            spectral.log_layer_matrix(0)

    def test_alpha_zero_limit(self):
        rows = spectral.alpha_zero_limit(5)
        self.assertEqual([row[0] for row in rows], [1, 2, 3, 4, 5])
        self.assertAlmostEqual(rows[1][1], 1.0 / 3.0)
        self.assertLess(max(row[2] for row in rows), 1e-3)

    def test_full_sphere_funk_hecke(self):
        xis = unit_tests.test_utils.random_sphere_points(9, 4)
        for idx in (spheregeo.HarmonicIndex(1, 2),
                    spheregeo.HarmonicIndex(3, 5)):
            check = spectral.full_sphere_funk_hecke(1.0, idx, xis, 16)
            self.assertLess(check.max_rel_err, 1e-10)
            self.assertLess(check.calibration_residual, 1e-12)
