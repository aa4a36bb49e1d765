import io
import json
import math

import numpy as np

import choquard.exceptions as exceptions
import choquard.specfun as specfun
import choquard.suite as suite
import unit_tests.test_utils


def make_config(**overrides):
    options = suite.load_defaults()
    options.update(overrides)
    return suite.SuiteConfig.from_options(options)


def _constant_group(value):
    def group(cfg, rng):
        return [suite.make_check('constant {}'.format(value), value, value,
                                 0.0, 'constant', suite.ABS)]
    return group


def _random_group(cfg, rng):
    return [suite.make_check('draw', rng.uniform(), 0.0, 1.0, 'draw',
                             suite.ABS)]


def _failing_group(cfg, rng):
    raise exceptions.AccuracyError("level 8: |I(2n) - I(n)| = 1.0e-03")


class TestLibChoquardSuite(unit_tests.test_utils.ChoquardTestCase):

    def test_make_check_modes(self):
        check = suite.make_check('rel', 1.0 + 1e-9, 1.0, 1e-8, 'a')
        self.assertTrue(check.passed)
        self.assertAlmostEqual(check.rel_err, 1e-9)
        check = suite.make_check('abs', 2e-9, 0.0, 1e-9, 'a', suite.ABS)
        self.assertFalse(check.passed)
        self.assertEqual(check.rel_err, check.abs_err)
        check = suite.make_check('either', 1001.0, 1000.0, 2e-3, 'a',
                                 suite.EITHER)
        self.assertTrue(check.passed)
        check = suite.make_check('upper', 0.5, 1.0, 0.0, 'a', suite.UPPER)
        self.assertTrue(check.passed)
        self.assertEqual(check.abs_err, 0.0)
        check = suite.make_check('lower', 0.5, 0.6, 0.0, 'a', suite.LOWER)
        self.assertFalse(check.passed)
        self.assertAlmostEqual(check.abs_err, 0.1)

    def test_make_check_non_finite(self):
        check = suite.make_check('nan', float('nan'), 0.0, 1.0, 'a',
                                 suite.ABS)
        self.assertFalse(check.passed)
        data = check.as_dict()
        self.assertIsNone(data['value'])
        self.assertIs(data['pass'], False)
        self.assertEqual(data['anchor'], 'a')

    def test_config_defaults(self):
        cfg = make_config()
        self.assertEqual([a.value for a in cfg.alphas], [0.5, 1.0, 1.5])
        self.assertEqual(cfg.max_degree, 8)
        self.assertEqual(cfg.quad_level, 24)
        self.assertEqual(cfg.jobs, 1)
        self.assertIsNone(cfg.output_path)
        self.assertEqual(cfg.tolerance('kernel'), 1e-6)

    def test_config_overrides(self):
        cfg = make_config(alphas='0.25,1.75', tol='kernel=1e-15, riesz=1e-6',
                          out='report.json')
        self.assertEqual(cfg.alphas, (specfun.AlphaParam(0.25),
                                      specfun.AlphaParam(1.75)))
        self.assertEqual(cfg.tolerance('kernel'), 1e-15)
        self.assertEqual(cfg.tolerance('riesz'), 1e-6)
        self.assertEqual(cfg.tolerance('mass'), suite.TOLERANCES['mass'])
        self.assertEqual(cfg.as_dict()['tol_overrides'],
                         {'kernel': 1e-15, 'riesz': 1e-6})
        self.assertEqual(cfg.output_path, 'report.json')

    def test_config_invalid(self):
        for overrides in ({'alphas': '2.5'}, {'alphas': '0'},
                          {'alphas': 'one'}, {'alphas': ''},
                          {'max-degree': 0}, {'quad-level': 2},
                          {'jobs': 0}, {'seed': 'x'}):
            with self.assertRaises(exceptions.ConfigError):
                make_config(**overrides)

    def test_parse_tolerances(self):
        self.assertEqual(suite.parse_tolerances(''), {})
        self.assertEqual(suite.parse_tolerances({'mass': '1e-9'}),
                         {'mass': 1e-9})
        for bad in ('mass', 'bogus=1', 'mass=x', 'mass=-1'):
            with self.assertRaises(exceptions.ConfigError):
                suite.parse_tolerances(bad)

    def test_check_specfun(self):
        results = suite.check_specfun(make_config(), None)
        self.assertTrue(all(r.passed for r in results))

    def test_check_monotonicity_and_lambda(self):
        cfg = make_config(alphas='1.0', **{'quad-level': 8})
        results = (suite.check_monotonicity(cfg, None)
                   + suite.check_lambda(cfg, None))
        self.assertEqual(len(results), 4)
        for result in results:
            self.assertTrue(result.passed, result.name)

    def test_check_kernel_at_level_8(self):
        cfg = make_config(alphas='1.0', **{'quad-level': 8})
        results = suite.check_kernel(cfg, None)
        self.assertEqual([r.name for r in results],
                         ['kernel multiplicity alpha=1.0 K=8',
                          'spectral gap alpha=1.0 K=8',
                          'kernel eigenvectors alpha=1.0 K=8',
                          'log layer Galerkin matrix K=8'])
        for result in results:
            self.assertTrue(result.passed, result.name)
        self.assertEqual(results[0].value, 3.0)

    def test_check_kernel_unresolvable_tolerance(self):
        cfg = make_config(alphas='1.0', tol='kernel=1e-15',
                          **{'quad-level': 8})
        results = suite.check_kernel(cfg, None)
        failed = [r.name for r in results if not r.passed]
        self.assertEqual(failed, ['kernel multiplicity alpha=1.0 K=8'])
        self.assertIn('assembly accuracy', results[0].note)

    def test_check_representation_at_level_8(self):
        cfg = make_config(alphas='1.0', **{'quad-level': 8})
        results = suite.check_representation(cfg, np.random.default_rng(3))
        self.assertEqual(len(results), 13)
        names = [r.name for r in results]
        self.assertIn('representation constant alpha=1.0 phi_3', names)
        self.assertEqual(names[-1], 'Kelvin symmetry alpha=1.0')
        for result in results:
            self.assertTrue(result.passed, result.name)

    def test_representation_failure_keeps_group(self):
        cfg = make_config(alphas='1.0', tol='representation-spread=1e-300',
                          **{'quad-level': 8})
        results = suite.check_representation(cfg, np.random.default_rng(3))
        self.assertEqual(len(results), 13)
        failed = [r for r in results if not r.passed]
        self.assertEqual([r.name for r in failed],
                         ['representation constant alpha=1.0 phi_{}'.format(j)
                          for j in (1, 2, 3)])
        self.assertIn('spreads by', failed[0].note)

    def test_run_suite_level_8(self):
        report = suite.run_suite(make_config(alphas='1.0',
                                             **{'quad-level': 8}))
        failed = [c.name for c in report.checks if not c.passed]
        self.assertEqual(failed, [])
        self.assertEqual(report.exit_code, 0)
        report = suite.run_suite(make_config(alphas='1.0', tol='kernel=1e-15',
                                             **{'quad-level': 8}))
        failed = [c.name for c in report.checks if not c.passed]
        self.assertEqual(failed, ['kernel multiplicity alpha=1.0 K=8'])
        self.assertEqual(report.failed, 1)
        self.assertEqual(report.exit_code, 1)

    def test_run_suite_default_config(self):
        report = suite.run_suite(make_config())
        failed = [c.name for c in report.checks if not c.passed]
        self.assertEqual(failed, [])
        self.assertEqual(report.failed, 0)
        self.assertEqual(report.exit_code, 0)
        self.assertTrue(all(c.anchor for c in report.checks))

    def test_check_decay(self):
        results = suite.check_decay(make_config(), None)
        self.assertEqual(len(results), 9)
        self.assertTrue(all(r.passed for r in results))
        self.assertEqual(results[0].mode, suite.UPPER)

    def test_run_suite_order_and_exit_code(self):
        groups = (('first', _constant_group(1.0)),
                  ('second', _failing_group),
                  ('third', _constant_group(3.0)))
        self.patch_object(suite, 'CHECK_GROUPS', new=groups)
        self.patch_object(suite, 'SUBSETS',
                          new={'suite': ('first', 'second', 'third'),
                               'funk-hecke': ('third',)})
        for jobs in (1, 3):
            report = suite.run_suite(make_config(jobs=jobs))
            self.assertEqual([c.name for c in report.checks],
                             ['constant 1.0', 'second', 'constant 3.0'])
            self.assertEqual((report.passed, report.failed), (2, 1))
            self.assertEqual(report.exit_code, 1)
            self.assertIn('did not converge', report.checks[1].note)
        report = suite.run_suite(make_config(), 'funk-hecke')
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(len(report.checks), 1)

    def test_run_suite_reproducible(self):
        groups = (('a', _random_group), ('b', _random_group))
        self.patch_object(suite, 'CHECK_GROUPS', new=groups)
        self.patch_object(suite, 'SUBSETS', new={'suite': ('a', 'b')})
        serial = suite.run_suite(make_config())
        threaded = suite.run_suite(make_config(jobs=2))
        self.assertEqual([c.value for c in serial.checks],
                         [c.value for c in threaded.checks])
        self.assertNotEqual(serial.checks[0].value, serial.checks[1].value)
        other = suite.run_suite(make_config(seed=7))
        self.assertNotEqual(serial.checks[0].value, other.checks[0].value)

    def test_report_json(self):
        self.patch_object(suite, 'CHECK_GROUPS',
                          new=(('a', _constant_group(2.0)),))
        self.patch_object(suite, 'SUBSETS', new={'suite': ('a',)})
        data = json.loads(suite.run_suite(make_config()).to_json())
        self.assertEqual(data['summary']['passed'], 1)
        self.assertEqual(data['summary']['failed'], 0)
        self.assertEqual(data['config']['alphas'], [0.5, 1.0, 1.5])
        self.assertEqual(data['checks'][0]['pass'], True)
        self.assertIn('timestamp', data)

    def test_lambda_curve(self):
        stream = io.StringIO()
        suite.emit_csv('lambda_vs_alpha', make_config(), stream)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], 'alpha,k,lambda_k,bound_2_over_kk1')
        self.assertEqual(len(lines), 1 + len(suite.ALPHA_GRID) * 8)
        self.assertIn('1.0,2,0.3,0.3333333333333333', lines)
        self.assertIn('1.0,1,1.0,1.0', lines)

    def test_mu_curve(self):
        header, rows = suite.curve_rows('mu_vs_k', make_config(alphas='1'))
        self.assertEqual(header, ['alpha', 'k', 'mu_k', 'mu_tilde_k'])
        self.assertEqual(rows[0][:2], ['1.0', '0'])
        self.assertAlmostEqual(float(rows[0][2]), 4.0 * math.pi)
        self.assertEqual(len(rows), 9)

    def test_unknown_curve(self):
        with self.assertRaises(exceptions.DomainError):
            suite.curve_rows('nope', make_config())
