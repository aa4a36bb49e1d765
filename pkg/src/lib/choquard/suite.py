# Copyright 2026 The choquard-nondegeneracy Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Verification suite: configuration, ordered checks, report and curves.

Each check group is a function of the configuration and a random
generator seeded from (seed, group position), so results do not depend on
which worker runs a group or in which order groups finish.
"""

import concurrent.futures
import csv
import dataclasses
import datetime
import json
import logging
import math
import os
import sys
import time
import typing

import numpy as np
import yaml

from . import bubble
from . import exceptions
from . import quad
from . import specfun
from . import spectral
from . import spheregeo

log = logging.getLogger(__name__)

CONFIG_FILE = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(
        os.path.abspath(__file__)))), 'config.yaml')

MIN_QUAD_LEVEL = 4
ALPHA_GRID = tuple(round(0.1 * i, 10) for i in range(1, 20))
MAX_GRID_DEGREE = 20
SAMPLE_RADII = (0.1, 5.0)
DECAY_THETAS = (1.5, 2.0, 3.0)
DECAY_RADII = (1.0, 10.0, 100.0)
SPHERE_CHECK_LEVEL = 32

# Pass tolerances by name; --tol overrides any of them.
TOLERANCES = {
    'specfun': 1e-12,
    'conformal': 1e-12,
    'round-trip': 1e-13,
    'transport': 1e-12,
    'pushforward': 1e-12,
    'normalization': 1e-12,
    'mass': 1e-10,
    'energy': 1e-6,
    'invariance': 1e-10,
    'riesz': 1e-5,
    'orthogonality': 1e-10,
    'residual': 1e-4,
    'log-potential': 1e-4,
    'decay': 2.0,
    'funk-hecke': 1e-8,
    'funk-hecke-sphere': 1e-5,
    'lambda-closed': 1e-12,
    'lambda-assembled': 1e-6,
    'kernel': 1e-6,
    'eigenvector': 1e-6,
    'log-layer': 1e-8,
    'alpha-limit': 1e-3,
    'energy-ratio': 1e-8,
    'liouville': 1e-10,
    'liouville-residual': 1e-4,
    'infinity': 1e-6,
    'representation': 1e-8,
    'representation-spread': 1e-6,
    'kelvin': 1e-13,
    'n-integral': 1e-8,
    'identity-integral': 1e-6,
}

ABS = 'abs'
REL = 'rel'
EITHER = 'either'
UPPER = 'upper'
LOWER = 'lower'

CURVES = ('lambda_vs_alpha', 'mu_vs_k', 'kernel_gap')


@dataclasses.dataclass(frozen=True)
class CheckResult:
    """One named verification.

    ``mode`` decides ``passed``: 'abs' compares abs_err, 'rel' rel_err and
    'either' accepts both, all against tol; 'upper' and 'lower' treat
    ``expected`` as a bound and measure the violation.
    """

    name: str
    value: float
    expected: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    anchor: str
    mode: str = REL
    note: str = ''

    def as_dict(self):
        return {'name': self.name, 'value': _json_float(self.value),
                'expected': _json_float(self.expected),
                'abs_err': _json_float(self.abs_err),
                'rel_err': _json_float(self.rel_err),
                'tol': self.tol, 'pass': self.passed,
                'anchor': self.anchor, 'mode': self.mode,
                'note': self.note}


def _json_float(value):
    value = float(value)
    return value if math.isfinite(value) else None


def make_check(name, value, expected, tol, anchor, mode=REL, note=''):
    """Build a CheckResult, deriving the errors and the verdict."""
    value = float(value)
    expected = float(expected)
    if mode == UPPER:
        abs_err = max(0.0, value - expected)
    elif mode == LOWER:
        abs_err = max(0.0, expected - value)
    else:
        abs_err = abs(value - expected)
    rel_err = abs_err / abs(expected) if expected != 0.0 else abs_err
    if not math.isfinite(value):
        passed = False
    elif mode == REL:
        passed = rel_err <= tol
    elif mode == EITHER:
        passed = abs_err <= tol or rel_err <= tol
    else:
        passed = abs_err <= tol
    return CheckResult(name, value, expected, abs_err, rel_err, tol, passed,
                       anchor, mode, note)


@dataclasses.dataclass(frozen=True)
class SuiteConfig:
    alphas: typing.Tuple[specfun.AlphaParam, ...]
    max_degree: int = 8
    quad_level: int = quad.DEFAULT_LEVEL
    tol_overrides: typing.Mapping[str, float] = dataclasses.field(
        default_factory=dict)
    rng_seed: int = 20240601
    output_path: typing.Optional[str] = None
    jobs: int = 1

    def tolerance(self, name):
        return self.tol_overrides.get(name, TOLERANCES[name])

    def as_dict(self):
        return {'alphas': [a.value for a in self.alphas],
                'max_degree': self.max_degree,
                'quad_level': self.quad_level,
                'tol_overrides': dict(sorted(self.tol_overrides.items())),
                'rng_seed': self.rng_seed,
                'output_path': self.output_path,
                'jobs': self.jobs}

    @classmethod
    def from_options(cls, options):
        """Validate an option mapping keyed as in config.yaml

        :param options: option name -> value
        :type options: Dict[str, Any]
        :raises ConfigError: for any invalid option
        :rtype: SuiteConfig
        """
        try:
            alphas = tuple(specfun.AlphaParam(float(a))
                           for a in _split_list(options.get('alphas')))
            max_degree = int(options.get('max-degree', 8))
            quad_level = int(options.get('quad-level', quad.DEFAULT_LEVEL))
            seed = int(options.get('seed', 20240601))
            jobs = int(options.get('jobs', 1))
        except (TypeError, ValueError, exceptions.DomainError) as e:
            raise exceptions.ConfigError(
                "Invalid suite option ({})".format(e))
        if not alphas:
            raise exceptions.ConfigError(
                "Invalid suite option (no alpha values given)")
        if max_degree < 1:
            raise exceptions.ConfigError(
                "Invalid suite option (max-degree must be >= 1)")
        if quad_level < MIN_QUAD_LEVEL:
            raise exceptions.ConfigError(
                "Invalid suite option (quad-level must be >= {})".format(
                    MIN_QUAD_LEVEL))
        if jobs < 1:
            raise exceptions.ConfigError(
                "Invalid suite option (jobs must be >= 1)")
        return cls(alphas, max_degree, quad_level,
                   parse_tolerances(options.get('tol')), seed,
                   options.get('out') or None, jobs)


def _split_list(value):
    if value is None:
        return []
    if isinstance(value, (int, float)):
        return [value]
    if isinstance(value, str):
        return value.replace(',', ' ').split()
    return list(value)


def parse_tolerances(value):
    """Parse 'name=value,...' (or a mapping) into tolerance overrides

    :raises ConfigError: unknown name or non-numeric value
    """
    if not value:
        return {}
    if isinstance(value, str):
        pairs = []
        for item in value.split(','):
            if not item.strip():
                continue
            if '=' not in item:
                raise exceptions.ConfigError(
                    "Invalid suite option (tolerance {!r} is not "
                    "name=value)".format(item))
            pairs.append(item.split('=', 1))
    else:
        pairs = list(value.items())
    overrides = {}
    for name, tol in pairs:
        name = name.strip()
        if name not in TOLERANCES:
            raise exceptions.ConfigError(
                "Invalid suite option (unknown tolerance {!r})".format(name))
        try:
            overrides[name] = float(tol)
        except (TypeError, ValueError):
            raise exceptions.ConfigError(
                "Invalid suite option (tolerance {} = {!r})".format(
                    name, tol))
        if not overrides[name] >= 0.0:
            raise exceptions.ConfigError(
                "Invalid suite option (tolerance {} must be >= 0)".format(
                    name))
    return overrides


def load_defaults(path=CONFIG_FILE):
    """Option defaults from config.yaml

    :returns: option name -> default value
    :rtype: Dict[str, Any]
    """
    with open(path) as f:
        config = yaml.safe_load(f)
    return {name: option.get('default')
            for name, option in config['options'].items()}


def _sample_points(rng, n):
    r = rng.uniform(SAMPLE_RADII[0], SAMPLE_RADII[1], n)
    theta = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)


def _sphere_points(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=-1)[:, None]


def _residual_scale(a, x):
    # bound of |8 phi_j / (1 + |x|^2)^2| over j
    return 8.0 * (4.0 - a) / (1.0 + np.sum(x * x, axis=-1)) ** 2


def check_specfun(cfg, rng):
    tol = cfg.tolerance('specfun')
    anchor = 'log-Gamma special values'
    return [
        make_check('ln_gamma(1)', specfun.ln_gamma(1.0), 0.0, tol, anchor,
                   ABS),
        make_check('ln_gamma(1/2)', specfun.ln_gamma(0.5),
                   0.5 * math.log(math.pi), tol, anchor),
        make_check('ln_gamma(5)', specfun.ln_gamma(5.0), math.log(24.0),
                   tol, anchor),
        make_check('hls_constant(2, 1)', specfun.hls_constant(2, 1.0),
                   2.0 * math.sqrt(math.pi), tol, 'sharp HLS constant'),
        make_check('c_alpha(1)^3', specfun.c_alpha(1.0) ** 3,
                   3.0 / math.pi, tol, 'bubble constant'),
        make_check('legendre P_2(1/2)', specfun.legendre_p(2, 0.5), -0.125,
                   tol, 'Legendre recurrence'),
    ]


def check_conformal(cfg, rng):
    x = _sample_points(rng, 50)
    y = _sample_points(rng, 50)
    lhs = np.linalg.norm(spheregeo.stereo(x) - spheregeo.stereo(y), axis=-1)
    rhs = (np.linalg.norm(x - y, axis=-1) * spheregeo.rho(x)
           * spheregeo.rho(y))
    round_trip = np.max(np.abs(spheregeo.stereo_inv(spheregeo.stereo(x))
                               - x))
    sphere = spheregeo.sphere_quadrature(8)
    plane = spheregeo.plane_quadrature(8)
    direct = sphere.integrate(lambda xi: xi[:, 2] ** 2)
    transported = plane.integrate(
        lambda p: spheregeo.stereo(p)[:, 2] ** 2 * spheregeo.rho(p) ** 4)
    xi = _sphere_points(rng, 50)
    xi = xi[xi[:, 2] > -0.99]
    push_error = np.max(np.abs(
        spheregeo.pushforward(
            spheregeo.PlaneField(spheregeo.rho))(xi)
        - np.sqrt(1.0 + xi[:, 2])))
    for alpha in cfg.alphas:
        a = alpha.value
        for j in (1, 2, 3):
            pushed = spheregeo.pushforward(bubble.kernel_field(a, j))(xi)
            push_error = max(push_error, np.max(np.abs(
                pushed - 0.5 * (4.0 - a) * xi[:, j - 1])))
    norms = spheregeo.degree_one_normalization()
    return [
        make_check('conformal distance (50 pairs)',
                   np.max(np.abs(lhs - rhs) / rhs), 0.0,
                   cfg.tolerance('conformal'), 'conformal distance identity',
                   ABS),
        make_check('stereographic round trip', round_trip, 0.0,
                   cfg.tolerance('round-trip'), 'stereographic inverse',
                   ABS),
        make_check('transport of xi_3^2', transported, direct,
                   cfg.tolerance('transport'), 'change of variables'),
        make_check('pushforward identities (50 points)', push_error, 0.0,
                   cfg.tolerance('pushforward'),
                   'pushforward of rho and kernel elements', ABS),
        make_check('degree-one harmonic norm', norms.adopted_norm, 1.0,
                   cfg.tolerance('normalization'),
                   'orthonormal harmonic basis',
                   note='adopted sqrt(3/(4 pi)); sqrt(3/(2 pi)) has norm '
                        '{!r}'.format(norms.stated_norm)),
    ]


def check_mass(cfg, rng):
    results = []
    for alpha in cfg.alphas:
        a = alpha.value
        mass, energy = bubble.identity_mass(a, cfg.quad_level)
        c = specfun.c_alpha(a)
        results.append(make_check(
            'bubble mass alpha={}'.format(a), mass.value,
            math.pi * c ** 2, cfg.tolerance('mass'), 'bubble mass identity'))
        results.append(make_check(
            'Riesz energy alpha={}'.format(a), energy.value,
            2.0 * (4.0 - a) * math.pi, cfg.tolerance('energy'),
            'bubble Riesz energy identity'))
        moved = bubble.BubbleParams(a, 3.0, (2.0, -1.0))
        mass_moved, energy_moved = bubble.identity_mass(
            a, cfg.quad_level, params=moved)
        results.append(make_check(
            'mass invariance alpha={}'.format(a), mass_moved.value,
            mass.value, cfg.tolerance('invariance'),
            'scaling and translation invariance'))
        results.append(make_check(
            'energy invariance alpha={}'.format(a), energy_moved.value,
            energy.value, cfg.tolerance('invariance'),
            'scaling and translation invariance'))
    return results


def check_riesz(cfg, rng):
    results = []
    x = _sample_points(rng, 20)
    for alpha in cfg.alphas:
        a = alpha.value
        p = bubble.BubbleParams(a)
        h = spheregeo.PlaneField(lambda y, p=p: bubble.exp_bubble(p, y),
                                 spheregeo.ALGEBRAIC, 4.0 - a)
        numeric = bubble.riesz_convolution(a, h, x, cfg.quad_level).value
        closed = bubble.riesz_potential_closed(p, x)
        results.append(make_check(
            'Riesz potential alpha={} (20 points)'.format(a),
            np.max(np.abs(numeric - closed) / closed), 0.0,
            cfg.tolerance('riesz'), 'Riesz potential of the bubble', ABS))
    results.append(make_check(
        'Riesz potential alpha=1 at 0',
        bubble.riesz_potential_closed(bubble.BubbleParams(1.0), (0.0, 0.0)),
        2.0 * math.sqrt(3.0 * math.pi), cfg.tolerance('specfun'),
        'Riesz potential of the bubble'))
    return results


def check_orthogonality(cfg, rng):
    results = []
    for alpha in cfg.alphas:
        a = alpha.value
        bound = cfg.tolerance('orthogonality') * math.pi * \
            specfun.c_alpha(a) ** 2
        for j in (1, 2, 3):
            value = bubble.orthogonality_integral(
                a, bubble.kernel_field(a, j), cfg.quad_level).value
            results.append(make_check(
                'orthogonality alpha={} phi_{}'.format(a, j), value, 0.0,
                bound, 'kernel orthogonality', ABS))
    return results


def check_residual(cfg, rng):
    results = []
    x = _sample_points(rng, 20)
    for alpha in cfg.alphas:
        a = alpha.value
        scale = _residual_scale(a, x)
        fd_error = closed_error = 0.0
        for j in (1, 2, 3):
            phi = bubble.kernel_field(a, j)
            closed = bubble.n_closed(a, j, x)
            laplacian = -bubble.laplacian_fd(phi, x)
            applied = bubble.n_apply(a, phi, x, cfg.quad_level).value
            fd_error = max(fd_error,
                           np.max(np.abs(laplacian - closed) / scale))
            closed_error = max(closed_error,
                               np.max(np.abs(applied - closed) / scale))
        results.append(make_check(
            'finite-difference residual alpha={}'.format(a), fd_error, 0.0,
            cfg.tolerance('residual'), 'linearized equation', ABS))
        results.append(make_check(
            'N(phi_j) quadrature alpha={}'.format(a), closed_error, 0.0,
            cfg.tolerance('residual'), 'linearized equation', ABS))
    return results


def check_log_potential(cfg, rng):
    results = []
    x = _sample_points(rng, 5)
    for alpha in cfg.alphas:
        a = alpha.value
        f = bubble.n_closed_field(a, 3)

        def potential(y):
            return bubble.log_potential(f, y, cfg.quad_level).value

        error = np.max(np.abs(-bubble.laplacian_fd(potential, x) - f(x))
                       / _residual_scale(a, x))
        results.append(make_check(
            'log potential alpha={} (5 points)'.format(a), error, 0.0,
            cfg.tolerance('log-potential'),
            'log potential inverts the Laplacian', ABS))
    return results


def check_decay(cfg, rng):
    results = []
    for theta in DECAY_THETAS:
        for radius in DECAY_RADII:
            x = np.array([radius, 0.0])
            value = bubble.riesz_decay_integral(theta, x).value
            ratio = value / bubble.decay_bound(theta, x)
            results.append(make_check(
                'decay ratio theta={} |x|={}'.format(theta, radius),
                abs(math.log10(ratio)), 0.0, cfg.tolerance('decay'),
                'Riesz decay estimate', UPPER,
                note='ratio {!r}'.format(ratio)))
    return results


def check_funk_hecke(cfg, rng):
    results = []
    tol = cfg.tolerance('funk-hecke')
    for alpha in cfg.alphas:
        a = alpha.value
        riesz_error = log_error = 0.0
        for k in range(1, cfg.max_degree + 1):
            riesz, logk = spectral.funk_hecke_oracle(a, k, cfg.quad_level)
            mu = spectral.mu_k(k, a)
            tilde = spectral.mu_tilde_k(k).value
            riesz_error = max(riesz_error, abs(riesz.value - mu) / mu)
            log_error = max(log_error,
                            abs(logk.value - tilde) / abs(tilde))
        results.append(make_check(
            'Riesz Funk-Hecke alpha={} k<={}'.format(a, cfg.max_degree),
            riesz_error, 0.0, tol, 'Funk-Hecke eigenvalues', ABS))
        results.append(make_check(
            'log Funk-Hecke alpha={} k<={}'.format(a, cfg.max_degree),
            log_error, 0.0, tol, 'Funk-Hecke eigenvalues', ABS))
    zero = spectral.mu_tilde_k(0)
    _, log_zero = spectral.funk_hecke_oracle(1.0, 0, cfg.quad_level)
    results.append(make_check(
        'log-kernel mean', log_zero.value, zero.value, tol,
        'Funk-Hecke eigenvalues',
        note='closed value 2 pi (log 2 - 1) = {!r} disagrees'.format(
            zero.stated)))
    xis = _sphere_points(rng, 10)
    sphere_tol = cfg.tolerance('funk-hecke-sphere')
    for alpha in cfg.alphas:
        a = alpha.value
        worst = calibration = 0.0
        for k in range(1, min(cfg.max_degree, 4) + 1):
            idx = spheregeo.HarmonicIndex(k, 2)
            found = spectral.full_sphere_funk_hecke(
                a, idx, xis, SPHERE_CHECK_LEVEL)
            worst = max(worst, found.max_rel_err)
            calibration = max(calibration, found.calibration_residual)
        results.append(make_check(
            'sphere Funk-Hecke alpha={} (10 points)'.format(a), worst, 0.0,
            sphere_tol, 'Funk-Hecke eigenvalues', ABS))
        results.append(make_check(
            'sphere rule calibration alpha={}'.format(a), calibration, 0.0,
            sphere_tol, 'Funk-Hecke eigenvalues', ABS))
    return results


def check_monotonicity(cfg, rng):
    violations = 0
    for a in ALPHA_GRID:
        mu = [spectral.mu_k(k, a) for k in range(MAX_GRID_DEGREE + 2)]
        violations += sum(1 for k in range(MAX_GRID_DEGREE + 1)
                          if not mu[k] > mu[k + 1])
    return [make_check('mu_k decreasing (k<=20, alpha grid)', violations, 0,
                       0.0, 'Funk-Hecke monotonicity', ABS)]


def check_lambda(cfg, rng):
    deviation = max(abs(spectral.lambda_k(1, a) - 1.0) for a in ALPHA_GRID)
    violations = sum(1 for a in ALPHA_GRID
                     for k in range(2, MAX_GRID_DEGREE + 1)
                     if not spectral.lambda_k(k, a) < spectral.lambda_bound(k))
    results = [
        make_check('lambda_1 = 1 (alpha grid)', deviation, 0.0,
                   cfg.tolerance('lambda-closed'), 'coefficient multiplier',
                   ABS),
        make_check('lambda_k < 2/(k(k+1)) (k<=20, alpha grid)', violations,
                   0, 0.0, 'coefficient multiplier', ABS),
    ]
    for alpha in cfg.alphas:
        a = alpha.value
        matrix = spectral.assemble_t_matrix(a, 4, cfg.quad_level)
        top = spectral.jacobi_eigensolve(matrix).values[:3]
        results.append(make_check(
            'assembled lambda_1 alpha={} K=4'.format(a),
            float(np.max(np.abs(top - 1.0))), 0.0,
            cfg.tolerance('lambda-assembled'), 'coefficient multiplier',
            ABS))
    return results


def check_kernel(cfg, rng):
    results = []
    tol = cfg.tolerance('kernel')
    for alpha in cfg.alphas:
        a = alpha.value
        report = spectral.kernel_report(a, cfg.max_degree, tol,
                                        cfg.quad_level)
        label = 'alpha={} K={}'.format(a, cfg.max_degree)
        results.append(make_check(
            'kernel multiplicity ' + label, report.unit_multiplicity, 3,
            tol, 'kernel dimension', ABS, note=report.hint or ''))
        results.append(make_check(
            'spectral gap ' + label, report.spectral_gap, 0.6, 0.0,
            'kernel dimension', LOWER))
        results.append(make_check(
            'kernel eigenvectors ' + label,
            spectral.k1_block_residual(report), 0.0,
            cfg.tolerance('eigenvector'), 'kernel dimension', ABS))
    deviation, error = spectral.log_layer_deviation(cfg.max_degree,
                                                    cfg.quad_level)
    results.append(make_check(
        'log layer Galerkin matrix K={}'.format(cfg.max_degree), deviation,
        0.0, cfg.tolerance('log-layer'), 'Funk-Hecke eigenvalues',
        ABS, note='refinement error {!r}'.format(error)))
    return results


def check_alpha_limit(cfg, rng):
    rows = spectral.alpha_zero_limit(min(cfg.max_degree, 5))
    return [make_check('lambda_k(1e-4) vs 2/(k(k+1)) (k<=5)',
                       max(row[2] for row in rows), 0.0,
                       cfg.tolerance('alpha-limit'), 'Liouville limit', ABS)]


def check_energy(cfg, rng):
    results = []
    for alpha in cfg.alphas:
        a = alpha.value
        bound = 4.0 * (4.0 - a)
        worst_ratio = worst_h1 = 0.0
        for _ in range(10):
            field = bubble.kernel_combination(a, rng.normal(size=3))
            norms = bubble.weighted_norms(field, cfg.quad_level)
            worst_ratio = max(worst_ratio, norms.grad_l2 ** 2 / norms.l2w ** 2)
            worst_h1 = max(worst_h1, norms.h1w / norms.l2w)
        pure = bubble.weighted_norms(bubble.kernel_field(a, 1),
                                     cfg.quad_level)
        results.append(make_check(
            'energy bound alpha={} (10 draws)'.format(a), worst_ratio, bound,
            0.0, 'weighted energy bound', UPPER))
        results.append(make_check(
            'H1 bound alpha={} (10 draws)'.format(a), worst_h1,
            math.sqrt(bound + 1.0), 0.0, 'weighted energy bound', UPPER))
        results.append(make_check(
            'energy ratio phi_1 alpha={}'.format(a),
            pure.grad_l2 ** 2 / pure.l2w ** 2, 8.0,
            cfg.tolerance('energy-ratio'), 'weighted energy bound'))
    return results


def check_liouville(cfg, rng):
    mass = quad.radial_integral(
        lambda r: 2.0 * math.pi * np.exp(bubble.liouville_bubble(
            1.0, (0.0, 0.0), np.stack([r, np.zeros_like(r)], axis=-1))),
        cfg.quad_level)
    x = _sample_points(rng, 20)
    # 16 / (1 + |x|^2)^2 bounds the right-hand sides
    scale = 16.0 / (1.0 + np.sum(x * x, axis=-1)) ** 2
    normalized = np.max(bubble.liouville_residual(x) / scale)
    return [
        make_check('Liouville mass', mass.value, 8.0 * math.pi,
                   cfg.tolerance('liouville'), 'Liouville bubble mass'),
        make_check('Liouville kernel residual (20 points)', normalized, 0.0,
                   cfg.tolerance('liouville-residual'),
                   'Liouville linearization', ABS),
    ]


def _representation_check(cfg, a, j, x, expected):
    name = 'representation constant alpha={} phi_{}'.format(a, j)
    try:
        found = bubble.integral_representation_residual(
            a, j, x, cfg.quad_level,
            spread_tol=cfg.tolerance('representation-spread'))
    except exceptions.AccuracyError as e:
        # refinement failures carry the sample array, spread failures a mean
        scalar = e.value is not None and np.ndim(e.value) == 0
        value = e.value if scalar else float('nan')
        return make_check(name, value, expected,
                          cfg.tolerance('representation'),
                          'integral representation', ABS, note=str(e))
    return make_check(name, found.constant, expected,
                      cfg.tolerance('representation'),
                      'integral representation', ABS,
                      note='spread {!r}'.format(found.spread))


def check_representation(cfg, rng):
    results = []
    x = _sample_points(rng, 5)
    for alpha in cfg.alphas:
        a = alpha.value
        for j in (1, 2, 3):
            expected = -0.5 * (4.0 - a) if j == 3 else 0.0
            phi = bubble.kernel_field(a, j)
            results.append(make_check(
                'limit at infinity alpha={} phi_{}'.format(a, j),
                bubble.constant_at_infinity(phi), expected,
                cfg.tolerance('infinity'), 'integral representation', ABS))
            results.append(_representation_check(cfg, a, j, x, expected))
            total = bubble.n_total_integral(a, phi)
            results.append(make_check(
                'integral of N(phi_{}) alpha={}'.format(j, a), total.value,
                0.0, cfg.tolerance('n-integral'), 'integral representation',
                ABS))
            lhs, rhs = bubble.identity_integral(a, phi)
            results.append(make_check(
                'Laplacian identity alpha={} phi_{}'.format(a, j),
                max(abs(lhs), abs(rhs)), 0.0,
                cfg.tolerance('identity-integral'),
                'integral representation', ABS))
        basis = bubble.kernel_basis(a, x)
        mirrored = bubble.kernel_basis(a, bubble.kelvin_point(x))
        kelvin = max(np.max(np.abs(mirrored[0] - basis[0])),
                     np.max(np.abs(mirrored[2] + basis[2])))
        results.append(make_check(
            'Kelvin symmetry alpha={}'.format(a), kelvin, 0.0,
            cfg.tolerance('kelvin'), 'Kelvin transform symmetry', ABS))
    return results


# Declared order of the report.
CHECK_GROUPS = (
    ('specfun', check_specfun),
    ('conformal', check_conformal),
    ('mass', check_mass),
    ('riesz', check_riesz),
    ('orthogonality', check_orthogonality),
    ('residual', check_residual),
    ('log-potential', check_log_potential),
    ('decay', check_decay),
    ('funk-hecke', check_funk_hecke),
    ('monotonicity', check_monotonicity),
    ('lambda', check_lambda),
    ('kernel', check_kernel),
    ('alpha-limit', check_alpha_limit),
    ('energy', check_energy),
    ('liouville', check_liouville),
    ('representation', check_representation),
)

SUBSETS = {
    'suite': tuple(name for name, _ in CHECK_GROUPS),
    'identities': ('conformal', 'mass', 'riesz', 'orthogonality',
                   'residual', 'log-potential', 'decay', 'energy',
                   'liouville', 'representation'),
    'funk-hecke': ('funk-hecke', 'monotonicity'),
}


@dataclasses.dataclass(frozen=True)
class Report:
    config: typing.Dict[str, typing.Any]
    checks: typing.Tuple[CheckResult, ...]
    runtime_ms: float
    timestamp: str

    @property
    def passed(self):
        return sum(1 for c in self.checks if c.passed)

    @property
    def failed(self):
        return len(self.checks) - self.passed

    @property
    def exit_code(self):
        return 0 if self.failed == 0 else 1

    def as_dict(self):
        return {'config': self.config,
                'checks': [c.as_dict() for c in self.checks],
                'summary': {'passed': self.passed, 'failed': self.failed,
                            'runtime_ms': self.runtime_ms},
                'timestamp': self.timestamp}

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2) + '\n'


def _run_group(cfg, position, name, group):
    rng = np.random.default_rng([cfg.rng_seed, position])
    try:
        results = group(cfg, rng)
    except exceptions.ChoquardError as e:
        log.warning("check group %s failed: %s", name, e)
        results = [make_check(name, float('nan'), 0.0, 0.0,
                              'check group ' + name, ABS, note=str(e))]
    for result in results:
        log.info("%s: %s (value %r, tol %r)", result.name,
                 'pass' if result.passed else 'FAIL', result.value,
                 result.tol)
    return results


def run_suite(cfg, subset='suite'):
    """Run the checks of a subset in their declared order

    :param cfg: validated configuration
    :type cfg: SuiteConfig
    :param subset: 'suite', 'identities' or 'funk-hecke'
    :type subset: str
    :rtype: Report
    """
    names = SUBSETS[subset]
    selected = [(position, name, group)
                for position, (name, group) in enumerate(CHECK_GROUPS)
                if name in names]
    start = time.monotonic()
    if cfg.jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(cfg.jobs) as pool:
            batches = list(pool.map(
                lambda item: _run_group(cfg, *item), selected))
    else:
        batches = [_run_group(cfg, *item) for item in selected]
    runtime_ms = round(1000.0 * (time.monotonic() - start), 3)
    checks = tuple(result for batch in batches for result in batch)
    report = Report(cfg.as_dict(), checks, runtime_ms,
                    datetime.datetime.now(datetime.timezone.utc).isoformat())
    log.info("%d checks passed, %d failed", report.passed, report.failed)
    return report


def _lambda_field(value):
    return repr(float('{:.15g}'.format(value)))


def curve_rows(curve, cfg):
    """Header and rows of a curve as strings

    :raises DomainError: unknown curve name
    :rtype: Tuple[List[str], List[List[str]]]
    """
    if curve == 'lambda_vs_alpha':
        header = ['alpha', 'k', 'lambda_k', 'bound_2_over_kk1']
        rows = [[repr(a), str(k), _lambda_field(spectral.lambda_k(k, a)),
                 repr(spectral.lambda_bound(k))]
                for a in ALPHA_GRID for k in range(1, cfg.max_degree + 1)]
    elif curve == 'mu_vs_k':
        header = ['alpha', 'k', 'mu_k', 'mu_tilde_k']
        rows = [[repr(a.value), str(k), repr(spectral.mu_k(k, a)),
                 repr(spectral.mu_tilde_k(k).value)]
                for a in cfg.alphas for k in range(cfg.max_degree + 1)]
    elif curve == 'kernel_gap':
        header = ['alpha', 'unit_multiplicity', 'spectral_gap']
        rows = []
        for a in cfg.alphas:
            report = spectral.kernel_report(
                a, cfg.max_degree, cfg.tolerance('kernel'), cfg.quad_level)
            rows.append([repr(a.value), str(report.unit_multiplicity),
                         repr(report.spectral_gap)])
    else:
        raise exceptions.DomainError(
            "unknown curve {!r}; expected one of {}".format(
                curve, ', '.join(CURVES)))
    return header, rows


def emit_csv(curve, cfg, stream=None):
    """Write a curve as CSV to ``stream``, cfg.output_path or stdout

    :raises OSError: the output path cannot be written
    """
    header, rows = curve_rows(curve, cfg)
    if stream is not None:
        _write_rows(stream, header, rows)
    elif cfg.output_path:
        with open(cfg.output_path, 'w', newline='') as f:
            _write_rows(f, header, rows)
        log.info("wrote %s to %s", curve, cfg.output_path)
    else:
        _write_rows(sys.stdout, header, rows)


def _write_rows(stream, header, rows):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
