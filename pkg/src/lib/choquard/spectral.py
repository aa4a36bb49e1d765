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

"""Funk-Hecke eigenvalues, the coefficient multipliers and the kernel
certificate.

On the sphere the Riesz kernel |xi - eta|^-alpha acts on degree-k
harmonics by mu_k(alpha) and the log kernel by mu~_k. A kernel element of
the linearized operator has harmonic coefficients fixed by
Phi_k = lambda_k Phi_k, where

    lambda_k = -(1 / 2 pi) C^(4-alpha) 2^-(4-alpha) mu~_k (mu_k + mu_0).

lambda_1 = 1 and lambda_k < 2 / (k (k + 1)) for k >= 2, so the kernel is
the degree-one block. The degree-zero coefficient is removed by the zero
mean constraint, so Galerkin assembly starts at k = 1.
"""

import dataclasses
import logging
import math
import typing

import numpy as np

from . import exceptions
from . import quad
from . import specfun
from . import spheregeo

log = logging.getLogger(__name__)

LOG_ZERO = 2.0 * math.pi * (2.0 * math.log(2.0) - 1.0)
LOG_ZERO_STATED = 2.0 * math.pi * (math.log(2.0) - 1.0)
SYMMETRY_TOLERANCE = 1e-10
JACOBI_MAX_SWEEPS = 100
JACOBI_TOLERANCE = 1e-14
DEFAULT_KERNEL_TOLERANCE = 1e-6
LIMIT_ALPHA = 1e-4
DEGREE_ONE_DIMENSION = 3


class LogEigenvalue(typing.NamedTuple):
    """Log-kernel eigenvalue with the closed value it is compared against.

    ``flagged`` is set when the two disagree.
    """

    value: float
    stated: float
    flagged: bool


def _pole_guard(a, what):
    if 2.0 - a < specfun.POLE_GUARD:
        raise exceptions.PoleError(what, a)


def mu_k(k, alpha):
    """Riesz eigenvalue
    2^(2-alpha) pi Gamma(k + alpha/2) Gamma(1 - alpha/2)
    / (Gamma(alpha/2) Gamma(k + 2 - alpha/2))

    :param k: degree >= 0
    :type k: int
    :param alpha: Riesz exponent
    :type alpha: Union[float, specfun.AlphaParam]
    :raises PoleError: alpha within 1e-12 of 2
    :rtype: float
    """
    a = specfun.as_alpha(alpha).value
    if k < 0:
        raise exceptions.DomainError("degree must be >= 0, got {}".format(k))
    _pole_guard(a, 'mu_k alpha')
    if k == 0:
        return 2.0 ** (3.0 - a) * math.pi / (2.0 - a)
    ratio = specfun.gamma_ratio((k + 0.5 * a, 1.0 - 0.5 * a),
                                (0.5 * a, k + 2.0 - 0.5 * a))
    return 2.0 ** (2.0 - a) * math.pi * ratio


def mu_tilde_k(k):
    """Log-kernel eigenvalue: -2 pi / (k (k + 1)) for k >= 1

    For k = 0 the value is the exact mean 2 pi (2 log 2 - 1) of log|xi - eta|
    over the sphere, flagged against 2 pi (log 2 - 1).

    :rtype: LogEigenvalue
    """
    if k < 0:
        raise exceptions.DomainError("degree must be >= 0, got {}".format(k))
    if k == 0:
        log.warning("log-kernel mean is 2 pi (2 log 2 - 1) = %.12f, "
                    "not 2 pi (log 2 - 1) = %.12f", LOG_ZERO, LOG_ZERO_STATED)
        return LogEigenvalue(LOG_ZERO, LOG_ZERO_STATED, True)
    value = -2.0 * math.pi / (k * (k + 1))
    return LogEigenvalue(value, value, False)


def _multiplier_scale(a):
    return -specfun.c_alpha_power(a) * 2.0 ** (a - 4.0) / (2.0 * math.pi)


def lambda_k(k, alpha):
    """Coefficient multiplier of degree k >= 1

    :raises DomainError: k < 1
    :raises PoleError: alpha within 1e-12 of 2
    :rtype: float
    """
    if k < 1:
        raise exceptions.DomainError(
            "multiplier defined for k >= 1, got {}".format(k))
    a = specfun.as_alpha(alpha).value
    return (_multiplier_scale(a) * mu_tilde_k(k).value
            * (mu_k(k, a) + mu_k(0, a)))


def lambda_bound(k):
    """2 / (k (k + 1))"""
    return 2.0 / (k * (k + 1))


def funk_hecke_oracle(alpha, k, level=quad.DEFAULT_LEVEL,
                      tol=quad.DEFAULT_TOLERANCE):
    """2 pi times the Legendre integrals of the Riesz and log profiles

    :returns: estimates of mu_k(alpha) and mu~_k
    :rtype: Tuple[quad.Estimate, quad.Estimate]
    """
    def p_k(t):
        return specfun.legendre_p(k, t)

    riesz = quad.alg_singular(alpha, p_k, level, tol)
    logk = quad.log_singular(p_k, level, tol)
    return (quad.Estimate(2.0 * math.pi * riesz.value,
                          2.0 * math.pi * riesz.error),
            quad.Estimate(2.0 * math.pi * logk.value,
                          2.0 * math.pi * logk.error))


@dataclasses.dataclass(frozen=True)
class SpectralTable:
    """mu_k, mu~_k (k = 0..K) and lambda_k (k = 1..K; entry 0 is None)."""

    alpha: specfun.AlphaParam
    max_degree: int
    mu: typing.Tuple[float, ...]
    mu_tilde: typing.Tuple[float, ...]
    lambda_: typing.Tuple[typing.Optional[float], ...]

    def __post_init__(self):
        for k in range(self.max_degree):
            if not self.mu[k] > self.mu[k + 1]:
                raise exceptions.DomainError(
                    "mu not decreasing at k={} ({!r} <= {!r})".format(
                        k, self.mu[k], self.mu[k + 1]))
        if abs(self.lambda_[1] - 1.0) > 1e-12:
            raise exceptions.DomainError(
                "lambda_1 = {!r} is not 1".format(self.lambda_[1]))
        for k in range(2, self.max_degree + 1):
            if not self.lambda_[k] < lambda_bound(k):
                raise exceptions.DomainError(
                    "lambda_{} = {!r} exceeds 2/(k(k+1))".format(
                        k, self.lambda_[k]))

    def as_dict(self):
        return {'alpha': self.alpha.value, 'max_degree': self.max_degree,
                'mu': list(self.mu), 'mu_tilde': list(self.mu_tilde),
                'lambda': list(self.lambda_)}


def spectral_table(alpha, max_degree):
    """Build and validate the SpectralTable up to degree K >= 1."""
    a = specfun.as_alpha(alpha)
    if max_degree < 1:
        raise exceptions.DomainError(
            "max degree must be >= 1, got {}".format(max_degree))
    degrees = range(max_degree + 1)
    return SpectralTable(
        a, max_degree,
        tuple(mu_k(k, a) for k in degrees),
        tuple(mu_tilde_k(k).value for k in degrees),
        (None,) + tuple(lambda_k(k, a) for k in degrees[1:]))


@dataclasses.dataclass(frozen=True)
class SymmetricMatrix:
    """Symmetrized square matrix with its pre-symmetrization defect.

    ``accuracy`` is the estimated absolute error of the entries.
    """

    entries: np.ndarray
    symmetry_defect: float = 0.0
    accuracy: float = 0.0

    @property
    def dimension(self):
        return self.entries.shape[0]

    @classmethod
    def from_array(cls, a, accuracy=0.0):
        """Symmetrize a, refusing defects above 1e-10 relative

        :raises DomainError: not square, not finite or not symmetric
        """
        a = np.array(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise exceptions.DomainError(
                "matrix must be square, got shape {}".format(a.shape))
        if not np.all(np.isfinite(a)):
            raise exceptions.DomainError("matrix has non-finite entries")
        defect = float(np.max(np.abs(a - a.T))) if a.size else 0.0
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if defect > SYMMETRY_TOLERANCE * scale:
            raise exceptions.DomainError(
                "matrix is not symmetric (defect {:.3e})".format(defect))
        entries = 0.5 * (a + a.T)
        entries.flags.writeable = False
        return cls(entries, defect, accuracy)


class Eigensystem(typing.NamedTuple):
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int


def jacobi_eigensolve(m, max_sweeps=JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver

    Sweeps over all (p, q) pairs until the off-diagonal Frobenius mass is
    at most 1e-14 times the Frobenius norm.

    :param m: matrix to diagonalize
    :type m: SymmetricMatrix
    :raises ConvergenceError: no convergence after max_sweeps sweeps
    :returns: eigenvalues sorted descending, eigenvectors as columns
    :rtype: Eigensystem
    """
    a = np.array(m.entries, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    norm = float(np.linalg.norm(a))
    for sweep in range(max_sweeps + 1):
        off = math.sqrt(2.0 * float(np.sum(np.triu(a, 1) ** 2)))
        log.debug("jacobi sweep %d: off-diagonal %.3e", sweep, off)
        if off <= JACOBI_TOLERANCE * norm:
            break
        if sweep == max_sweeps:
            raise exceptions.ConvergenceError(
                "Jacobi did not converge in {} sweeps (off-diagonal "
                "{:.3e})".format(max_sweeps, off))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    values = np.diag(a).copy()
    order = np.argsort(-values, kind='stable')
    return Eigensystem(values[order], v[:, order], sweep)


def assemble_t_matrix(alpha, max_degree, level=quad.DEFAULT_LEVEL):
    """Galerkin matrix of the sphere operator on degrees 1..K

    Entry (kj, k'j') is c (mu_k' + mu_0) mu~_k' <Y_kj, Y_k'j'>: the Riesz
    layer is reduced by its Funk-Hecke eigenvalue, the log layer by the
    tanh-sinh Legendre integral and the Gram matrix by sphere quadrature.
    The log rho correction terms are multiples of the mean of Y_k'j' and
    vanish on this subspace.

    :param alpha: Riesz exponent
    :param max_degree: K >= 1
    :type max_degree: int
    :param level: sphere and tanh-sinh refinement level; the Gram rule
        uses at least K + 1
    :type level: int
    :raises AccuracyError: a log-layer integral did not converge
    :rtype: SymmetricMatrix
    """
    a = specfun.as_alpha(alpha).value
    if max_degree < 1:
        raise exceptions.DomainError(
            "max degree must be >= 1, got {}".format(max_degree))
    indices = spheregeo.harmonic_indices(max_degree, start=1)
    degrees = np.array([idx.degree for idx in indices])

    def gram(lvl):
        rule = spheregeo.sphere_quadrature(lvl)
        basis = spheregeo.harmonic_basis(max_degree, rule.nodes, start=1)
        return (basis * rule.weights[:, None]).T @ basis

    # products of degree-K harmonics need a rule exact to degree 2K
    gram_level = max(level, max_degree + 1)
    coarse, fine = gram(gram_level), gram(2 * gram_level)
    gram_error = float(np.max(np.abs(fine - coarse)))
    mu0 = mu_k(0, a)
    scale = _multiplier_scale(a)
    multiplier = np.zeros(max_degree + 1)
    multiplier_error = 0.0
    for k in range(1, max_degree + 1):
        logk = funk_hecke_oracle(a, k, level)[1]
        factor = scale * (mu_k(k, a) + mu0)
        multiplier[k] = factor * logk.value
        multiplier_error = max(multiplier_error, abs(factor) * logk.error)
    entries = fine * multiplier[degrees][None, :]
    accuracy = (multiplier_error
                + gram_error * float(np.max(np.abs(multiplier))))
    log.debug("assembled %dx%d operator matrix (accuracy %.3e)",
              len(indices), len(indices), accuracy)
    return SymmetricMatrix.from_array(entries, accuracy)


def log_layer_matrix(max_degree, level=quad.DEFAULT_LEVEL):
    """Galerkin matrix of the log layer on degrees 1..K, entry by entry

    The layer integral of log|xi - eta| Y_k'j'(eta) is taken with the log
    pole rule at every node of a sphere rule exact to degree 2K and
    projected onto each Y_kj. No Funk-Hecke reduction is used, so the
    result should be diag(mu~_k) with vanishing off-diagonal entries.

    :param max_degree: K >= 1
    :type max_degree: int
    :param level: pole rule level, refined once by doubling
    :type level: int
    :rtype: quad.Estimate
    """
    if max_degree < 1:
        raise exceptions.DomainError(
            "max degree must be >= 1, got {}".format(max_degree))
    outer = spheregeo.sphere_quadrature(max_degree + 1)
    basis = spheregeo.harmonic_basis(max_degree, outer.nodes, start=1)
    projector = (basis * outer.weights[:, None]).T

    def compute(lvl):
        layer = np.empty_like(basis)
        for i, xi in enumerate(outer.nodes):
            nodes, w = spheregeo.pole_rule(xi, lvl, spheregeo.LOG)
            layer[i] = w @ spheregeo.harmonic_basis(max_degree, nodes,
                                                    start=1)
        return projector @ layer

    estimate = quad.refine(compute, level, tol=None)
    log.debug("log layer matrix K=%d: refinement error %.3e",
              max_degree, estimate.error)
    return estimate


def log_layer_deviation(max_degree, level=quad.DEFAULT_LEVEL):
    """Largest entry of log_layer_matrix - diag(mu~_k) and its error."""
    estimate = log_layer_matrix(max_degree, level)
    indices = spheregeo.harmonic_indices(max_degree, start=1)
    expected = np.diag([mu_tilde_k(idx.degree).value for idx in indices])
    return (float(np.max(np.abs(estimate.value - expected))),
            estimate.error)


@dataclasses.dataclass(frozen=True)
class KernelReport:
    alpha: float
    max_degree: int
    eigenvalues: typing.Tuple[float, ...]
    unit_multiplicity: int
    spectral_gap: float
    tolerance: float
    accuracy: float
    eigenvectors: np.ndarray = dataclasses.field(repr=False, compare=False)
    hint: typing.Optional[str] = None

    def as_dict(self):
        return {'alpha': self.alpha, 'max_degree': self.max_degree,
                'eigenvalues': list(self.eigenvalues),
                'unit_multiplicity': self.unit_multiplicity,
                'spectral_gap': self.spectral_gap,
                'tolerance': self.tolerance, 'accuracy': self.accuracy,
                'hint': self.hint}


def kernel_report(alpha, max_degree, tol=DEFAULT_KERNEL_TOLERANCE,
                  level=quad.DEFAULT_LEVEL):
    """Count the eigenvalues of the assembled operator equal to 1

    unit_multiplicity counts eigenvalues within tol of 1. spectral_gap is
    the smallest |1 - lambda| once the three eigenvalues nearest 1, the
    degree-one block, are set aside; it does not depend on tol. A
    tolerance below the assembly accuracy cannot resolve the eigenvalue
    1; the multiplicity is then reported as 0 with a hint.

    :rtype: KernelReport
    """
    a = specfun.as_alpha(alpha).value
    matrix = assemble_t_matrix(a, max_degree, level)
    system = jacobi_eigensolve(matrix)
    distance = np.abs(system.values - 1.0)
    # eigenvalues cannot be resolved below the rounding floor of the solver
    accuracy = matrix.accuracy + (np.finfo(float).eps * matrix.dimension
                                  * float(np.linalg.norm(matrix.entries)))
    hint = None
    if tol < accuracy:
        hint = ("tolerance {:.1e} is below the assembly accuracy {:.1e}; "
                "raise the quadrature level".format(tol, accuracy))
        log.warning(hint)
        unit = np.zeros_like(distance, dtype=bool)
    else:
        unit = distance <= tol
    rest = np.sort(distance)[DEGREE_ONE_DIMENSION:]
    gap = float(rest[0]) if rest.size else float('inf')
    report = KernelReport(a, max_degree, tuple(float(v) for v in
                                               system.values),
                          int(np.sum(unit)), gap, tol, accuracy,
                          system.vectors, hint)
    log.info("alpha=%g K=%d: unit multiplicity %d, gap %.6f",
             a, max_degree, report.unit_multiplicity, gap)
    return report


def k1_block_residual(report):
    """Largest component outside the degree-one block among the three
    eigenvectors closest to eigenvalue 1."""
    distance = np.abs(np.array(report.eigenvalues) - 1.0)
    nearest = np.argsort(distance, kind='stable')[:DEGREE_ONE_DIMENSION]
    vectors = report.eigenvectors[:, nearest]
    outside = vectors[DEGREE_ONE_DIMENSION:, :]
    return float(np.max(np.linalg.norm(outside, axis=0)))


def alpha_zero_limit(max_degree, alpha=LIMIT_ALPHA):
    """lambda_k at small alpha against the limit 2 / (k (k + 1))

    :returns: (k, limit, |lambda_k(alpha) - limit|) for k = 1..K
    :rtype: List[Tuple[int, float, float]]
    """
    rows = []
    for k in range(1, max_degree + 1):
        limit = lambda_bound(k)
        rows.append((k, limit, abs(lambda_k(k, alpha) - limit)))
    return rows


class FunkHeckeCheck(typing.NamedTuple):
    values: np.ndarray
    expected: np.ndarray
    max_rel_err: float
    calibration_residual: float


def full_sphere_funk_hecke(alpha, idx, xis, level=32):
    """Sphere integral of |xi - eta|^-alpha Y(eta) against mu_k Y(xi)

    Each integral uses the Riesz pole rule centred at xi. Errors are
    relative to mu_k sqrt((2k + 1) / 4 pi), a bound for |mu_k Y|; the
    constant function calibrates the rule against mu_0.

    :param idx: harmonic to integrate
    :type idx: spheregeo.HarmonicIndex
    :param xis: sphere points with shape (n, 3)
    :rtype: FunkHeckeCheck
    """
    a = specfun.as_alpha(alpha).value
    xis = np.atleast_2d(np.asarray(xis, dtype=float))
    values = np.empty(len(xis))
    calibration = 0.0
    mu0 = mu_k(0, a)
    for i, xi in enumerate(xis):
        nodes, w = spheregeo.pole_rule(xi, level, spheregeo.RIESZ, a)
        values[i] = np.sum(w * spheregeo.real_sph_harm(idx, nodes))
        calibration = max(calibration, abs(np.sum(w) - mu0) / mu0)
    mu = mu_k(idx.degree, a)
    expected = mu * spheregeo.real_sph_harm(idx, xis)
    scale = mu * math.sqrt((2 * idx.degree + 1) / (4.0 * math.pi))
    rel = float(np.max(np.abs(values - expected))) / scale
    return FunkHeckeCheck(values, expected, rel, calibration)
