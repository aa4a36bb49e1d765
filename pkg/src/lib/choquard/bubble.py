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

"""Bubbles, kernel elements and the planar operators around them.

The bubble with scale mu and centre zeta is

    U(x) = ((4 - alpha) / 2) log(C_alpha mu / (1 + mu^2 |x - zeta|^2))

and its linearization has the kernel elements phi_1, phi_2 (translations)
and phi_3 (dilation). Singular integrals are moved to the sphere, where
|x - y| = |Sx - Sy| / (rho(x) rho(y)) and dy = rho(y)^-4 d eta, and then
computed with the centred rules of ``spheregeo.pole_rule``.
"""

import dataclasses
import logging
import math
import typing

import numpy as np
from scipy import special

from . import exceptions
from . import quad
from . import specfun
from . import spheregeo

log = logging.getLogger(__name__)

PlaneField = spheregeo.PlaneField

LAPLACIAN_STEP = 1e-3
GRADIENT_STEP = 1e-4
INFINITY_RADII = (1e3, 1e4)
INFINITY_DIRECTIONS = 8
INFINITY_AGREEMENT = 1e-3
REPRESENTATION_SPREAD = 1e-6
# kc is clamped here; K(k) grows like log(4 / kc)
ELLIPK_FLOOR = 1e-150
# outer radial nodes with 1 - u below this are dropped
OUTER_LIFT_CUTOFF = 1e-100


@dataclasses.dataclass(frozen=True)
class BubbleParams:
    """Exponent, scale and centre identifying one bubble."""

    alpha: specfun.AlphaParam
    mu: float = 1.0
    zeta: typing.Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, 'alpha', specfun.as_alpha(self.alpha))
        zeta = tuple(float(c) for c in self.zeta)
        if not (math.isfinite(self.mu) and self.mu > 0.0):
            raise exceptions.DomainError(
                "bubble scale must be positive, got {!r}".format(self.mu))
        if len(zeta) != 2 or not all(math.isfinite(c) for c in zeta):
            raise exceptions.DomainError(
                "bubble centre must be a finite plane point")
        object.__setattr__(self, 'zeta', zeta)

    def shifted_r2(self, x):
        """mu^2 |x - zeta|^2"""
        d = np.asarray(x, dtype=float) - np.array(self.zeta)
        return self.mu ** 2 * np.sum(d * d, axis=-1)


class WeightedNorms(typing.NamedTuple):
    """Weighted L2 norm, gradient L2 norm and weighted H1 norm."""

    l2w: float
    grad_l2: float
    h1w: float

    @classmethod
    def from_squares(cls, l2w_sq, grad_sq):
        return cls(math.sqrt(l2w_sq), math.sqrt(grad_sq),
                   math.sqrt(l2w_sq + grad_sq))


class RepresentationCheck(typing.NamedTuple):
    constant: float
    spread: float
    samples: np.ndarray


def _r2(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def _scalar(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def u_bubble(p, x):
    """U_{mu, zeta}(x)

    :param p: bubble parameters
    :type p: BubbleParams
    :param x: point(s) with shape (..., 2)
    :rtype: Union[float, numpy.ndarray]
    """
    a = p.alpha.value
    c = specfun.c_alpha(p.alpha)
    return _scalar(0.5 * (4.0 - a)
                   * np.log(c * p.mu / (1.0 + p.shifted_r2(x))))


def bubble_density(p, x):
    """e^{4U / (4 - alpha)} = (C_alpha mu / (1 + mu^2 |x - zeta|^2))^2"""
    c = specfun.c_alpha(p.alpha)
    return _scalar((c * p.mu / (1.0 + p.shifted_r2(x))) ** 2)


def exp_bubble(p, x):
    """e^U"""
    return _scalar(np.exp(u_bubble(p, x)))


def liouville_bubble(mu, zeta, x):
    """2 log(2 sqrt(2) mu / (1 + mu^2 |x - zeta|^2))"""
    if not mu > 0.0:
        raise exceptions.DomainError(
            "Liouville scale must be positive, got {!r}".format(mu))
    d = np.asarray(x, dtype=float) - np.asarray(zeta, dtype=float)
    r2 = mu ** 2 * np.sum(d * d, axis=-1)
    return _scalar(2.0 * np.log(2.0 * math.sqrt(2.0) * mu / (1.0 + r2)))


def kernel_basis(alpha, x):
    """(phi_1, phi_2, phi_3) at x for mu = 1, zeta = 0

    :rtype: Tuple
    """
    a = specfun.as_alpha(alpha).value
    x = np.asarray(x, dtype=float)
    r2 = _r2(x)
    return (_scalar((4.0 - a) * x[..., 0] / (1.0 + r2)),
            _scalar((4.0 - a) * x[..., 1] / (1.0 + r2)),
            _scalar(0.5 * (4.0 - a) * (1.0 - r2) / (1.0 + r2)))


def kernel_basis_general(p, x):
    """d U / d zeta_1, d U / d zeta_2 and mu d U / d mu at x

    Reduces to ``kernel_basis`` at mu = 1, zeta = 0.
    """
    a = p.alpha.value
    d = np.asarray(x, dtype=float) - np.array(p.zeta)
    s = p.shifted_r2(x)
    return (_scalar((4.0 - a) * p.mu ** 2 * d[..., 0] / (1.0 + s)),
            _scalar((4.0 - a) * p.mu ** 2 * d[..., 1] / (1.0 + s)),
            _scalar(0.5 * (4.0 - a) * (1.0 - s) / (1.0 + s)))


def kernel_gradient(alpha, x):
    """Exact gradients of phi_1, phi_2, phi_3, shape (..., 3, 2)."""
    a = specfun.as_alpha(alpha).value
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    q = 1.0 + _r2(x)
    c = 4.0 - a
    g1 = np.stack([c * (q - 2.0 * x1 * x1) / q ** 2,
                   -2.0 * c * x1 * x2 / q ** 2], axis=-1)
    g2 = np.stack([-2.0 * c * x1 * x2 / q ** 2,
                   c * (q - 2.0 * x2 * x2) / q ** 2], axis=-1)
    g3 = np.stack([-2.0 * c * x1 / q ** 2,
                   -2.0 * c * x2 / q ** 2], axis=-1)
    return np.stack([g1, g2, g3], axis=-2)


def kernel_field(alpha, j):
    """phi_j as a PlaneField with its exact gradient."""
    if j not in (1, 2, 3):
        raise exceptions.DomainError(
            "kernel element index must be 1, 2 or 3, got {}".format(j))
    return PlaneField(lambda x: kernel_basis(alpha, x)[j - 1],
                      grad=lambda x: kernel_gradient(alpha, x)[..., j - 1, :])


def kernel_combination(alpha, coefficients):
    """sum_j c_j phi_j as a PlaneField with exact gradient."""
    c = np.asarray(coefficients, dtype=float)

    def value(x):
        basis = kernel_basis(alpha, x)
        return sum(c[i] * np.asarray(basis[i]) for i in range(3))

    def grad(x):
        return np.einsum('i,...ij->...j', c, kernel_gradient(alpha, x))

    return PlaneField(value, grad=grad)


def kelvin_point(x):
    """Inversion x / |x|^2

    :raises DomainError: x = 0
    """
    x = np.asarray(x, dtype=float)
    r2 = _r2(x)
    if np.any(r2 == 0.0):
        raise exceptions.DomainError("Kelvin inversion undefined at 0")
    return x / r2[..., None]


def riesz_potential_closed(p, x):
    """(2 (4 - alpha) / C_alpha^2) e^{alpha U / (4 - alpha)}

    Equal to the convolution of e^U with |x|^-alpha.
    """
    a = p.alpha.value
    c = specfun.c_alpha(p.alpha)
    u = np.asarray(u_bubble(p, x))
    return _scalar(2.0 * (4.0 - a) / c ** 2 * np.exp(a * u / (4.0 - a)))


def _points(x):
    x = np.asarray(x, dtype=float)
    return x.reshape(-1, 2), x.shape[:-1]


def riesz_convolution(alpha, h, x, level=quad.DEFAULT_LEVEL,
                      tol=quad.DEFAULT_TOLERANCE):
    """Integral of h(y) |x - y|^-alpha dy by sphere transport

    Evaluated as rho(x)^alpha times the sphere integral of
    h(S^-1 eta) rho^(alpha - 4) |xi - eta|^-alpha, which is smooth for
    fields like e^U.

    :param h: plane field decaying faster than |y|^(alpha - 2)
    :type h: PlaneField
    :rtype: quad.Estimate
    """
    a = specfun.as_alpha(alpha).value
    flat, shape = _points(x)

    def compute(lvl):
        out = np.empty(len(flat))
        for i, xi in enumerate(spheregeo.stereo(flat)):
            nodes, w = spheregeo.pole_rule(xi, lvl, spheregeo.RIESZ, a)
            y = spheregeo.stereo_inv(nodes)
            out[i] = np.sum(w * h(y) * spheregeo.rho(y) ** (a - 4.0))
        return (spheregeo.rho(flat) ** a * out).reshape(shape)

    return quad.refine(compute, level, tol)


def n_closed(alpha, j, x):
    """Closed reduction N(phi_j) = 8 phi_j / (1 + |x|^2)^2"""
    phi = np.asarray(kernel_basis(alpha, x)[j - 1])
    return _scalar(8.0 * phi / (1.0 + _r2(x)) ** 2)


def n_closed_field(alpha, j):
    return PlaneField(lambda x: n_closed(alpha, j, x),
                      spheregeo.ALGEBRAIC, 4.0)


def n2_apply(alpha, phi, x):
    """N_2(phi) = 2 (4 - alpha) phi / (1 + |x|^2)^2"""
    a = specfun.as_alpha(alpha).value
    return _scalar(2.0 * (4.0 - a) * phi(x) / (1.0 + _r2(x)) ** 2)


def n1_apply(alpha, phi, x, level=quad.DEFAULT_LEVEL,
             tol=quad.DEFAULT_TOLERANCE):
    """N_1(phi) = e^U (e^U phi * |x|^-alpha) through the sphere

    Equal to C^(4-alpha) 2^-(4-alpha) rho^4(x) times the sphere integral
    of S_*phi(eta) |Sx - eta|^-alpha.

    :rtype: quad.Estimate
    """
    a = specfun.as_alpha(alpha).value
    factor = specfun.c_alpha_power(a) * 2.0 ** (a - 4.0)
    field = spheregeo.pushforward(phi)
    flat, shape = _points(x)

    def compute(lvl):
        out = np.empty(len(flat))
        for i, xi in enumerate(spheregeo.stereo(flat)):
            nodes, w = spheregeo.pole_rule(xi, lvl, spheregeo.RIESZ, a)
            out[i] = np.sum(w * field(nodes))
        return (factor * spheregeo.rho(flat) ** 4 * out).reshape(shape)

    return quad.refine(compute, level, tol)


def n_apply(alpha, phi, x, level=quad.DEFAULT_LEVEL,
            tol=quad.DEFAULT_TOLERANCE):
    """Linearized operator N(phi) = N_1(phi) + N_2(phi)

    N_1 by singular quadrature, N_2 by its closed reduction.

    :param phi: bounded plane field
    :type phi: PlaneField
    :raises AccuracyError: the N_1 quadrature did not converge
    :rtype: quad.Estimate
    """
    first = n1_apply(alpha, phi, x, level, tol)
    return quad.Estimate(_scalar(first.value + np.asarray(
        n2_apply(alpha, phi, x))), first.error)


def _sphere_density(f):
    """S_*(f rho^-4) as a sphere field."""
    def density(eta):
        y = spheregeo.stereo_inv(eta)
        return f(y) / spheregeo.rho(y) ** 4
    return spheregeo.SphereField(density)


def _require_integrable(f):
    if (f.decay_class != spheregeo.ALGEBRAIC
            or f.decay_power is None or f.decay_power <= 2.0):
        raise exceptions.DomainError(
            "log potential needs algebraic decay faster than |x|^-2 "
            "({}, {!r})".format(f.decay_class, f.decay_power))


def _polar_angle_rule(level):
    """Gauss-Legendre in the polar angle times uniform azimuth.

    Spectrally accurate for fields smooth in the polar angle, such as
    functions of sqrt(1 + xi_3) and sqrt(1 - xi_3).
    """
    polar = quad.gauss_legendre(2 * level).mapped(0.0, math.pi)
    azimuth = quad.periodic_rule(2 * level)
    nodes = spheregeo.product_nodes(np.cos(polar.nodes), azimuth.nodes)
    weights = np.outer(polar.weights * np.sin(polar.nodes),
                       azimuth.weights).reshape(-1)
    return nodes, weights


def _log_layer(density, xi, lvl):
    nodes, w = spheregeo.pole_rule(xi, lvl, spheregeo.LOG)
    return np.sum(w * density(nodes))


def log_potential(f, x, level=quad.DEFAULT_LEVEL,
                  tol=quad.DEFAULT_TOLERANCE):
    """Kf(x) = (1 / 2 pi) integral of log((1 + |y|) / |x - y|) f(y) dy

    With F = S_*(f rho^-4) the potential is
    (1 / 2 pi) (A - L(Sx) + log(rho(x)) M), where L is the log layer of
    F, M its total mass and A the mass of F weighted by
    log((1 + |y|) rho(y)).

    :param f: integrable plane field
    :type f: PlaneField
    :raises DomainError: f is not known to decay faster than |x|^-2
    :rtype: quad.Estimate
    """
    _require_integrable(f)
    density = _sphere_density(f)
    flat, shape = _points(x)
    centres = spheregeo.stereo(flat)

    def weighted(eta):
        # log((1 + |y|) rho(y)) in sphere coordinates
        t = np.clip(eta[..., 2], -1.0, 1.0)
        return np.log(np.sqrt(1.0 + t) + np.sqrt(1.0 - t)) * density(eta)

    def compute(lvl):
        nodes, w = _polar_angle_rule(lvl)
        mass = np.sum(w * density(nodes))
        shift = np.sum(w * weighted(nodes))
        layers = np.array([_log_layer(density, xi, lvl) for xi in centres])
        value = (shift - layers
                 + np.log(spheregeo.rho(flat)) * mass) / (2.0 * math.pi)
        return value.reshape(shape)

    return quad.refine(compute, level, tol)


def identity_mass(alpha, level=quad.DEFAULT_LEVEL, params=None,
                  reduced=True, tol=quad.DEFAULT_TOLERANCE):
    """Bubble mass and Riesz energy

    Returns the integral of e^{4U/(4-alpha)} and the double integral of
    e^U(x) e^U(y) |x - y|^-alpha. The reduced path uses the closed Riesz
    potential and a radial integral about zeta; the unreduced path
    convolves numerically at every node of a plane rule.

    :param params: bubble, defaults to mu = 1, zeta = 0
    :type params: Optional[BubbleParams]
    :rtype: Tuple[quad.Estimate, quad.Estimate]
    """
    p = params if params is not None else BubbleParams(alpha)
    zeta = np.array(p.zeta)

    def on_ray(r):
        return zeta + np.stack([r, np.zeros_like(r)], axis=-1)

    mass = quad.radial_integral(
        lambda r: 2.0 * math.pi * bubble_density(p, on_ray(r)), level, tol)
    if reduced:
        energy = quad.radial_integral(
            lambda r: 2.0 * math.pi * exp_bubble(p, on_ray(r))
            * riesz_potential_closed(p, on_ray(r)), level, tol)
        return mass, energy
    h = PlaneField(lambda y: exp_bubble(p, y), spheregeo.ALGEBRAIC,
                   4.0 - p.alpha.value)

    def compute(lvl):
        rule = spheregeo.plane_quadrature(lvl)
        potential = riesz_convolution(p.alpha, h, rule.nodes, lvl,
                                      tol=None).value
        return np.sum(rule.weights * exp_bubble(p, rule.nodes) * potential)

    return mass, quad.refine(compute, level, tol)


def orthogonality_integral(alpha, phi, level=quad.DEFAULT_LEVEL,
                           tol=quad.DEFAULT_TOLERANCE):
    """Integral of e^{4U/(4-alpha)} phi over the plane

    :rtype: quad.Estimate
    """
    p = BubbleParams(alpha)

    def compute(lvl):
        rule = spheregeo.plane_quadrature(lvl)
        return rule.integrate(lambda x: bubble_density(p, x) * phi(x))

    return quad.refine(compute, level, tol)


def _fd_gradient(phi, x, step):
    h = step * (1.0 + np.sqrt(_r2(x)))
    e1 = np.stack([h, np.zeros_like(h)], axis=-1)
    e2 = np.stack([np.zeros_like(h), h], axis=-1)
    return np.stack([(phi(x + e1) - phi(x - e1)) / (2.0 * h),
                     (phi(x + e2) - phi(x - e2)) / (2.0 * h)], axis=-1)


def weighted_norms(phi, level=quad.DEFAULT_LEVEL,
                   tol=quad.DEFAULT_TOLERANCE):
    """Weighted L2, gradient L2 and weighted H1 norms of phi

    Uses the supplied gradient when the field has one, central differences
    with step 1e-4 (1 + |x|) otherwise.

    :param phi: plane field
    :type phi: PlaneField
    :raises AccuracyError: the integrals grow across levels
    :rtype: WeightedNorms
    """
    def gradient(x):
        if phi.grad is not None:
            return np.asarray(phi.grad(x), dtype=float)
        return _fd_gradient(phi, x, GRADIENT_STEP)

    def compute(lvl):
        rule = spheregeo.plane_quadrature(lvl)
        x = rule.nodes
        l2w = np.sum(rule.weights * phi(x) ** 2 / (1.0 + _r2(x)) ** 2)
        grad = np.sum(rule.weights * np.sum(gradient(x) ** 2, axis=-1))
        return np.array([l2w, grad])

    squares = quad.refine(compute, level, tol).value
    return WeightedNorms.from_squares(max(squares[0], 0.0),
                                      max(squares[1], 0.0))


def laplacian_fd(f, x, step=LAPLACIAN_STEP):
    """Five-point Laplacian with step h."""
    x = np.asarray(x, dtype=float)
    h = np.full(x.shape[:-1], float(step))
    e1 = np.stack([h, np.zeros_like(h)], axis=-1)
    e2 = np.stack([np.zeros_like(h), h], axis=-1)
    centre = np.asarray(f(x), dtype=float)
    total = (np.asarray(f(x + e1)) + np.asarray(f(x - e1))
             + np.asarray(f(x + e2)) + np.asarray(f(x - e2)) - 4.0 * centre)
    return _scalar(total / h ** 2)


def constant_at_infinity(phi, radii=INFINITY_RADII,
                         directions=INFINITY_DIRECTIONS):
    """Estimate the limit of phi at infinity

    phi is sampled on circles of the given radii along uniformly spread
    directions. The circle averages must agree, and the samples on the
    outer circle must not spread, within 1e-3.

    :raises AccuracyError: the samples do not settle
    :rtype: float
    """
    angles = quad.periodic_rule(directions).nodes
    unit = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    samples = [np.asarray(phi(r * unit), dtype=float) for r in radii]
    means = [float(np.mean(s)) for s in samples]
    spread = float(np.max(samples[-1]) - np.min(samples[-1]))
    drift = max(abs(m - means[-1]) for m in means)
    if drift > INFINITY_AGREEMENT or spread > INFINITY_AGREEMENT:
        raise exceptions.AccuracyError(
            "limit at infinity not settled (drift {:.3e}, spread {:.3e})"
            .format(drift, spread), value=means[-1], error=max(drift, spread))
    return means[-1]


def integral_representation_residual(alpha, j, xs, level=quad.DEFAULT_LEVEL,
                                     spread_tol=REPRESENTATION_SPREAD,
                                     tol=quad.DEFAULT_TOLERANCE):
    """Constant C_phi implied by phi_j = -(1/2 pi) log * N(phi_j) + C_phi

    At each sample point C = phi_j(x) + (1 / 2 pi) integral of
    log|x - y| N(phi_j)(y) dy, evaluated on the sphere as
    L(Sx) - log(rho(x)) M - (L(south) - log(2) M / 2), where the log layer
    L of F = S_*(N(phi_j) rho^-4) is also taken at the south pole. The
    samples are refined together by level doubling.

    :param spread_tol: largest allowed spread of the implied constants
    :type spread_tol: float
    :raises AccuracyError: the samples do not converge, or the implied
        constants spread by more than spread_tol
    :rtype: RepresentationCheck
    """
    phi = kernel_field(alpha, j)
    density = _sphere_density(n_closed_field(alpha, j))
    flat, _ = _points(xs)
    centres = spheregeo.stereo(flat)
    south = np.array([0.0, 0.0, -1.0])

    def compute(lvl):
        mass = spheregeo.sphere_quadrature(lvl).integrate(density)
        layers = np.array([_log_layer(density, xi, lvl) for xi in centres])
        convolution = (layers - np.log(spheregeo.rho(flat)) * mass
                       - (_log_layer(density, south, lvl)
                          - 0.5 * math.log(2.0) * mass))
        return phi(flat) + convolution / (2.0 * math.pi)

    estimate = quad.refine(compute, level, tol)
    samples = np.atleast_1d(estimate.value)
    spread = float(np.max(samples) - np.min(samples))
    if spread > spread_tol:
        raise exceptions.AccuracyError(
            "representation constant spreads by {:.3e}".format(spread),
            value=float(np.mean(samples)), error=spread)
    return RepresentationCheck(float(np.mean(samples)), spread, samples)


def n_total_integral(alpha, phi, level=8, tol=quad.DEFAULT_TOLERANCE):
    """Integral of N(phi) over the plane, N evaluated numerically

    :rtype: quad.Estimate
    """
    def compute(lvl):
        rule = spheregeo.plane_quadrature(lvl)
        values = n_apply(alpha, phi, rule.nodes, lvl, tol=None).value
        return np.sum(rule.weights * values)

    return quad.refine(compute, level, tol)


def identity_integral(alpha, phi, level=16):
    """Both sides of -integral(Laplacian phi) = (4(4-alpha)/C^2) integral(
    e^{4U/(4-alpha)} phi)

    The left side applies the five-point Laplacian at the nodes of a plane
    rule.

    :rtype: Tuple[float, float]
    """
    a = specfun.as_alpha(alpha).value
    c = specfun.c_alpha(a)
    rule = spheregeo.plane_quadrature(level)
    lhs = -rule.integrate(lambda x: laplacian_fd(phi, x))
    rhs = (4.0 * (4.0 - a) / c ** 2
           * orthogonality_integral(a, phi, level, tol=None).value)
    return lhs, rhs


def liouville_kernel_basis(x):
    """Kernel of -Laplacian - e^{U_bar}: 4 x_j / (1 + |x|^2) and
    2 (1 - |x|^2) / (1 + |x|^2)"""
    x = np.asarray(x, dtype=float)
    r2 = _r2(x)
    return (_scalar(4.0 * x[..., 0] / (1.0 + r2)),
            _scalar(4.0 * x[..., 1] / (1.0 + r2)),
            _scalar(2.0 * (1.0 - r2) / (1.0 + r2)))


def liouville_residual(x, step=LAPLACIAN_STEP):
    """Residual |Laplacian phi + 8 phi / (1 + |x|^2)^2| of the three
    Liouville kernel elements, shape (3, ...)."""
    x = np.asarray(x, dtype=float)
    residuals = []
    for j in range(3):
        def phi(y, j=j):
            return liouville_kernel_basis(y)[j]
        lhs = -np.asarray(laplacian_fd(phi, x, step))
        rhs = 8.0 * np.asarray(phi(x)) / (1.0 + _r2(x)) ** 2
        residuals.append(np.abs(lhs - rhs))
    return np.array(residuals)


def _ellipk_complement(kc):
    """Complete elliptic integral K(k) from kc = sqrt(1 - k^2)."""
    kc = np.maximum(np.asarray(kc, dtype=float), ELLIPK_FLOOR)
    return special.ellipkm1(kc * kc)


def riesz_decay_integral(theta, x, level=quad.DEFAULT_LEVEL):
    """Integral of |x - y|^-1 <y>^-theta over the plane

    In polar coordinates about the origin the angular integral is
    4 K(k) / (|x| + r) with k^2 = 4 |x| r / (|x| + r)^2. The radial
    integral has a logarithmic singularity at r = |x|; it is split there
    and both halves use the tanh-sinh rule, the outer one through
    r = |x| + L u / (1 - u) with L = max(|x|, 1).

    :param theta: decay exponent > 1
    :type theta: float
    :param x: plane point
    :rtype: quad.Estimate
    """
    radius = float(np.linalg.norm(np.asarray(x, dtype=float)))
    if radius == 0.0:
        return quad.tail_integral(
            lambda r: 2.0 * math.pi * (1.0 + r * r) ** (-0.5 * theta),
            theta, level, tol=None)
    scale = max(radius, 1.0)

    def radial(r, gap):
        # gap is |r - |x||, supplied separately to keep it exact near |x|
        kc = gap / (radius + r)
        return (4.0 * r * (1.0 + r * r) ** (-0.5 * theta)
                * _ellipk_complement(kc) / (radius + r))

    def compute(lvl):
        t, w, gap = quad.log_singular_rule(lvl)
        inner = 0.5 * radius * np.sum(
            w * radial(0.5 * radius * (1.0 + t), 0.5 * radius * gap))
        lift = 0.5 * (1.0 + t)
        keep = lift > OUTER_LIFT_CUTOFF
        lift, u = lift[keep], 0.5 * gap[keep]
        outer = np.sum(w[keep] * 0.5 * scale / lift ** 2
                       * radial(radius + scale * u / lift, scale * u / lift))
        return inner + outer

    return quad.refine(compute, level, tol=None)


def decay_bound(theta, x):
    """Three-regime bound for ``riesz_decay_integral`` at x."""
    bracket = math.sqrt(1.0 + float(np.sum(np.asarray(x) ** 2)))
    if theta < 2.0:
        return bracket ** (1.0 - theta)
    if theta == 2.0:
        return (1.0 + math.log(bracket)) / bracket
    return 1.0 / bracket
