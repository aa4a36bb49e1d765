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

"""Sphere geometry: stereographic projection, harmonics and quadrature.

Points on the sphere are handled as arrays of shape (..., 3) and points of
the plane as arrays of shape (..., 2). The projection sends x to
(2x, 1 - |x|^2) / (1 + |x|^2), so the origin goes to the north pole and
infinity to the excluded south pole.
"""

import dataclasses
import logging
import math
import typing

import numpy as np

from . import exceptions
from . import quad
from . import specfun

log = logging.getLogger(__name__)

SOUTH_POLE_GUARD = 1e-14
# nodes this close to the south pole are dropped from centred rules
POLE_RULE_MARGIN = 1e-12
NORM_TOLERANCE = 1e-12

BOUNDED = 'bounded'
ALGEBRAIC = 'algebraic'
LOG_GROWTH = 'log-growth'
DECAY_CLASSES = (BOUNDED, ALGEBRAIC, LOG_GROWTH)

RIESZ = 'riesz'
LOG = 'log'
PLAIN = 'plain'


@dataclasses.dataclass(frozen=True)
class SpherePoint:
    """A point of the unit sphere, renormalized on construction."""

    xi: typing.Tuple[float, float, float]

    def __post_init__(self):
        arr = np.asarray(self.xi, dtype=float).reshape(3)
        norm = float(np.linalg.norm(arr))
        if not np.all(np.isfinite(arr)) or norm == 0.0:
            raise exceptions.DomainError(
                "not a sphere point: {!r}".format(self.xi))
        object.__setattr__(self, 'xi', tuple(float(c) for c in arr / norm))

    def as_array(self):
        return np.array(self.xi)


@dataclasses.dataclass(frozen=True)
class HarmonicIndex:
    """Address of the real spherical harmonic Y_{k,j}, 1 <= j <= 2k + 1.

    j = 1 is the zonal function; j = 2m and j = 2m + 1 carry cos(m phi)
    and sin(m phi).
    """

    degree: int
    order: int

    def __post_init__(self):
        if self.degree < 0 or not 1 <= self.order <= 2 * self.degree + 1:
            raise exceptions.DomainError(
                "invalid harmonic index (k={}, j={})".format(
                    self.degree, self.order))

    @property
    def azimuthal(self):
        """(m, 'cos' | 'sin' | None) for this order."""
        if self.order == 1:
            return 0, None
        return self.order // 2, 'cos' if self.order % 2 == 0 else 'sin'


def harmonic_indices(kmax, start=0):
    """All HarmonicIndex with start <= k <= kmax in basis order."""
    return [HarmonicIndex(k, j)
            for k in range(start, kmax + 1)
            for j in range(1, 2 * k + 2)]


@dataclasses.dataclass(frozen=True)
class SphereField:
    """A function on the sphere, evaluated on arrays of shape (..., 3)."""

    func: typing.Callable[[np.ndarray], np.ndarray]

    def __call__(self, xi):
        return np.asarray(self.func(_sphere_array(xi)), dtype=float)


@dataclasses.dataclass(frozen=True)
class PlaneField:
    """A function on the plane, evaluated on arrays of shape (..., 2).

    ``decay_class`` is one of 'bounded', 'algebraic' or 'log-growth'; an
    algebraic field also carries ``decay_power`` p with |f| = O(|x|^-p).
    ``grad``, when given, returns the exact gradient with shape (..., 2).
    """

    func: typing.Callable[[np.ndarray], np.ndarray]
    decay_class: str = BOUNDED
    decay_power: typing.Optional[float] = None
    grad: typing.Optional[typing.Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise exceptions.DomainError(
                "unknown decay class {!r}".format(self.decay_class))
        if self.decay_class == ALGEBRAIC and self.decay_power is None:
            raise exceptions.DomainError(
                "algebraic decay needs a decay power")

    def __call__(self, x):
        return np.asarray(self.func(np.asarray(x, dtype=float)),
                          dtype=float)


def _sphere_array(xi):
    if isinstance(xi, SpherePoint):
        return xi.as_array()
    return np.asarray(xi, dtype=float)


def stereo(x):
    """Stereographic projection of plane point(s) onto the sphere

    :param x: point(s) with shape (..., 2)
    :type x: numpy.ndarray
    :returns: sphere point(s) with shape (..., 3)
    :rtype: numpy.ndarray
    """
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    denom = 1.0 + r2
    return np.stack([2.0 * x[..., 0] / denom,
                     2.0 * x[..., 1] / denom,
                     (1.0 - r2) / denom], axis=-1)


def stereo_inv(xi):
    """Inverse projection (xi_1, xi_2) / (1 + xi_3)

    :param xi: SpherePoint or array with shape (..., 3)
    :raises DomainError: a point lies within 1e-14 of the south pole
    :rtype: numpy.ndarray
    """
    xi = _sphere_array(xi)
    lift = 1.0 + xi[..., 2]
    if np.any(lift <= SOUTH_POLE_GUARD):
        raise exceptions.DomainError(
            "stereographic inverse undefined at the south pole")
    return np.stack([xi[..., 0] / lift, xi[..., 1] / lift], axis=-1)


def rho(x):
    """Conformal factor (2 / (1 + |x|^2))^(1/2)."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(2.0 / (1.0 + np.sum(x * x, axis=-1)))


def pushforward(f):
    """Sphere field f o S^-1."""
    return SphereField(lambda xi: f(stereo_inv(xi)))


def pullback(field, decay_class=BOUNDED, decay_power=None):
    """Plane field F o S."""
    return PlaneField(lambda x: field(stereo(x)), decay_class, decay_power)


def harmonic_basis(kmax, xi, start=0):
    """Values of every Y_{k,j}, start <= k <= kmax, at the given points

    :param kmax: largest degree
    :type kmax: int
    :param xi: sphere points with shape (n, 3)
    :type xi: numpy.ndarray
    :returns: array with shape (n, number of harmonics) in basis order
    :rtype: numpy.ndarray
    """
    xi = np.atleast_2d(_sphere_array(xi))
    t = np.clip(xi[:, 2], -1.0, 1.0)
    phi = np.arctan2(xi[:, 1], xi[:, 0])
    table = specfun.assoc_legendre_normalized(kmax, t)
    columns = []
    for k in range(start, kmax + 1):
        columns.append(table[k, 0])
        for m in range(1, k + 1):
            scaled = math.sqrt(2.0) * table[k, m]
            columns.append(scaled * np.cos(m * phi))
            columns.append(scaled * np.sin(m * phi))
    return np.stack(columns, axis=-1)


def real_sph_harm(idx, xi):
    """Orthonormal real spherical harmonic Y_{k,j}

    :param idx: harmonic address
    :type idx: HarmonicIndex
    :param xi: SpherePoint or array with shape (..., 3)
    :rtype: Union[float, numpy.ndarray]
    """
    arr = _sphere_array(xi)
    flat = arr.reshape(-1, 3)
    table = specfun.assoc_legendre_normalized(
        idx.degree, np.clip(flat[:, 2], -1.0, 1.0))
    m, kind = idx.azimuthal
    values = table[idx.degree, m]
    if kind is not None:
        phi = np.arctan2(flat[:, 1], flat[:, 0])
        trig = np.cos if kind == 'cos' else np.sin
        values = math.sqrt(2.0) * values * trig(m * phi)
    if arr.ndim == 1:
        return float(values[0])
    return values.reshape(arr.shape[:-1])


@dataclasses.dataclass(frozen=True)
class SphereQuadrature:
    """Product rule on the sphere, exact on harmonics up to a degree."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, field):
        return float(np.sum(self.weights * field(self.nodes)))

    def points(self):
        return [SpherePoint(tuple(p)) for p in self.nodes]


@dataclasses.dataclass(frozen=True)
class PlaneQuadrature:
    """Sphere rule transported to the plane, weights w rho^-4."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def integrate(self, field):
        return float(np.sum(self.weights * field(self.nodes)))


def product_nodes(t, phi):
    """Sphere points for polar cosines t and azimuths phi, t-major."""
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    tt, pp = np.meshgrid(t, phi, indexing='ij')
    ss = np.broadcast_to(s[:, None], tt.shape)
    return np.stack([ss * np.cos(pp), ss * np.sin(pp), tt],
                    axis=-1).reshape(-1, 3)


def sphere_quadrature(level):
    """Gauss-Legendre in xi_3 times 2 * level uniform azimuth nodes

    :param level: Gauss-Legendre nodes in xi_3, >= 1
    :type level: int
    :rtype: SphereQuadrature
    """
    if level < 1:
        raise exceptions.DomainError(
            "sphere quadrature needs level >= 1, got {}".format(level))
    polar = quad.gauss_legendre(level)
    azimuth = quad.periodic_rule(2 * level)
    nodes = product_nodes(polar.nodes, azimuth.nodes)
    weights = np.outer(polar.weights, azimuth.weights).reshape(-1)
    return SphereQuadrature(nodes, weights, 2 * level - 1)


def plane_quadrature(level):
    """Sphere rule mapped to the plane by S^-1 with weights w rho^-4

    Integrates g exactly when g rho^-4 is the pullback of a spherical
    polynomial of degree <= exactness_degree.

    :rtype: PlaneQuadrature
    """
    sphere = sphere_quadrature(level)
    x = stereo_inv(sphere.nodes)
    weights = sphere.weights / rho(x) ** 4
    return PlaneQuadrature(x, weights, sphere.exactness_degree)


def rotation_to_pole(xi):
    """Orthogonal matrix R with R (0, 0, 1) = xi

    The columns are two unit tangents at xi followed by xi itself.

    :rtype: numpy.ndarray
    """
    xi = _sphere_array(xi)
    xi = xi / np.linalg.norm(xi)
    helper = np.zeros(3)
    helper[int(np.argmin(np.abs(xi)))] = 1.0
    e1 = helper - np.dot(helper, xi) * xi
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(xi, e1)
    return np.column_stack([e1, e2, xi])


def pole_rule(xi, level, kind=PLAIN, alpha=None):
    """Product rule on the sphere centred at xi

    Writes eta = t xi + sqrt(1 - t^2)(cos(phi) e1 + sin(phi) e2), for
    which d eta = dt d phi and |xi - eta|^2 = 2 - 2t. The t direction uses
    Gauss-Legendre ('plain'), the Riesz rule with |xi - eta|^-alpha folded
    into the weights ('riesz') or the tanh-sinh rule with log|xi - eta|
    folded in ('log'); the azimuth uses 2 * level uniform nodes.

    :param xi: centre of the rule
    :param level: refinement level
    :type level: int
    :param kind: 'plain', 'riesz' or 'log'
    :type kind: str
    :param alpha: Riesz exponent, required for kind 'riesz'
    :returns: nodes with shape (n, 3) and weights
    :rtype: Tuple[numpy.ndarray, numpy.ndarray]
    """
    if kind == RIESZ:
        if alpha is None:
            raise exceptions.DomainError("riesz pole rule needs alpha")
        t, wt = quad.alg_singular_rule(alpha, 2 * level)
    elif kind == LOG:
        t, wt, gap = quad.log_singular_rule(level)
        wt = wt * 0.5 * np.log(2.0 * gap)
    elif kind == PLAIN:
        rule = quad.gauss_legendre(2 * level)
        t, wt = rule.nodes, rule.weights
    else:
        raise exceptions.DomainError(
            "unknown pole rule kind {!r}".format(kind))
    azimuth = quad.periodic_rule(2 * level)
    local = product_nodes(t, azimuth.nodes)
    nodes = local @ rotation_to_pole(xi).T
    weights = np.outer(wt, azimuth.weights).reshape(-1)
    keep = nodes[:, 2] + 1.0 > POLE_RULE_MARGIN
    return nodes[keep], weights[keep]


class DegreeOneNormalization(typing.NamedTuple):
    adopted: float
    stated: float
    adopted_norm: float
    stated_norm: float


def degree_one_normalization(level=8):
    """Compare the orthonormal degree-one constant with sqrt(3 / (2 pi))

    The adopted constant sqrt(3 / (4 pi)) gives unit L2 norm; the
    alternative sqrt(3 / (2 pi)) gives norm sqrt(2). Both norms are
    measured by sphere quadrature.

    :rtype: DegreeOneNormalization
    """
    rule = sphere_quadrature(level)
    adopted = math.sqrt(3.0 / (4.0 * math.pi))
    stated = math.sqrt(3.0 / (2.0 * math.pi))
    xi1_sq = rule.integrate(lambda xi: xi[:, 0] ** 2)
    result = DegreeOneNormalization(
        adopted, stated,
        math.sqrt(adopted ** 2 * xi1_sq), math.sqrt(stated ** 2 * xi1_sq))
    log.warning("degree-one harmonics use sqrt(3/(4 pi)) = %.12f; "
                "sqrt(3/(2 pi)) would have norm %.12f",
                adopted, result.stated_norm)
    return result
