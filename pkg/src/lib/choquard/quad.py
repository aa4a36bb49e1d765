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

"""One-dimensional quadrature engines.

Gauss-Legendre rules, the exponent-cancelling rule for the Riesz endpoint
singularity, the tanh-sinh rule for the logarithmic one, and the radial and
algebraic-tail maps of [0, inf). Every integral returns an ``Estimate``
whose error is the level-doubling difference |I(2n) - I(n)|. Sums are
taken with ``numpy.sum`` (pairwise summation) so results are reproducible.
"""

import dataclasses
import functools
import logging
import math
import typing

import numpy as np
import tenacity

from . import exceptions
from . import specfun

log = logging.getLogger(__name__)

DEFAULT_LEVEL = 24
REFINE_ATTEMPTS = 3
DEFAULT_TOLERANCE = 1e-8
NEWTON_MAX_ITERATIONS = 100

# tanh-sinh: step h = TANH_SINH_SCALE / level, abscissae |t| <= TANH_SINH_SPAN
TANH_SINH_SCALE = 4.0
TANH_SINH_SPAN = 3.5


class Estimate(typing.NamedTuple):
    """Quadrature value with its level-doubling error estimate."""

    value: typing.Any
    error: float


@dataclasses.dataclass(frozen=True)
class Rule1D:
    """Nodes and positive weights on an interval."""

    nodes: np.ndarray
    weights: np.ndarray
    domain: typing.Tuple[float, float]

    def integrate(self, f):
        """Apply the rule to a vectorized integrand

        :param f: callable evaluated on the node array
        :type f: Callable[[numpy.ndarray], numpy.ndarray]
        :rtype: float
        """
        return float(np.sum(self.weights * f(self.nodes)))

    def mapped(self, a, b):
        """Affine image of the rule on [a, b]."""
        lo, hi = self.domain
        scale = (b - a) / (hi - lo)
        nodes = a + (self.nodes - lo) * scale
        return Rule1D(_frozen(nodes), _frozen(self.weights * scale), (a, b))


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.flags.writeable = False
    return arr


@functools.lru_cache(maxsize=64)
def gauss_legendre(n):
    """Gauss-Legendre rule with n nodes on [-1, 1]

    Nodes are the roots of P_n found by Newton iteration on the Bonnet
    recurrence; the rule is symmetrized so that nodes mirror about 0.

    :param n: number of nodes >= 1
    :type n: int
    :raises DomainError: n < 1
    :rtype: Rule1D
    """
    if n < 1:
        raise exceptions.DomainError(
            "Gauss-Legendre needs n >= 1, got {}".format(n))
    i = np.arange(1, n + 1)
    x = np.cos(math.pi * (i - 0.25) / (n + 0.5))
    for _ in range(NEWTON_MAX_ITERATIONS):
        p, dp = specfun.legendre_and_derivative(n, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-15:
            break
    _, dp = specfun.legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1]
    w = w[::-1]
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return Rule1D(_frozen(x), _frozen(w), (-1.0, 1.0))


def periodic_rule(n):
    """Uniform rule on [0, 2 pi) with offset nodes 2 pi (m + 1/2) / n."""
    phi = 2.0 * math.pi * (np.arange(n) + 0.5) / n
    return Rule1D(_frozen(phi), _frozen(np.full(n, 2.0 * math.pi / n)),
                  (0.0, 2.0 * math.pi))


def refine(compute, level, tol=DEFAULT_TOLERANCE, attempts=REFINE_ATTEMPTS):
    """Evaluate a quadrature at levels n and 2n, escalating on failure

    ``compute(n)`` returns the rule value at level n (scalar or array).
    The difference between levels n and 2n is the error estimate; when it
    exceeds ``tol`` relative to max(1, |I(2n)|) the base level is doubled
    and the pair recomputed, up to ``attempts`` times.

    :param compute: level -> value
    :type compute: Callable[[int], Union[float, numpy.ndarray]]
    :param level: base level
    :type level: int
    :param tol: relative tolerance, or None to only report the estimate
    :type tol: Optional[float]
    :raises AccuracyError: tolerance still missed after the last attempt
    :rtype: Estimate
    """
    retrying = tenacity.Retrying(
        stop=tenacity.stop_after_attempt(attempts),
        retry=tenacity.retry_if_exception_type(exceptions.AccuracyError),
        before_sleep=tenacity.before_sleep_log(log, logging.WARNING),
        reraise=True)
    for attempt in retrying:
        with attempt:
            n = level * 2 ** (attempt.retry_state.attempt_number - 1)
            coarse = np.asarray(compute(n), dtype=float)
            fine = np.asarray(compute(2 * n), dtype=float)
            error = float(np.max(np.abs(fine - coarse)))
            scale = max(1.0, float(np.max(np.abs(fine))))
            log.debug("level %d: error estimate %.3e", n, error)
            if tol is not None and error > tol * scale:
                raise exceptions.AccuracyError(
                    "level {}: |I(2n) - I(n)| = {:.3e}".format(n, error),
                    value=fine, error=error, level=n)
    value = float(fine) if fine.ndim == 0 else fine
    return Estimate(value, error)


def _singular_exponents(alpha):
    # 1 - t = 2 v^m with m (2 - alpha) / 2 = q an integer, so the Jacobian
    # times (2 - 2t)^(-alpha/2) is the monomial v^(q - 1).
    q = max(1, math.ceil(1.5 * (2.0 - alpha) - 1e-12))
    m = 2.0 * q / (2.0 - alpha)
    return q, m


def alg_singular_rule(alpha, n):
    """Rule for integral over [-1, 1] of (2 - 2t)^(-alpha/2) g(t) dt

    The substitution 1 - t = 2 v^m cancels the endpoint singularity
    exactly; Gauss-Legendre with n nodes is then applied in v.

    :param alpha: Riesz exponent
    :type alpha: Union[float, specfun.AlphaParam]
    :param n: Gauss-Legendre nodes in v
    :type n: int
    :returns: nodes t (ascending in v) and weights
    :rtype: Tuple[numpy.ndarray, numpy.ndarray]
    """
    a = specfun.as_alpha(alpha).value
    q, m = _singular_exponents(a)
    rule = gauss_legendre(n).mapped(0.0, 1.0)
    v = rule.nodes
    t = 1.0 - 2.0 * v ** m
    w = 2.0 ** (1.0 - a) * m * v ** (q - 1) * rule.weights
    return t, w


def alg_singular(alpha, g, level=DEFAULT_LEVEL, tol=DEFAULT_TOLERANCE):
    """Integral over [-1, 1] of (2 - 2t)^(-alpha/2) g(t) dt

    :param alpha: Riesz exponent
    :type alpha: Union[float, specfun.AlphaParam]
    :param g: vectorized integrand, smooth up to t = 1
    :type g: Callable[[numpy.ndarray], numpy.ndarray]
    :rtype: Estimate
    """
    def compute(lvl):
        t, w = alg_singular_rule(alpha, 2 * lvl)
        return np.sum(w * g(t))
    return refine(compute, level, tol)


def log_singular_rule(level, lower_cutoff=0.0):
    """tanh-sinh rule on [-1, 1] with accurate distances to the endpoints

    :param level: refinement level, step h = TANH_SINH_SCALE / level
    :type level: int
    :param lower_cutoff: drop nodes with 1 + t below this value
    :type lower_cutoff: float
    :returns: nodes t, weights, and 1 - t computed without cancellation
    :rtype: Tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]
    """
    h = TANH_SINH_SCALE / level
    count = int(math.ceil(TANH_SINH_SPAN / h))
    s = h * np.arange(-count, count + 1)
    u = 0.5 * math.pi * np.sinh(s)
    t = np.tanh(u)
    w = h * 0.5 * math.pi * np.cosh(s) / np.cosh(u) ** 2
    upper_gap = 2.0 / (1.0 + np.exp(2.0 * u))
    lower_gap = 2.0 / (1.0 + np.exp(-2.0 * u))
    keep = (w > 0.0) & (lower_gap >= lower_cutoff)
    return t[keep], w[keep], upper_gap[keep]


def log_singular(g, level=DEFAULT_LEVEL, tol=DEFAULT_TOLERANCE):
    """Integral over [-1, 1] of (1/2) log(2 - 2t) g(t) dt

    :param g: vectorized integrand, smooth on [-1, 1]
    :type g: Callable[[numpy.ndarray], numpy.ndarray]
    :rtype: Estimate
    """
    def compute(lvl):
        t, w, gap = log_singular_rule(lvl)
        return np.sum(w * 0.5 * np.log(2.0 * gap) * g(t))
    return refine(compute, level, tol)


def radial_rule(n):
    """Nodes r and weights for integral over [0, inf) of g(r) r dr

    Uses t = r^2 / (1 + r^2) and Gauss-Legendre with n nodes in t.
    """
    rule = gauss_legendre(n).mapped(0.0, 1.0)
    t = rule.nodes
    r = np.sqrt(t / (1.0 - t))
    w = rule.weights / (2.0 * (1.0 - t) ** 2)
    return r, w


def radial_integral(g, level=DEFAULT_LEVEL, tol=DEFAULT_TOLERANCE):
    """Integral over [0, inf) of g(r) r dr for algebraically decaying g

    :param g: vectorized integrand, decaying at least like r^(-3)
    :type g: Callable[[numpy.ndarray], numpy.ndarray]
    :rtype: Estimate
    """
    def compute(lvl):
        r, w = radial_rule(2 * lvl)
        return np.sum(w * g(r))
    return refine(compute, level, tol)


def tail_rule(decay, n):
    """Nodes s and weights for integral over [0, inf) of g(s) ds

    For g decaying like s^(-decay), decay > 1, the map
    s = (t / (1 - t))^p with p = 2 / (decay - 1) leaves a bounded
    integrand vanishing linearly at t = 1.
    """
    if decay <= 1.0:
        raise exceptions.DomainError(
            "tail integral needs decay > 1, got {!r}".format(decay))
    p = 2.0 / (decay - 1.0)
    rule = gauss_legendre(n).mapped(0.0, 1.0)
    t = rule.nodes
    ratio = t / (1.0 - t)
    s = ratio ** p
    w = rule.weights * p * ratio ** (p - 1.0) / (1.0 - t) ** 2
    return s, w


def tail_integral(g, decay, level=DEFAULT_LEVEL, tol=DEFAULT_TOLERANCE):
    """Integral over [0, inf) of g(s) ds for g = O(s^(-decay))

    :rtype: Estimate
    """
    def compute(lvl):
        s, w = tail_rule(decay, 2 * lvl)
        return np.sum(w * g(s))
    return refine(compute, level, tol)
