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

"""Special-function primitives: log-Gamma, Legendre functions, constants."""

import dataclasses
import logging
import math

import numpy as np

from . import exceptions

log = logging.getLogger(__name__)

# Lanczos approximation, g = 7 with 9 coefficients.
LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Distance to a Gamma pole below which evaluation is refused.
POLE_GUARD = 1e-12


@dataclasses.dataclass(frozen=True)
class AlphaParam:
    """Riesz exponent, restricted to the open interval (0, 2)."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if not (0.0 < value < 2.0) or not math.isfinite(value):
            raise exceptions.DomainError(
                "alpha must lie in (0, 2), got {!r}".format(self.value))
        object.__setattr__(self, 'value', value)

    def __float__(self):
        return self.value


def as_alpha(alpha):
    """Coerce a float or AlphaParam into an AlphaParam

    :param alpha: Riesz exponent
    :type alpha: Union[float, AlphaParam]
    :returns: validated exponent
    :rtype: AlphaParam
    """
    if isinstance(alpha, AlphaParam):
        return alpha
    return AlphaParam(alpha)


def _ln_gamma_lanczos(x):
    z = x - 1.0
    acc = np.full_like(z, LANCZOS_COEFFICIENTS[0])
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        acc = acc + coefficient / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def ln_gamma(x):
    """Logarithm of the Gamma function for positive arguments

    Lanczos approximation with the reflection formula below 1/2.

    :param x: positive argument(s)
    :type x: Union[float, numpy.ndarray]
    :raises DomainError: for non-positive arguments
    :returns: log Gamma(x)
    :rtype: Union[float, numpy.ndarray]
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise exceptions.DomainError(
            "ln_gamma needs positive finite arguments, got {!r}".format(x))
    flat = np.atleast_1d(arr)
    small = flat < 0.5
    # Evaluate the Lanczos sum only on arguments >= 1/2.
    result = _ln_gamma_lanczos(np.where(small, 1.0 - flat, flat))
    if np.any(small):
        result[small] = (math.log(math.pi)
                         - np.log(np.sin(math.pi * flat[small]))
                         - result[small])
    if arr.ndim == 0:
        return float(result[0])
    return result.reshape(arr.shape)


def gamma_ratio(numerator, denominator):
    """Ratio of Gamma products computed in log space

    :param numerator: arguments whose Gamma values multiply the numerator
    :type numerator: Sequence[float]
    :param denominator: arguments whose Gamma values divide
    :type denominator: Sequence[float]
    :returns: prod Gamma(numerator) / prod Gamma(denominator)
    :rtype: float
    """
    total = 0.0
    for x in numerator:
        total += ln_gamma(x)
    for x in denominator:
        total -= ln_gamma(x)
    return math.exp(total)


def c_alpha(alpha):
    """Bubble constant ((2 - alpha)(4 - alpha) / pi)^(1 / (4 - alpha))

    :param alpha: Riesz exponent
    :type alpha: Union[float, AlphaParam]
    :rtype: float
    """
    a = as_alpha(alpha).value
    return ((2.0 - a) * (4.0 - a) / math.pi) ** (1.0 / (4.0 - a))


def c_alpha_power(alpha):
    """C_alpha^(4 - alpha), evaluated without the fractional power."""
    a = as_alpha(alpha).value
    return (2.0 - a) * (4.0 - a) / math.pi


def hls_constant(n, alpha):
    """Sharp Hardy-Littlewood-Sobolev constant C(N, alpha)

    :param n: dimension N >= 1
    :type n: int
    :param alpha: exponent in (0, N)
    :type alpha: float
    :raises DomainError: alpha outside (0, N)
    :raises PoleError: alpha within POLE_GUARD of N
    :rtype: float
    """
    if int(n) != n or n < 1:
        raise exceptions.DomainError(
            "dimension must be a positive integer, got {!r}".format(n))
    alpha = float(alpha)
    if not 0.0 < alpha < n:
        raise exceptions.DomainError(
            "alpha must lie in (0, {}), got {!r}".format(n, alpha))
    if n - alpha < POLE_GUARD:
        raise exceptions.PoleError('hls_constant alpha', alpha)
    ln_value = (0.5 * alpha * math.log(math.pi)
                + ln_gamma(0.5 * (n - alpha)) - ln_gamma(n - 0.5 * alpha)
                + (n - alpha) / n * (ln_gamma(n) - ln_gamma(0.5 * n)))
    return math.exp(ln_value)


def _check_unit_interval(t):
    arr = np.asarray(t, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise exceptions.DomainError(
            "Legendre argument must satisfy |t| <= 1")
    return arr


def legendre_p(k, t):
    """Legendre polynomial P_k(t) by the Bonnet recurrence

    :param k: degree >= 0
    :type k: int
    :param t: argument(s) in [-1, 1]
    :type t: Union[float, numpy.ndarray]
    :raises DomainError: |t| > 1 or negative degree
    :rtype: Union[float, numpy.ndarray]
    """
    if k < 0:
        raise exceptions.DomainError("degree must be >= 0, got {}".format(k))
    arr = _check_unit_interval(t)
    p_prev = np.ones_like(arr)
    p = arr.copy()
    if k == 0:
        p = p_prev
    for n in range(1, k):
        p_prev, p = p, ((2 * n + 1) * arr * p - n * p_prev) / (n + 1)
    if p.ndim == 0:
        return float(p)
    return p


def legendre_and_derivative(n, t):
    """P_n(t) and P_n'(t) for interior points, used by Newton iteration

    No domain check: the Gauss-Legendre solver calls this on its own
    iterates, which stay strictly inside (-1, 1).
    """
    t = np.asarray(t, dtype=float)
    p_prev = np.ones_like(t)
    p = t.copy()
    if n == 0:
        return p_prev, np.zeros_like(t)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * t * p - k * p_prev) / (k + 1)
    derivative = n * (t * p - p_prev) / (t * t - 1.0)
    return p, derivative


def assoc_legendre_normalized(kmax, t):
    """Orthonormalized associated Legendre functions

    Returns an array ``table`` with ``table[k, m]`` equal to
    sqrt((2k+1)/(4 pi) (k-m)!/(k+m)!) P_k^m(t) for 0 <= m <= k <= kmax,
    without the Condon-Shortley phase, computed by the standard
    three-term recurrence in k at fixed m.

    :param kmax: largest degree
    :type kmax: int
    :param t: cosine of the polar angle, in [-1, 1]
    :type t: Union[float, numpy.ndarray]
    :rtype: numpy.ndarray
    """
    t = _check_unit_interval(t)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    table = np.zeros((kmax + 1, kmax + 1) + t.shape)
    table[0, 0] = math.sqrt(1.0 / (4.0 * math.pi))
    for m in range(1, kmax + 1):
        table[m, m] = (math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s
                       * table[m - 1, m - 1])
    for m in range(0, kmax):
        table[m + 1, m] = math.sqrt(2.0 * m + 3.0) * t * table[m, m]
        for k in range(m + 2, kmax + 1):
            a = math.sqrt((4.0 * k * k - 1.0) / (k * k - m * m))
            b = math.sqrt(((k - 1.0) ** 2 - m * m)
                          / (4.0 * (k - 1.0) ** 2 - 1.0))
            table[k, m] = a * (t * table[k - 1, m] - b * table[k - 2, m])
    return table
