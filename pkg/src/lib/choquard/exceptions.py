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


class ChoquardError(Exception):
    """
    Exception raised for errors in the verification library.
    """
    pass


class DomainError(ChoquardError):
    """
    Exception raised when an argument lies outside an operation's domain.
    """
    pass


class PoleError(DomainError):
    """
    Exception raised when a Gamma factor is evaluated too close to its pole
    """

    def __init__(self, what, value):
        message = "{} too close to a Gamma pole ({!r})".format(what, value)
        super(PoleError, self).__init__(message)
        self.value = value


class AccuracyError(ChoquardError):
    """
    Exception raised when quadrature refinement misses its tolerance.
    """

    def __init__(self, reason, value=None, error=None, level=None):
        message = "Quadrature did not converge ({})".format(reason)
        super(AccuracyError, self).__init__(message)
        self.value = value
        self.error = error
        self.level = level


class ConvergenceError(ChoquardError):
    """
    Exception raised when an iterative eigensolver runs out of sweeps.
    """
    pass


class ConfigError(ChoquardError):
    """
    Exception raised for an invalid suite configuration.
    """
    pass
