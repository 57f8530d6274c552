# Copyright 2026 The cappen Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License.  You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.  See the
# License for the specific language governing permissions and limitations under
# the License.

"""Exceptions raised by the cappen toolkit."""
from __future__ import unicode_literals


class CapillaryError(Exception):
    pass


class DegeneracyError(CapillaryError):
    def __init__(self, message, triangle=None):
        super(DegeneracyError, self).__init__(message)
        self.triangle = triangle


class TopologyError(CapillaryError):
    pass


class AdmissibilityError(CapillaryError):
    pass


class ProjectionError(CapillaryError):
    pass


class RegionError(CapillaryError):
    pass


class TangencyError(CapillaryError):
    def __init__(self, message, vertex=None):
        super(TangencyError, self).__init__(message)
        self.vertex = vertex


class NonConvergenceError(CapillaryError):
    """Raised when a minimization runs out of iterations.

    The last iterate is kept in `state` so callers can still report it.
    """
    def __init__(self, message, state=None, iterations=0):
        super(NonConvergenceError, self).__init__(message)
        self.state = state
        self.iterations = iterations


class CollapseError(CapillaryError):
    pass


class EigenSolverError(CapillaryError):
    pass


class ResolutionError(CapillaryError):
    def __init__(self, message, suggestion=None):
        super(ResolutionError, self).__init__(message)
        self.suggestion = suggestion


class DomainError(CapillaryError):
    pass


class NoAxisymmetricCandidateError(CapillaryError):
    pass


class ConfigError(CapillaryError):
    pass


def CHECK(condition, error):
    if not condition:
        if isinstance(error, Exception):
            raise error
        raise RuntimeError(error)
