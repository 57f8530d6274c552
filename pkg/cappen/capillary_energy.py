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

"""The free energy J_t = |Sigma| - Phi(t) |S(Sigma)| and its gradient."""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
import logging
import math

import numpy as np

from cappen import errors
from cappen import geom_mesh
from cappen import lexicon
from cappen import support_surface

LOGGER = logging.getLogger("cappen.energy")


# Phi is tanh. Anything increasing from Phi(0) = 0 to 1 at infinity with
# Phi' > 0 can take its place.
def PHI(t):
    return math.tanh(t)


def PHI_PRIME(t):
    return 1.0 / math.cosh(t) ** 2


def capillary_angle(t):
    """theta = arccos(-Phi(t))."""
    return math.acos(-PHI(t))


class LoopSlots(object):
    """Boundary loops expressed as positions in the on-support vertex list.

    Loops that contain pinned vertices get None and do not contribute to the
    lateral area.
    """

    def __init__(self, mesh):
        self.on_support = np.flatnonzero(mesh.boundary_on_support)
        position = np.full(len(mesh.vertices), -1, dtype=np.int64)
        position[self.on_support] = np.arange(len(self.on_support))
        self.loops = []
        for loop in mesh.boundary_loops:
            slots = position[loop]
            self.loops.append(None if np.any(slots < 0) else slots)


class CapillaryState(object):
    """One point (t, Sigma) of the family of capillary surfaces.

    charts holds the chart coordinates of the boundary vertices that lie on
    the support surface, in the order of slots.on_support.
    """
    iterations = 0
    grad_norm = None

    def __init__(self, t, mesh, support, region=None, charts=None,
                 slots=None):
        self.t = float(t)
        errors.CHECK(self.t >= 0, errors.AdmissibilityError(
            "Capillary parameter must be nonnegative, got %r." % t))
        self.mesh = mesh
        self.support = support
        self.region = region or support_surface.LateralRegion()
        self.slots = slots or LoopSlots(mesh)

        points = mesh.vertices[self.slots.on_support]
        if charts is None:
            charts = support.ChartOf(points)
        self.charts = np.asarray(charts, dtype=float).reshape(-1, 2)
        if len(points):
            offset = np.linalg.norm(support.Point(self.charts) - points,
                                    axis=1)
            worst = int(np.argmax(offset))
            if offset[worst] > 1e-8 * (1.0 + np.abs(points).max()):
                raise errors.AdmissibilityError(
                    "Boundary vertex %d is %.3g away from the support." % (
                        self.slots.on_support[worst], offset[worst]))

        self.area = geom_mesh.area(mesh)
        self.lateral_area = self.region.offset + self._Band()
        self.energy = self.area - PHI(self.t) * self.lateral_area

    @property
    def theta(self):
        return capillary_angle(self.t)

    def _Band(self):
        total = 0.0
        for slots in self.slots.loops:
            if slots is not None:
                total += support_surface.loop_lateral(
                    self.support, self.charts[slots])
        if self.region.reference is not None:
            total -= support_surface.loop_lateral(
                self.support, self.support.ChartOf(self.region.reference),
                support_surface.RULE_SPECTRAL)
        return total

    def WithVertices(self, vertices, charts=None, t=None):
        return CapillaryState(self.t if t is None else t,
                              self.mesh.WithVertices(vertices), self.support,
                              region=self.region, charts=charts,
                              slots=self.slots)

    def WithT(self, t):
        return CapillaryState(t, self.mesh, self.support, region=self.region,
                              charts=self.charts, slots=self.slots)

    def BoundaryNormals(self):
        """nu(Sigma) and nu(S) at the on-support boundary vertices."""
        normals = geom_mesh.vertex_normals(self.mesh.vertices,
                                           self.mesh.triangles)
        return (normals[self.slots.on_support],
                self.support.Normal(self.charts))

    def MinRadius(self):
        return float(np.min(np.linalg.norm(self.mesh.vertices, axis=1)))


def free_energy(state):
    return state.area - PHI(state.t) * state.lateral_area


def lateral_chart_gradient(state):
    """d|S(Sigma)| / dc for every on-support boundary vertex, (k, 2)."""
    support = state.support
    result = np.zeros_like(state.charts)
    for slots in state.slots.loops:
        if slots is None:
            continue
        c = state.charts[slots]
        nxt = np.roll(c, -1, axis=0)
        p = support.Primitive(c)
        dp = support.PrimitiveGradient(c)
        inc, dinc_a, dinc_b = support.Increment(c, nxt)
        p_next = np.roll(p, -1)
        p_prev = np.roll(p, 1)
        inc_prev = np.roll(inc, 1)
        dinc_b_prev = np.roll(dinc_b, 1, axis=0)
        grad = (0.5 * dp * (inc + inc_prev)[:, None] +
                0.5 * (p + p_next)[:, None] * dinc_a +
                0.5 * (p_prev + p)[:, None] * dinc_b_prev)
        np.add.at(result, slots, grad)
    return result


def chart_gradient(state):
    """Returns (ambient gradient with boundary rows zeroed, dJ/dc)."""
    mesh = state.mesh
    grad = geom_mesh.area_gradient(mesh.vertices, mesh.triangles)
    on_support = state.slots.on_support
    jac, _ = state.support.Metric(state.charts)
    d_area = np.einsum("kia,ki->ka", jac, grad[on_support])
    d_energy = d_area - PHI(state.t) * lateral_chart_gradient(state)
    grad[mesh.is_boundary] = 0.0
    return grad, d_energy


def _check_transverse(state):
    if not len(state.charts):
        return
    nu_sigma, nu_s = state.BoundaryNormals()
    sines = np.linalg.norm(np.cross(nu_sigma, nu_s), axis=1)
    worst = int(np.argmin(sines))
    if sines[worst] < lexicon.TANGENCY_FLOOR:
        vertex = int(state.slots.on_support[worst])
        raise errors.TangencyError(
            "Sigma is tangent to S at boundary vertex %d (sin theta = %.3g)."
            % (vertex, sines[worst]), vertex=vertex)


def gradient(state):
    """Per-vertex derivative of J_t.

    Interior vertices move freely, boundary vertices on S move within S and
    pinned boundary vertices are fixed. Boundary rows are tangent to S.
    """
    _check_transverse(state)
    grad, d_energy = chart_gradient(state)
    if len(state.charts):
        grad[state.slots.on_support] = state.support.TangentFromChart(
            state.charts, d_energy)
    return grad


def gradient_norm(grad):
    return float(np.max(np.linalg.norm(grad, axis=1))) if len(grad) else 0.0


def contact_residual(state):
    """max |<nu(Sigma), nu(S)> + Phi(t)| over the boundary on S."""
    if not len(state.charts):
        return 0.0
    nu_sigma, nu_s = state.BoundaryNormals()
    cosines = np.sum(nu_sigma * nu_s, axis=1)
    return float(np.max(np.abs(cosines + PHI(state.t))))


def free_energy_mass(state):
    """m_f = sin(theta) sqrt(|Sigma| / pi)."""
    sin_theta = math.sqrt(max(0.0, 1.0 - PHI(state.t) ** 2))
    return sin_theta * math.sqrt(state.area / math.pi)
