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

"""Second variation of capillary surfaces.

The stability form of a stationary Sigma is

  Q(f) = int |grad f|^2 - int |h|^2 f^2
         + int_boundary (k - H(S) / sin(theta)) f^2

discretised with piecewise linear elements. Boundary integrals use the
trapezoid rule on boundary edges and pinned boundary vertices are Dirichlet.
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
from builtins import range
import collections
import logging
import math

import numpy as np
from scipy import linalg
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from cappen import capillary_energy
from cappen import errors
from cappen import geom_mesh
from cappen import lexicon

LOGGER = logging.getLogger("cappen.stability")

CheckResult = collections.namedtuple(
    "CheckResult", "name passed value tolerance")

Spectrum = collections.namedtuple("Spectrum", "values vectors")

VariationReport = collections.namedtuple(
    "VariationReport",
    "steps area_first lateral_first second_consistency second extrapolated "
    "form form_tolerance cross_check analytic_area analytic_lateral "
    "continuous_lateral second_variation form_value orders passed")

ComponentTerms = collections.namedtuple(
    "ComponentTerms",
    "euler_characteristic h_squared boundary_mean_curvature boundary_length "
    "weight")

ProfilePrediction = collections.namedtuple(
    "ProfilePrediction", "value gamma components")

# Relative errors are measured against at least this fraction of |Sigma|.
_RELATIVE_FLOOR = 1e-4


def _inverse_sine(t):
    return 1.0 / math.sqrt(1.0 - capillary_energy.PHI(t) ** 2)


class JacobiForm(object):
    """The stability form of a capillary state as sparse matrices.

    matrix = stiffness - potential + boundary, all symmetric (n, n).
    """

    def __init__(self, state):
        self.state = state
        mesh = state.mesh
        V = mesh.vertices
        T = mesh.triangles
        self.field = geom_mesh.curvatures(mesh)

        self.stiffness = geom_mesh.cotangent_stiffness(V, T)
        self.mass = geom_mesh.mass_matrix(V, T)
        h_squared = self.field.norm_squared
        self.potential = geom_mesh.mass_matrix(
            V, T, weights=h_squared[T].mean(axis=1))

        weights = np.zeros(len(V))
        on_support = state.slots.on_support
        if len(on_support):
            weights[on_support] = (
                -_inverse_sine(state.t) *
                state.support.MeanCurvature(state.charts) +
                self.field.geodesic_curvature[on_support])
        self.boundary_weights = weights
        self.boundary = sparse.diags(weights * self.field.boundary_length,
                                     format="csr")

        pinned = mesh.is_boundary & ~mesh.boundary_on_support
        self.free = np.flatnonzero(~pinned)

    @property
    def matrix(self):
        return (self.stiffness - self.potential + self.boundary).tocsr()

    def Value(self, f):
        f = np.asarray(f, dtype=float)
        return float(f.dot(self.matrix.dot(f)))

    def ElementValue(self, f):
        """Q(f) summed triangle by triangle and boundary edge by edge."""
        f = np.asarray(f, dtype=float)
        mesh = self.state.mesh
        V = mesh.vertices
        T = mesh.triangles
        unit, areas = geom_mesh.triangle_normals(V, T)

        grad = np.zeros((len(T), 3))
        for k in range(3):
            edge = V[T[:, (k + 2) % 3]] - V[T[:, (k + 1) % 3]]
            grad += f[T[:, k]][:, None] * np.cross(unit, edge)
        grad /= (2.0 * areas)[:, None]
        dirichlet = float(np.sum(areas * np.sum(grad * grad, axis=1)))

        fa, fb, fc = f[T[:, 0]], f[T[:, 1]], f[T[:, 2]]
        squares = (fa * fa + fb * fb + fc * fc + fa * fb + fb * fc +
                   fc * fa) * areas / 6.0
        h_squared = self.field.norm_squared[T].mean(axis=1)
        potential = float(np.sum(h_squared * squares))

        edges = 0.0
        w = self.boundary_weights
        for loop in mesh.boundary_loops:
            nxt = np.roll(loop, -1)
            length = np.linalg.norm(V[nxt] - V[loop], axis=1)
            edges += float(np.sum(0.5 * length * (
                w[loop] * f[loop] ** 2 + w[nxt] * f[nxt] ** 2)))
        return dirichlet - potential + edges

    def Restricted(self):
        free = self.free
        return (self.matrix[free][:, free].tocsc(),
                self.mass[free][:, free].tocsc())


def _shift(form, mass):
    """A point below the spectrum of form f = kappa mass f."""
    diagonal = form.diagonal()
    radius = np.asarray(abs(form).sum(axis=1)).ravel() - np.abs(diagonal)
    lumped = np.asarray(mass.sum(axis=1)).ravel()
    # The consistent mass is at least a quarter of the lumped one.
    lower = 4.0 * float(np.min(diagonal - radius)) / float(np.min(lumped))
    return min(lower, 0.0) - 1.0 / float(np.sum(lumped))


def eigenpairs(state, count=2, form=None):
    """The count smallest eigenpairs of the stability form.

    Eigenvectors are full length (zero on pinned vertices) and normalised to
    f^T M f = 1.
    """
    form = form or JacobiForm(state)
    a, m = form.Restricted()
    n = a.shape[0]
    errors.CHECK(n > count, errors.ResolutionError(
        "Only %d free vertices for %d eigenpairs." % (n, count),
        suggestion="refine the mesh"))

    try:
        if n <= lexicon.DENSE_EIGEN_LIMIT:
            values, vectors = linalg.eigh(a.toarray(), m.toarray(),
                                          subset_by_index=[0, count - 1])
        else:
            values, vectors = sparse_linalg.eigsh(
                a, k=count, M=m, sigma=_shift(a, m), which="LM",
                tol=lexicon.EIGEN_TOL)
            order = np.argsort(values)
            values, vectors = values[order], vectors[:, order]
    except (linalg.LinAlgError, sparse_linalg.ArpackError) as e:
        raise errors.EigenSolverError("Eigen solve failed: %s" % e)

    full = np.zeros((len(state.mesh.vertices), count))
    for j in range(count):
        v = vectors[:, j]
        norm = math.sqrt(float(v.dot(m.dot(v))))
        v = v / norm
        quotient = float(v.dot(a.dot(v)))
        if abs(quotient - values[j]) > lexicon.EIGEN_TOL * max(
                1.0, abs(values[j])):
            raise errors.EigenSolverError(
                "Eigenvalue %d stagnated: %.12g against Rayleigh quotient "
                "%.12g." % (j, values[j], quotient))
        full[form.free, j] = v
    return Spectrum(np.asarray(values, dtype=float), full)


def min_eigenpair(state, form=None):
    """Returns (kappa, f) with f positive on average."""
    form = form or JacobiForm(state)
    spectrum = eigenpairs(state, 2, form)
    kappa = float(spectrum.values[0])
    f = spectrum.vectors[:, 0]
    if form.mass.dot(f).sum() < 0:
        f = -f
    if LOGGER.isEnabledFor(logging.DEBUG):
        LOGGER.debug("t = %g: kappa = %.10g, gap = %.3g", state.t, kappa,
                     spectrum.values[1] - kappa)
    return kappa, f


def normal_variation(state, f, field=None):
    """Velocities of the variation with normal speed f.

    Interior vertices move by f nu(Sigma). Boundary vertices on S move by
    f (nu(Sigma) - cot(theta) mu(Sigma)), which is tangent to S; the result
    gives their chart velocities.
    """
    mesh = state.mesh
    f = np.asarray(f, dtype=float)
    errors.CHECK(f.shape == (len(mesh.vertices),), errors.DomainError(
        "Expected one value per vertex, got shape %s." % (f.shape,)))
    field = field or geom_mesh.curvatures(mesh)

    velocity = f[:, None] * field.vertex_normal
    velocity[mesh.is_boundary] = 0.0

    on_support = state.slots.on_support
    if not len(on_support):
        return velocity, np.zeros_like(state.charts)
    nu_sigma = field.vertex_normal[on_support]
    mu_sigma = field.conormal[on_support]
    nu_s = state.support.Normal(state.charts)
    cos_theta = np.sum(nu_sigma * nu_s, axis=1)
    sin_theta = np.sum(mu_sigma * nu_s, axis=1)
    boundary = f[on_support][:, None] * (
        nu_sigma - (cos_theta / sin_theta)[:, None] * mu_sigma)
    return velocity, state.support.ChartVelocity(state.charts, boundary)


def _PathState(state, velocity, chart_velocity, s):
    charts = state.charts + s * chart_velocity
    vertices = state.mesh.vertices + s * velocity
    if len(charts):
        vertices[state.slots.on_support] = state.support.Point(charts)
    return state.WithVertices(vertices, charts=charts)


def _PathDerivatives(moved, velocity, chart_velocity):
    mesh = moved.mesh
    grad = geom_mesh.area_gradient(mesh.vertices, mesh.triangles)
    interior = ~mesh.is_boundary
    d_area = float(np.sum(grad[interior] * velocity[interior]))
    if not len(moved.charts):
        return d_area, 0.0
    jac, _ = moved.support.Metric(moved.charts)
    d_area += float(np.einsum("kia,ki,ka->", jac,
                              grad[moved.slots.on_support], chart_velocity))
    d_lateral = float(np.sum(
        capillary_energy.lateral_chart_gradient(moved) * chart_velocity))
    return d_area, d_lateral


def _PathSecondDerivatives(state, velocity, chart_velocity):
    # Only the boundary vertices on S, which follow X(c + s w), accelerate.
    mesh = state.mesh
    x = mesh.vertices
    v = velocity.copy()
    acceleration = np.zeros_like(x)
    on_support = state.slots.on_support
    if len(on_support):
        w = chart_velocity
        x1, x2 = state.support.Frame(state.charts)
        x11, x12, x22 = state.support.SecondDerivatives(state.charts)
        v[on_support] = x1 * w[:, [0]] + x2 * w[:, [1]]
        acceleration[on_support] = (
            x11 * (w[:, [0]] ** 2) + 2 * x12 * (w[:, [0]] * w[:, [1]]) +
            x22 * (w[:, [1]] ** 2))

    tris = mesh.triangles
    e1 = x[tris[:, 1]] - x[tris[:, 0]]
    e2 = x[tris[:, 2]] - x[tris[:, 0]]
    d1 = v[tris[:, 1]] - v[tris[:, 0]]
    d2 = v[tris[:, 2]] - v[tris[:, 0]]
    n = np.cross(e1, e2)
    norm = np.linalg.norm(n, axis=1)
    unit = n / norm[:, None]
    dn = np.cross(d1, e2) + np.cross(e1, d2)
    along = np.sum(unit * dn, axis=1)
    d2_area = float(np.sum(
        (np.sum(dn * dn, axis=1) - along ** 2) / (2 * norm) +
        np.sum(unit * np.cross(d1, d2), axis=1)))
    d2_area += float(np.sum(geom_mesh.area_gradient(x, tris) * acceleration))

    support = state.support
    d2_lateral = 0.0
    for slots in state.slots.loops:
        if slots is None:
            continue
        c = state.charts[slots]
        w = chart_velocity[slots]
        c_next = np.roll(c, -1, axis=0)
        w_next = np.roll(w, -1, axis=0)
        p = support.Primitive(c)
        dp = np.sum(support.PrimitiveGradient(c) * w, axis=1)
        ddp = np.einsum("ka,kab,kb->k", w, support.PrimitiveHessian(c), w)
        inc, dinc_a, dinc_b = support.Increment(c, c_next)
        dinc = np.sum(dinc_a * w, axis=1) + np.sum(dinc_b * w_next, axis=1)
        pair = np.concatenate([w, w_next], axis=1)
        ddinc = np.einsum("ki,kij,kj->k", pair,
                          support.IncrementHessian(c, c_next), pair)
        d2_lateral += float(np.sum(
            0.5 * (ddp + np.roll(ddp, -1)) * inc +
            (dp + np.roll(dp, -1)) * dinc +
            0.5 * (p + np.roll(p, -1)) * ddinc))
    return d2_area, d2_lateral


def _relative(a, b, scale):
    return abs(a - b) / max(abs(a), abs(b), _RELATIVE_FLOOR * scale)


def _order(errors_by_step, steps):
    first, second = errors_by_step[0], errors_by_step[-1]
    if first <= 0 or second <= 0 or steps[0] == steps[-1]:
        return None
    return math.log(first / second) / math.log(steps[0] / steps[-1])


def _richardson(values, steps):
    if len(steps) < 2 or steps[0] == steps[-1]:
        return values[-1]
    h1, h2 = steps[0] ** 2, steps[-1] ** 2
    return (h1 * values[-1] - h2 * values[0]) / (h1 - h2)


def form_tolerance(boundary_vertices):
    """Allowed gap between Q(f) and the discrete second variation.

    The polygonal boundary sees 2 pi n sin(2 pi / n) / (2 pi) where Q(f)
    sees 2 pi, a relative gap of (2 pi / n)^2 / 6.
    """
    return lexicon.FD_SECOND_TOL + lexicon.FORM_RESOLUTION_FACTOR * (
        2 * math.pi / boundary_vertices) ** 2


def fd_variation_check(state, f, steps=lexicon.FD_STEPS, form=None):
    """Checks the first and second variation along a discrete path.

    First derivatives of |Sigma| and |S(Sigma)| are compared with central
    differences per step. The exact second derivative of J along the path,
    assembled triangle by triangle and edge by edge, is compared with the
    second differences per step and with their Richardson extrapolation.
    It is then compared with Q(f) up to the boundary resolution, and Q(f)
    itself is cross checked between two assemblies.
    """
    on_support = state.slots.on_support
    if len(on_support) < lexicon.MIN_BOUNDARY_VERTICES:
        raise errors.ResolutionError(
            "Only %d boundary vertices on S; second differences are not "
            "reliable." % len(on_support),
            suggestion="use at least %d boundary vertices" %
            lexicon.MIN_BOUNDARY_VERTICES)

    form = form or JacobiForm(state)
    f = np.array(f, dtype=float)
    f[np.setdiff1d(np.arange(len(f)), form.free)] = 0.0
    velocity, chart_velocity = normal_variation(state, f, form.field)
    phi = capillary_energy.PHI(state.t)
    scale = state.area

    analytic_area, analytic_lateral = _PathDerivatives(
        state, velocity, chart_velocity)
    d2_area, d2_lateral = _PathSecondDerivatives(state, velocity,
                                                 chart_velocity)
    second_variation = d2_area - phi * d2_lateral
    nu_sigma, nu_s = state.BoundaryNormals()
    sines = np.linalg.norm(np.cross(nu_sigma, nu_s), axis=1)
    continuous_lateral = float(np.sum(
        form.field.boundary_length[on_support] * f[on_support] / sines))
    form_value = form.Value(f)
    cross_check = _relative(form_value, form.ElementValue(f), scale)

    area_first = []
    lateral_first = []
    consistency = []
    second = []
    for h in steps:
        plus = _PathState(state, velocity, chart_velocity, h)
        minus = _PathState(state, velocity, chart_velocity, -h)
        area_first.append(_relative(
            analytic_area, (plus.area - minus.area) / (2 * h), scale))
        lateral_first.append(_relative(
            analytic_lateral,
            (plus.lateral_area - minus.lateral_area) / (2 * h), scale))
        energy = (plus.energy - 2 * state.energy + minus.energy) / (h * h)
        consistency.append(_relative(second_variation, energy, scale))
        second.append(energy)

    extrapolated = _richardson(second, steps)
    second_residual = _relative(second_variation, extrapolated, scale)
    tolerance = form_tolerance(len(on_support))
    form_residual = _relative(second_variation, form_value, scale)
    orders = {
        "area_first": _order(area_first, steps),
        "lateral_first": _order(lateral_first, steps),
        "second_consistency": _order(consistency, steps),
    }
    passed = (min(area_first) < lexicon.FD_FIRST_TOL and
              min(lateral_first) < lexicon.FD_FIRST_TOL and
              second_residual < lexicon.FD_SECOND_TOL and
              form_residual < tolerance and
              cross_check < lexicon.FORM_CROSS_CHECK_TOL)
    if not passed:
        LOGGER.warning("Variation check failed at t = %g.", state.t)
    return VariationReport(
        steps=tuple(steps), area_first=tuple(area_first),
        lateral_first=tuple(lateral_first),
        second_consistency=tuple(consistency), second=second_residual,
        extrapolated=extrapolated, form=form_residual,
        form_tolerance=tolerance, cross_check=cross_check,
        analytic_area=analytic_area, analytic_lateral=analytic_lateral,
        continuous_lateral=continuous_lateral,
        second_variation=second_variation, form_value=form_value,
        orders=orders, passed=passed)


def variation_directions(state, count, seed=0):
    """The constant function followed by smooth random quadratics."""
    vertices = state.mesh.vertices
    center = vertices.mean(axis=0)
    radius = float(np.max(np.linalg.norm(vertices - center, axis=1)))
    x = (vertices - center) / radius
    basis = np.column_stack([x, x * x, x[:, [0]] * x[:, [1]]])
    rng = np.random.RandomState(seed)
    directions = [np.ones(len(vertices))]
    for _ in range(count - 1):
        directions.append(1.0 + basis.dot(rng.uniform(-1, 1, basis.shape[1])))
    return directions


def second_variation_terms(state, weights=None):
    """Per component chi, int |h|^2, int H(S) over the boundary on S and
    the boundary length, together with the weights gamma_i.

    The default weights are |boundary_i| / sum_j |boundary_j|^2.
    """
    mesh = state.mesh
    field = geom_mesh.curvatures(mesh)
    component = mesh.topology.component
    lengths = [mesh.BoundaryLength(k) for k in range(mesh.n_components)]
    if weights is None:
        total = sum(length ** 2 for length in lengths)
        weights = [length / total for length in lengths]
    errors.CHECK(len(weights) == mesh.n_components, errors.DomainError(
        "Expected %d weights, got %d." % (mesh.n_components, len(weights))))

    boundary_h = np.zeros(len(mesh.vertices))
    on_support = state.slots.on_support
    if len(on_support):
        boundary_h[on_support] = (state.support.MeanCurvature(state.charts) *
                                  field.boundary_length[on_support])
    density = field.vertex_area * field.norm_squared

    terms = []
    for k in range(mesh.n_components):
        members = component == k
        terms.append(ComponentTerms(
            euler_characteristic=mesh.EulerCharacteristic(k),
            h_squared=float(np.sum(density[members])),
            boundary_mean_curvature=float(np.sum(boundary_h[members])),
            boundary_length=lengths[k], weight=float(weights[k])))
    return terms


def profile_second_derivative(state, weights=None):
    """Predicted second derivative of the area profile at state.t."""
    terms = second_variation_terms(state, weights)
    gamma = sum(c.weight * c.boundary_length for c in terms)
    errors.CHECK(gamma > 0, errors.DomainError(
        "The weighted boundary length must be positive, got %r." % gamma))
    inverse_sine = _inverse_sine(state.t)
    total = sum(c.weight ** 2 * (
        2 * math.pi * c.euler_characteristic - 0.5 * c.h_squared -
        inverse_sine * c.boundary_mean_curvature) for c in terms)
    value = capillary_energy.PHI_PRIME(state.t) * total / gamma ** 2
    return ProfilePrediction(value=value, gamma=gamma, components=terms)


def profile_derivatives(samples):
    """upsilon' and upsilon'' over s by three point differences.

    Returns (s, upsilon, first, second). The end points use one sided
    differences.
    """
    errors.CHECK(len(samples) >= 3, errors.DomainError(
        "Need at least three sweep samples, got %d." % len(samples)))
    s = np.array([p.s for p in samples], dtype=float)
    upsilon = np.array([p.upsilon for p in samples], dtype=float)
    first = np.gradient(upsilon, s, edge_order=2)

    h_minus = np.diff(s)[:-1]
    h_plus = np.diff(s)[1:]
    second = np.empty_like(s)
    second[1:-1] = 2.0 * (
        (upsilon[2:] - upsilon[1:-1]) / h_plus -
        (upsilon[1:-1] - upsilon[:-2]) / h_minus) / (h_plus + h_minus)
    second[0] = second[1]
    second[-1] = second[-2]
    return s, upsilon, first, second


def sweep_profile_checks(samples, mass=1.0, slack=lexicon.MONOTONE_SLACK,
                         epsilon=lexicon.COMPARISON_EPS,
                         slope_tol=lexicon.SLOPE_TOL):
    """Checks of the sampled area profile; end points are left out."""
    _, upsilon, first, second = profile_derivatives(samples)
    sigma = np.array([p.sigma for p in samples], dtype=float)
    inner = slice(1, -1)

    convexity = (upsilon * (1 - first ** 2))[inner]
    drop = float(np.max(np.maximum.accumulate(convexity) - convexity))
    allowed = slack * math.pi * mass ** 2

    ratio = (2 * second * upsilon / (1 - first ** 2))[inner]
    excess = float(np.max(ratio) - 1.0)

    slope = float(np.max(np.abs(first - np.tanh(sigma))[inner]))

    checks = [
        CheckResult("convexity_nondecreasing", drop <= allowed, drop,
                    allowed),
        CheckResult("comparison_inequality", excess <= epsilon, excess,
                    epsilon),
        CheckResult("slope_matches_tanh", slope <= slope_tol, slope,
                    slope_tol),
    ]
    for check in checks:
        if not check.passed:
            LOGGER.warning("Profile check %s failed: %.3g > %.3g",
                           check.name, check.value, check.tolerance)
    return checks
