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

"""Minimization of J_t and continuation in t.

The descent direction is the gradient preconditioned with the Sobolev metric
of Sigma (cotangent stiffness plus mass / |Sigma|). Boundary vertices on the
support move in chart coordinates, so they stay on S exactly; pinned
vertices never move.
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
from builtins import range
import collections
import logging
import math

import numpy as np
from scipy.sparse import linalg as sparse_linalg

from cappen import capillary_energy
from cappen import errors
from cappen import geom_mesh
from cappen import lexicon
from cappen import remesh
from cappen import support_surface

LOGGER = logging.getLogger("cappen.solver")

# Line searches give up below this step.
MIN_STEP = 1e-14

# Failures of a trial step that only mean the step was too long.
_TRIAL_ERRORS = (errors.DegeneracyError, errors.DomainError,
                 errors.ProjectionError, errors.AdmissibilityError)


class SolverOptions(collections.namedtuple(
        "SolverOptions",
        "tol_grad tol_angle max_iters shrink armijo remesh remesh_every "
        "edge_length degeneracy_floor collapse_fraction branch_check seed "
        "tol_energy")):
    __slots__ = ()

    def Validate(self):
        for name in ("tol_grad", "tol_angle", "degeneracy_floor",
                     "collapse_fraction", "tol_energy"):
            if not getattr(self, name) > 0:
                raise errors.ConfigError("%s must be positive." % name)
        if not 0 < self.shrink < 1:
            raise errors.ConfigError("Line search shrink must be in (0, 1).")
        if not 0 < self.armijo < 1:
            raise errors.ConfigError("Armijo constant must be in (0, 1).")
        if self.max_iters < 1:
            raise errors.ConfigError("max_iters must be at least 1.")
        return self


SolverOptions.__new__.__defaults__ = (
    lexicon.DEFAULT_TOL_GRAD, lexicon.DEFAULT_TOL_ANGLE,
    lexicon.DEFAULT_MAX_ITERS, lexicon.DEFAULT_SHRINK, lexicon.DEFAULT_ARMIJO,
    False, 25, None, lexicon.DEFAULT_QUALITY_FLOOR,
    lexicon.DEFAULT_COLLAPSE_FRACTION, False, 0, lexicon.DEFAULT_TOL_ENERGY)


class SweepRecord(collections.namedtuple(
        "SweepRecord",
        "t area lateral_area mf residual grad_norm kappa components "
        "min_radius iters flags")):
    """One row of a continuation sweep. kappa is filled in by stability."""
    __slots__ = ()

    def AsRow(self):
        return tuple(getattr(self, name) for name in lexicon.SWEEP_COLUMNS)


ProfileSample = collections.namedtuple("ProfileSample", "s sigma upsilon")


def default_region(support):
    """Counts the cap of a catenoid extension below height 0 into |S(Sigma)|.
    """
    profile = getattr(support, "profile", None)
    offset = profile.CapArea() if hasattr(profile, "CapArea") else 0.0
    return support_surface.LateralRegion(offset=offset)


def seed_surface(support, level=0.0, boundary_vertices=64, rings=12):
    """A spanning seed whose boundary lies on S.

    Surfaces of revolution get the flat disk at height level. Graphs with a
    singular core get a flat disk spanning the circle of radius level, with
    its rim lifted onto the graph; other graphs get a hemisphere of radius
    level lifted onto the graph.
    """
    if support.sweep_period is not None:
        circle = support.CircleAt(level, boundary_vertices)
        radius = float(np.hypot(circle[0, 0], circle[0, 1]))
        return geom_mesh.build_disk(radius, boundary_vertices, rings,
                                    center=(0.0, 0.0, circle[0, 2]))

    errors.CHECK(level > 0, errors.DomainError(
        "Graph seeds need a positive radius, got %r." % level))
    if support.singular_core:
        circle = support.CircleAt(level, boundary_vertices)
        disk = geom_mesh.build_disk(
            float(np.hypot(circle[0, 0], circle[0, 1])), boundary_vertices,
            rings, center=(0.0, 0.0, float(np.mean(circle[:, 2]))))
        vertices = disk.vertices.copy()
        rim = disk.is_boundary
        vertices[rim, 2] = support.Point(
            support.ChartOf(vertices[rim]))[:, 2]
        return disk.WithVertices(vertices)

    cap = geom_mesh.build_spherical_cap(level, 0.5 * math.pi,
                                        boundary_vertices, rings)
    vertices = cap.vertices.copy()
    vertices[:, 2] += support.Point(vertices[:, :2])[:, 2]
    return cap.WithVertices(vertices)


def default_seed(support, boundary_vertices=64, rings=12, level=None):
    """seed_surface at level, or at the neck (revolution) or a radius of two
    length scales past the core (graphs) when level is None."""
    if level is None:
        level = 0.0 if support.sweep_period is not None else 2.0 * (
            support.core_radius + support.length_scale)
    return seed_surface(support, level, boundary_vertices, rings)


class _Preconditioner(object):
    """Solves (L + M / |Sigma|) d = -g on the vertices that may move."""

    def __init__(self, state):
        mesh = state.mesh
        system = (geom_mesh.cotangent_stiffness(mesh.vertices, mesh.triangles) +
                  geom_mesh.mass_matrix(mesh.vertices, mesh.triangles) /
                  state.area)
        pinned = mesh.is_boundary & ~mesh.boundary_on_support
        self.free = np.flatnonzero(~pinned)
        self.lu = sparse_linalg.splu(
            system[self.free][:, self.free].tocsc())

    def Direction(self, grad):
        result = np.zeros_like(grad)
        result[self.free] = -self.lu.solve(np.ascontiguousarray(
            grad[self.free]))
        return result


def _Trial(state, direction, velocity, alpha):
    vertices = state.mesh.vertices + alpha * direction
    charts = state.charts + alpha * velocity
    if len(charts):
        vertices[state.slots.on_support] = state.support.Point(charts)
    return state.WithVertices(vertices, charts=charts)


def _LineSearch(state, direction, slope, alpha, options):
    velocity = np.zeros_like(state.charts)
    if len(state.charts):
        velocity = state.support.ChartVelocity(
            state.charts, direction[state.slots.on_support])
    while alpha >= MIN_STEP:
        try:
            trial = _Trial(state, direction, velocity, alpha)
        except _TRIAL_ERRORS:
            trial = None
        if (trial is not None and np.isfinite(trial.energy) and
                trial.energy <= state.energy +
                options.armijo * alpha * slope):
            errors.CHECK(trial.energy < state.energy,
                         "Accepted step did not decrease the energy.")
            return trial, alpha
        alpha *= options.shrink
    raise errors.NonConvergenceError(
        "Line search stalled at t = %g." % state.t, state=state)


def _Remesh(state, target):
    mesh, _ = remesh.remesh(state.mesh, state.support, target)
    return capillary_energy.CapillaryState(state.t, mesh, state.support,
                                           region=state.region)


def _Stalled(energies, area, tolerance):
    window = lexicon.STALL_WINDOW
    if len(energies) <= window:
        return False
    return abs(energies[-window - 1] - energies[-1]) <= tolerance * area


def _Shrinking(areas, seed_area):
    window = lexicon.STALL_WINDOW
    if (len(areas) <= window or
            areas[-1] >= lexicon.SHRINK_FRACTION * seed_area):
        return False
    recent = np.asarray(areas[-window - 1:])
    return bool(np.all(np.diff(recent) < 0) and
                recent[-1] <= (1 - lexicon.SHRINK_RATE) * recent[0])


def minimize(t, seed, support, options=None, region=None):
    """Minimizes J_t starting from seed (a TriSurface or a CapillaryState).

    Stops once the largest vertex gradient drops below tol_grad sqrt(|Sigma|)
    or J_t changes by less than tol_energy |Sigma| over STALL_WINDOW
    iterations, provided the contact angle is met.
    """
    options = (options or SolverOptions()).Validate()
    if isinstance(seed, capillary_energy.CapillaryState):
        state = seed if seed.t == t else seed.WithT(t)
    else:
        if seed.quality_floor != options.degeneracy_floor:
            seed = geom_mesh.TriSurface(
                seed.vertices, seed.triangles,
                boundary_on_support=seed.boundary_on_support,
                quality_floor=options.degeneracy_floor)
        state = capillary_energy.CapillaryState(t, seed, support,
                                                region=region)

    seed_area = state.area
    target = options.edge_length
    if options.remesh and target is None:
        target = remesh.mean_edge_length(state.mesh)
    alpha = 1.0
    energies = [state.energy]
    areas = [state.area]

    for iteration in range(options.max_iters + 1):
        grad = capillary_energy.gradient(state)
        norm = capillary_energy.gradient_norm(grad)
        small = norm < options.tol_grad * math.sqrt(state.area)
        if small or _Stalled(energies, state.area, options.tol_energy):
            residual = capillary_energy.contact_residual(state)
            state.iterations = iteration
            state.grad_norm = norm
            if residual < options.tol_angle:
                if LOGGER.isEnabledFor(logging.INFO):
                    LOGGER.info("t = %g converged in %d iterations: J = %.12g"
                                " |g| = %.3g", t, iteration, state.energy,
                                norm)
                return state
            if small:
                raise errors.NonConvergenceError(
                    "Stationary at t = %g but the contact residual %.3g "
                    "exceeds %.3g; refine the mesh." % (
                        t, residual, options.tol_angle),
                    state=state, iterations=iteration)
        if iteration == options.max_iters:
            break

        direction = _Preconditioner(state).Direction(grad)
        slope = float(np.sum(grad * direction))
        state, accepted = _LineSearch(state, direction, slope,
                                      min(1.0, 2.0 * alpha), options)
        alpha = accepted
        energies.append(state.energy)
        areas.append(state.area)

        if state.area < options.collapse_fraction * seed_area:
            raise errors.CollapseError(
                "Sigma collapsed at t = %g (area %.3g from %.3g)." % (
                    t, state.area, seed_area))
        if options.remesh and (iteration + 1) % options.remesh_every == 0:
            state = _Remesh(state, target)

        if LOGGER.isEnabledFor(logging.DEBUG):
            LOGGER.debug("t = %g iteration %d: J = %.12g |g| = %.3g step %.3g",
                         t, iteration, state.energy, norm, accepted)

    state.iterations = options.max_iters
    state.grad_norm = norm
    if _Shrinking(areas, seed_area):
        raise errors.CollapseError(
            "Sigma kept shrinking at t = %g (area %.3g from %.3g after %d "
            "iterations)." % (t, state.area, seed_area, options.max_iters))
    raise errors.NonConvergenceError(
        "No convergence at t = %g after %d iterations (|g| = %.3g)." % (
            t, options.max_iters, norm),
        state=state, iterations=options.max_iters)


def solve_outermost_disk(support, seed=None, options=None, region=None):
    """The t = 0 free boundary minimal surface D spanning the neck."""
    if seed is None:
        seed = seed_surface(support)
    try:
        state = minimize(0.0, seed, support, options, region=region)
    except errors.CollapseError as e:
        LOGGER.warning("No outermost disk: %s", e)
        raise errors.CollapseError("No outermost disk: %s" % e)
    if LOGGER.isEnabledFor(logging.INFO):
        LOGGER.info("Outermost disk: |D| = %.10g", state.area)
    return state


def _Record(state, flags=()):
    mesh = state.mesh
    return SweepRecord(
        t=state.t, area=state.area, lateral_area=state.lateral_area,
        mf=capillary_energy.free_energy_mass(state),
        residual=capillary_energy.contact_residual(state),
        grad_norm=state.grad_norm, kappa=None, components=mesh.n_components,
        min_radius=state.MinRadius(), iters=state.iterations,
        flags=tuple(flags))


def _Predict(state, previous, t):
    """Secant predictor from the last two states of the same mesh."""
    if (previous is None or
            len(previous.mesh.vertices) != len(state.mesh.vertices) or
            state.t == previous.t):
        return state.WithT(t)
    ratio = (t - state.t) / (state.t - previous.t)
    vertices = state.mesh.vertices + ratio * (
        state.mesh.vertices - previous.mesh.vertices)
    charts = state.charts + ratio * (state.charts - previous.charts)
    if len(charts):
        vertices[state.slots.on_support] = state.support.Point(charts)
    try:
        predicted = capillary_energy.CapillaryState(
            t, state.mesh.WithVertices(vertices), state.support,
            region=state.region, charts=charts, slots=state.slots)
    except _TRIAL_ERRORS:
        return state.WithT(t)
    if not np.isfinite(predicted.energy):
        return state.WithT(t)
    return predicted


def _BranchJump(state, reference, options):
    try:
        fresh = minimize(state.t, reference, state.support, options)
    except errors.CapillaryError:
        return False
    return fresh.energy < state.energy - lexicon.MONOTONE_SLACK * abs(
        state.energy)


def _Flags(state, record, records, disk, options):
    flags = []
    if records:
        last = records[-1]
        if record.lateral_area <= last.lateral_area + lexicon.LATERAL_SLACK:
            flags.append("lateral_area_not_increasing")
        grace = lexicon.MIN_RADIUS_GRACE * state.support.length_scale
        if record.min_radius < last.min_radius - grace:
            flags.append("min_radius_decreased")
    mesh = state.mesh
    if any(mesh.EulerCharacteristic(k) != 1
           for k in range(mesh.n_components)):
        flags.append("not_disks")
    if options.branch_check and records and _BranchJump(state, disk, options):
        flags.append("branch_jump")
    return flags


def continuation_sweep(support, t_grid, options=None, seed=None,
                       region=None, eigenvalue=None):
    """Warm started minimizations over an increasing grid starting at 0.

    eigenvalue, if given, maps each converged state to the kappa stored in
    its record.

    On non-convergence or collapse the error carries the records computed
    so far in its `records` attribute.
    """
    options = (options or SolverOptions()).Validate()
    t_grid = [float(t) for t in t_grid]
    if not t_grid or t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise errors.ConfigError("The t grid must increase from 0.")
    if region is None:
        region = default_region(support)

    records = []
    state = solve_outermost_disk(support, seed, options, region=region)
    disk = state
    previous = None
    for t in t_grid:
        if t > 0:
            start = _Predict(state, previous, t)
            try:
                current = minimize(t, start, support, options)
            except (errors.NonConvergenceError, errors.CollapseError) as e:
                e.records = records
                raise
            previous, state = state, current

        record = _Record(state)
        if eigenvalue is not None:
            record = record._replace(kappa=eigenvalue(state))
        flags = _Flags(state, record, records, disk, options)
        if flags:
            LOGGER.warning("Sweep record at t = %g flagged: %s", t,
                           ", ".join(flags))
            record = record._replace(flags=tuple(flags))
        records.append(record)
        if LOGGER.isEnabledFor(logging.INFO):
            LOGGER.info("t = %g: |Sigma| = %.8g, s = %.8g, m_f = %.8g", t,
                        record.area, record.lateral_area, record.mf)
    return records


def profile_samples(records):
    """(s, sigma(s) = t, upsilon(s) = |Sigma_t|) for every record."""
    return [ProfileSample(s=r.lateral_area, sigma=r.t, upsilon=r.area)
            for r in records]


def monotone_mf(records, slack=lexicon.MONOTONE_SLACK):
    """Returns (ok, largest drop) of m_f along the sweep."""
    values = np.array([r.mf for r in records])
    if len(values) < 2:
        return True, 0.0
    drop = float(np.max(np.maximum.accumulate(values) - values))
    return drop <= slack, drop


def coarse_area_ratio(state, radii=(1.0, 2.0, 4.0, 8.0)):
    """max over r of |Sigma cap B_r| / (4 pi r^2)."""
    return max(geom_mesh.area_within_radius(state.mesh, r) /
               (4 * math.pi * r * r) for r in radii)
