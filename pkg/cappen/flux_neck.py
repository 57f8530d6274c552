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

"""Fluxes of ends, neck sizes and the flux against neck comparison.

An end is a graph x3 = psi(y) over |y| > R. Ends below the surface are
handled through their mirror image in x3 -> -x3, so every end graph opens
upwards; the flux of a bottom end is reflected back at the end.
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
import collections
import logging
import math

import numpy as np

from cappen import errors
from cappen import geom_mesh
from cappen import lexicon
from cappen import solver
from cappen import support_surface

LOGGER = logging.getLogger("cappen.flux")

SIDE_TOP = "top"
SIDE_BOTTOM = "bottom"

EndDescriptor = collections.namedtuple(
    "EndDescriptor", "index a b residual radius loop side graph")
EndDescriptor.__new__.__defaults__ = (None, SIDE_TOP, None)

HomotopyCheck = collections.namedtuple(
    "HomotopyCheck", "deviation tolerance passed")

NeckSize = collections.namedtuple("NeckSize", "gamma areas plane")

CharacterizationReport = collections.namedtuple(
    "CharacterizationReport",
    "largest_flux neck_size verdict mass disk_area penrose_margin "
    "weak_margin fluxes plane")


def circle_loop(radius, count=lexicon.CIRCLE_NODES):
    """count points of the circle |y| = radius, counterclockwise."""
    phi = 2 * math.pi * np.arange(count) / count
    return radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)


def _periodic_derivative(points):
    """d/dtheta of a closed loop sampled at uniform theta in [0, 2 pi)."""
    n = len(points)
    freq = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        freq[n // 2] = 0
    spectrum = np.fft.fft(points, axis=0)
    return np.real(np.fft.ifft(1j * freq[:, None] * spectrum, axis=0))


def loop_flux(graph, loop):
    """Integral of the outer co-normal of the graph along a lifted loop.

    The loop is counterclockwise in the plane and the co-normal points away
    from the region it encloses.
    """
    loop = np.asarray(loop, dtype=float)
    velocity = _periodic_derivative(loop)
    _, grad, _ = graph.Height(loop)

    tangent = np.concatenate(
        [velocity, np.sum(grad * velocity, axis=1)[:, None]], axis=1)
    speed = np.linalg.norm(tangent, axis=1)
    unit = tangent / speed[:, None]

    planar = np.stack([velocity[:, 1], -velocity[:, 0]], axis=1)
    planar /= np.linalg.norm(planar, axis=1)[:, None]
    lifted = np.concatenate(
        [planar, np.sum(grad * planar, axis=1)[:, None]], axis=1)
    conormal = lifted - np.sum(lifted * unit, axis=1)[:, None] * unit
    conormal /= np.linalg.norm(conormal, axis=1)[:, None]
    return np.sum(conormal * speed[:, None], axis=0) * 2 * math.pi / len(loop)


def _reflect(vector):
    return np.array([vector[0], vector[1], -vector[2]])


def flux(end, graph=None):
    """The flux vector of an end through its representative loop."""
    graph = graph or end.graph
    errors.CHECK(graph is not None, errors.DomainError(
        "End %d has no graph to integrate over." % end.index))
    loop = end.loop if end.loop is not None else circle_loop(end.radius)
    result = loop_flux(graph, loop)
    if end.side == SIDE_BOTTOM:
        result = _reflect(result)
    return result


def flux_homotopy_check(end, first, second, graph=None):
    """Compares the fluxes through two homologous loops of one end."""
    a = flux(end._replace(loop=np.asarray(first, dtype=float)), graph)
    b = flux(end._replace(loop=np.asarray(second, dtype=float)), graph)
    deviation = float(np.linalg.norm(a - b))
    tolerance = (lexicon.FLUX_HOMOTOPY_RTOL * float(np.linalg.norm(a)) +
                 lexicon.FLUX_HOMOTOPY_ATOL)
    return HomotopyCheck(deviation, tolerance, deviation < tolerance)


def fit_end(graph, radii, side=SIDE_TOP, index=0, count=64):
    """Fits psi ~ a log|y| + b over circles of the given radii.

    The coefficients are in the coordinates of the graph, so a bottom end
    reports its mirrored asymptotics. residual is the largest deviation on
    the sampled circles.
    """
    radii = sorted(float(r) for r in radii)
    errors.CHECK(len(radii) >= 2, errors.DomainError(
        "Fitting an end needs at least two radii."))
    logs = []
    values = []
    for r in radii:
        psi = graph.Height(circle_loop(r, count))[0]
        logs.append(np.full(len(psi), math.log(r)))
        values.append(psi)
    logs = np.concatenate(logs)
    values = np.concatenate(values)

    design = np.stack([logs, np.ones_like(logs)], axis=1)
    (a, _), _, _, _ = np.linalg.lstsq(design, values, rcond=None)
    b = float(np.mean(values - a * logs))
    residual = float(np.max(np.abs(values - a * logs - b)))
    return EndDescriptor(index=index, a=float(a), b=b, residual=residual,
                         radius=radii[-1], side=side, graph=graph)


def mesh_loop_flux(mesh, loop_index=0):
    """Discrete co-normal integral over one boundary loop of a mesh."""
    loop = mesh.boundary_loops[loop_index]
    field = geom_mesh.curvatures(mesh)
    return np.sum(field.conormal[loop] *
                  field.boundary_length[loop][:, None], axis=0)


class TwoSidedSurface(object):
    """A surface with a top side and a bottom side.

    Both sides are support surfaces opening upwards; the bottom one is the
    mirror image of the part below the surface. A missing bottom side makes
    the description symmetric. Extra ends are (graph, side) pairs.
    """

    def __init__(self, top, bottom=None, ends=()):
        self.top = top
        self.bottom = top if bottom is None else bottom
        self.extra_ends = tuple(ends)

    def Sides(self):
        return ((SIDE_TOP, self.top), (SIDE_BOTTOM, self.bottom))

    def EndGraphs(self):
        result = [(self.top.EndGraph(), SIDE_TOP),
                  (self.bottom.EndGraph(), SIDE_BOTTOM)]
        result.extend(self.extra_ends)
        return result

    @classmethod
    def FromConfig(cls, config):
        top = support_surface.surface_from_config(config)
        bottom = None
        if config["flux.bottom_mass"] is not None:
            bottom = support_surface.CatenoidExtension(
                config["flux.bottom_mass"])
        ends = []
        for item in config["flux.ends"]:
            if len(item) != 3:
                raise errors.ConfigError(
                    "flux.ends items are 'a b side' with side +1 or -1.")
            a, b, sign = item
            ends.append((support_surface.GraphSurface(
                psi=lexicon.PSI_LOG, coefficient=a, offset=b),
                SIDE_TOP if sign >= 0 else SIDE_BOTTOM))
        return cls(top, bottom, ends)


def _height_key(end):
    sign = -1.0 if end.side == SIDE_BOTTOM else 1.0
    return (sign * end.a, sign * end.b)


def describe_ends(surface, radii):
    """EndDescriptors of all ends, ordered by their height."""
    ends = [fit_end(graph, radii, side=side)
            for graph, side in surface.EndGraphs()]
    ends.sort(key=_height_key)
    return [end._replace(index=i) for i, end in enumerate(ends)]


def _Shrunk(state, seed):
    if state is None or seed is None:
        return False
    return state.area < lexicon.SHRINK_FRACTION * geom_mesh.area(seed)


def neck_size(surface, options=None, boundary_vertices=64, rings=8):
    """gamma = max over sides of sqrt(4 pi |D|), zero for the plane.

    A side without an outermost disk contributes nothing, and so does a side
    whose solve ran out of iterations with Sigma already far below the seed
    area. The value is an upper bound: D is a stable stationary candidate,
    not a certified minimizer.
    """
    areas = {}
    for side, support in surface.Sides():
        seed = None
        try:
            seed = solver.default_seed(support, boundary_vertices, rings)
            disk = solver.solve_outermost_disk(support, seed, options)
        except errors.NonConvergenceError as e:
            if not _Shrunk(e.state, seed):
                raise
            if LOGGER.isEnabledFor(logging.INFO):
                LOGGER.info("No outermost disk on the %s side: %s", side, e)
            areas[side] = None
            continue
        except (errors.CollapseError, errors.DomainError,
                errors.RegionError) as e:
            if LOGGER.isEnabledFor(logging.INFO):
                LOGGER.info("No outermost disk on the %s side: %s", side, e)
            areas[side] = None
            continue
        areas[side] = disk.area

    found = [a for a in areas.values() if a is not None]
    if not found:
        return NeckSize(gamma=0.0, areas=areas, plane=True)
    return NeckSize(gamma=math.sqrt(4 * math.pi * max(found)), areas=areas,
                    plane=False)


def characterization_report(surface, radii, options=None, neck=None,
                            tolerance=lexicon.NECK_TOLERANCE):
    """Largest flux against neck size, with the Penrose margins.

    The mass comes from the flux of the top end, |D| from the top side.
    """
    ends = describe_ends(surface, radii)
    fluxes = [flux(end) for end in ends]
    largest = max(float(np.linalg.norm(f)) for f in fluxes)
    if neck is None:
        neck = neck_size(surface, options)

    top = fit_end(surface.top.EndGraph(), radii)
    mass = float(flux(top)[2]) / (2 * math.pi)
    disk_area = neck.areas.get(SIDE_TOP) or 0.0
    penrose = mass - math.sqrt(disk_area / math.pi)
    weak = mass - math.sqrt(disk_area / (2 * math.pi))

    if largest <= neck.gamma * (1 + tolerance) + lexicon.FLUX_HOMOTOPY_ATOL:
        verdict = lexicon.VERDICT_CATENOID_OR_PLANE
    else:
        verdict = lexicon.VERDICT_NEITHER
    if LOGGER.isEnabledFor(logging.INFO):
        LOGGER.info("Largest flux %.8g, neck size %.8g: %s", largest,
                    neck.gamma, verdict)
    return CharacterizationReport(
        largest_flux=largest, neck_size=neck.gamma, verdict=verdict,
        mass=mass, disk_area=disk_area, penrose_margin=penrose,
        weak_margin=weak, fluxes=[tuple(float(x) for x in f) for f in fluxes],
        plane=neck.plane)
