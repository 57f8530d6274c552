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

"""Closed forms and one dimensional solves for surfaces of revolution.

Nothing here touches a mesh: the candidates are flat disks at a height c and
catenoid bands r = a cosh((x3 - b) / a) cut out by the support, with areas
from quadrature along the profile. They serve as an independent check of
the mesh solver.
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
import collections
import logging
import math

import numpy as np
from scipy import integrate
from scipy import optimize

from cappen import capillary_energy
from cappen import errors
from cappen import solver
from cappen import support_surface

LOGGER = logging.getLogger("cappen.oracle")

CANDIDATE_DISK = "disk"
CANDIDATE_BAND = "band"

# Heights are scanned on this many nodes when bracketing contact roots.
SCAN_NODES = 4001

QUAD_TOL = 1e-10
ORACLE_TOL = 1e-2


class CatenoidQuantities(collections.namedtuple(
        "CatenoidQuantities",
        "m t radius disk_area band_area contact_cosine mf convexity")):
    """The disk at height t inside the half catenoid of mass m."""
    __slots__ = ()

    def Recompute(self):
        return catenoid_exact(self.m, self.t)


def catenoid_exact(m, t):
    errors.CHECK(m > 0, errors.DomainError(
        "Catenoid mass must be positive, got %r." % m))
    errors.CHECK(t >= 0, errors.DomainError(
        "Height must be nonnegative, got %r." % t))
    x = t / m
    cosh = math.cosh(x)
    sinh = math.sinh(x)
    return CatenoidQuantities(
        m=m, t=t, radius=m * cosh, disk_area=math.pi * m * m * cosh * cosh,
        band_area=math.pi * m * t + math.pi * m * m * sinh * cosh,
        contact_cosine=-math.tanh(x), mf=m, convexity=math.pi * m * m)


AxisymmetricCandidate = collections.namedtuple(
    "AxisymmetricCandidate",
    "kind t height radius a b lower upper area lateral_area energy mf")
AxisymmetricCandidate.__new__.__defaults__ = (None,) * 12

OracleAgreement = collections.namedtuple(
    "OracleAgreement", "area_error lateral_error energy_error passed")


def revolution_area(profile, z0, z1):
    """Area of {|y| = r(x3), z0 <= x3 <= z1} by adaptive quadrature."""
    if z0 == z1:
        return 0.0
    value, _ = integrate.quad(
        lambda u: float(profile.AreaDensity(u)[0]), z0, z1,
        epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    return 2 * math.pi * value


def _profile(support):
    if support_surface.is_plane(support):
        raise errors.CollapseError(
            "Every point of a plane bounds a degenerate disk.")
    profile = getattr(support, "profile", None)
    if profile is None:
        raise errors.DomainError(
            "The axisymmetric oracle needs a surface of revolution, got %s." %
            support.kind)
    return profile


def _ScanRange(profile, t):
    top = profile.top_start + profile.length_scale * (2 * t + 10)
    if np.isfinite(profile.lower):
        bottom = profile.lower + 1e-9 * profile.length_scale
    else:
        bottom = -top
    return bottom, top


def _Cosine(dr):
    return dr / np.sqrt(1.0 + dr * dr)


def _Brackets(func, nodes):
    values = func(nodes)
    change = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    return [(nodes[i], nodes[i + 1]) for i in change]


def _DiskCandidates(profile, t, offset):
    target = capillary_energy.PHI(t)

    def contact(u):
        return _Cosine(profile.Evaluate(u)[1]) - target

    nodes = np.linspace(*_ScanRange(profile, t), num=SCAN_NODES)
    roots = [optimize.brentq(contact, lo, hi, xtol=1e-14, rtol=1e-15)
             for lo, hi in _Brackets(contact, nodes)]
    exact = nodes[contact(nodes) == 0]
    roots.extend(float(u) for u in exact)

    result = []
    for c in sorted(roots):
        radius = float(profile.Evaluate(c)[0])
        area = math.pi * radius * radius
        lateral = offset + math.copysign(
            revolution_area(profile, min(0.0, c), max(0.0, c)), c)
        result.append(_Candidate(CANDIDATE_DISK, t, area, lateral,
                                 height=c, radius=radius))
    return result


def _Candidate(kind, t, area, lateral, **kwargs):
    energy = area - capillary_energy.PHI(t) * lateral
    mf = math.sqrt(area / math.pi) / math.cosh(t)
    return AxisymmetricCandidate(kind=kind, t=t, area=area,
                                 lateral_area=lateral, energy=energy, mf=mf,
                                 **kwargs)


def _catenoid_band_area(a, b, z0, z1):
    def primitive(z):
        return z + 0.5 * a * math.sinh(2 * (z - b) / a)
    return math.pi * a * (primitive(z1) - primitive(z0))


class _BandSystem(object):
    """Contact conditions of the catenoid r = a cosh((x3 - b)/a) inside S.

    The band runs between its two crossings with S and lies inside S
    between them.
    """

    def __init__(self, profile, t):
        self.profile = profile
        self.target = capillary_energy.PHI(t)
        self.nodes = np.linspace(*_ScanRange(profile, t), num=SCAN_NODES)

    def Crossings(self, a, b):
        def gap(u):
            with np.errstate(over="ignore"):
                return (self.profile.Evaluate(u)[0] -
                        a * np.cosh((np.asarray(u) - b) / a))

        brackets = _Brackets(gap, self.nodes)
        if len(brackets) != 2:
            return None
        z0, z1 = [optimize.brentq(gap, lo, hi, xtol=1e-14)
                  for lo, hi in brackets]
        if gap(0.5 * (z0 + z1)) <= 0:
            return None
        return z0, z1

    def Residual(self, x):
        a, b = x
        if a <= 0:
            return np.array([1.0 - a, 1.0])
        crossings = self.Crossings(a, b)
        if crossings is None:
            return np.array([1.0, 1.0])
        result = []
        for z in crossings:
            dr = float(self.profile.Evaluate(z)[1])
            dc = math.sinh((z - b) / a)
            # Cosine between the two meridian tangents (dr, 1) and (dc, 1).
            cosine = (1.0 + dr * dc) / math.sqrt(
                (1.0 + dr * dr) * (1.0 + dc * dc))
            result.append(cosine - self.target)
        return np.array(result)


def _BandCandidates(profile, t, guesses):
    system = _BandSystem(profile, t)
    scale = profile.length_scale
    found = []
    for a0, b0 in guesses:
        solution = optimize.root(system.Residual, [a0, b0], method="hybr",
                                 options=dict(xtol=1e-12))
        if not solution.success:
            continue
        a, b = (float(x) for x in solution.x)
        if not 0 < a <= 10 * scale:
            continue
        if np.max(np.abs(system.Residual((a, b)))) > 1e-9:
            continue
        z0, z1 = system.Crossings(a, b)
        if any(abs(a - f.a) + abs(b - f.b) < 1e-7 * scale for f in found):
            continue
        area = _catenoid_band_area(a, b, z0, z1)
        lateral = revolution_area(profile, z0, z1)
        found.append(_Candidate(CANDIDATE_BAND, t, area, lateral, a=a, b=b,
                                lower=z0, upper=z1))
    return found


def axisym_candidates(support, t, region=None, band_guesses=None):
    """All disk and catenoid band candidates at parameter t.

    Disk lateral areas use the offset of region (the default region of the
    support when None), band lateral areas are the S band between the two
    crossings.
    """
    errors.CHECK(t >= 0, errors.DomainError(
        "Capillary parameter must be nonnegative, got %r." % t))
    profile = _profile(support)
    if region is None:
        region = solver.default_region(support)
    scale = profile.length_scale
    if band_guesses is None:
        band_guesses = [(f * scale, 0.0) for f in (0.25, 0.5, 0.75)]

    candidates = _DiskCandidates(profile, t, region.offset)
    candidates.extend(_BandCandidates(profile, t, band_guesses))
    if LOGGER.isEnabledFor(logging.DEBUG):
        for c in candidates:
            LOGGER.debug("t = %g %s candidate: |Sigma| = %.12g J = %.12g",
                         t, c.kind, c.area, c.energy)
    return candidates


def axisym_solve(support, t, region=None, band_guesses=None,
                 kinds=(CANDIDATE_DISK, CANDIDATE_BAND)):
    """The candidate of least free energy J_t among the first kind found.

    Disk and band lateral areas are measured against different regions, so
    energies are only compared within one kind.
    """
    candidates = axisym_candidates(support, t, region, band_guesses)
    for kind in kinds:
        found = [c for c in candidates if c.kind == kind]
        if found:
            break
    else:
        raise errors.NoAxisymmetricCandidateError(
            "No axisymmetric capillary surface at t = %g." % t)
    best = min(found, key=lambda c: c.energy)
    if LOGGER.isEnabledFor(logging.INFO):
        LOGGER.info("Axisymmetric oracle at t = %g: %s at %s, J = %.12g", t,
                    best.kind, best.height, best.energy)
    return best


def _relative(value, reference, scale):
    return abs(value - reference) / max(abs(reference), scale)


def oracle_agreement(state, candidate, tolerance=ORACLE_TOL):
    """Relative differences between a mesh state and a candidate.

    Both must measure lateral areas against the same region.
    """
    scale = max(candidate.area, 1e-12)
    area = _relative(state.area, candidate.area, scale)
    lateral = _relative(state.lateral_area, candidate.lateral_area, scale)
    energy = _relative(state.energy, candidate.energy, scale)
    return OracleAgreement(area_error=area, lateral_error=lateral,
                           energy_error=energy,
                           passed=max(area, lateral, energy) <= tolerance)
