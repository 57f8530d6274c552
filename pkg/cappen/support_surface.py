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

"""Support surfaces S: charts, normals, shape operators and lateral areas.

Every support surface is described through a chart c = (c1, c2) -> X(c).
Axisymmetric surfaces use (height, angle), graphs use the plane coordinates.
The normal nu(S) points out of M(S) and is asymptotic to -e3.

Lateral areas are computed with a Green type primitive P on the chart: the
area of S(Sigma) cut off by a loop is the loop integral of P against an
increment form (d angle for surfaces of revolution and for graphs with a
singular core, d c2 for other graphs).
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
from builtins import range
import collections
import logging
import math

import numpy as np
from numpy.polynomial import legendre
from scipy import integrate
from scipy import optimize

from cappen import errors
from cappen import lexicon
from cappen import registry

LOGGER = logging.getLogger("cappen.support")

_GL_NODES, _GL_WEIGHTS = legendre.leggauss(lexicon.LEGENDRE_NODES)

RULE_CHORDAL = "chordal"
RULE_SPECTRAL = "spectral"

# A prescribed curvature profile is abandoned when its radius falls below this
# fraction of the neck radius.
PINCH_FRACTION = 1e-3


def bump(s):
    """exp(1 - 1/(1 - s^2)) on |s| < 1.

    Returns the value, two derivatives and beta'(s)/s, which stays finite at
    the origin.
    """
    s = np.asarray(s, dtype=float)
    shape = s.shape
    s = np.atleast_1d(s).ravel()
    value = np.zeros_like(s)
    d1 = np.zeros_like(s)
    d2 = np.zeros_like(s)
    ratio = np.zeros_like(s)
    inside = np.abs(s) < 1
    si = s[inside]
    q = 1.0 - si * si
    b = np.exp(1.0 - 1.0 / q)
    g = -2.0 * si / q ** 2
    dg = -2.0 / q ** 2 - 8.0 * si * si / q ** 3
    value[inside] = b
    d1[inside] = b * g
    d2[inside] = b * (g * g + dg)
    ratio[inside] = -2.0 * b / q ** 2
    return (value.reshape(shape), d1.reshape(shape), d2.reshape(shape),
            ratio.reshape(shape))


class _CumulativeQuadrature(object):
    """x -> int_lower^x f by composite Gauss-Legendre panels."""

    def __init__(self, func, lower, upper):
        self.func = func
        self.lower = float(lower)
        self.upper = float(upper)
        panels = max(1, int(math.ceil(
            (self.upper - self.lower) / lexicon.LEGENDRE_PANEL)))
        self.edges = np.linspace(self.lower, self.upper, panels + 1)
        pieces = self._Partial(self.edges[:-1], self.edges[1:])
        self.cumulative = np.concatenate([[0.0], np.cumsum(pieces)])

    def _Partial(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        half = 0.5 * (b - a)
        nodes = a[..., None] + half[..., None] * (_GL_NODES + 1.0)
        return half * np.sum(self.func(nodes) * _GL_WEIGHTS, axis=-1)

    def __call__(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.lower, self.upper)
        index = np.clip(np.searchsorted(self.edges, x, side="right") - 1,
                        0, len(self.edges) - 2)
        return self.cumulative[index] + self._Partial(self.edges[index], x)


def _catenoid(a, b, u):
    x = (u - b) / a
    return a * np.cosh(x), np.sinh(x), np.cosh(x) / a


def _catenoid_area(a, b, u):
    """Primitive of the area density a cosh^2((u - b)/a) per unit angle."""
    x = (u - b) / a
    return 0.5 * a * ((u - b) + 0.5 * a * np.sinh(2.0 * x))


def _as_flat(u):
    u = np.asarray(u, dtype=float)
    return u.shape, np.atleast_1d(u).ravel()


# Radius profiles of surfaces of revolution {|y| = r(x3)}.

class Profile(object):
    """Radius profile r(u) of a surface of revolution.

    Area(u) is the lateral area per unit angle between heights 0 and u, so
    the reference level of every profile is u = 0.
    """
    lower = -np.inf
    top_start = 0.0
    top_mass = None
    length_scale = 1.0

    def Evaluate(self, u):
        """Returns r, r' and r''."""
        raise NotImplementedError()

    def Area(self, u):
        raise NotImplementedError()

    def AreaDensity(self, u):
        """r sqrt(1 + r'^2) and its derivative."""
        r, dr, ddr = self.Evaluate(u)
        root = np.sqrt(1.0 + dr * dr)
        return r * root, dr * root + r * dr * ddr / root

    def MeanCurvature(self, u):
        r, dr, ddr = self.Evaluate(u)
        slope = 1.0 + dr * dr
        return 1.0 / (r * np.sqrt(slope)) - ddr / slope ** 1.5

    def FluxFunction(self, u):
        """r / sqrt(1 + r'^2), nondecreasing exactly where H(S) >= 0."""
        r, dr, _ = self.Evaluate(u)
        return r / np.sqrt(1.0 + dr * dr)

    def TopHeight(self, radius):
        """Height of the upper end at the given radius."""
        start = self.top_start
        r0 = float(self.Evaluate(start)[0])
        if radius < r0:
            raise errors.DomainError(
                "Radius %g is inside the non graphical region (r < %g)." % (
                    radius, r0))
        if radius == r0:
            return start
        step = self.length_scale
        hi = start + step
        while float(self.Evaluate(hi)[0]) < radius:
            step *= 2
            hi = start + step
        return optimize.brentq(
            lambda u: float(self.Evaluate(u)[0]) - radius, start, hi,
            xtol=1e-14, rtol=1e-15)


class CatenoidProfile(Profile):
    """m cosh(u/m) plus a finite sum of bumps (center, width, amplitude)."""

    def __init__(self, mass=1.0, bumps=()):
        errors.CHECK(mass > 0, errors.ConfigError(
            "Catenoid mass must be positive, got %r." % mass))
        self.mass = float(mass)
        self.length_scale = self.mass
        self.top_mass = self.mass
        self.bumps = tuple(tuple(float(x) for x in b) for b in bumps)
        for b in self.bumps:
            if len(b) != 3 or b[1] <= 0:
                raise errors.ConfigError(
                    "Profile bumps need center, width > 0 and amplitude.")
        self._correction = None
        if self.bumps:
            lo = min(c - w for c, w, _ in self.bumps)
            hi = max(c + w for c, w, _ in self.bumps)
            self.top_start = max(0.0, hi)
            samples = np.linspace(lo, hi, 2001)
            if np.min(self.Evaluate(samples)[0]) <= 0:
                raise errors.ConfigError("Bumps pinch the profile off.")
            self._correction = _CumulativeQuadrature(self._AreaDefect, lo, hi)
            self._origin = float(self._correction(0.0))

    def Evaluate(self, u):
        u = np.asarray(u, dtype=float)
        r, dr, ddr = _catenoid(self.mass, 0.0, u)
        for center, width, amplitude in self.bumps:
            b0, b1, b2, _ = bump((u - center) / width)
            r = r + amplitude * b0
            dr = dr + amplitude * b1 / width
            ddr = ddr + amplitude * b2 / width ** 2
        return r, dr, ddr

    def _AreaDefect(self, u):
        density, _ = self.AreaDensity(u)
        return density - self.mass * np.cosh(u / self.mass) ** 2

    def Area(self, u):
        result = _catenoid_area(self.mass, 0.0, np.asarray(u, dtype=float))
        if self._correction is not None:
            result = result + self._correction(u) - self._origin
        return result


class CatenoidExtensionProfile(Profile):
    """The half catenoid of mass m closed off by a cap below height -m.

    Below the junction the radius is sqrt(1 - s) q(s) with s running from 0
    at the junction to 1 at the bottom, q quadratic and matched to second
    order.
    """

    def __init__(self, mass=1.0, cap_depth=None):
        errors.CHECK(mass > 0, errors.ConfigError(
            "Catenoid mass must be positive, got %r." % mass))
        self.mass = m = float(mass)
        self.depth = d = float(cap_depth if cap_depth else mass)
        errors.CHECK(d > 0, errors.ConfigError("Cap depth must be positive."))
        self.length_scale = m
        self.top_mass = m
        self.junction = -m
        self.lower = -m - d
        q0 = m * math.cosh(1.0)
        q1 = d * math.sinh(1.0) + 0.5 * q0
        q2 = 0.5 * (d * d * math.cosh(1.0) / m + 0.25 * q0 + q1)
        self.q = (q0, q1, q2)
        self._cap = _CumulativeQuadrature(
            lambda u: self.AreaDensity(u)[0], self.lower, self.junction)
        self._junction_area = _catenoid_area(m, 0.0, self.junction)

    def _Cap(self, u):
        q0, q1, q2 = self.q
        d = self.depth
        s = np.minimum((self.junction - u) / d, 1.0 - 1e-15)
        q = q0 + q1 * s + q2 * s * s
        dq = q1 + 2.0 * q2 * s
        root = np.sqrt(1.0 - s)
        r = root * q
        drds = -q / (2.0 * root) + root * dq
        d2rds2 = -q / (4.0 * root ** 3) - dq / root + root * 2.0 * q2
        return r, -drds / d, d2rds2 / (d * d)

    def Evaluate(self, u):
        u = np.asarray(u, dtype=float)
        upper = _catenoid(self.mass, 0.0, u)
        if np.all(u >= self.junction):
            return upper
        cap = self._Cap(u)
        below = u < self.junction
        return tuple(np.where(below, c, k) for c, k in zip(cap, upper))

    def Area(self, u):
        u = np.asarray(u, dtype=float)
        upper = _catenoid_area(self.mass, 0.0, u)
        if np.all(u >= self.junction):
            return upper
        cap = self._junction_area - (
            self._cap(self.junction) - self._cap(u))
        return np.where(u < self.junction, cap, upper)

    def CapArea(self):
        """Area of S below height 0, the natural offset for |S(Sigma)|."""
        return float(2 * math.pi * (0.0 - (
            self._junction_area - float(self._cap(self.junction)))))


class PrescribedCurvatureProfile(Profile):
    """A catenoid neck continued with prescribed mean curvature H(u) >= 0.

    r'' = (1 + r'^2)/r - H (1 + r'^2)^(3/2) is integrated upwards from a neck
    of radius m0 at height 0, where H is a sum of bumps supported above the
    neck. Once H vanishes the profile is the catenoid through the final
    state, whose parameter is the exterior mass. Below the neck the profile
    is the catenoid of mass m0.
    """

    def __init__(self, neck=1.0, bumps=()):
        errors.CHECK(neck > 0, errors.ConfigError(
            "Neck radius must be positive, got %r." % neck))
        self.neck = float(neck)
        self.length_scale = self.neck
        self.bumps = tuple(tuple(float(x) for x in b) for b in bumps)
        for b in self.bumps:
            if len(b) != 3 or b[1] <= 0 or b[0] - b[1] < 0:
                raise errors.ConfigError(
                    "Curvature bumps need center, width > 0 and amplitude, "
                    "and must lie above the neck.")

        self.upper = max([c + w for c, w, _ in self.bumps] + [0.0])
        self._solution = None
        top = (self.neck, 0.0)
        if self.bumps:
            def pinch(u, y):
                return y[0] - PINCH_FRACTION * self.neck
            pinch.terminal = True
            pinch.direction = -1

            solution = integrate.solve_ivp(
                self._Rhs, (0.0, self.upper), [self.neck, 0.0],
                method="DOP853", rtol=1e-12, atol=1e-12, dense_output=True,
                events=pinch)
            if solution.status != 0:
                raise errors.DomainError(
                    "Prescribed curvature profile breaks down: %s" %
                    solution.message)
            self._solution = solution.sol
            r_end, dr_end = solution.y[:, -1]
            a = r_end / math.sqrt(1.0 + dr_end ** 2)
            top = (a, self.upper - a * math.asinh(dr_end))
            self._quad = _CumulativeQuadrature(
                lambda u: self.AreaDensity(u)[0], 0.0, self.upper)
            self._upper_area = float(self._quad(self.upper))
        self.top = top
        self.top_mass = top[0]
        self.top_start = self.upper

        if LOGGER.isEnabledFor(logging.INFO):
            LOGGER.info("Prescribed curvature profile: neck %g, top mass %g",
                        self.neck, self.top_mass)

    def Curvature(self, u):
        u = np.asarray(u, dtype=float)
        result = np.zeros_like(u)
        for center, width, amplitude in self.bumps:
            result = result + amplitude * bump((u - center) / width)[0]
        return result

    def _Rhs(self, u, y):
        r, dr = y
        slope = 1.0 + dr * dr
        return [dr, slope / r - float(self.Curvature(u)) * slope ** 1.5]

    def Evaluate(self, u):
        shape, u = _as_flat(u)
        r, dr, ddr = _catenoid(self.neck, 0.0, u)
        if self._solution is not None:
            mid = (u >= 0) & (u <= self.upper)
            if np.any(mid):
                rm, drm = self._solution(u[mid])
                slope = 1.0 + drm * drm
                r[mid] = rm
                dr[mid] = drm
                ddr[mid] = slope / rm - self.Curvature(u[mid]) * slope ** 1.5
            high = u > self.upper
            if np.any(high):
                rt, drt, ddrt = _catenoid(self.top[0], self.top[1], u[high])
                r[high] = rt
                dr[high] = drt
                ddr[high] = ddrt
        return r.reshape(shape), dr.reshape(shape), ddr.reshape(shape)

    def Area(self, u):
        shape, u = _as_flat(u)
        result = _catenoid_area(self.neck, 0.0, u)
        if self._solution is not None:
            mid = (u >= 0) & (u <= self.upper)
            result[mid] = self._quad(u[mid])
            high = u > self.upper
            a, b = self.top
            result[high] = self._upper_area + _catenoid_area(a, b, u[high]) - (
                _catenoid_area(a, b, self.upper))
        return result.reshape(shape)


# Support surfaces.

GeometryEval = collections.namedtuple(
    "GeometryEval", "foot chart normal frame shape mean_curvature")


class SupportSurface(object):
    """Base class of all support surfaces.

    Chart arrays have shape (..., 2), points (..., 3).
    """
    kind = None
    sweep_period = None
    chart_period = None
    singular_core = False
    core_radius = 0.0
    length_scale = 1.0
    tau = 1.0

    def Point(self, c):
        raise NotImplementedError()

    def Frame(self, c):
        """Returns the chart tangents (X_1, X_2)."""
        raise NotImplementedError()

    def SecondDerivatives(self, c):
        """Returns (X_11, X_12, X_22)."""
        raise NotImplementedError()

    def ChartOf(self, x):
        raise NotImplementedError()

    def Project(self, p):
        """Closest point on S. Returns (foot, chart)."""
        raise NotImplementedError()

    def Primitive(self, c):
        raise NotImplementedError()

    def PrimitiveGradient(self, c):
        raise NotImplementedError()

    def PrimitiveHessian(self, c):
        raise NotImplementedError()

    def Increment(self, ca, cb):
        """Chordal increment between consecutive loop points.

        Returns the increment and its chart gradients in ca and cb.
        """
        raise NotImplementedError()

    def IncrementHessian(self, ca, cb):
        """(..., 4, 4) Hessian of the increment in (ca, cb)."""
        raise NotImplementedError()

    def SweepCoordinate(self, c):
        raise NotImplementedError()

    def PlanarImage(self, c):
        """An embedding of the chart in the plane preserving loop nesting."""
        raise NotImplementedError()

    def MassIntegrand(self, radius):
        raise NotImplementedError()

    def EndGraph(self):
        raise NotImplementedError()

    def ExteriorSample(self, inner=None, outer=None, count=2001):
        raise NotImplementedError()

    def Normal(self, c):
        x1, x2 = self.Frame(c)
        n = np.cross(x1, x2)
        return -n / np.linalg.norm(n, axis=-1)[..., None]

    def Metric(self, c):
        x1, x2 = self.Frame(c)
        jac = np.stack([x1, x2], axis=-1)
        return jac, np.einsum("...ia,...ib->...ab", jac, jac)

    def Shape(self, c):
        """Shape operator h(S) in an orthonormal tangent frame.

        Returns (frame (..., 3, 2), h (..., 2, 2), H).
        """
        jac, metric = self.Metric(c)
        normal = self.Normal(c)
        x11, x12, x22 = self.SecondDerivatives(c)
        second = np.empty(metric.shape)
        second[..., 0, 0] = -np.sum(x11 * normal, axis=-1)
        second[..., 0, 1] = second[..., 1, 0] = -np.sum(x12 * normal, axis=-1)
        second[..., 1, 1] = -np.sum(x22 * normal, axis=-1)
        upper = np.swapaxes(np.linalg.cholesky(metric), -1, -2)
        inv = np.linalg.inv(upper)
        frame = np.einsum("...ia,...ab->...ib", jac, inv)
        h = np.einsum("...ba,...bc,...cd->...ad", inv, second, inv)
        return frame, h, h[..., 0, 0] + h[..., 1, 1]

    def MeanCurvature(self, c):
        return self.Shape(c)[2]

    def TangentFromChart(self, c, covector):
        """Converts a chart differential into the tangent gradient vector."""
        jac, metric = self.Metric(c)
        coeff = np.linalg.solve(metric, covector[..., None])[..., 0]
        return np.einsum("...ia,...a->...i", jac, coeff)

    def ChartVelocity(self, c, vector):
        """Chart velocity of the tangential part of an ambient vector."""
        jac, metric = self.Metric(c)
        rhs = np.einsum("...ia,...i->...a", jac, vector)
        return np.linalg.solve(metric, rhs[..., None])[..., 0]


class AxisymmetricSurface(SupportSurface):
    """{|y| = r(x3)} with chart (u, phi) -> (r cos phi, r sin phi, u)."""
    kind = lexicon.SURFACE_AXISYMMETRIC
    sweep_period = 2 * math.pi
    chart_period = 2 * math.pi

    def __init__(self, profile):
        self.profile = profile
        self.length_scale = profile.length_scale

    @property
    def mass(self):
        return self.profile.top_mass

    def Point(self, c):
        u = c[..., 0]
        phi = c[..., 1]
        r = self.profile.Evaluate(u)[0]
        return np.stack([r * np.cos(phi), r * np.sin(phi), u], axis=-1)

    def Frame(self, c):
        u = c[..., 0]
        phi = c[..., 1]
        r, dr, _ = self.profile.Evaluate(u)
        cos, sin = np.cos(phi), np.sin(phi)
        xu = np.stack([dr * cos, dr * sin, np.ones_like(u)], axis=-1)
        xp = np.stack([-r * sin, r * cos, np.zeros_like(u)], axis=-1)
        return xu, xp

    def SecondDerivatives(self, c):
        u = c[..., 0]
        phi = c[..., 1]
        r, dr, ddr = self.profile.Evaluate(u)
        cos, sin = np.cos(phi), np.sin(phi)
        zero = np.zeros_like(u)
        return (np.stack([ddr * cos, ddr * sin, zero], axis=-1),
                np.stack([-dr * sin, dr * cos, zero], axis=-1),
                np.stack([-r * cos, -r * sin, zero], axis=-1))

    def Normal(self, c):
        u = c[..., 0]
        phi = c[..., 1]
        dr = self.profile.Evaluate(u)[1]
        root = np.sqrt(1.0 + dr * dr)
        return np.stack([np.cos(phi) / root, np.sin(phi) / root, -dr / root],
                        axis=-1)

    def MeanCurvature(self, c):
        return self.profile.MeanCurvature(c[..., 0])

    def ChartOf(self, x):
        x = np.asarray(x, dtype=float)
        return np.stack([x[..., 2], np.arctan2(x[..., 1], x[..., 0])], axis=-1)

    def Project(self, p):
        p = np.asarray(p, dtype=float)
        rho = np.hypot(p[..., 0], p[..., 1])
        if np.any(rho == 0):
            raise errors.ProjectionError("Point on the axis of revolution.")
        z = p[..., 2]
        lower = self.profile.lower
        u = np.maximum(z, lower + 1e-9 * self.length_scale)
        for _ in range(lexicon.PROJECTION_MAX_STEPS):
            r, dr, ddr = self.profile.Evaluate(u)
            grad = (r - rho) * dr + (u - z)
            curv = dr * dr + (r - rho) * ddr + 1.0
            curv = np.where(curv > 0, curv, dr * dr + 1.0)
            step = grad / curv
            nxt = u - step
            nxt = np.where(nxt <= lower, 0.5 * (u + lower), nxt)
            done = np.abs(nxt - u) <= lexicon.PROJECTION_TOL * (
                1.0 + np.abs(u))
            u = nxt
            if np.all(done):
                break
        else:
            raise errors.ProjectionError(
                "Projection did not converge in %d steps." %
                lexicon.PROJECTION_MAX_STEPS)
        c = np.stack([u, np.arctan2(p[..., 1], p[..., 0])], axis=-1)
        return self.Point(c), c

    def Primitive(self, c):
        return self.profile.Area(c[..., 0])

    def PrimitiveGradient(self, c):
        density = self.profile.AreaDensity(c[..., 0])[0]
        return np.stack([density, np.zeros_like(density)], axis=-1)

    def PrimitiveHessian(self, c):
        slope = self.profile.AreaDensity(c[..., 0])[1]
        result = np.zeros(c.shape + (2,))
        result[..., 0, 0] = slope
        return result

    def Increment(self, ca, cb):
        delta = cb[..., 1] - ca[..., 1]
        cos = np.cos(delta)
        zero = np.zeros_like(cos)
        return (np.sin(delta), np.stack([zero, -cos], axis=-1),
                np.stack([zero, cos], axis=-1))

    def IncrementHessian(self, ca, cb):
        sin = np.sin(cb[..., 1] - ca[..., 1])
        result = np.zeros(sin.shape + (4, 4))
        result[..., 1, 1] = -sin
        result[..., 3, 3] = -sin
        result[..., 1, 3] = sin
        result[..., 3, 1] = sin
        return result

    def SweepCoordinate(self, c):
        return c[..., 1]

    def PlanarImage(self, c):
        radius = np.exp(c[..., 0] / (20.0 * self.length_scale))
        return np.stack([radius * np.cos(c[..., 1]),
                         radius * np.sin(c[..., 1])], axis=-1)

    def MassIntegrand(self, radius):
        u = self.profile.TopHeight(radius)
        return radius / float(self.profile.Evaluate(u)[1])

    def EndGraph(self):
        return RevolutionEnd(self.profile)

    def ExteriorSample(self, inner=None, outer=None, count=2001):
        inner = 0.0 if inner is None else inner
        outer = inner + 20 * self.length_scale if outer is None else outer
        u = np.linspace(inner, outer, count)
        return np.stack([u, np.zeros_like(u)], axis=-1)

    def CircleAt(self, height, count=lexicon.CIRCLE_NODES):
        phi = 2 * math.pi * np.arange(count) / count
        c = np.stack([np.full(count, float(height)), phi], axis=-1)
        return self.Point(c)


class CatenoidExtension(AxisymmetricSurface):
    """The support surface S_m: a half catenoid of mass m above a cap."""
    kind = lexicon.SURFACE_CATENOID_EXTENSION

    def __init__(self, mass=1.0, cap_depth=None):
        super(CatenoidExtension, self).__init__(
            CatenoidExtensionProfile(mass, cap_depth))


def _radial_derivatives(y, rho, t1, t2):
    """Gradient and Hessian of f(y) = T(|y|) from T' and T''."""
    safe = np.where(rho > 0, rho, 1.0)
    e = y / safe[..., None]
    outer = e[..., :, None] * e[..., None, :]
    eye = np.eye(2)
    grad = t1[..., None] * e
    hess = (t2[..., None, None] * outer +
            (t1 / safe)[..., None, None] * (eye - outer))
    return grad, hess


def _angle_increment(ca, cb):
    """Polar angle from ca to cb in (-pi, pi] and its two gradients."""
    cross = ca[..., 0] * cb[..., 1] - ca[..., 1] * cb[..., 0]
    dot = np.sum(ca * cb, axis=-1)
    ra = np.sum(ca * ca, axis=-1)[..., None]
    rb = np.sum(cb * cb, axis=-1)[..., None]
    return (np.arctan2(cross, dot),
            np.stack([ca[..., 1], -ca[..., 0]], axis=-1) / ra,
            np.stack([-cb[..., 1], cb[..., 0]], axis=-1) / rb)


def _angle_hessian(c):
    y1 = c[..., 0]
    y2 = c[..., 1]
    r4 = (y1 * y1 + y2 * y2) ** 2
    result = np.empty(c.shape + (2,))
    result[..., 0, 0] = 2 * y1 * y2 / r4
    result[..., 0, 1] = result[..., 1, 0] = (y2 * y2 - y1 * y1) / r4
    result[..., 1, 1] = -2 * y1 * y2 / r4
    return result


class GraphSurface(SupportSurface):
    """{x3 = psi(y)} with psi = a T(|y|) + b + bumps.

    a T is a log|y| for log ends, m arccosh(|y|/m) for catenoidal ends (the
    coefficient is then m) and 0 for flat ones. Bumps are
    (cx, cy, width, amplitude).
    Around a singular core the lateral primitive is Q dtheta with Q a radial
    integral from base_radius, so loops may wind around the core.
    """
    kind = lexicon.SURFACE_GRAPH

    def __init__(self, psi=lexicon.PSI_FLAT, coefficient=0.0, offset=0.0,
                 bumps=()):
        if psi not in (lexicon.PSI_FLAT, lexicon.PSI_LOG,
                       lexicon.PSI_CATENOID):
            raise errors.ConfigError("Unknown graph end %r." % psi)
        self.psi = psi
        self.coefficient = float(coefficient)
        self.offset = float(offset)
        self.bumps = tuple(tuple(float(x) for x in b) for b in bumps)
        for b in self.bumps:
            if len(b) != 4 or b[2] <= 0:
                raise errors.ConfigError(
                    "Graph bumps need cx, cy, width > 0 and amplitude.")
        if psi == lexicon.PSI_CATENOID:
            errors.CHECK(self.coefficient > 0, errors.ConfigError(
                "Catenoidal ends need a positive mass."))
            self.hole_radius = self.coefficient
        elif psi == lexicon.PSI_LOG:
            self.hole_radius = 0.0
        else:
            self.hole_radius = None
        self.singular_core = self.hole_radius is not None
        if self.singular_core:
            self.chart_period = 2 * math.pi
            self.core_radius = self.hole_radius

    @property
    def mass(self):
        return self.coefficient if self.singular_core else 0.0

    def _Radial(self, rho):
        a = self.coefficient
        if self.psi == lexicon.PSI_LOG:
            return a * np.log(rho), a / rho, -a / rho ** 2
        root = np.sqrt(rho * rho - a * a)
        return a * np.arccosh(rho / a), a / root, -a * rho / root ** 3

    def Height(self, y):
        """psi, its gradient (..., 2) and Hessian (..., 2, 2)."""
        y = np.asarray(y, dtype=float)
        psi = np.full(y.shape[:-1], self.offset)
        grad = np.zeros(y.shape)
        hess = np.zeros(y.shape + (2,))
        if self.singular_core:
            rho = np.hypot(y[..., 0], y[..., 1])
            if np.any(rho <= self.hole_radius):
                raise errors.DomainError(
                    "Point outside the graphical region |y| > %g." %
                    self.hole_radius)
            t0, t1, t2 = self._Radial(rho)
            g, h = _radial_derivatives(y, rho, t1, t2)
            psi = psi + t0
            grad = grad + g
            hess = hess + h
        for cx, cy, width, amplitude in self.bumps:
            d = y - np.array([cx, cy])
            rho = np.hypot(d[..., 0], d[..., 1])
            b0, _, b2, ratio = bump(rho / width)
            psi = psi + amplitude * b0
            scaled = amplitude * ratio / width ** 2
            grad = grad + scaled[..., None] * d
            safe = np.where(rho > 0, rho, 1.0)
            e = d / safe[..., None]
            outer = e[..., :, None] * e[..., None, :]
            hess = hess + amplitude * (
                (b2 / width ** 2)[..., None, None] * outer +
                (ratio / width ** 2)[..., None, None] * (np.eye(2) - outer))
        return psi, grad, hess

    def Point(self, c):
        psi = self.Height(c)[0]
        return np.concatenate([c, psi[..., None]], axis=-1)

    def Frame(self, c):
        grad = self.Height(c)[1]
        ones = np.ones(grad.shape[:-1])
        zeros = np.zeros_like(ones)
        return (np.stack([ones, zeros, grad[..., 0]], axis=-1),
                np.stack([zeros, ones, grad[..., 1]], axis=-1))

    def SecondDerivatives(self, c):
        hess = self.Height(c)[2]
        zeros = np.zeros(hess.shape[:-2])
        return tuple(np.stack([zeros, zeros, hess[..., i, j]], axis=-1)
                     for i, j in ((0, 0), (0, 1), (1, 1)))

    def Normal(self, c):
        grad = self.Height(c)[1]
        w = np.sqrt(1.0 + np.sum(grad * grad, axis=-1))
        return np.stack([grad[..., 0] / w, grad[..., 1] / w, -1.0 / w],
                        axis=-1)

    def ChartOf(self, x):
        return np.asarray(x, dtype=float)[..., :2].copy()

    def Project(self, p):
        p = np.asarray(p, dtype=float)
        c = p[..., :2].copy()
        for _ in range(lexicon.PROJECTION_MAX_STEPS):
            psi, grad, hess = self.Height(c)
            dz = psi - p[..., 2]
            g = (c - p[..., :2]) + dz[..., None] * grad
            jtj = (np.eye(2) + grad[..., :, None] * grad[..., None, :])
            full = jtj + dz[..., None, None] * hess
            det = np.linalg.det(full)
            matrix = np.where((det > 0)[..., None, None], full, jtj)
            step = np.linalg.solve(matrix, g[..., None])[..., 0]
            c = c - step
            if np.all(np.linalg.norm(step, axis=-1) <=
                      lexicon.PROJECTION_TOL * (
                          1.0 + np.linalg.norm(c, axis=-1))):
                break
        else:
            raise errors.ProjectionError(
                "Projection did not converge in %d steps." %
                lexicon.PROJECTION_MAX_STEPS)
        return self.Point(c), c

    def _Density(self, y):
        _, grad, hess = self.Height(y)
        w = np.sqrt(1.0 + np.sum(grad * grad, axis=-1))
        dw = np.einsum("...ab,...b->...a", hess, grad) / w[..., None]
        return w, dw

    def _LineIntegral(self, c, func):
        """int_0^{c1} func(s, c2) ds, vectorized over c."""
        y1 = c[..., 0]
        panels = max(1, int(math.ceil(
            np.max(np.abs(y1)) / lexicon.LEGENDRE_PANEL))) if y1.size else 1
        fractions = ((np.arange(panels)[:, None] +
                      0.5 * (_GL_NODES[None, :] + 1.0)).ravel() / panels)
        weights = np.tile(_GL_WEIGHTS, panels) / (2.0 * panels)
        s = y1[..., None] * fractions
        pts = np.stack([s, np.broadcast_to(c[..., 1:2], s.shape)], axis=-1)
        values = func(pts)
        return y1 * np.sum(values * weights, axis=-1)

    @property
    def base_radius(self):
        """Start of the radial integrals around a singular core."""
        return self.hole_radius + self.length_scale

    def _RadialIntegral(self, c, func):
        """int_{base_radius}^{|c|} func(s e) ds along the ray through c."""
        rho = np.hypot(c[..., 0], c[..., 1])
        e = c / rho[..., None]
        base = self.base_radius
        span = rho - base
        panels = max(1, int(math.ceil(
            np.max(np.abs(span)) / lexicon.LEGENDRE_PANEL))) if rho.size else 1
        fractions = ((np.arange(panels)[:, None] +
                      0.5 * (_GL_NODES[None, :] + 1.0)).ravel() / panels)
        weights = np.tile(_GL_WEIGHTS, panels) / (2.0 * panels)
        s = base + span[..., None] * fractions
        pts = s[..., None] * e[..., None, :]
        return span * np.sum(func(pts) * weights, axis=-1)

    def _AngularDensity(self, pts):
        w, dw = self._Density(pts)
        s = np.hypot(pts[..., 0], pts[..., 1])
        tangential = -pts[..., 1] * dw[..., 0] + pts[..., 0] * dw[..., 1]
        return w * s, tangential * s

    def Primitive(self, c):
        """Q with dQ ^ dc2 the area form; Q dtheta around a singular core."""
        if self.singular_core:
            return self._RadialIntegral(
                c, lambda pts: self._AngularDensity(pts)[0])
        return self._LineIntegral(c, lambda pts: self._Density(pts)[0])

    def PrimitiveGradient(self, c):
        w, _ = self._Density(c)
        if self.singular_core:
            rho = np.hypot(c[..., 0], c[..., 1])
            radial = w * rho
            angular = self._RadialIntegral(
                c, lambda pts: self._AngularDensity(pts)[1])
            e = c / rho[..., None]
            perp = np.stack([-e[..., 1], e[..., 0]], axis=-1)
            return (radial[..., None] * e +
                    (angular / rho)[..., None] * perp)
        side = self._LineIntegral(c, lambda pts: self._Density(pts)[1][..., 1])
        return np.stack([w, side], axis=-1)

    def PrimitiveHessian(self, c):
        if self.singular_core:
            return self._GradientDifferences(c)
        _, dw = self._Density(c)
        step = 1e-4 * (1.0 + np.abs(c[..., 1]))
        shift = np.zeros(c.shape)
        shift[..., 1] = step
        plus = self._LineIntegral(
            c + shift, lambda pts: self._Density(pts)[1][..., 1])
        minus = self._LineIntegral(
            c - shift, lambda pts: self._Density(pts)[1][..., 1])
        result = np.empty(c.shape + (2,))
        result[..., 0, 0] = dw[..., 0]
        result[..., 0, 1] = result[..., 1, 0] = dw[..., 1]
        result[..., 1, 1] = (plus - minus) / (2 * step)
        return result

    def _GradientDifferences(self, c):
        step = 1e-5 * (1.0 + np.hypot(c[..., 0], c[..., 1]))
        result = np.empty(c.shape + (2,))
        for k in range(2):
            shift = np.zeros(c.shape)
            shift[..., k] = step
            result[..., k, :] = (self.PrimitiveGradient(c + shift) -
                                 self.PrimitiveGradient(c - shift)) / (
                                     2 * step[..., None])
        return 0.5 * (result + np.swapaxes(result, -1, -2))

    def Increment(self, ca, cb):
        if self.singular_core:
            return _angle_increment(ca, cb)
        delta = cb[..., 1] - ca[..., 1]
        zero = np.zeros_like(delta)
        one = np.ones_like(delta)
        return (delta, np.stack([zero, -one], axis=-1),
                np.stack([zero, one], axis=-1))

    def IncrementHessian(self, ca, cb):
        if self.singular_core:
            result = np.zeros(ca.shape[:-1] + (4, 4))
            result[..., :2, :2] = -_angle_hessian(ca)
            result[..., 2:, 2:] = _angle_hessian(cb)
            return result
        return np.zeros(ca.shape[:-1] + (4, 4))

    def SweepCoordinate(self, c):
        if self.singular_core:
            return np.arctan2(c[..., 1], c[..., 0])
        return c[..., 1]

    def PlanarImage(self, c):
        return c

    def MassIntegrand(self, radius):
        count = lexicon.CIRCLE_NODES
        phi = 2 * math.pi * np.arange(count) / count
        y = radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        grad = self.Height(y)[1]
        return float(np.mean(np.sum(y * grad, axis=-1)))

    def EndGraph(self):
        return self

    def ExteriorSample(self, inner=None, outer=None, count=2001):
        if inner is None:
            inner = 2 * self.hole_radius if self.hole_radius else 0.0
        outer = inner + 20 * self.length_scale if outer is None else outer
        radii = np.linspace(max(inner, 1e-6), outer, max(count // 64, 8))
        phi = 2 * math.pi * np.arange(64) / 64
        rho, ang = np.meshgrid(radii, phi, indexing="ij")
        return np.stack([rho * np.cos(ang), rho * np.sin(ang)],
                        axis=-1).reshape(-1, 2)

    def CircleAt(self, radius, count=lexicon.CIRCLE_NODES):
        phi = 2 * math.pi * np.arange(count) / count
        c = radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        return self.Point(c)


class Plane(GraphSurface):
    """The flat plane {x3 = height}."""
    kind = lexicon.SURFACE_PLANE

    def __init__(self, height=0.0):
        super(Plane, self).__init__(offset=height)

    def Project(self, p):
        p = np.asarray(p, dtype=float)
        c = p[..., :2].copy()
        return self.Point(c), c

    def Primitive(self, c):
        return c[..., 0].copy()

    def PrimitiveGradient(self, c):
        result = np.zeros(c.shape)
        result[..., 0] = 1.0
        return result

    def PrimitiveHessian(self, c):
        return np.zeros(c.shape + (2,))


class RevolutionEnd(object):
    """The upper end of a surface of revolution written as a graph."""

    def __init__(self, profile):
        self.profile = profile
        self.mass = profile.top_mass

    def Height(self, y):
        y = np.asarray(y, dtype=float)
        rho = np.hypot(y[..., 0], y[..., 1])
        shape, flat = _as_flat(rho)
        u = np.array([self.profile.TopHeight(r) for r in flat]).reshape(shape)
        _, dr, ddr = self.profile.Evaluate(u)
        t1 = 1.0 / dr
        t2 = -ddr / dr ** 3
        grad, hess = _radial_derivatives(y, rho, t1, t2)
        return u, grad, hess


class ScaledSurface(SupportSurface):
    """The image of a support surface under x -> factor * x."""

    def __init__(self, base, factor):
        errors.CHECK(factor > 0, errors.ConfigError(
            "Scale factor must be positive."))
        self.base = base
        self.factor = float(factor)
        self.kind = base.kind
        self.sweep_period = base.sweep_period
        self.singular_core = base.singular_core
        self.chart_period = base.chart_period
        self.core_radius = base.core_radius * self.factor
        self.length_scale = base.length_scale * self.factor

    @property
    def mass(self):
        return self.factor * self.base.mass

    def Point(self, c):
        return self.factor * self.base.Point(c)

    def Frame(self, c):
        return tuple(self.factor * x for x in self.base.Frame(c))

    def SecondDerivatives(self, c):
        return tuple(self.factor * x for x in self.base.SecondDerivatives(c))

    def Normal(self, c):
        return self.base.Normal(c)

    def MeanCurvature(self, c):
        return self.base.MeanCurvature(c) / self.factor

    def ChartOf(self, x):
        return self.base.ChartOf(np.asarray(x) / self.factor)

    def Project(self, p):
        foot, c = self.base.Project(np.asarray(p) / self.factor)
        return self.factor * foot, c

    def Primitive(self, c):
        return self.factor ** 2 * self.base.Primitive(c)

    def PrimitiveGradient(self, c):
        return self.factor ** 2 * self.base.PrimitiveGradient(c)

    def PrimitiveHessian(self, c):
        return self.factor ** 2 * self.base.PrimitiveHessian(c)

    def Increment(self, ca, cb):
        return self.base.Increment(ca, cb)

    def IncrementHessian(self, ca, cb):
        return self.base.IncrementHessian(ca, cb)

    def SweepCoordinate(self, c):
        return self.base.SweepCoordinate(c)

    def PlanarImage(self, c):
        return self.base.PlanarImage(c)

    def MassIntegrand(self, radius):
        return self.factor * self.base.MassIntegrand(radius / self.factor)

    def EndGraph(self):
        return ScaledEnd(self.base.EndGraph(), self.factor)

    def ExteriorSample(self, inner=None, outer=None, count=2001):
        return self.base.ExteriorSample(
            None if inner is None else inner / self.factor,
            None if outer is None else outer / self.factor, count)

    def CircleAt(self, level, count=lexicon.CIRCLE_NODES):
        return self.factor * self.base.CircleAt(level / self.factor, count)


class ScaledEnd(object):
    def __init__(self, base, factor):
        self.base = base
        self.factor = factor
        self.mass = factor * base.mass

    def Height(self, y):
        psi, grad, hess = self.base.Height(np.asarray(y) / self.factor)
        return self.factor * psi, grad, hess / self.factor


# Operations.

def eval_geometry(surface, p):
    """Foot point, normal, shape operator and mean curvature near p."""
    foot, c = surface.Project(p)
    frame, h, mean = surface.Shape(c)
    return GeometryEval(foot=foot, chart=c, normal=surface.Normal(c),
                        frame=frame, shape=h, mean_curvature=mean)


MassEstimate = collections.namedtuple(
    "MassEstimate",
    "mass residual exponent coefficient radii values warnings")


def exterior_mass(surface, radii):
    """Extrapolates I(r) = (2 pi r)^-1 int y.grad psi to r -> infinity."""
    radii = np.array(sorted(float(r) for r in radii))
    if len(radii) < 3:
        raise errors.DomainError("Exterior mass needs at least three radii.")
    values = np.array([surface.MassIntegrand(r) for r in radii])

    warnings = []
    if radii[-1] / radii[0] < lexicon.MASS_MIN_RADIUS_RATIO:
        warnings.append("radii too close (ratio %.3g)" % (
            radii[-1] / radii[0]))
    steps = np.diff(values)
    scale = 1e-12 * (1.0 + np.max(np.abs(values)))
    signs = np.sign(steps[np.abs(steps) > scale])
    if len(signs) and np.any(signs != signs[0]):
        warnings.append("non-monotone I(r)")

    if np.ptp(values) <= scale:
        mass, coefficient, exponent = float(np.mean(values)), 0.0, 1.0
        residual = float(np.ptp(values))
    else:
        lo, hi = lexicon.MASS_EXPONENT_BOUNDS

        def residuals(x):
            return x[0] + x[1] * radii ** (-x[2]) - values

        guess = (values[0] - values[-1]) / (1.0 / radii[0] - 1.0 / radii[-1])
        fit = optimize.least_squares(
            residuals, [values[-1], guess, 1.0],
            bounds=([-np.inf, -np.inf, lo], [np.inf, np.inf, hi]),
            xtol=1e-15, ftol=1e-15, gtol=1e-15)
        mass, coefficient, exponent = (float(x) for x in fit.x)
        residual = float(np.linalg.norm(fit.fun))

    for warning in warnings:
        LOGGER.warning("Exterior mass extrapolation: %s", warning)
    return MassEstimate(mass=mass, residual=residual, exponent=exponent,
                        coefficient=coefficient, radii=tuple(radii),
                        values=tuple(values), warnings=tuple(warnings))


LateralRegion = collections.namedtuple(
    "LateralRegion", "reference current offset")
LateralRegion.__new__.__defaults__ = (None, None, 0.0)


def _winding(surface, chart):
    if surface.chart_period is None:
        return 0
    coord = surface.SweepCoordinate(chart)
    steps = np.diff(np.append(coord, coord[0]))
    steps = (steps + math.pi) % (2 * math.pi) - math.pi
    return int(round(np.sum(steps) / surface.chart_period))


def loop_lateral(surface, chart, rule=RULE_CHORDAL):
    """Signed lateral primitive Q of one closed loop given in chart points."""
    chart = np.asarray(chart, dtype=float)
    primitive = surface.Primitive(chart)
    if rule == RULE_CHORDAL:
        nxt = np.roll(chart, -1, axis=0)
        increment = surface.Increment(chart, nxt)[0]
        return float(np.sum(
            0.5 * (primitive + np.roll(primitive, -1)) * increment))

    n = len(chart)
    coord = surface.SweepCoordinate(chart)
    if surface.chart_period is not None:
        coord = np.unwrap(coord)
        total = _winding(surface, chart) * surface.chart_period
    else:
        total = 0.0
    ramp = total * np.arange(n) / n
    spectrum = np.fft.fft(coord - ramp)
    freq = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        freq[n // 2] = 0
    derivative = np.real(np.fft.ifft(1j * freq * spectrum)) + (
        total / (2 * math.pi))
    return float(np.sum(primitive * derivative) * 2 * math.pi / n)


def _loops_cross(first, second):
    a0 = first
    a1 = np.roll(first, -1, axis=0)
    b0 = second
    b1 = np.roll(second, -1, axis=0)

    def orient(p, q, r):
        return ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) -
                (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))

    d1 = orient(a0[:, None], a1[:, None], b0[None])
    d2 = orient(a0[:, None], a1[:, None], b1[None])
    d3 = orient(b0[None], b1[None], a0[:, None])
    d4 = orient(b0[None], b1[None], a1[:, None])
    return bool(np.any((d1 * d2 < 0) & (d3 * d4 < 0)))


def lateral_area(surface, region, rule=RULE_SPECTRAL):
    """Band area between the reference and current loops of a region.

    Loops are arrays of points on S sampled at uniform parameter; a missing
    reference loop stands for the chart reference level.
    """
    charts = [None if loop is None else surface.ChartOf(loop)
              for loop in (region.reference, region.current)]
    if charts[0] is not None and charts[1] is not None:
        if _loops_cross(surface.PlanarImage(charts[0]),
                        surface.PlanarImage(charts[1])):
            raise errors.RegionError("Reference and current loops intersect.")
    values = [0.0 if c is None else loop_lateral(surface, c, rule)
              for c in charts]
    return values[1] - values[0]


def enclosed_area(surface, region, rule=RULE_SPECTRAL):
    """|S(Sigma)| = offset + band."""
    return region.offset + lateral_area(surface, region, rule)


def is_plane(surface):
    """True for flat graphs without bumps, at any height and scale."""
    surface = getattr(surface, "base", surface)
    return (getattr(surface, "psi", None) == lexicon.PSI_FLAT and
            not surface.bumps)


def mean_curvature_sign_report(surface, sample=None):
    """Minimum of H(S) over chart sample points (default: the exterior)."""
    if sample is None:
        sample = surface.ExteriorSample()
    values = surface.MeanCurvature(np.asarray(sample, dtype=float))
    minimum = float(np.min(values))
    if minimum < -lexicon.H_SIGN_FLOOR and LOGGER.isEnabledFor(logging.INFO):
        LOGGER.info("Sampled H(S) reaches %g.", minimum)
    return minimum


def decay_rate(surface, radii):
    """Fitted exponent -tau of max |grad psi| ~ r^-tau on the end."""
    end = surface.EndGraph()
    count = 64
    phi = 2 * math.pi * np.arange(count) / count
    slopes = []
    for r in radii:
        y = r * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        slopes.append(np.max(np.linalg.norm(end.Height(y)[1], axis=-1)))
    return float(np.polyfit(np.log(radii), np.log(slopes), 1)[0])


# Construction from configuration.

def _Plane(config):
    return Plane(height=config["surface.offset"])


def _Graph(config):
    psi = config["surface.psi"]
    coefficient = config["surface.coefficient"]
    if psi == lexicon.PSI_CATENOID:
        coefficient = config["surface.mass"]
    return GraphSurface(psi=psi, coefficient=coefficient,
                        offset=config["surface.offset"],
                        bumps=config["surface.bumps"])


def _Axisymmetric(config):
    name = config["surface.profile"]
    factory = registry.PROFILE_MAP.get(name)
    if factory is None:
        raise errors.ConfigError("Unknown profile %r." % name)
    return AxisymmetricSurface(factory(config))


def _CatenoidExtension(config):
    return CatenoidExtension(config["surface.mass"],
                             config["surface.cap_depth"])


registry.SURFACE_KIND_MAP.update({
    lexicon.SURFACE_PLANE: _Plane,
    lexicon.SURFACE_GRAPH: _Graph,
    lexicon.SURFACE_AXISYMMETRIC: _Axisymmetric,
    lexicon.SURFACE_CATENOID_EXTENSION: _CatenoidExtension,
})

registry.PROFILE_MAP.update({
    lexicon.PROFILE_CATENOID: lambda config: CatenoidProfile(
        config["surface.mass"], config["surface.bumps"]),
    lexicon.PROFILE_PRESCRIBED_CURVATURE: lambda config: (
        PrescribedCurvatureProfile(config["surface.mass"],
                                   config["surface.curvature_bumps"])),
})


def surface_from_config(config):
    kind = config["surface.kind"]
    factory = registry.SURFACE_KIND_MAP.get(kind)
    if factory is None:
        raise errors.ConfigError("Unknown surface kind %r." % kind)
    surface = factory(config)
    scale = config["surface.scale"]
    if scale != 1.0:
        surface = ScaledSurface(surface, scale)
    return surface
