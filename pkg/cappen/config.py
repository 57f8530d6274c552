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

"""Experiment configuration: flat key = value properties with dotted keys."""
from __future__ import unicode_literals

from builtins import object
import io
import logging

from cappen import errors
from cappen import lexicon

LOGGER = logging.getLogger("cappen.config")

_TRUE = ("true", "yes", "on", "1")
_FALSE = ("false", "no", "off", "0")


def _Float(text):
    return float(text)


def _OptionalFloat(text):
    if text.lower() in ("", "none"):
        return None
    return float(text)


def _Int(text):
    return int(text)


def _Bool(text):
    lowered = text.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError("not a boolean: %r" % text)


def _Str(text):
    return text


def _FloatList(text):
    return tuple(float(x) for x in text.replace(",", " ").split())


def _Tuples(text):
    """'1 2 3; 4 5 6' -> ((1.0, 2.0, 3.0), (4.0, 5.0, 6.0))."""
    items = [item.strip() for item in text.split(";")]
    return tuple(tuple(float(x) for x in item.split()) for item in items
                 if item)


def _Choice(*choices):
    def check(value):
        return value in choices
    check.__doc__ = "one of %s" % ", ".join(choices)
    return check


def _Positive(value):
    return value > 0


def _NonNegative(value):
    return value >= 0


def _PositiveOrNone(value):
    return value is None or value > 0


def _OpenUnit(value):
    return 0 < value < 1


def _AtLeast(lowest):
    def check(value):
        return value >= lowest
    check.__doc__ = ">= %s" % lowest
    return check


def _Always(value):
    return True


def _AllPositive(values):
    return all(v > 0 for v in values)


# key: (parser, default, validator)
SCHEMA = {
    "surface.kind": (_Str, lexicon.SURFACE_CATENOID_EXTENSION, _Choice(
        lexicon.SURFACE_PLANE, lexicon.SURFACE_GRAPH,
        lexicon.SURFACE_AXISYMMETRIC, lexicon.SURFACE_CATENOID_EXTENSION)),
    "surface.mass": (_Float, 1.0, _Positive),
    "surface.cap_depth": (_OptionalFloat, None, _PositiveOrNone),
    "surface.profile": (_Str, lexicon.PROFILE_CATENOID, _Choice(
        lexicon.PROFILE_CATENOID, lexicon.PROFILE_PRESCRIBED_CURVATURE)),
    "surface.bumps": (_Tuples, (), _Always),
    "surface.curvature_bumps": (_Tuples, (), _Always),
    "surface.psi": (_Str, lexicon.PSI_FLAT, _Choice(
        lexicon.PSI_FLAT, lexicon.PSI_LOG, lexicon.PSI_CATENOID)),
    "surface.coefficient": (_Float, 1.0, _Always),
    "surface.offset": (_Float, 0.0, _Always),
    "surface.scale": (_Float, 1.0, _Positive),

    "mesh.boundary_vertices": (_Int, 64, _AtLeast(8)),
    "mesh.rings": (_Int, 12, _AtLeast(1)),
    "mesh.edge_length": (_OptionalFloat, None, _PositiveOrNone),

    "solver.tol_grad": (_Float, lexicon.DEFAULT_TOL_GRAD, _Positive),
    "solver.tol_angle": (_Float, lexicon.DEFAULT_TOL_ANGLE, _Positive),
    "solver.tol_energy": (_Float, lexicon.DEFAULT_TOL_ENERGY, _Positive),
    "solver.max_iters": (_Int, lexicon.DEFAULT_MAX_ITERS, _AtLeast(1)),
    "solver.shrink": (_Float, lexicon.DEFAULT_SHRINK, _OpenUnit),
    "solver.armijo": (_Float, lexicon.DEFAULT_ARMIJO, _OpenUnit),
    "solver.remesh": (_Bool, False, _Always),
    "solver.remesh_every": (_Int, 25, _AtLeast(1)),
    "solver.degeneracy_floor": (_Float, lexicon.DEFAULT_QUALITY_FLOOR,
                                _Positive),
    "solver.collapse_fraction": (_Float, lexicon.DEFAULT_COLLAPSE_FRACTION,
                                 _OpenUnit),
    "solver.branch_check": (_Bool, False, _Always),
    "solver.seed_height": (_OptionalFloat, None, _Always),

    "sweep.t_max": (_Float, lexicon.DEFAULT_T_MAX, _Positive),
    "sweep.t_step": (_Float, lexicon.DEFAULT_T_STEP, _Positive),

    "mass.radii": (_FloatList, (20.0, 40.0, 80.0), _AllPositive),

    "flux.radius": (_Float, 50.0, _Positive),
    "flux.second_radius": (_Float, 100.0, _Positive),
    "flux.bottom_mass": (_OptionalFloat, None, _PositiveOrNone),
    "flux.ends": (_Tuples, (), _Always),

    "verify.t": (_Float, 1.0, _NonNegative),
    "verify.directions": (_Int, 5, _AtLeast(1)),

    "output.dir": (_Str, ".", _Always),
    "output.plots": (_Bool, False, _Always),

    "run.seed": (_Int, 0, _AtLeast(0)),
}


def parse_properties(text):
    """Parses key = value lines; # starts a comment."""
    result = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise errors.ConfigError("Line %d: expected key = value." % number)
        key, value = line.split("=", 1)
        result[key.strip()] = value.strip()
    return result


class ExperimentConfig(object):
    """Validated experiment settings, looked up by dotted key."""

    def __init__(self, values=None, source="<defaults>"):
        self.source = source
        self._values = dict((k, v[1]) for k, v in SCHEMA.items())
        for key, value in (values or {}).items():
            self.Set(key, value)

    def Set(self, key, value):
        try:
            parser, _, validator = SCHEMA[key]
        except KeyError:
            raise errors.ConfigError("%s: unknown key %r." % (
                self.source, key))
        if isinstance(value, str):
            try:
                value = parser(value)
            except ValueError as e:
                raise errors.ConfigError("%s: bad value for %s: %s" % (
                    self.source, key, e))
        if not validator(value):
            raise errors.ConfigError("%s: invalid value %r for %s (%s)." % (
                self.source, value, key,
                validator.__doc__ or validator.__name__.strip("_")))
        self._values[key] = value

    def __getitem__(self, key):
        return self._values[key]

    def AsDict(self):
        return dict(self._values)

    def SolverOptions(self):
        from cappen import solver
        return solver.SolverOptions(
            tol_grad=self["solver.tol_grad"],
            tol_angle=self["solver.tol_angle"],
            max_iters=self["solver.max_iters"],
            shrink=self["solver.shrink"],
            armijo=self["solver.armijo"],
            remesh=self["solver.remesh"],
            remesh_every=self["solver.remesh_every"],
            edge_length=self["mesh.edge_length"],
            degeneracy_floor=self["solver.degeneracy_floor"],
            collapse_fraction=self["solver.collapse_fraction"],
            branch_check=self["solver.branch_check"],
            seed=self["run.seed"],
            tol_energy=self["solver.tol_energy"])

    def TGrid(self):
        """0, t_step, 2 t_step, ... up to and including t_max."""
        step = self["sweep.t_step"]
        count = int(round(self["sweep.t_max"] / step))
        return [round(i * step, 12) for i in range(count + 1)]

    @classmethod
    def FromText(cls, text, source="<text>"):
        return cls(parse_properties(text), source=source)

    @classmethod
    def FromFile(cls, path):
        with io.open(path, "r", encoding="utf-8") as fd:
            return cls.FromText(fd.read(), source=path)
