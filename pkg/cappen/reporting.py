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

"""Sweep tables, JSON summaries and verification reports."""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
import collections
import csv
import json
import logging
import math

import numpy as np
import yaml

from cappen import lexicon
from cappen import solver

LOGGER = logging.getLogger("cappen.reporting")


def plain(value):
    """Converts namedtuples, numpy values and tuples for json and yaml."""
    if hasattr(value, "_asdict"):
        return collections.OrderedDict(
            (k, plain(v)) for k, v in value._asdict().items())
    if isinstance(value, collections.OrderedDict):
        return collections.OrderedDict(
            (str(k), plain(v)) for k, v in value.items())
    if isinstance(value, dict):
        return collections.OrderedDict(
            (str(k), plain(v)) for k, v in sorted(value.items()))
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return "%d" % value
    return repr(float(value))


def write_sweep_csv(records, fd):
    """One row per SweepRecord under the fixed header, LF line endings.

    fd must be opened with newline="".
    """
    writer = csv.writer(fd, lineterminator="\n")
    writer.writerow(lexicon.SWEEP_COLUMNS)
    for record in records:
        writer.writerow([format_value(v) for v in record.AsRow()])


def read_sweep_csv(fd):
    """The rows of a sweep table as dicts of floats (None for blanks)."""
    result = []
    for row in csv.DictReader(fd):
        result.append(dict((k, float(v) if v != "" else None)
                           for k, v in row.items()))
    return result


def positive_mass_check(mass, h_min, plane=False):
    """m >= 0 with equality only for the plane, whenever sampled H(S) >= 0."""
    if h_min < -lexicon.H_SIGN_FLOOR:
        return collections.OrderedDict([
            ("applies", False), ("status", None), ("mass", mass)])
    floor = lexicon.POSITIVE_MASS_FLOOR
    if plane:
        passed = abs(mass) <= floor
    else:
        passed = mass > floor
    return collections.OrderedDict([
        ("applies", True),
        ("status", lexicon.PASS if passed else lexicon.FAIL),
        ("mass", mass)])


def penrose_margins(mass, disk_area):
    """The sharp margin m - sqrt(|D|/pi) and the weaker m - sqrt(|D|/2pi)."""
    return (mass - math.sqrt(disk_area / math.pi),
            mass - math.sqrt(disk_area / (2 * math.pi)))


def sweep_summary(records, mass, h_min, profile_checks=(), partial=False,
                  plane=False, slack=lexicon.MONOTONE_SLACK):
    """The summary of a sweep whose first record is the outermost disk.

    mass is a MassEstimate, h_min the least sampled H(S) on the exterior.
    """
    disk_area = records[0].area if records else 0.0
    mf = [r.mf for r in records]
    ok, drop = solver.monotone_mf(records, slack)
    sharp, weak = penrose_margins(mass.mass, disk_area)
    violated = h_min < -lexicon.H_SIGN_FLOOR
    if violated and not ok:
        LOGGER.warning("m_f decreases by %.3g but H(S) reaches %.3g: the "
                       "mean convexity hypothesis fails.", drop, h_min)

    summary = collections.OrderedDict()
    summary["partial"] = partial
    summary["steps"] = len(records)
    summary["t_max"] = records[-1].t if records else None
    summary["disk_area"] = disk_area
    summary["mf0"] = math.sqrt(disk_area / math.pi)
    summary["max_mf"] = max(mf) if mf else None
    summary["final_mf"] = mf[-1] if mf else None
    summary["mass"] = mass.mass
    summary["mass_residual"] = mass.residual
    summary["mass_warnings"] = list(mass.warnings)
    summary["penrose_margin"] = sharp
    summary["weak_margin"] = weak
    summary["monotonicity"] = lexicon.PASS if ok else lexicon.FAIL
    summary["largest_drop"] = drop
    summary["max_mf_within_mass"] = bool(
        mf and max(mf) <= mass.mass + lexicon.MF_MASS_SLACK)
    summary["min_mean_curvature"] = h_min
    summary["hypothesis_violated"] = violated
    summary["positive_mass"] = positive_mass_check(mass.mass, h_min, plane)
    summary["flagged"] = [collections.OrderedDict(
        [("t", r.t), ("flags", list(r.flags))]) for r in records if r.flags]
    summary["profile_checks"] = [plain(c) for c in profile_checks]
    return plain(summary)


def mass_summary(estimate, h_min, plane=False):
    summary = collections.OrderedDict()
    summary["mass"] = estimate.mass
    summary["residual"] = estimate.residual
    summary["exponent"] = estimate.exponent
    summary["radii"] = list(estimate.radii)
    summary["values"] = list(estimate.values)
    summary["warnings"] = list(estimate.warnings)
    summary["positive_mass"] = positive_mass_check(estimate.mass, h_min,
                                                   plane)
    return plain(summary)


def flux_summary(report, ends, homotopy):
    """The characterization report with per-end asymptotics.

    homotopy holds one HomotopyCheck per end. Fluxes through homologous
    loops only agree for minimal ends.
    """
    summary = collections.OrderedDict()
    summary["verdict"] = report.verdict
    summary["largest_flux"] = report.largest_flux
    summary["neck_size"] = report.neck_size
    summary["neck_size_is_upper_bound"] = not report.plane
    summary["plane"] = report.plane
    summary["mass"] = report.mass
    summary["disk_area"] = report.disk_area
    summary["penrose_margin"] = report.penrose_margin
    summary["weak_margin"] = report.weak_margin
    summary["ends"] = []
    for end, flux, check in zip(ends, report.fluxes, homotopy):
        summary["ends"].append(collections.OrderedDict([
            ("index", end.index), ("side", end.side), ("a", end.a),
            ("b", end.b), ("fit_residual", end.residual), ("flux", flux),
            ("homotopy_deviation", check.deviation),
            ("homotopy_passed", check.passed)]))
    return plain(summary)


def write_json(payload, fd):
    fd.write(json.dumps(plain(payload), indent=2, sort_keys=False,
                        ensure_ascii=False))
    fd.write("\n")


class VerificationListener(object):
    """Collects the outcome of every verification check."""

    def __init__(self):
        self.results = []

    def onCheck(self, name, passed, value, tolerance, orders=None):
        entry = collections.OrderedDict([
            ("name", name),
            ("status", lexicon.PASS if passed else lexicon.FAIL),
            ("value", value), ("tolerance", tolerance)])
        if orders:
            entry["orders"] = orders
        self.results.append(plain(entry))
        if not passed:
            LOGGER.warning("Check %s failed: %r (tolerance %r)", name, value,
                           tolerance)

    def onCheckResult(self, result, orders=None):
        self.onCheck(result.name, result.passed, result.value,
                     result.tolerance, orders)

    def onSkip(self, name, reason):
        self.results.append(collections.OrderedDict([
            ("name", name), ("status", "SKIP"), ("reason", reason)]))

    @property
    def passed(self):
        return all(r["status"] != lexicon.FAIL for r in self.results)

    def Lines(self):
        lines = []
        for r in self.results:
            if r["status"] == "SKIP":
                lines.append("SKIP %s (%s)" % (r["name"], r["reason"]))
            else:
                lines.append("%s %s = %r (tolerance %r)" % (
                    r["status"], r["name"], r["value"], r["tolerance"]))
        return lines

    def Dump(self, fd, **extra):
        report = collections.OrderedDict()
        report["status"] = lexicon.PASS if self.passed else lexicon.FAIL
        for key in sorted(extra):
            report[key] = plain(extra[key])
        report["checks"] = [dict(r) for r in self.results]
        yaml.safe_dump(_dicts(report), fd, default_flow_style=False,
                       sort_keys=False)


def _dicts(value):
    """yaml.safe_dump does not represent OrderedDict."""
    if isinstance(value, dict):
        return dict((k, _dicts(v)) for k, v in value.items())
    if isinstance(value, list):
        return [_dicts(v) for v in value]
    return value
