from __future__ import division
from __future__ import unicode_literals
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

import collections
import io
import json
import math
import unittest

import numpy as np
import yaml

from cappen import flux_neck
from cappen import lexicon
from cappen import reporting
from cappen import solver
from cappen import stability
from cappen import support_surface


def record(t, area, lateral_area, mf, kappa=None, flags=()):
    return solver.SweepRecord(
        t=t, area=area, lateral_area=lateral_area, mf=mf, residual=1e-4,
        grad_norm=1e-7, kappa=kappa, components=1, min_radius=1.0,
        iters=12, flags=flags)


def estimate(mass=1.0):
    return support_surface.MassEstimate(
        mass=mass, residual=1e-6, exponent=1.0, coefficient=0.5,
        radii=(20.0, 40.0, 80.0), values=(1.01, 1.005, 1.0025), warnings=())


RECORDS = [
    record(0.0, math.pi, 0.0, 1.0, kappa=0.5),
    record(0.5, 4.0, 1.0, 0.99),
    record(1.0, 5.0, 2.0, 0.995, flags=("not_disks",)),
]


class PlainTest(unittest.TestCase):
    def testConversions(self):
        value = reporting.plain({
            "b": np.float64(1.5), "a": (np.int64(2), np.array([1.0, 2.0])),
            "c": stability.CheckResult("x", np.bool_(True), 0.1, 0.2)})
        self.assertEqual(list(value), ["a", "b", "c"])
        self.assertEqual(value["a"], [2, [1.0, 2.0]])
        self.assertIsInstance(value["b"], float)
        self.assertEqual(value["c"]["name"], "x")
        self.assertIs(value["c"]["passed"], True)
        json.dumps(value)

    def testOrderedDictKeepsOrder(self):
        value = reporting.plain(collections.OrderedDict([("z", 1), ("a", 2)]))
        self.assertEqual(list(value), ["z", "a"])

    def testFormatValue(self):
        self.assertEqual(reporting.format_value(None), "")
        self.assertEqual(reporting.format_value(True), "true")
        self.assertEqual(reporting.format_value(np.int64(3)), "3")
        self.assertEqual(reporting.format_value(0.1), "0.1")


class SweepCsvTest(unittest.TestCase):
    def testHeaderAndRows(self):
        fd = io.StringIO(newline="")
        reporting.write_sweep_csv(RECORDS, fd)
        text = fd.getvalue()
        lines = text.split("\n")
        self.assertEqual(lines[0], ",".join(lexicon.SWEEP_COLUMNS))
        self.assertNotIn("\r", text)
        self.assertEqual(len(lines), len(RECORDS) + 2)
        self.assertEqual(lines[-1], "")

        rows = reporting.read_sweep_csv(io.StringIO(text, newline=""))
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[0]["kappa"], 0.5)
        self.assertIsNone(rows[1]["kappa"])
        self.assertEqual(rows[2]["iters"], 12.0)
        self.assertEqual(rows[0]["area"], math.pi)

    def testEmptySweep(self):
        fd = io.StringIO(newline="")
        reporting.write_sweep_csv([], fd)
        self.assertEqual(fd.getvalue(),
                         ",".join(lexicon.SWEEP_COLUMNS) + "\n")


class SummaryTest(unittest.TestCase):
    def testPositiveMass(self):
        check = reporting.positive_mass_check(1.0, 0.0)
        self.assertTrue(check["applies"])
        self.assertEqual(check["status"], lexicon.PASS)

        check = reporting.positive_mass_check(0.0, 0.0, plane=True)
        self.assertEqual(check["status"], lexicon.PASS)
        check = reporting.positive_mass_check(0.0, 0.0)
        self.assertEqual(check["status"], lexicon.FAIL)

        check = reporting.positive_mass_check(-1.0, -0.5)
        self.assertFalse(check["applies"])
        self.assertIsNone(check["status"])

    def testPenroseMargins(self):
        sharp, weak = reporting.penrose_margins(1.0, math.pi)
        self.assertAlmostEqual(sharp, 0.0, 15)
        self.assertAlmostEqual(weak, 1.0 - math.sqrt(0.5), 15)

    def testSweepSummary(self):
        summary = reporting.sweep_summary(RECORDS, estimate(), 0.0)
        self.assertEqual(summary["steps"], 3)
        self.assertEqual(summary["t_max"], 1.0)
        self.assertAlmostEqual(summary["mf0"], 1.0, 15)
        self.assertEqual(summary["max_mf"], 1.0)
        self.assertEqual(summary["final_mf"], 0.995)
        self.assertAlmostEqual(summary["penrose_margin"], 0.0, 15)
        self.assertEqual(summary["monotonicity"], lexicon.FAIL)
        self.assertAlmostEqual(summary["largest_drop"], 0.01, 12)
        self.assertTrue(summary["max_mf_within_mass"])
        self.assertFalse(summary["hypothesis_violated"])
        self.assertEqual(summary["flagged"],
                         [{"t": 1.0, "flags": ["not_disks"]}])
        json.dumps(summary)

    def testSweepSummaryWithSlack(self):
        summary = reporting.sweep_summary(RECORDS, estimate(), 0.0,
                                          slack=0.02)
        self.assertEqual(summary["monotonicity"], lexicon.PASS)

    def testHypothesisViolated(self):
        summary = reporting.sweep_summary(RECORDS, estimate(), -0.3,
                                          partial=True)
        self.assertTrue(summary["partial"])
        self.assertTrue(summary["hypothesis_violated"])
        self.assertFalse(summary["positive_mass"]["applies"])

    def testMassSummary(self):
        summary = reporting.mass_summary(estimate(2.0), 0.1)
        self.assertEqual(summary["mass"], 2.0)
        self.assertEqual(summary["radii"], [20.0, 40.0, 80.0])
        self.assertEqual(summary["positive_mass"]["status"], lexicon.PASS)

    def testFluxSummary(self):
        report = flux_neck.CharacterizationReport(
            largest_flux=2 * math.pi, neck_size=2 * math.pi, verdict=(
                lexicon.VERDICT_CATENOID_OR_PLANE), mass=1.0,
            disk_area=math.pi, penrose_margin=0.0, weak_margin=0.3,
            fluxes=[(0.0, 0.0, 2 * math.pi)], plane=False)
        ends = [flux_neck.EndDescriptor(index=0, a=1.0, b=0.0, residual=0.0,
                                        radius=50.0)]
        homotopy = [flux_neck.HomotopyCheck(deviation=0.0, tolerance=1e-9,
                                            passed=True)]
        summary = reporting.flux_summary(report, ends, homotopy)
        self.assertTrue(summary["neck_size_is_upper_bound"])
        self.assertEqual(summary["ends"][0]["side"], flux_neck.SIDE_TOP)
        self.assertEqual(summary["ends"][0]["flux"], [0.0, 0.0, 2 * math.pi])
        self.assertTrue(summary["ends"][0]["homotopy_passed"])

        fd = io.StringIO()
        reporting.write_json(summary, fd)
        self.assertEqual(json.loads(fd.getvalue())["verdict"],
                         lexicon.VERDICT_CATENOID_OR_PLANE)


class VerificationListenerTest(unittest.TestCase):
    def testCollectsChecks(self):
        listener = reporting.VerificationListener()
        listener.onCheck("residual", True, np.float64(1e-10), 1e-9,
                         orders={"area_first": 2.0})
        listener.onSkip("oracle_agreement", "not a surface of revolution")
        self.assertTrue(listener.passed)

        listener.onCheckResult(stability.CheckResult("ratio", False, 0.9,
                                                     0.99))
        self.assertFalse(listener.passed)

        lines = listener.Lines()
        self.assertTrue(lines[0].startswith("PASS residual"))
        self.assertTrue(lines[1].startswith("SKIP oracle_agreement"))
        self.assertTrue(lines[2].startswith("FAIL ratio"))

        fd = io.StringIO()
        listener.Dump(fd, t=1.0)
        report = yaml.safe_load(fd.getvalue())
        self.assertEqual(report["status"], lexicon.FAIL)
        self.assertEqual(report["t"], 1.0)
        self.assertEqual(report["checks"][0]["orders"], {"area_first": 2.0})
        self.assertEqual(report["checks"][1]["status"], "SKIP")


if __name__ == '__main__':
    unittest.main()
