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

import math
import unittest

from cappen import axisym_oracle
from cappen import errors
from cappen import geom_mesh
from cappen import lexicon
from cappen import solver
from cappen import support_surface


class CatenoidExactTest(unittest.TestCase):
    def testUnitCatenoid(self):
        q = axisym_oracle.catenoid_exact(1.0, 1.0)
        self.assertAlmostEqual(q.disk_area, 7.4804, 4)
        self.assertAlmostEqual(q.band_area, 8.8387, 3)
        self.assertEqual(q.mf, 1.0)
        self.assertAlmostEqual(q.contact_cosine, -math.tanh(1.0), 15)
        self.assertEqual(q.Recompute(), q)

    def testNeck(self):
        q = axisym_oracle.catenoid_exact(1.0, 0.0)
        self.assertAlmostEqual(q.disk_area, math.pi, 14)
        self.assertEqual(q.band_area, 0.0)
        self.assertEqual(q.contact_cosine, 0.0)

    def testScaling(self):
        small = axisym_oracle.catenoid_exact(1.0, 1.0)
        large = axisym_oracle.catenoid_exact(2.0, 2.0)
        self.assertAlmostEqual(large.radius, 2 * small.radius, 12)
        self.assertAlmostEqual(large.disk_area, 4 * small.disk_area, 12)
        self.assertAlmostEqual(large.band_area, 4 * small.band_area, 12)
        self.assertAlmostEqual(large.contact_cosine, small.contact_cosine, 15)
        self.assertEqual(large.mf, 2.0)

    def testProfileSlopeIsTanh(self):
        h = 1e-5
        for m in (1.0, 2.0):
            for t in (0.3, 1.0, 2.5):
                before = axisym_oracle.catenoid_exact(m, t - h)
                after = axisym_oracle.catenoid_exact(m, t + h)
                slope = ((after.disk_area - before.disk_area) /
                         (after.band_area - before.band_area))
                self.assertLess(abs(slope - math.tanh(t / m)), 1e-8)

                q = axisym_oracle.catenoid_exact(m, t)
                convexity = q.disk_area * (1 - slope ** 2)
                self.assertLess(abs(convexity - q.convexity) / q.convexity,
                                1e-7)

    def testDomain(self):
        with self.assertRaises(errors.DomainError):
            axisym_oracle.catenoid_exact(0.0, 1.0)
        with self.assertRaises(errors.DomainError):
            axisym_oracle.catenoid_exact(1.0, -0.1)


class AxisymSolveTest(unittest.TestCase):
    def testCatenoidExtension(self):
        support = support_surface.CatenoidExtension(1.0)
        best = axisym_oracle.axisym_solve(support, 1.0)
        self.assertEqual(best.kind, axisym_oracle.CANDIDATE_DISK)
        self.assertAlmostEqual(best.height, 1.0, 10)
        self.assertAlmostEqual(best.radius, math.cosh(1.0), 10)
        self.assertAlmostEqual(best.mf, 1.0, 10)

        region = solver.default_region(support)
        band = axisym_oracle.catenoid_exact(1.0, 1.0).band_area
        self.assertAlmostEqual(best.lateral_area, region.offset + band, 8)
        self.assertAlmostEqual(
            best.energy, best.area - math.tanh(1.0) * best.lateral_area, 12)

    def testScaledMass(self):
        best = axisym_oracle.axisym_solve(
            support_surface.CatenoidExtension(2.0), 0.5)
        self.assertAlmostEqual(best.height, 1.0, 10)
        self.assertAlmostEqual(best.mf, 2.0, 10)

    def testNeckAndCapBulge(self):
        support = support_surface.CatenoidExtension(1.0)
        disks = [c for c in axisym_oracle.axisym_candidates(support, 0.0)
                 if c.kind == axisym_oracle.CANDIDATE_DISK]
        self.assertGreaterEqual(len(disks), 2)
        best = axisym_oracle.axisym_solve(support, 0.0)
        self.assertAlmostEqual(best.height, 0.0, 10)
        self.assertAlmostEqual(best.area, math.pi, 10)
        # The widest section of the cap is the other minimal disk.
        self.assertTrue(any(c.height < -1.0 and c.area > best.area
                            for c in disks))

    def testPlaneCollapses(self):
        with self.assertRaises(errors.CollapseError):
            axisym_oracle.axisym_solve(support_surface.Plane(), 0.0)

    def testGraphIsNotAxisymmetric(self):
        graph = support_surface.GraphSurface(psi=lexicon.PSI_LOG,
                                             coefficient=1.0)
        with self.assertRaises(errors.DomainError):
            axisym_oracle.axisym_solve(graph, 0.5)

    def testNoCandidate(self):
        support = support_surface.CatenoidExtension(1.0)
        with self.assertRaises(errors.NoAxisymmetricCandidateError):
            axisym_oracle.axisym_solve(support, 1.0, band_guesses=[],
                                       kinds=(axisym_oracle.CANDIDATE_BAND,))

    def testQuadratureMatchesProfile(self):
        profile = support_surface.CatenoidProfile(1.0)
        area = axisym_oracle.revolution_area(profile, 0.0, 1.0)
        expected = axisym_oracle.catenoid_exact(1.0, 1.0).band_area
        self.assertAlmostEqual(area, expected, 9)
        self.assertEqual(axisym_oracle.revolution_area(profile, 0.5, 0.5), 0)


class OracleAgreementTest(unittest.TestCase):
    def _Agreement(self, support, t):
        region = solver.default_region(support)
        best = axisym_oracle.axisym_solve(support, t, region=region)
        seed = geom_mesh.build_disk(best.radius, boundary_vertices=64,
                                    rings=8, center=(0.0, 0.0, best.height))
        state = solver.minimize(t, seed, support, region=region)
        return best, state, axisym_oracle.oracle_agreement(state, best)

    def testCatenoidExtension(self):
        _, _, agreement = self._Agreement(
            support_surface.CatenoidExtension(1.0), 1.0)
        self.assertTrue(agreement.passed, agreement)

    def testBumpedCatenoid(self):
        support = support_surface.AxisymmetricSurface(
            support_surface.CatenoidProfile(1.0, bumps=[(1.2, 0.5, 0.1)]))
        best, state, agreement = self._Agreement(support, 1.0)
        self.assertEqual(best.kind, axisym_oracle.CANDIDATE_DISK)
        self.assertTrue(agreement.passed, agreement)
        self.assertLess(best.energy, state.energy + 1e-2 * best.area)


if __name__ == '__main__':
    unittest.main()
