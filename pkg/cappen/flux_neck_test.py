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

import numpy as np

from cappen import config
from cappen import errors
from cappen import flux_neck
from cappen import geom_mesh
from cappen import lexicon
from cappen import support_surface

RADII = (25.0, 50.0, 100.0)


def log_end(a=1.0, b=0.0):
    return support_surface.GraphSurface(psi=lexicon.PSI_LOG, coefficient=a,
                                        offset=b)


def catenoid_end(mass=1.0):
    return support_surface.GraphSurface(psi=lexicon.PSI_CATENOID,
                                        coefficient=mass)


class FluxTest(unittest.TestCase):
    def testLogEnd(self):
        end = flux_neck.fit_end(log_end(), (25.0, 50.0))
        self.assertAlmostEqual(end.a, 1.0, 12)
        self.assertAlmostEqual(end.b, 0.0, 12)
        self.assertEqual(end.radius, 50.0)
        vector = flux_neck.flux(end)
        self.assertLess(np.max(np.abs(vector[:2])), 1e-10)
        # The vertical co-normal component is psi_r / sqrt(1 + psi_r^2).
        expected = 2 * math.pi / math.sqrt(1 + 1 / 50.0 ** 2)
        self.assertAlmostEqual(vector[2], expected, 10)
        self.assertLess(abs(vector[2] - 2 * math.pi), 2e-3)

    def testCatenoidEnds(self):
        for graph in (catenoid_end(),
                      support_surface.CatenoidExtension(1.0).EndGraph()):
            end = flux_neck.fit_end(graph, RADII)
            vector = flux_neck.flux(end)
            self.assertTrue(np.allclose(vector, (0, 0, 2 * math.pi),
                                        atol=1e-8))

    def testPlaneEnd(self):
        end = flux_neck.fit_end(support_surface.Plane(0.5), RADII)
        self.assertAlmostEqual(end.a, 0.0, 12)
        self.assertAlmostEqual(end.b, 0.5, 12)
        self.assertTrue(np.allclose(flux_neck.flux(end), 0, atol=1e-10))

    def testBottomEndIsReflected(self):
        end = flux_neck.fit_end(catenoid_end(), RADII,
                                side=flux_neck.SIDE_BOTTOM)
        self.assertAlmostEqual(flux_neck.flux(end)[2], -2 * math.pi, 8)

    def testScaling(self):
        scaled = support_surface.ScaledSurface(
            support_surface.CatenoidExtension(1.0), 2.0)
        end = flux_neck.fit_end(scaled.EndGraph(), RADII)
        self.assertAlmostEqual(flux_neck.flux(end)[2], 4 * math.pi, 7)

    def testOutsideGraphicalRegion(self):
        end = flux_neck.EndDescriptor(index=0, a=1.0, b=0.0, residual=0.0,
                                      radius=0.5, graph=catenoid_end())
        with self.assertRaises(errors.DomainError):
            flux_neck.flux(end)
        with self.assertRaises(errors.DomainError):
            flux_neck.flux(end, support_surface.CatenoidExtension(
                1.0).EndGraph())


class HomotopyTest(unittest.TestCase):
    def setUp(self):
        self.end = flux_neck.fit_end(catenoid_end(), RADII)

    def testCircles(self):
        check = flux_neck.flux_homotopy_check(
            self.end, flux_neck.circle_loop(30.0), flux_neck.circle_loop(60.0))
        self.assertTrue(check.passed, check)
        self.assertLess(check.deviation, 1e-6)

    def testSameLoop(self):
        loop = flux_neck.circle_loop(30.0)
        check = flux_neck.flux_homotopy_check(self.end, loop, loop)
        self.assertEqual(check.deviation, 0.0)

    def testPerturbedLoop(self):
        theta = 2 * math.pi * np.arange(512) / 512
        radius = 20.0 * (1 + 0.1 * np.cos(3 * theta))
        loop = np.stack([radius * np.cos(theta), radius * np.sin(theta)],
                        axis=1)
        check = flux_neck.flux_homotopy_check(
            self.end, loop, flux_neck.circle_loop(40.0))
        self.assertLess(check.deviation, 1e-5)

    def testLogEndIsNotMinimal(self):
        end = flux_neck.fit_end(log_end(), RADII)
        check = flux_neck.flux_homotopy_check(
            end, flux_neck.circle_loop(30.0), flux_neck.circle_loop(60.0))
        expected = 2 * math.pi * (1 / math.sqrt(1 + 1 / 3600.0) -
                                  1 / math.sqrt(1 + 1 / 900.0))
        self.assertAlmostEqual(check.deviation, expected, 9)
        self.assertFalse(check.passed)


class FitEndTest(unittest.TestCase):
    def testCatenoidAsymptotics(self):
        end = flux_neck.fit_end(catenoid_end(2.0), (20.0, 40.0, 80.0))
        self.assertAlmostEqual(end.a, 2.0, 2)
        self.assertLess(abs(end.b), 3e-2)

    def testResidualDecays(self):
        near = flux_neck.fit_end(catenoid_end(), (5.0, 10.0, 20.0))
        far = flux_neck.fit_end(catenoid_end(), (40.0, 80.0, 160.0))
        self.assertLess(far.residual, near.residual / 10)


class MeshLoopFluxTest(unittest.TestCase):
    def testCatenoidBand(self):
        band = geom_mesh.build_revolution_band(math.cosh, -0.25, 0.25,
                                               rings=16, sectors=128)
        for index, loop in enumerate(band.boundary_loops):
            vector = flux_neck.mesh_loop_flux(band, index)
            sign = np.sign(band.vertices[loop[0], 2])
            self.assertLess(abs(vector[2] / (2 * math.pi) - sign), 1e-2)
            self.assertLess(np.max(np.abs(vector[:2])), 1e-10)

    def testFlatDisk(self):
        vector = flux_neck.mesh_loop_flux(geom_mesh.build_disk())
        self.assertTrue(np.allclose(vector, 0, atol=1e-10))


class NeckSizeTest(unittest.TestCase):
    def testUnitCatenoid(self):
        neck = flux_neck.neck_size(flux_neck.TwoSidedSurface(
            support_surface.CatenoidExtension(1.0)))
        self.assertFalse(neck.plane)
        self.assertLess(abs(neck.gamma / (2 * math.pi) - 1), 5e-3)
        self.assertAlmostEqual(neck.areas[flux_neck.SIDE_TOP],
                               neck.areas[flux_neck.SIDE_BOTTOM], 10)

    def testPlane(self):
        neck = flux_neck.neck_size(
            flux_neck.TwoSidedSurface(support_surface.Plane()))
        self.assertTrue(neck.plane)
        self.assertEqual(neck.gamma, 0.0)

    def testScaling(self):
        neck = flux_neck.neck_size(flux_neck.TwoSidedSurface(
            support_surface.ScaledSurface(
                support_surface.CatenoidExtension(1.0), 2.0)))
        self.assertLess(abs(neck.gamma / (4 * math.pi) - 1), 5e-3)


class CharacterizationTest(unittest.TestCase):
    def testCatenoid(self):
        report = flux_neck.characterization_report(
            flux_neck.TwoSidedSurface(support_surface.CatenoidExtension(1.0)),
            RADII)
        self.assertAlmostEqual(report.largest_flux, 2 * math.pi, 6)
        self.assertLess(abs(report.neck_size / (2 * math.pi) - 1), 5e-3)
        self.assertEqual(report.verdict, lexicon.VERDICT_CATENOID_OR_PLANE)
        self.assertAlmostEqual(report.mass, 1.0, 8)
        self.assertLess(abs(report.penrose_margin), 1e-2)
        self.assertGreater(report.weak_margin, 0.25)
        self.assertEqual(len(report.fluxes), 2)

    def testPlane(self):
        report = flux_neck.characterization_report(
            flux_neck.TwoSidedSurface(support_surface.Plane()), RADII)
        self.assertEqual(report.largest_flux, 0.0)
        self.assertEqual(report.neck_size, 0.0)
        self.assertTrue(report.plane)
        self.assertEqual(report.verdict, lexicon.VERDICT_CATENOID_OR_PLANE)

    def testCatenoidFamily(self):
        for mass in (0.5, 1.0, 2.0):
            report = flux_neck.characterization_report(
                flux_neck.TwoSidedSurface(
                    support_surface.CatenoidExtension(mass)),
                [mass * r for r in RADII])
            self.assertLess(abs(report.largest_flux / report.neck_size - 1),
                            1e-2)

    def testDentedCatenoid(self):
        profile = support_surface.PrescribedCurvatureProfile(
            1.0, bumps=[(1.0, 0.5, 0.3)])
        self.assertGreater(profile.top_mass, 1.1)
        surface = flux_neck.TwoSidedSurface(
            support_surface.AxisymmetricSurface(profile),
            bottom=support_surface.CatenoidExtension(1.0))
        report = flux_neck.characterization_report(surface, RADII)
        self.assertEqual(report.verdict, lexicon.VERDICT_NEITHER)
        self.assertAlmostEqual(report.mass, profile.top_mass, 6)
        self.assertGreater(report.penrose_margin, 0.05)

    def testEndsFromConfig(self):
        settings = config.ExperimentConfig.FromText(
            "surface.kind = plane\n"
            "flux.ends = 1 0 1; 2 0 -1\n")
        surface = flux_neck.TwoSidedSurface.FromConfig(settings)
        ends = flux_neck.describe_ends(surface, RADII)
        self.assertEqual([e.index for e in ends], [0, 1, 2, 3])
        self.assertEqual(ends[0].side, flux_neck.SIDE_BOTTOM)
        self.assertAlmostEqual(ends[0].a, 2.0, 12)
        self.assertAlmostEqual(ends[-1].a, 1.0, 12)
        self.assertEqual(ends[-1].side, flux_neck.SIDE_TOP)


if __name__ == '__main__':
    unittest.main()
