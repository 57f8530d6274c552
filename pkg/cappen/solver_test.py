from __future__ import division
from __future__ import print_function
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

import logging
import math
import os
import unittest

import numpy as np

from cappen import capillary_energy
from cappen import config
from cappen import errors
from cappen import geom_mesh
from cappen import lexicon
from cappen import solver
from cappen import support_surface

LOGGER = logging.getLogger("cappen.test")

CONFIGS = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..",
                       "configs")


def conditional_on_slow(f):
    if not os.environ.get(lexicon.SLOW_TESTS_ENV):
        LOGGER.info("Slow tests disabled. To enable set %s=1",
                    lexicon.SLOW_TESTS_ENV)

        def _decorator(self):
            print(f.__name__ + ' has been disabled')

        return _decorator
    return f


class MinimizeTest(unittest.TestCase):
    def setUp(self):
        self.support = support_surface.CatenoidExtension(1.0)

    def testCatenoidDiskFromBelow(self):
        seed = solver.seed_surface(self.support, 0.8, boundary_vertices=64,
                                   rings=8)
        state = solver.minimize(1.0, seed, self.support,
                                solver.SolverOptions(tol_energy=1e-30))
        expected = math.pi * math.cosh(1.0) ** 2
        self.assertAlmostEqual(expected, 7.4804, 4)
        self.assertLess(abs(state.area - expected) / expected, 5e-3)
        boundary = state.mesh.vertices[state.mesh.is_boundary]
        self.assertTrue(np.allclose(boundary[:, 2], 1.0, atol=1e-5))
        self.assertLess(capillary_energy.contact_residual(state),
                        lexicon.DEFAULT_TOL_ANGLE)
        self.assertLess(state.grad_norm,
                        lexicon.DEFAULT_TOL_GRAD * math.sqrt(state.area))
        self.assertLess(state.energy, capillary_energy.CapillaryState(
            1.0, seed, self.support).energy)

    def testToleranceScalesWithArea(self):
        # Ten times the catenoid: the gradient grows by ten and so does the
        # threshold, so the stall rule is not needed to stop.
        large = support_surface.CatenoidExtension(10.0)
        seed = solver.seed_surface(large, 8.0, boundary_vertices=64, rings=8)
        state = solver.minimize(1.0, seed, large,
                                solver.SolverOptions(tol_energy=1e-30))
        expected = 100 * math.pi * math.cosh(1.0) ** 2
        self.assertLess(abs(state.area - expected) / expected, 5e-3)
        self.assertLess(state.grad_norm,
                        lexicon.DEFAULT_TOL_GRAD * math.sqrt(state.area))

    def testStalledEnergyStops(self):
        seed = solver.seed_surface(self.support, 0.8, boundary_vertices=64,
                                   rings=8)
        state = solver.minimize(1.0, seed, self.support,
                                solver.SolverOptions(tol_grad=1e-14))
        expected = math.pi * math.cosh(1.0) ** 2
        self.assertLess(abs(state.area - expected) / expected, 5e-3)
        self.assertLess(state.iterations, lexicon.DEFAULT_MAX_ITERS)

    def testStalledHelper(self):
        window = lexicon.STALL_WINDOW
        flat = [1.0] * (window + 1)
        self.assertTrue(solver._Stalled(flat, 1.0, 1e-9))
        self.assertFalse(solver._Stalled(flat[:-1], 1.0, 1e-9))
        falling = [1.0 - 1e-3 * i for i in range(window + 1)]
        self.assertFalse(solver._Stalled(falling, 1.0, 1e-9))

    def testShrinkingHelper(self):
        window = lexicon.STALL_WINDOW
        falling = [0.4 * 0.99 ** i for i in range(window + 1)]
        self.assertTrue(solver._Shrinking(falling, 1.0))
        self.assertFalse(solver._Shrinking(falling, 0.5))
        settled = [0.4] * (window + 1)
        self.assertFalse(solver._Shrinking(settled, 1.0))

    def testNonConvergenceCarriesState(self):
        seed = solver.seed_surface(self.support, 0.5, boundary_vertices=32,
                                   rings=4)
        options = solver.SolverOptions(max_iters=1)
        with self.assertRaises(errors.NonConvergenceError) as ctx:
            solver.minimize(1.0, seed, self.support, options)
        self.assertIsNotNone(ctx.exception.state)
        self.assertEqual(ctx.exception.iterations, 1)

    def testOptionsAreValidated(self):
        seed = solver.seed_surface(self.support, 0.5, boundary_vertices=32,
                                   rings=4)
        for options in (solver.SolverOptions(shrink=1.5),
                        solver.SolverOptions(tol_grad=0.0),
                        solver.SolverOptions(armijo=0.0)):
            with self.assertRaises(errors.ConfigError):
                solver.minimize(1.0, seed, self.support, options)

    def testRemeshingKeepsConverging(self):
        seed = solver.seed_surface(self.support, 0.3, boundary_vertices=32,
                                   rings=4)
        options = solver.SolverOptions(remesh=True, remesh_every=5,
                                       tol_grad=1e-5)
        state = solver.minimize(0.0, seed, self.support, options)
        self.assertEqual(state.mesh.EulerCharacteristic(), 1)
        self.assertLess(abs(state.area - math.pi) / math.pi, 2e-2)


class OutermostDiskTest(unittest.TestCase):
    def testUnitCatenoid(self):
        support = support_surface.CatenoidExtension(1.0)
        seed = solver.seed_surface(support, 0.3, boundary_vertices=64,
                                   rings=8)
        disk = solver.solve_outermost_disk(support, seed)
        self.assertLess(abs(disk.area - math.pi) / math.pi, 5e-3)
        self.assertLess(capillary_energy.contact_residual(disk),
                        lexicon.DEFAULT_TOL_ANGLE)

    def testScaledCatenoid(self):
        support = support_surface.CatenoidExtension(2.0)
        seed = solver.seed_surface(support, 0.6, boundary_vertices=64,
                                   rings=8)
        disk = solver.solve_outermost_disk(support, seed)
        self.assertLess(abs(disk.area - 4 * math.pi) / (4 * math.pi), 5e-3)

    def testPlaneHasNoOutermostDisk(self):
        plane = support_surface.Plane(0.0)
        seed = solver.seed_surface(plane, 1.0, boundary_vertices=32, rings=6)
        with self.assertRaises(errors.CollapseError):
            solver.solve_outermost_disk(plane, seed)

    def testPlaneOnFineMeshCollapses(self):
        # Too many rings to drop below the collapse fraction within
        # max_iters; the shrinking trend still counts as a collapse.
        plane = support_surface.Plane(0.0)
        seed = solver.default_seed(plane, boundary_vertices=64, rings=12)
        with self.assertRaises(errors.CollapseError):
            solver.solve_outermost_disk(plane, seed)


class SeedTest(unittest.TestCase):
    def testRevolutionSeedIsAdmissible(self):
        support = support_surface.CatenoidExtension(1.0)
        seed = solver.seed_surface(support, 1.0, boundary_vertices=32,
                                   rings=4)
        state = capillary_energy.CapillaryState(1.0, seed, support)
        self.assertLess(capillary_energy.contact_residual(state), 1e-12)

    def testGraphSeed(self):
        bumped = support_surface.GraphSurface(bumps=[(0.5, 0.0, 1.0, 0.2)])
        seed = solver.seed_surface(bumped, 1.5, boundary_vertices=32,
                                   rings=6)
        capillary_energy.CapillaryState(0.0, seed, bumped)
        with self.assertRaises(errors.DomainError):
            solver.seed_surface(bumped, 0.0)

    def testDefaultSeed(self):
        support = support_surface.CatenoidExtension(1.0)
        seed = solver.default_seed(support, boundary_vertices=32, rings=4)
        self.assertTrue(np.allclose(seed.vertices[:, 2], 0.0))
        graph = solver.default_seed(support_surface.Plane(), 32, 4)
        boundary = graph.vertices[graph.is_boundary]
        self.assertTrue(np.allclose(np.hypot(boundary[:, 0], boundary[:, 1]),
                                    2.0))

    def testSingularCoreSeed(self):
        graph = support_surface.GraphSurface(psi=lexicon.PSI_LOG,
                                             coefficient=2.0)
        seed = solver.default_seed(graph, boundary_vertices=32, rings=4)
        state = capillary_energy.CapillaryState(1.0, seed, graph)
        boundary = seed.vertices[seed.is_boundary]
        self.assertTrue(np.allclose(np.hypot(boundary[:, 0], boundary[:, 1]),
                                    2.0))
        self.assertTrue(np.allclose(boundary[:, 2], 2.0 * math.log(2.0)))
        self.assertLess(state.area, 4.0 * math.pi)
        self.assertGreater(state.area, 0.95 * 4.0 * math.pi)

        catenoid_graph = support_surface.GraphSurface(
            psi=lexicon.PSI_CATENOID, coefficient=1.0)
        seed = solver.default_seed(catenoid_graph, 32, 4)
        boundary = seed.vertices[seed.is_boundary]
        self.assertTrue(np.allclose(np.hypot(boundary[:, 0], boundary[:, 1]),
                                    4.0))

    def testDefaultRegion(self):
        support = support_surface.CatenoidExtension(1.0)
        region = solver.default_region(support)
        self.assertAlmostEqual(region.offset, support.profile.CapArea(), 14)
        self.assertGreater(region.offset, 0)
        self.assertEqual(
            solver.default_region(support_surface.Plane()).offset, 0.0)


def _records(values):
    return [solver.SweepRecord(t=0.1 * i, area=1.0, lateral_area=float(i),
                               mf=v, residual=0.0, grad_norm=0.0, kappa=None,
                               components=1, min_radius=0.0, iters=0,
                               flags=())
            for i, v in enumerate(values)]


class SweepTest(unittest.TestCase):
    def testCatenoidSweep(self):
        support = support_surface.CatenoidExtension(1.0)
        seed = solver.seed_surface(support, 0.2, boundary_vertices=48,
                                   rings=6)
        records = solver.continuation_sweep(support, [0.0, 0.5, 1.0],
                                            seed=seed)
        self.assertEqual([r.t for r in records], [0.0, 0.5, 1.0])
        for record in records:
            self.assertLess(abs(record.mf - 1.0), 1e-2)
            self.assertEqual(record.components, 1)
            self.assertEqual(record.flags, ())
        lateral = [r.lateral_area for r in records]
        self.assertTrue(all(b > a for a, b in zip(lateral, lateral[1:])))
        ok, _ = solver.monotone_mf(records)
        self.assertTrue(ok)

        samples = solver.profile_samples(records)
        self.assertEqual(samples[1].sigma, 0.5)
        self.assertEqual(samples[1].upsilon, records[1].area)

    @conditional_on_slow
    def testFullCatenoidSweep(self):
        support = support_surface.CatenoidExtension(1.0)
        grid = [0.05 * i for i in range(41)]
        records = solver.continuation_sweep(
            support, grid, seed=solver.seed_surface(support, 0.2))
        mf = np.array([r.mf for r in records])
        self.assertLess(np.max(np.abs(mf - 1.0)), 1e-3)

        # upsilon (1 - upsilon'^2) is pi along the catenoid.
        s = np.array([r.lateral_area for r in records])
        upsilon = np.array([r.area for r in records])
        slope = np.gradient(upsilon, s)
        convexity = upsilon * (1 - slope ** 2)
        self.assertLess(np.max(np.abs(convexity[1:-1] - math.pi)), 3e-2)

    @conditional_on_slow
    def testShippedMeanConvexSweeps(self):
        # Supports with H(S) >= 0: m_f never drops and reaches the mass.
        for name in ("prescribed_curvature", "two_bumps", "bumped_catenoid"):
            experiment = config.ExperimentConfig.FromFile(
                os.path.join(CONFIGS, name + ".properties"))
            support = support_surface.surface_from_config(experiment)
            mass = support_surface.exterior_mass(
                support, experiment["mass.radii"]).mass
            records = solver.continuation_sweep(
                support, experiment.TGrid(), experiment.SolverOptions(),
                seed=solver.default_seed(
                    support, experiment["mesh.boundary_vertices"],
                    experiment["mesh.rings"]))
            self.assertEqual(records[-1].t, 3.0, name)
            ok, drop = solver.monotone_mf(records)
            self.assertTrue(ok, "%s drops by %g" % (name, drop))
            self.assertLess(abs(records[-1].mf - mass), 2e-2, name)

    @conditional_on_slow
    def testLogGraphDisk(self):
        # The flat disk of radius a sinh(t) meets 2 log|y| at the right angle.
        graph = support_surface.GraphSurface(psi=lexicon.PSI_LOG,
                                             coefficient=2.0)
        seed = solver.default_seed(graph, boundary_vertices=64, rings=8)
        state = solver.minimize(1.0, seed, graph)
        radius = 2.0 * math.sinh(1.0)
        boundary = state.mesh.vertices[state.mesh.is_boundary]
        self.assertLess(np.max(np.abs(
            np.hypot(boundary[:, 0], boundary[:, 1]) - radius)), 1e-2)
        self.assertLess(abs(state.area - math.pi * radius ** 2) /
                        (math.pi * radius ** 2), 1e-2)

    def testBadGrid(self):
        support = support_surface.CatenoidExtension(1.0)
        for grid in ([], [0.5, 1.0], [0.0, 1.0, 0.5]):
            with self.assertRaises(errors.ConfigError):
                solver.continuation_sweep(support, grid)

    def testMonotoneMf(self):
        ok, drop = solver.monotone_mf(_records([1.0, 1.0005, 0.9999, 1.2]))
        self.assertTrue(ok)
        self.assertAlmostEqual(drop, 6e-4, 12)
        ok, drop = solver.monotone_mf(_records([1.0, 0.99]))
        self.assertFalse(ok)

    def testCoarseAreaBound(self):
        disk = geom_mesh.build_disk(radius=1.0, boundary_vertices=64, rings=8)
        state = capillary_energy.CapillaryState(
            0.0, disk, support_surface.CatenoidExtension(1.0))
        ratio = solver.coarse_area_ratio(state)
        self.assertLess(ratio, 0.25 + 1e-12)
        self.assertGreater(ratio, 0.24)

    def testRecordRow(self):
        record = _records([1.0])[0]
        self.assertEqual(len(record.AsRow()), len(lexicon.SWEEP_COLUMNS))
        self.assertEqual(record.AsRow()[3], 1.0)


if __name__ == '__main__':
    unittest.main()
