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

from cappen import capillary_energy
from cappen import geom_mesh
from cappen import remesh
from cappen import support_surface


class RemeshTest(unittest.TestCase):
    def setUp(self):
        self.support = support_surface.CatenoidExtension(1.0)
        t = 0.5
        self.disk = geom_mesh.build_disk(
            radius=math.cosh(t), boundary_vertices=24, rings=4,
            center=(0, 0, t))

    def testSplitKeepsBoundaryOnSupport(self):
        target = 0.5 * remesh.mean_edge_length(self.disk)
        refined, stats = remesh.remesh(self.disk, self.support, target)
        self.assertGreater(stats.splits, 0)
        self.assertGreater(len(refined.vertices), len(self.disk.vertices))
        self.assertEqual(refined.EulerCharacteristic(), 1)
        self.assertGreater(len(refined.boundary_loops[0]),
                           len(self.disk.boundary_loops[0]))

        # Constructing a state checks every boundary vertex against S.
        state = capillary_energy.CapillaryState(0.5, refined, self.support)
        self.assertTrue(np.all(refined.boundary_on_support[
            refined.is_boundary]))
        self.assertGreater(state.area, 0)

    def testCollapseLeavesBoundaryAlone(self):
        target = 3.0 * remesh.mean_edge_length(self.disk)
        coarse, stats = remesh.remesh(self.disk, self.support, target)
        self.assertGreater(stats.collapses, 0)
        self.assertLess(len(coarse.vertices), len(self.disk.vertices))
        self.assertEqual(coarse.EulerCharacteristic(), 1)
        before = self.disk.vertices[self.disk.boundary_loops[0]]
        after = coarse.vertices[coarse.boundary_loops[0]]
        self.assertEqual(sorted(map(tuple, before)), sorted(map(tuple, after)))

    def testFlipRestoresDelaunay(self):
        vertices = [(-1, 0, 0), (1, 0, 0), (0, 0.3, 0), (0, -0.3, 0)]
        mesh = geom_mesh.TriSurface(vertices, [(0, 1, 2), (1, 0, 3)])
        flipped, stats = remesh.remesh(mesh, support_surface.Plane(0.0),
                                       target=1.4)
        self.assertEqual(stats.flips, 1)
        self.assertEqual(stats.splits + stats.collapses, 0)
        edges = set(frozenset((int(t[i]), int(t[(i + 1) % 3])))
                    for t in flipped.triangles for i in range(3))
        self.assertIn(frozenset((2, 3)), edges)
        self.assertNotIn(frozenset((0, 1)), edges)
        self.assertAlmostEqual(geom_mesh.area(flipped), geom_mesh.area(mesh),
                               14)

    def testAnnulusKeepsTopology(self):
        band = geom_mesh.build_revolution_band(
            math.cosh, 0.0, 1.0, rings=3, sectors=16)
        refined, _ = remesh.remesh(band, self.support,
                                   0.5 * remesh.mean_edge_length(band))
        self.assertEqual(refined.EulerCharacteristic(), 0)
        self.assertEqual(len(refined.boundary_loops), 2)


if __name__ == '__main__':
    unittest.main()
