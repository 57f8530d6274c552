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

"""Local remeshing: edge splits, interior collapses and Delaunay flips.

Split midpoints of boundary edges on the support are projected back onto S.
Collapses never touch boundary vertices, so the boundary only ever gains
vertices. All three operations preserve the Euler characteristic.
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import range
import collections
import logging
import math

import numpy as np

from cappen import errors
from cappen import geom_mesh

LOGGER = logging.getLogger("cappen.remesh")

SPLIT_FACTOR = 1.5
COLLAPSE_FACTOR = 0.5
# Collapses may not create triangles worse than this.
COLLAPSE_QUALITY = 0.05

RemeshStats = collections.namedtuple("RemeshStats", "splits collapses flips")


def mean_edge_length(mesh):
    tris = mesh.triangles
    v = mesh.vertices
    lengths = np.linalg.norm(v[np.roll(tris, -1, axis=1)] - v[tris], axis=2)
    return float(np.mean(lengths))


def _directed(triangles):
    table = {}
    for index, tri in enumerate(triangles):
        if tri is None:
            continue
        a, b, c = tri
        table[(a, b)] = index
        table[(b, c)] = index
        table[(c, a)] = index
    return table


def _opposite(tri, a, b):
    for v in tri:
        if v != a and v != b:
            return v


def _normal(vertices, tri):
    a, b, c = (vertices[i] for i in tri)
    return np.cross(b - a, c - a)


def _quality(vertices, tri):
    return float(geom_mesh.triangle_quality(
        np.array([vertices[i] for i in tri]), np.array([[0, 1, 2]]))[0])


def _edges_by_length(vertices, table):
    result = []
    for (a, b) in table:
        if a < b or (b, a) not in table:
            length = float(np.linalg.norm(vertices[a] - vertices[b]))
            result.append((length, a, b))
    return result


class _Workspace(object):
    """Mutable copy of a mesh for local edits."""

    def __init__(self, mesh, support):
        self.support = support
        self.vertices = [np.array(v) for v in mesh.vertices]
        self.triangles = [list(t) for t in mesh.triangles]
        self.on_support = list(mesh.boundary_on_support)

    def Split(self, limit):
        table = _directed(self.triangles)
        edges = sorted((e for e in _edges_by_length(self.vertices, table)
                        if e[0] > limit), reverse=True)
        touched = set()
        count = 0
        for _, a, b in edges:
            t1 = table.get((a, b))
            t2 = table.get((b, a))
            if t1 is None:
                a, b, t1, t2 = b, a, t2, t1
            if t1 in touched or t2 in touched:
                continue

            mid = 0.5 * (self.vertices[a] + self.vertices[b])
            flag = (t2 is None and self.on_support[a] and
                    self.on_support[b])
            if flag:
                mid = self.support.Project(mid)[0]
            m = len(self.vertices)
            self.vertices.append(np.asarray(mid, dtype=float))
            self.on_support.append(bool(flag))

            c = _opposite(self.triangles[t1], a, b)
            self.triangles[t1] = [a, m, c]
            self.triangles.append([m, b, c])
            touched.update((t1, len(self.triangles) - 1))
            if t2 is not None:
                d = _opposite(self.triangles[t2], a, b)
                self.triangles[t2] = [b, m, d]
                self.triangles.append([m, a, d])
                touched.update((t2, len(self.triangles) - 1))
            count += 1
        return count

    def Collapse(self, limit):
        table = _directed(self.triangles)
        boundary = set()
        for (a, b) in table:
            if (b, a) not in table:
                boundary.update((a, b))
        incident = collections.defaultdict(set)
        for index, tri in enumerate(self.triangles):
            if tri is not None:
                for v in tri:
                    incident[v].add(index)

        def neighbours(v):
            return set(u for t in incident[v] for u in self.triangles[t]
                       if u != v)

        edges = sorted(e for e in _edges_by_length(self.vertices, table)
                       if e[0] < limit)
        touched = set()
        count = 0
        for _, a, b in edges:
            if a in boundary or b in boundary:
                continue
            near_a = neighbours(a)
            near_b = neighbours(b)
            if touched & (near_a | near_b | set((a, b))):
                continue
            t1 = table[(a, b)]
            t2 = table[(b, a)]
            c = _opposite(self.triangles[t1], a, b)
            d = _opposite(self.triangles[t2], a, b)
            if (near_a & near_b) != set((c, d)):
                continue

            mid = 0.5 * (self.vertices[a] + self.vertices[b])
            ring = (incident[a] | incident[b]) - set((t1, t2))
            updated = {}
            moved = list(self.vertices)
            moved[a] = mid
            valid = True
            for t in ring:
                old = self.triangles[t]
                new = [a if v == b else v for v in old]
                if (np.dot(_normal(self.vertices, old),
                           _normal(moved, new)) <= 0 or
                        _quality(moved, new) < COLLAPSE_QUALITY):
                    valid = False
                    break
                updated[t] = new
            if not valid:
                continue

            self.vertices[a] = mid
            for t, new in updated.items():
                self.triangles[t] = new
            self.triangles[t1] = None
            self.triangles[t2] = None
            touched.update(near_a | near_b | set((a, b)))
            count += 1
        return count

    def Flip(self):
        table = _directed(self.triangles)
        undirected = set(frozenset(e) for e in table)
        touched = set()
        count = 0
        for (a, b), t1 in list(table.items()):
            t2 = table.get((b, a))
            if t2 is None or a > b or t1 in touched or t2 in touched:
                continue
            c = _opposite(self.triangles[t1], a, b)
            d = _opposite(self.triangles[t2], a, b)
            if frozenset((c, d)) in undirected:
                continue
            alpha = _angle(self.vertices, c, a, b)
            beta = _angle(self.vertices, d, a, b)
            if alpha + beta <= math.pi + 1e-12:
                continue

            old = (self.triangles[t1], self.triangles[t2])
            new = ([a, d, c], [d, b, c])
            reference = _normal(self.vertices, old[0]) + _normal(
                self.vertices, old[1])
            if any(np.dot(_normal(self.vertices, n), reference) <= 0
                   for n in new):
                continue
            if (min(_quality(self.vertices, n) for n in new) <=
                    min(_quality(self.vertices, o) for o in old)):
                continue

            self.triangles[t1], self.triangles[t2] = new
            undirected.discard(frozenset((a, b)))
            undirected.add(frozenset((c, d)))
            touched.update((t1, t2))
            count += 1
        return count

    def Surface(self, quality_floor):
        triangles = np.array([t for t in self.triangles if t is not None])
        used = np.unique(triangles)
        index = np.full(len(self.vertices), -1, dtype=np.int64)
        index[used] = np.arange(len(used))
        vertices = np.array(self.vertices)[used]
        on_support = np.array(self.on_support, dtype=bool)[used]
        return geom_mesh.TriSurface(vertices, index[triangles],
                                    boundary_on_support=on_support,
                                    quality_floor=quality_floor)


def _angle(vertices, apex, a, b):
    u = vertices[a] - vertices[apex]
    v = vertices[b] - vertices[apex]
    return math.atan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v))


def remesh(mesh, support, target=None, passes=3):
    """Returns (new mesh, RemeshStats) with edges near the target length."""
    if target is None:
        target = mean_edge_length(mesh)
    errors.CHECK(target > 0, errors.ConfigError(
        "Target edge length must be positive."))
    work = _Workspace(mesh, support)
    totals = [0, 0, 0]
    for _ in range(passes):
        done = (work.Split(SPLIT_FACTOR * target),
                work.Collapse(COLLAPSE_FACTOR * target),
                work.Flip())
        totals = [x + y for x, y in zip(totals, done)]
        if not any(done):
            break

    result = work.Surface(mesh.quality_floor)
    if result.EulerCharacteristic() != mesh.EulerCharacteristic():
        raise errors.TopologyError("Remeshing changed the topology.")

    stats = RemeshStats(*totals)
    if LOGGER.isEnabledFor(logging.DEBUG):
        LOGGER.debug("Remeshed %d -> %d vertices: %s", len(mesh.vertices),
                     len(result.vertices), stats)
    return result, stats
