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

"""Discrete differential geometry on oriented triangle meshes with boundary.

A TriSurface holds vertex positions, consistently oriented triangles and the
boundary loops recovered from them. The orientation of the triangles fixes the
unit normal nu(Sigma); boundary loops run along the boundary half edges so
that e = nu x mu where mu is the outward co-normal.
"""
from __future__ import division
from __future__ import unicode_literals

from builtins import object
from builtins import range
import collections
import io
import logging
import math

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from cappen import errors
from cappen import lexicon

LOGGER = logging.getLogger("cappen.mesh")


class _Topology(object):
    """Combinatorial data shared by all surfaces with the same triangles."""

    def __init__(self, n_vertices, triangles):
        self.n_vertices = n_vertices
        self.triangles = triangles
        m = len(triangles)

        heads = np.concatenate(
            [triangles[:, 0], triangles[:, 1], triangles[:, 2]])
        tails = np.concatenate(
            [triangles[:, 1], triangles[:, 2], triangles[:, 0]])
        directed = heads.astype(np.int64) * n_vertices + tails
        if len(np.unique(directed)) != len(directed):
            raise errors.TopologyError(
                "Triangle orientations are not consistent.")

        lo = np.minimum(heads, tails).astype(np.int64)
        hi = np.maximum(heads, tails).astype(np.int64)
        undirected = lo * n_vertices + hi
        keys, inverse, counts = np.unique(
            undirected, return_inverse=True, return_counts=True)
        if np.any(counts > 2):
            bad = keys[counts > 2][0]
            raise errors.TopologyError(
                "Edge (%d, %d) is shared by more than two triangles." % (
                    bad // n_vertices, bad % n_vertices))

        self.edges = np.stack([keys // n_vertices, keys % n_vertices],
                              axis=1).astype(np.int64)
        self.edge_triangle_count = counts

        reverse = tails.astype(np.int64) * n_vertices + heads
        is_boundary_he = ~np.isin(reverse, directed)
        self.boundary_heads = heads[is_boundary_he]
        self.boundary_tails = tails[is_boundary_he]

        used = np.zeros(n_vertices, dtype=bool)
        used[triangles.ravel()] = True
        self.used = used

        self.is_boundary = np.zeros(n_vertices, dtype=bool)
        self.is_boundary[self.boundary_heads] = True

        self.loops = self._TraceLoops()

        adjacency = sparse.csr_matrix(
            (np.ones(len(self.edges)), (self.edges[:, 0], self.edges[:, 1])),
            shape=(n_vertices, n_vertices))
        _, labels = csgraph.connected_components(adjacency, directed=False)
        # Relabel so that components are numbered by their smallest vertex
        # and isolated vertices get -1.
        self.component = np.full(n_vertices, -1, dtype=np.int64)
        order = {}
        for v in range(n_vertices):
            if not used[v]:
                continue
            lab = labels[v]
            if lab not in order:
                order[lab] = len(order)
            self.component[v] = order[lab]
        self.n_components = len(order)
        self.triangle_component = self.component[triangles[:, 0]]

        boundary_components = set(self.component[self.boundary_heads])
        for c in range(self.n_components):
            if c not in boundary_components:
                raise errors.AdmissibilityError(
                    "Component %d is closed (it has no boundary)." % c)

        self.vertex_triangle_count = np.bincount(
            triangles.ravel(), minlength=n_vertices)

    def _TraceLoops(self):
        following = {}
        for head, tail in zip(self.boundary_heads, self.boundary_tails):
            if head in following:
                raise errors.TopologyError(
                    "Boundary vertex %d is not manifold." % head)
            following[int(head)] = int(tail)

        loops = []
        visited = set()
        for start in sorted(following):
            if start in visited:
                continue
            loop = [start]
            visited.add(start)
            current = following[start]
            while current != start:
                if current in visited or current not in following:
                    raise errors.TopologyError(
                        "Boundary loop through vertex %d does not close." %
                        start)
                loop.append(current)
                visited.add(current)
                current = following[current]
            loops.append(np.array(loop, dtype=np.int64))
        return loops


class TriSurface(object):
    """An admissible discrete surface.

    Vertices are an (n, 3) float array and triangles an (m, 3) index array.
    boundary_on_support flags boundary vertices constrained to the support
    surface; boundary vertices without the flag are pinned.
    """

    def __init__(self, vertices, triangles, boundary_on_support=None,
                 quality_floor=lexicon.DEFAULT_QUALITY_FLOOR, topology=None):
        self.vertices = np.array(vertices, dtype=float)
        self.vertices.setflags(write=False)
        if topology is None:
            triangles = np.array(triangles, dtype=np.int64).reshape(-1, 3)
            if len(triangles) == 0:
                raise errors.TopologyError("A surface needs triangles.")
            if triangles.min() < 0 or triangles.max() >= len(self.vertices):
                raise errors.TopologyError("Triangle index out of range.")
            topology = _Topology(len(self.vertices), triangles)
        self.topology = topology
        self.triangles = topology.triangles
        self.quality_floor = quality_floor

        if boundary_on_support is None:
            boundary_on_support = topology.is_boundary.copy()
        self.boundary_on_support = (
            np.asarray(boundary_on_support, dtype=bool) & topology.is_boundary)

        quality = triangle_quality(self.vertices, self.triangles)
        worst = int(np.argmin(quality))
        if quality[worst] < quality_floor:
            raise errors.DegeneracyError(
                "Triangle %d has quality %.3g below the floor %.3g." % (
                    worst, quality[worst], quality_floor), triangle=worst)

    @property
    def boundary_loops(self):
        return self.topology.loops

    @property
    def is_boundary(self):
        return self.topology.is_boundary

    @property
    def n_components(self):
        return self.topology.n_components

    def WithVertices(self, vertices):
        """Returns a surface with the same combinatorics at new positions."""
        return TriSurface(vertices, None,
                          boundary_on_support=self.boundary_on_support,
                          quality_floor=self.quality_floor,
                          topology=self.topology)

    def Scaled(self, factor):
        return self.WithVertices(self.vertices * factor)

    def Translated(self, offset):
        return self.WithVertices(self.vertices + np.asarray(offset))

    def EulerCharacteristic(self, component=None):
        topo = self.topology
        if component is None:
            v = int(topo.used.sum())
            e = len(topo.edges)
            f = len(self.triangles)
        else:
            v = int(np.sum(topo.component == component))
            e = int(np.sum(topo.component[topo.edges[:, 0]] == component))
            f = int(np.sum(topo.triangle_component == component))
        return v - e + f

    def LoopComponent(self, loop_index):
        return int(self.topology.component[self.boundary_loops[loop_index][0]])

    def LoopLength(self, loop_index):
        loop = self.boundary_loops[loop_index]
        pts = self.vertices[loop]
        return float(np.sum(
            np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)))

    def BoundaryLength(self, component=None):
        total = 0.0
        for i in range(len(self.boundary_loops)):
            if component is None or self.LoopComponent(i) == component:
                total += self.LoopLength(i)
        return total

    def Component(self, component):
        """Returns one connected component as its own TriSurface."""
        keep_tri = self.topology.triangle_component == component
        tris = self.triangles[keep_tri]
        used = np.unique(tris)
        remap = np.full(len(self.vertices), -1, dtype=np.int64)
        remap[used] = np.arange(len(used))
        return TriSurface(self.vertices[used], remap[tris],
                          boundary_on_support=self.boundary_on_support[used],
                          quality_floor=self.quality_floor)


class CurvatureField(collections.namedtuple(
        "CurvatureField",
        "vertex_area vertex_normal mean_curvature_vector mean_curvature "
        "angle_defect gauss_curvature turning_angle boundary_length "
        "geodesic_curvature tangent conormal frame second_fundamental_form")):
    """Per-vertex curvature data.

    gauss_curvature is zero on boundary vertices, geodesic_curvature is zero
    on interior vertices. second_fundamental_form is (n, 2, 2) in the
    orthonormal tangent frame (n, 3, 2).
    """
    __slots__ = ()

    @property
    def norm_squared(self):
        h = self.second_fundamental_form
        return (h[:, 0, 0] ** 2 + 2 * h[:, 0, 1] ** 2 + h[:, 1, 1] ** 2)

    def IntegratedGauss(self, mask=None):
        defect = self.angle_defect
        if mask is not None:
            defect = defect[mask]
        return float(np.sum(defect))

    def IntegratedGeodesic(self, mask=None):
        turning = self.turning_angle
        if mask is not None:
            turning = turning[mask]
        return float(np.sum(turning))


def triangle_normals(vertices, triangles):
    """Returns unit normals and areas of all triangles."""
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    n = np.cross(b - a, c - a)
    double_area = np.linalg.norm(n, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = n / double_area[:, None]
    return unit, 0.5 * double_area


def triangle_quality(vertices, triangles):
    """Inradius divided by the longest edge, 1/(2 sqrt 3) for equilateral."""
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    la = np.linalg.norm(b - c, axis=1)
    lb = np.linalg.norm(c - a, axis=1)
    lc = np.linalg.norm(a - b, axis=1)
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
    perimeter = la + lb + lc
    longest = np.maximum(np.maximum(la, lb), lc)
    with np.errstate(invalid="ignore", divide="ignore"):
        q = 2.0 * area / perimeter / longest
    return np.nan_to_num(q, nan=0.0)


def corner_angles(vertices, triangles):
    """Interior angles (m, 3) and their cotangents (m, 3)."""
    angles = np.empty(triangles.shape)
    cots = np.empty(triangles.shape)
    for k in range(3):
        p = vertices[triangles[:, k]]
        q = vertices[triangles[:, (k + 1) % 3]]
        r = vertices[triangles[:, (k + 2) % 3]]
        u = q - p
        v = r - p
        cross = np.linalg.norm(np.cross(u, v), axis=1)
        dot = np.sum(u * v, axis=1)
        angles[:, k] = np.arctan2(cross, dot)
        cots[:, k] = dot / cross
    return angles, cots


def area_gradient(vertices, triangles):
    """Exact derivative of the total area with respect to every vertex."""
    unit, _ = triangle_normals(vertices, triangles)
    grad = np.zeros_like(vertices)
    for k in range(3):
        nxt = vertices[triangles[:, (k + 1) % 3]]
        prv = vertices[triangles[:, (k + 2) % 3]]
        np.add.at(grad, triangles[:, k], 0.5 * np.cross(unit, prv - nxt))
    return grad


def cotangent_stiffness(vertices, triangles):
    """The cotangent Laplacian as a symmetric positive semidefinite matrix."""
    n = len(vertices)
    _, cots = corner_angles(vertices, triangles)
    rows = []
    cols = []
    vals = []
    for k in range(3):
        i = triangles[:, (k + 1) % 3]
        j = triangles[:, (k + 2) % 3]
        w = 0.5 * cots[:, k]
        rows.extend([i, j, i, j])
        cols.extend([j, i, i, j])
        vals.extend([-w, -w, w, w])
    return sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))


def mass_matrix(vertices, triangles, weights=None):
    """Consistent piecewise linear mass matrix.

    weights, if given, scales the contribution of every triangle.
    """
    n = len(vertices)
    _, areas = triangle_normals(vertices, triangles)
    if weights is not None:
        areas = areas * weights
    rows = []
    cols = []
    vals = []
    for k in range(3):
        i = triangles[:, k]
        j = triangles[:, (k + 1) % 3]
        rows.extend([i, j, i])
        cols.extend([j, i, i])
        vals.extend([areas / 12.0, areas / 12.0, areas / 6.0])
    return sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))


def vertex_areas(vertices, triangles):
    _, areas = triangle_normals(vertices, triangles)
    result = np.zeros(len(vertices))
    for k in range(3):
        np.add.at(result, triangles[:, k], areas / 3.0)
    return result


def vertex_normals(vertices, triangles):
    """Area weighted average of incident triangle normals."""
    unit, areas = triangle_normals(vertices, triangles)
    result = np.zeros_like(vertices)
    for k in range(3):
        np.add.at(result, triangles[:, k], unit * areas[:, None])
    norms = np.linalg.norm(result, axis=1)
    norms[norms == 0] = 1.0
    return result / norms[:, None]


def area(surface):
    """Total area of the surface."""
    _, areas = triangle_normals(surface.vertices, surface.triangles)
    return float(np.sum(areas))


def area_within_radius(surface, radius, center=(0.0, 0.0, 0.0)):
    """Area of the triangles whose centroid lies in the ball B_radius."""
    _, areas = triangle_normals(surface.vertices, surface.triangles)
    centroids = surface.vertices[surface.triangles].mean(axis=1)
    inside = np.linalg.norm(centroids - np.asarray(center), axis=1) <= radius
    return float(np.sum(areas[inside]))


def _tangent_frames(normals):
    ref = np.zeros_like(normals)
    ref[:, 0] = 1.0
    flip = np.abs(normals[:, 0]) > 0.9
    ref[flip] = (0.0, 1.0, 0.0)
    t1 = ref - np.sum(ref * normals, axis=1)[:, None] * normals
    t1 /= np.linalg.norm(t1, axis=1)[:, None]
    t2 = np.cross(normals, t1)
    return np.stack([t1, t2], axis=2)


def _fit_second_fundamental_form(vertices, edges, normals, frames):
    """Least squares fit of h(d, d) = -2 <d, n> / |d|^2 over the one ring."""
    n = len(vertices)
    normal_eq = np.zeros((n, 3, 3))
    rhs = np.zeros((n, 3))
    for src, dst in ((edges[:, 0], edges[:, 1]), (edges[:, 1], edges[:, 0])):
        d = vertices[dst] - vertices[src]
        dn = np.sum(d * normals[src], axis=1)
        kappa = -2.0 * dn / np.sum(d * d, axis=1)
        u1 = np.sum(d * frames[src, :, 0], axis=1)
        u2 = np.sum(d * frames[src, :, 1], axis=1)
        length = np.hypot(u1, u2)
        length[length == 0] = 1.0
        u1 /= length
        u2 /= length
        row = np.stack([u1 * u1, 2 * u1 * u2, u2 * u2], axis=1)
        np.add.at(normal_eq, src, row[:, :, None] * row[:, None, :])
        np.add.at(rhs, src, row * kappa[:, None])
    coeffs = np.einsum("nij,nj->ni", np.linalg.pinv(normal_eq), rhs)
    h = np.empty((n, 2, 2))
    h[:, 0, 0] = coeffs[:, 0]
    h[:, 0, 1] = h[:, 1, 0] = coeffs[:, 1]
    h[:, 1, 1] = coeffs[:, 2]
    return h


def curvatures(surface):
    """Computes the CurvatureField of a surface."""
    topo = surface.topology
    if not np.all(topo.used):
        isolated = int(np.flatnonzero(~topo.used)[0])
        raise errors.TopologyError("Vertex %d is isolated." % isolated)

    V = surface.vertices
    T = surface.triangles
    n = len(V)

    v_area = vertex_areas(V, T)
    v_normal = vertex_normals(V, T)
    grad = area_gradient(V, T)
    h_vec = grad / v_area[:, None]
    h_scalar = np.sum(h_vec * v_normal, axis=1)

    angles, _ = corner_angles(V, T)
    angle_sum = np.zeros(n)
    for k in range(3):
        np.add.at(angle_sum, T[:, k], angles[:, k])

    boundary = topo.is_boundary
    defect = np.where(boundary, 0.0, 2.0 * math.pi - angle_sum)
    gauss = np.where(boundary, 0.0, defect / v_area)
    turning = np.where(boundary, math.pi - angle_sum, 0.0)

    b_length = np.zeros(n)
    tangent = np.zeros((n, 3))
    for loop in topo.loops:
        pts = V[loop]
        nxt = np.roll(pts, -1, axis=0)
        prv = np.roll(pts, 1, axis=0)
        forward = np.linalg.norm(nxt - pts, axis=1)
        backward = np.linalg.norm(pts - prv, axis=1)
        b_length[loop] = 0.5 * (forward + backward)
        direction = nxt - prv
        tangent[loop] = direction / np.linalg.norm(direction, axis=1)[:, None]

    with np.errstate(invalid="ignore", divide="ignore"):
        geodesic = np.where(boundary, turning / b_length, 0.0)
    geodesic = np.nan_to_num(geodesic)

    conormal = np.cross(tangent, v_normal)
    c_norm = np.linalg.norm(conormal, axis=1)
    c_norm[c_norm == 0] = 1.0
    conormal /= c_norm[:, None]

    frames = _tangent_frames(v_normal)
    sff = _fit_second_fundamental_form(V, topo.edges, v_normal, frames)

    return CurvatureField(
        vertex_area=v_area, vertex_normal=v_normal,
        mean_curvature_vector=h_vec, mean_curvature=h_scalar,
        angle_defect=defect, gauss_curvature=gauss, turning_angle=turning,
        boundary_length=b_length, geodesic_curvature=geodesic,
        tangent=tangent, conormal=conormal, frame=frames,
        second_fundamental_form=sff)


def gauss_bonnet_residual(surface):
    """|int K + int k - 2 pi chi| from angle defects and turning angles."""
    field = curvatures(surface)
    total = field.IntegratedGauss() + field.IntegratedGeodesic()
    return abs(total - 2.0 * math.pi * surface.EulerCharacteristic())


def isoperimetric_ratio(surface):
    """|boundary|^2 / (4 pi |Sigma|) of a connected surface."""
    if surface.n_components != 1:
        raise errors.TopologyError(
            "Isoperimetric ratio needs a connected surface, got %d "
            "components." % surface.n_components)
    if not surface.boundary_loops:
        raise errors.AdmissibilityError("Surface has an empty boundary.")
    length = surface.BoundaryLength()
    return length ** 2 / (4.0 * math.pi * area(surface))


# Mesh construction.

def _stitch(inner, inner_angles, outer, outer_angles, closed):
    """Triangulates the strip between two rings ordered by angle."""
    tris = []
    na = len(inner)
    nb = len(outer)
    if closed:
        inner_angles = np.append(inner_angles, inner_angles[0] + 2 * math.pi)
        outer_angles = np.append(outer_angles, outer_angles[0] + 2 * math.pi)
        steps_a, steps_b = na, nb
    else:
        steps_a, steps_b = na - 1, nb - 1
    i = j = 0
    while i < steps_a or j < steps_b:
        advance_inner = j >= steps_b or (
            i < steps_a and inner_angles[i + 1] <= outer_angles[j + 1])
        if advance_inner:
            tris.append((inner[i % na], outer[j % nb], inner[(i + 1) % na]))
            i += 1
        else:
            tris.append((inner[i % na], outer[j % nb], outer[(j + 1) % nb]))
            j += 1
    return tris


def disk_layout(boundary_vertices=64, rings=12):
    """Unit disk layout: radial fractions, angles and ccw triangles."""
    boundary_vertices = max(int(boundary_vertices), 6)
    rings = max(int(rings), 1)
    fractions = [0.0]
    angles = [0.0]
    tris = []
    previous = None
    previous_angles = None
    for k in range(1, rings + 1):
        count = max(6, int(round(boundary_vertices * k / rings)))
        start = len(fractions)
        ring_angles = 2 * math.pi * np.arange(count) / count
        fractions.extend([k / rings] * count)
        angles.extend(ring_angles)
        ring = np.arange(start, start + count)
        if previous is None:
            for i in range(count):
                tris.append((0, ring[i], ring[(i + 1) % count]))
        else:
            tris.extend(_stitch(previous, previous_angles, ring, ring_angles,
                                closed=True))
        previous, previous_angles = ring, ring_angles
    return np.array(fractions), np.array(angles), np.array(tris)


def build_disk(radius=1.0, boundary_vertices=64, rings=12,
               center=(0.0, 0.0, 0.0)):
    """A flat disk in the plane x3 = center[2] with normal +e3."""
    fractions, angles, tris = disk_layout(boundary_vertices, rings)
    rho = radius * fractions
    vertices = np.stack(
        [rho * np.cos(angles), rho * np.sin(angles),
         np.zeros_like(rho)], axis=1) + np.asarray(center, dtype=float)
    return TriSurface(vertices, tris)


def build_spherical_cap(radius=1.0, colatitude=0.5 * math.pi,
                        boundary_vertices=64, rings=16):
    """A spherical cap around the north pole, normal pointing outwards."""
    fractions, angles, tris = disk_layout(boundary_vertices, rings)
    polar = colatitude * fractions
    vertices = radius * np.stack(
        [np.sin(polar) * np.cos(angles), np.sin(polar) * np.sin(angles),
         np.cos(polar)], axis=1)
    return TriSurface(vertices, tris)


def build_revolution_band(profile, z0, z1, rings=16, sectors=64):
    """Surface of revolution {|y| = profile(x3)} for x3 in [z0, z1].

    Normals point away from the axis.
    """
    heights = np.linspace(z0, z1, rings + 1)
    phis = 2 * math.pi * np.arange(sectors) / sectors
    vertices = []
    for z in heights:
        r = profile(z)
        for phi in phis:
            vertices.append((r * math.cos(phi), r * math.sin(phi), z))
    tris = []
    for i in range(rings):
        for j in range(sectors):
            a = i * sectors + j
            b = i * sectors + (j + 1) % sectors
            c = (i + 1) * sectors + (j + 1) % sectors
            d = (i + 1) * sectors + j
            tris.append((a, b, c))
            tris.append((a, c, d))
    return TriSurface(np.array(vertices), np.array(tris))


def build_square(side=1.0, divisions=1):
    """A planar square [0, side]^2 split into 2 * divisions^2 triangles."""
    ticks = np.linspace(0.0, side, divisions + 1)
    vertices = [(x, y, 0.0) for y in ticks for x in ticks]
    tris = []
    stride = divisions + 1
    for i in range(divisions):
        for j in range(divisions):
            a = i * stride + j
            tris.append((a, a + 1, a + stride + 1))
            tris.append((a, a + stride + 1, a + stride))
    return TriSurface(np.array(vertices), np.array(tris))


def build_half_disk(radius=1.0, arc_vertices=32, rings=8):
    """Vertical half disk in the plane x2 = 0 above the plane x3 = 0.

    The diameter lies on {x3 = 0} and is flagged as lying on the support, the
    arc is pinned. Its normal is -e2.
    """
    arc_vertices = max(int(arc_vertices), 4)
    fractions = [0.0]
    angles = [0.0]
    tris = []
    previous = np.array([0])
    previous_angles = np.array([0.0])
    for k in range(1, rings + 1):
        count = max(3, int(round(arc_vertices * k / rings))) + 1
        start = len(fractions)
        ring_angles = math.pi * np.arange(count) / (count - 1)
        fractions.extend([k / rings] * count)
        angles.extend(ring_angles)
        ring = np.arange(start, start + count)
        if k == 1:
            for i in range(count - 1):
                tris.append((0, ring[i], ring[i + 1]))
        else:
            tris.extend(_stitch(previous, previous_angles, ring, ring_angles,
                                closed=False))
        previous, previous_angles = ring, ring_angles
    rho = radius * np.array(fractions)
    angles = np.array(angles)
    vertices = np.stack(
        [rho * np.cos(angles), np.zeros_like(rho), rho * np.sin(angles)],
        axis=1)
    surface = TriSurface(vertices, np.array(tris))
    on_support = surface.is_boundary & (np.abs(vertices[:, 2]) < 1e-12)
    return TriSurface(vertices, np.array(tris), boundary_on_support=on_support)


# The capmesh v1 format.

def write_capmesh(surface, fd):
    fd.write("%s\n" % lexicon.CAPMESH_HEADER)
    fd.write("%d\n%d\n" % (len(surface.vertices), len(surface.triangles)))
    for x, y, z in surface.vertices:
        fd.write("%.17g %.17g %.17g\n" % (x, y, z))
    for a, b, c in surface.triangles:
        fd.write("%d %d %d\n" % (a, b, c))


def read_capmesh(fd):
    lines = [line.strip() for line in fd.read().splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines or lines[0] != lexicon.CAPMESH_HEADER:
        raise errors.TopologyError("Not a %s file." % lexicon.CAPMESH_HEADER)
    try:
        n_vertices = int(lines[1])
        n_triangles = int(lines[2])
        body = lines[3:]
        vertices = np.array([[float(x) for x in body[i].split()]
                             for i in range(n_vertices)])
        triangles = np.array(
            [[int(x) for x in body[n_vertices + i].split()]
             for i in range(n_triangles)])
    except (IndexError, ValueError) as e:
        raise errors.TopologyError("Malformed capmesh file: %s" % e)
    return TriSurface(vertices.reshape(-1, 3), triangles)


def dumps_capmesh(surface):
    out = io.StringIO()
    write_capmesh(surface, out)
    return out.getvalue()


def loads_capmesh(text):
    return read_capmesh(io.StringIO(text))
