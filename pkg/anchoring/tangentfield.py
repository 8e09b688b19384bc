"""Optimal tangential boundary data: the director v* that best follows the field direction, the
regions where v* degenerates, their winding degrees, and a tangent field with point defects that
agrees with v* away from those regions.

All constructions work on triangle meshes that carry exact vertex normals.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.sparse.linalg import spsolve
from scipy.spatial import cKDTree

from anchoring import surfaces
from anchoring.common import InputError, NumericalFailure, Direction, as_vector
from anchoring.config import (FOURTH_ROOT_24, DEGREE_TOL, MAX_REFINEMENTS, DEFECT_RADIUS_FACTOR,
                              PROJECTION_TOL, FIELD_MESH_RESOLUTION)

logger = logging.getLogger(__name__)


class DegenerateNormal(InputError, ValueError):
    """Raised when v* is requested where the normal is parallel to the field direction"""


class NonConvergedDegree(NumericalFailure):
    """Raised when a winding number stays non-integer after all loop refinements"""


class DegenerateProjection(NumericalFailure):
    """Raised when a defect profile vector is normal to the surface"""


def _project(vectors, normals):
    """Tangential part of vectors, row by row"""
    return vectors - np.einsum('ij,ij->i', vectors, normals)[:, None] * normals


def _normalize(vectors):
    return vectors / np.linalg.norm(vectors, axis=1)[:, None]


def vstar_array(normals, n):
    """ v* = (n - (ν·n)ν) / |n - (ν·n)ν| for every row of normals

    :rtype: numpy.ndarray
    """
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    v = as_vector(n)
    c = normals @ v
    if np.any(np.abs(c) >= 1. - 1e-12):
        raise DegenerateNormal('v* is undefined where the normal is ±n')
    return _normalize(v[None, :] - c[:, None] * normals)


def vstar(nu, n):
    """ The unit tangent maximizing |v·n|, with |v*·n| = √(1 - (ν·n)²)

    :type nu: Direction
    :type n: Direction
    :rtype: Direction
    """
    return Direction.of(vstar_array(as_vector(nu), n)[0])


def _tangent_basis(nu):
    helper = np.eye(3)[int(np.argmin(np.abs(nu)))]
    t1 = np.cross(nu, helper)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(nu, t1)


@dataclass
class Loop:
    """Closed loop on the surface: ordered points with their unit normals, last joined to first"""
    points: np.ndarray
    normals: np.ndarray
    vertices: np.ndarray = None

    def __len__(self):
        return len(self.points)

    def refined(self):
        """Insert chord midpoints with averaged normals"""
        nxt = np.roll(np.arange(len(self)), -1)
        mid_p = 0.5 * (self.points + self.points[nxt])
        mid_n = _normalize(self.normals + self.normals[nxt])
        points = np.empty((2 * len(self), 3))
        normals = np.empty_like(points)
        points[0::2], points[1::2] = self.points, mid_p
        normals[0::2], normals[1::2] = self.normals, mid_n
        return Loop(points, normals)


def _rotate_onto(vectors, a, b):
    """Minimal rotation taking unit a to unit b, applied to vectors"""
    axis = np.cross(a, b)
    s = np.linalg.norm(axis)
    c = float(a @ b)
    if s < 1e-15:
        return vectors
    k = axis / s
    return vectors * c + np.cross(k, vectors) * s + np.multiply.outer(vectors @ k, k) * (1. - c)


def _winding_increments(loop, vectors, reference):
    """ Angle increments of vectors and of a reference section, both measured in one frame that
    is transported along the loop by minimal rotations.
    """
    count = len(loop)
    normals = loop.normals
    frame = reference[0] / np.linalg.norm(reference[0])
    angles_v, angles_r = [], []
    for k in range(count + 1):
        nu = normals[k % count]
        if k:
            frame = _rotate_onto(frame, normals[k - 1], nu)
            frame = frame - (frame @ nu) * nu
            frame /= np.linalg.norm(frame)
        second = np.cross(nu, frame)
        v, r = vectors[k % count], reference[k % count]
        angles_v.append(math.atan2(v @ second, v @ frame))
        angles_r.append(math.atan2(r @ second, r @ frame))

    def wrapped(angles):
        d = np.diff(angles)
        return (d + math.pi) % (2. * math.pi) - math.pi

    return wrapped(angles_v), wrapped(angles_r)


def _solid_angle(normals, center):
    """Signed area of the spherical polygon of the loop normals, seen from the unit vector center"""
    nxt = np.roll(normals, -1, axis=0)
    num = np.cross(normals, nxt) @ center
    den = 1. + normals @ center + nxt @ center + np.einsum('ij,ij->i', normals, nxt)
    return 2. * math.fsum(np.arctan2(num, den))


def loop_degree(loop, field, reference=None, enclosed=None):
    """ Winding degree of a tangent field along a closed loop.

    By default the field and the reference section P_T(a), with a perpendicular to the mean loop
    normal, are compared in one parallel-transported frame; their difference in total turning is
    2π times the degree. When the loop bounds a disk whose normals cover ±a, pass the normal of a
    point inside as enclosed: the degree is then the field turning against the transported frame
    plus the holonomy of that frame, the solid angle swept by the loop normals around enclosed.

    The loop is refined while the result is not within DEGREE_TOL of an integer or an increment
    exceeds π/2.

    :param loop: Loop with points and normals
    :param field: callable (points, normals) -> unit tangent vectors
    :param reference: unit vector a; defaults to a fixed perpendicular of the mean normal
    :param enclosed: unit normal of a point inside a disk bounded by the loop
    :rtype: int
    """
    if enclosed is not None:
        enclosed = as_vector(enclosed)
    elif reference is None:
        mean = loop.normals.sum(axis=0)
        if np.linalg.norm(mean) < 1e-12:
            raise InputError('Loop normals average to zero; pass a reference direction')
        reference, _ = _tangent_basis(mean / np.linalg.norm(mean))

    for refinement in range(MAX_REFINEMENTS + 1):
        vectors = field(loop.points, loop.normals)
        if enclosed is None:
            section = _project(np.broadcast_to(reference, loop.points.shape).copy(), loop.normals)
            dv, dr = _winding_increments(loop, vectors, section)
            raw = (math.fsum(dv) - math.fsum(dr)) / (2. * math.pi)
        else:
            dv, dr = _winding_increments(loop, vectors, vectors)
            raw = (math.fsum(dv) + _solid_angle(loop.normals, enclosed)) / (2. * math.pi)
        degree = int(round(raw))
        largest = max(np.max(np.abs(dv)), np.max(np.abs(dr)))
        if largest <= math.pi / 2 and abs(raw - degree) < DEGREE_TOL:
            return degree
        logger.debug('Refining loop of %d points: raw degree %.6g, largest increment %.3g',
                     len(loop), raw, largest)
        loop = loop.refined()
    raise NonConvergedDegree('Winding degree did not settle after %d refinements' % MAX_REFINEMENTS)


@dataclass
class DefectPatch:
    """ Model defect û = P_ν(m)/|P_ν(m)| around p, with m = τ1 t1 + sign τ2 t2 turned by phase in
    the tangent plane at p and τ the rescaled tangent-chart coordinates of the point.
    """
    center: np.ndarray
    normal: np.ndarray
    radius: float
    sign: int
    phase: float = 0.

    def __post_init__(self):
        self.t1, self.t2 = _tangent_basis(self.normal)

    def chart(self, points):
        """Tangent-plane coordinates of points, rescaled to chord length and divided by the radius"""
        d = np.atleast_2d(points) - self.center
        tau = np.column_stack([d @ self.t1, d @ self.t2])
        planar = np.linalg.norm(tau, axis=1)
        chord = np.linalg.norm(d, axis=1)
        scale = np.where(planar > 0., chord / np.where(planar > 0., planar, 1.), 0.)
        return tau * scale[:, None] / self.radius

    def angle(self, points):
        """Angle of m against t1 in the tangent plane at the center"""
        tau = self.chart(points)
        return np.arctan2(self.sign * tau[:, 1], tau[:, 0]) + self.phase

    def evaluate(self, points, normals):
        tau = self.chart(points)
        size = np.linalg.norm(tau, axis=1)
        theta = self.angle(points)
        m = size[:, None] * (np.cos(theta)[:, None] * self.t1 + np.sin(theta)[:, None] * self.t2)
        u = _project(m, np.atleast_2d(normals))
        norm = np.linalg.norm(u, axis=1)
        at_center = size < 1e-14
        if np.any(norm[~at_center] < PROJECTION_TOL * size[~at_center]):
            raise DegenerateProjection('Defect profile is normal to the surface near %s' % self.center)
        u[at_center] = _project(np.broadcast_to(self.t1, (int(at_center.sum()), 3)).copy(),
                                np.atleast_2d(normals)[at_center])
        return _normalize(u)


def defect_profile(p, nu, radius, sign, phase=0.):
    """ Model point defect of degree sign at p, with tangent-plane normal nu

    :type radius: float
    :type sign: int
    :param phase: constant turn of the model vector, e.g. π/2 for a vortex instead of a source
    :rtype: DefectPatch
    """
    if sign not in (1, -1):
        raise InputError('Defect sign must be +1 or -1')
    if radius <= 0:
        raise InputError('Defect radius must be positive')
    return DefectPatch(np.asarray(p, dtype=float), as_vector(nu), float(radius), int(sign), float(phase))


@dataclass
class Region:
    """ Connected δ-neighbourhood of the set where ν = sign·n, as vertices and triangles of the
    mesh, with its positively oriented boundary loops.
    """
    sign: int
    vertices: np.ndarray
    triangles: np.ndarray
    loops: list
    degree: int = None

    @property
    def euler_characteristic(self):
        edges = np.unique(np.sort(np.concatenate([self.triangles[:, [0, 1]], self.triangles[:, [1, 2]],
                                                  self.triangles[:, [2, 0]]]), axis=1), axis=0)
        return len(self.vertices) - len(edges) + len(self.triangles)

    @property
    def is_disk(self):
        return self.euler_characteristic == 1 and len(self.loops) == 1

    @property
    def is_annulus(self):
        return self.euler_characteristic == 0 and len(self.loops) == 2


def _edge_graph(mesh):
    lengths = mesh.edge_lengths()
    v = len(mesh.vertices)
    a, b = mesh.edges[:, 0], mesh.edges[:, 1]
    return sparse.csr_matrix((np.concatenate([lengths, lengths]), (np.concatenate([a, b]),
                                                                   np.concatenate([b, a]))), shape=(v, v))


def _boundary_loops(mesh, triangles):
    v = len(mesh.vertices)
    heads = np.concatenate([triangles[:, 0], triangles[:, 1], triangles[:, 2]])
    tails = np.concatenate([triangles[:, 1], triangles[:, 2], triangles[:, 0]])
    keys = set((heads * v + tails).tolist())
    successor = {}
    for h, t in zip(heads.tolist(), tails.tolist()):
        if t * v + h not in keys:
            if h in successor:
                raise NumericalFailure('Region boundary touches itself at vertex %d; change delta' % h)
            successor[h] = t

    loops = []
    while successor:
        start = min(successor)
        chain = [start]
        nxt = successor.pop(start)
        while nxt != start:
            chain.append(nxt)
            nxt = successor.pop(nxt)
        idx = np.array(chain)
        loops.append(Loop(mesh.vertices[idx], mesh.vertex_normals[idx], idx))
    return loops


def _source_threshold(surface, mesh):
    try:
        kappa = surfaces.max_curvature(surface)
    except surfaces.NotC11:
        kappa = mesh.max_curvature()
    return 2. * kappa * float(np.max(mesh.edge_lengths()))


def degenerate_regions(surface, n, delta, mesh=None):
    """ Connected components of the δ-neighbourhoods of {ν = n} and {ν = -n}.

    Degenerate points are the vertices whose normal angle to ±n is a local minimum (plateaus
    included) and below 2κh, h the longest edge; the neighbourhood is measured along mesh edges.

    :param surface: analytic shape, RevolutionSurface or TriMesh
    :param mesh: triangulation to use; built from surface when omitted
    :rtype: list[Region]
    """
    if delta <= 0:
        raise InputError('delta must be positive')
    mesh = mesh or surfaces.mesh_from_shape(surface, FIELD_MESH_RESOLUTION)
    v = as_vector(n)
    graph = _edge_graph(mesh)
    threshold = _source_threshold(surface, mesh)
    a, b = mesh.edges[:, 0], mesh.edges[:, 1]

    regions = []
    for sign in (1, -1):
        angle = np.arccos(np.clip(sign * (mesh.vertex_normals @ v), -1., 1.))
        lowest = np.full(len(angle), np.inf)
        np.minimum.at(lowest, a, angle[b])
        np.minimum.at(lowest, b, angle[a])
        sources = np.flatnonzero((angle <= lowest + 1e-12) & (angle < threshold))
        if not len(sources):
            continue

        dist = dijkstra(graph, directed=False, indices=sources, min_only=True, limit=delta)
        inside = np.isfinite(dist) & (dist <= delta)
        keep = np.all(inside[mesh.triangles], axis=1)
        mask = sparse.diags(inside.astype(float))
        _, labels = connected_components(mask @ graph @ mask, directed=False)
        for label in np.unique(labels[inside]):
            triangles = mesh.triangles[keep & (labels[mesh.triangles[:, 0]] == label)]
            if not len(triangles):
                logger.warning('Degenerate set near vertex %d is thinner than one triangle; skipped',
                               int(np.flatnonzero(labels == label)[0]))
                continue
            vertices = np.unique(triangles)
            regions.append(Region(sign, vertices, triangles, _boundary_loops(mesh, triangles)))
    logger.info('Found %d degenerate regions for n=%s, delta=%g', len(regions), tuple(v), delta)
    return regions


def _laplacian(mesh, vertices, triangles):
    """Graph Laplacian with inverse edge-length weights, on the given vertices"""
    local = {int(g): k for k, g in enumerate(vertices)}
    edges = np.unique(np.sort(np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]],
                                              triangles[:, [2, 0]]]), axis=1), axis=0)
    i = np.array([local[int(e)] for e in edges[:, 0]])
    j = np.array([local[int(e)] for e in edges[:, 1]])
    w = 1. / np.linalg.norm(mesh.vertices[edges[:, 0]] - mesh.vertices[edges[:, 1]], axis=1)
    n = len(vertices)
    weights = sparse.csr_matrix((np.concatenate([w, w]), (np.concatenate([i, j]), np.concatenate([j, i]))),
                                shape=(n, n))
    return sparse.diags(np.asarray(weights.sum(axis=1)).ravel()) - weights, local


def _harmonic(mesh, vertices, triangles, fixed):
    """ Discrete harmonic function on a region with Dirichlet values

    :param fixed: mapping global vertex -> value
    :rtype: numpy.ndarray
    """
    lap, local = _laplacian(mesh, vertices, triangles)
    values = np.zeros(len(vertices))
    known = np.zeros(len(vertices), dtype=bool)
    for g, value in fixed.items():
        values[local[g]] = value
        known[local[g]] = True
    free = ~known
    if np.any(free):
        lap = lap.tocsr()
        rhs = -lap[free][:, known] @ values[known]
        values[free] = spsolve(lap[free][:, free].tocsc(), rhs)
    return values


def _signed_angle(r, v, normals):
    return np.arctan2(np.einsum('ij,ij->i', np.cross(r, v), normals), np.einsum('ij,ij->i', r, v))


def _gradient_direction(mesh, vertices, triangles, t):
    """Unit tangential gradient at the vertices of a P1 function t given on all mesh vertices"""
    corners = mesh.vertices[triangles]
    face_normals = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
    grad = np.zeros((len(triangles), 3))
    for k in range(3):
        opposite = corners[:, (k + 2) % 3] - corners[:, (k + 1) % 3]
        grad += t[triangles[:, k]][:, None] * np.cross(face_normals, opposite)
    # face_normals has length 2A, so the sum above is 4A² ∇t; weighting by area leaves 2A ∇t
    acc = np.zeros_like(mesh.vertices)
    for k in range(3):
        np.add.at(acc, triangles[:, k], grad / np.linalg.norm(face_normals, axis=1)[:, None])
    out = _project(acc[vertices], mesh.vertex_normals[vertices])
    return _normalize(out)


@dataclass(frozen=True)
class DefectRecord:
    position: tuple
    degree: int
    radius: float

    def to_dict(self):
        return {'position': list(self.position), 'degree': self.degree, 'radius': self.radius}


@dataclass
class TangentField:
    """ Unit tangent field on a mesh: v* outside the degenerate regions, interpolated vertex values
    inside. Points are evaluated against the normals passed with them.
    """
    mesh: object
    n: np.ndarray
    vertex_field: np.ndarray
    in_region: np.ndarray
    regions: list = field(default_factory=list)
    defects: list = field(default_factory=list)

    def __post_init__(self):
        self._tree = cKDTree(self.mesh.vertices)

    def evaluate(self, points, normals):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        dist, idx = self._tree.query(points, k=3)
        near = self.in_region[idx[:, 0]]

        out = np.empty_like(points)
        if np.any(~near):
            out[~near] = vstar_array(normals[~near], self.n)
        if np.any(near):
            d, i = dist[near], idx[near]
            weights = 1. / np.maximum(d, 1e-15)
            weights[d[:, 0] < 1e-14] = [1., 0., 0.]
            blend = np.einsum('ij,ijk->ik', weights, self.vertex_field[i])
            u = _project(blend, normals[near])
            small = np.linalg.norm(u, axis=1) < 1e-12
            if np.any(small):
                t1 = np.array([_tangent_basis(nu)[0] for nu in normals[near][small]])
                u[small] = t1
            out[near] = _normalize(u)
        return out

    __call__ = evaluate

    @property
    def total_degree(self):
        return sum(r.degree for r in self.regions)

    @property
    def euler_characteristic(self):
        return self.mesh.euler_characteristic

    def rows(self):
        for p, v in zip(self.mesh.vertices, self.vertex_field):
            yield [float(c) for c in p] + [float(c) for c in v]


def _vstar_field(n):
    return lambda points, normals: vstar_array(normals, n)


def _disk_defects(mesh, region, degree, delta):
    """Defect positions: the region vertex nearest the centroid, spread by delta/2 when |d| > 1"""
    interior = np.setdiff1d(region.vertices, np.concatenate([lp.vertices for lp in region.loops]))
    pool = interior if len(interior) else region.vertices
    centroid = mesh.vertices[region.vertices].mean(axis=0)
    tree = cKDTree(mesh.vertices[pool])
    center = pool[tree.query(centroid)[1]]
    if abs(degree) == 1:
        return [center]
    t1, t2 = _tangent_basis(mesh.vertex_normals[center])
    out = []
    for j in range(abs(degree)):
        a = 2. * math.pi * j / abs(degree)
        target = mesh.vertices[center] + 0.5 * delta * (math.cos(a) * t1 + math.sin(a) * t2)
        out.append(pool[tree.query(target)[1]])
    return out


def _fill_region(mesh, region, n, delta, graph):
    """Vertex values inside one region and its defect records"""
    vs = region.vertices
    normals = mesh.vertex_normals[vs]
    loop_vertices = np.concatenate([lp.vertices for lp in region.loops])
    fixed = {}
    defects = []

    if region.degree != 0:
        if not region.is_disk:
            raise InputError('Defects are only placed in disk-shaped regions; region has %d loops and '
                             'Euler characteristic %d' % (len(region.loops), region.euler_characteristic))
        sign = 1 if region.degree > 0 else -1
        radius = DEFECT_RADIUS_FACTOR * delta
        centers = _disk_defects(mesh, region, region.degree, delta)
        # vortex patches keep a tangential part on flanks whose normal points away from the center
        patches = [defect_profile(mesh.vertices[c], mesh.vertex_normals[centers[0]], radius, sign, math.pi / 2)
                   for c in centers]
        for c in centers:
            within = dijkstra(graph, directed=False, indices=int(c), limit=radius)
            for g in vs[np.isfinite(within[vs]) & (within[vs] <= radius)]:
                fixed[int(g)] = 0.
            defects.append(DefectRecord(tuple(float(x) for x in mesh.vertices[c]), sign, radius))
        points = mesh.vertices[vs]
        if len(patches) == 1:
            reference = patches[0].evaluate(points, normals)
        else:
            t1, t2 = patches[0].t1, patches[0].t2
            angle = sum(p.angle(points) for p in patches)
            reference = _project(np.cos(angle)[:, None] * t1 + np.sin(angle)[:, None] * t2, normals)
            for c in centers:
                k = int(np.searchsorted(vs, c))
                reference[k] = _project(t1[None, :], normals[k:k + 1])[0]
    elif region.is_annulus:
        coordinate = np.zeros(len(mesh.vertices))
        ends = {int(g): float(k) for k, lp in enumerate(region.loops) for g in lp.vertices}
        coordinate[vs] = _harmonic(mesh, vs, region.triangles, ends)
        reference = _gradient_direction(mesh, vs, region.triangles, coordinate)
    else:
        mean = normals.sum(axis=0)
        a, _ = _tangent_basis(mean / np.linalg.norm(mean))
        reference = _project(np.broadcast_to(a, normals.shape).copy(), normals)
    reference = _normalize(reference)

    index = {int(g): k for k, g in enumerate(vs)}
    for lp in region.loops:
        k = np.array([index[int(g)] for g in lp.vertices])
        target = vstar_array(lp.normals, n)
        psi = np.unwrap(_signed_angle(reference[k], target, lp.normals))
        closing = (psi[0] - psi[-1] + math.pi) % (2. * math.pi) - math.pi
        if abs(psi[-1] + closing - psi[0]) > 1e-6:
            raise NonConvergedDegree('Boundary data winds %.3g turns relative to the reference field'
                                     % ((psi[-1] + closing - psi[0]) / (2. * math.pi)))
        for g, value in zip(lp.vertices, psi):
            fixed[int(g)] = float(value)

    psi = _harmonic(mesh, vs, region.triangles, fixed)
    values = np.cos(psi)[:, None] * reference + np.sin(psi)[:, None] * np.cross(normals, reference)
    values[np.isin(vs, loop_vertices)] = vstar_array(normals[np.isin(vs, loop_vertices)], n)
    return _normalize(_project(values, normals)), defects


def _region_degree(mesh, region, n):
    """ Degree of v* around a region. Disks are read against the holonomy of the transported frame,
    centred on the vertex closest to ν = sign·n, so plateaus whose normals cover a whole hemisphere
    need no reference section.
    """
    target = _vstar_field(n)
    if region.is_disk:
        normals = mesh.vertex_normals[region.vertices]
        enclosed = normals[int(np.argmax(region.sign * (normals @ n)))]
        return loop_degree(region.loops[0], target, enclosed=enclosed)
    return sum(loop_degree(lp, target) for lp in region.loops)


def build_boundary_field(surface, n, delta, mesh=None):
    """ Tangent field equal to v* outside the degenerate regions, with |d_i| point defects of sign
    sgn(d_i) in each region of degree d_i, filled by a discrete harmonic angle relative to a model
    field that carries those defects.

    :param surface: analytic shape, RevolutionSurface or TriMesh
    :param n: field direction
    :param delta: region radius
    :rtype: TangentField
    """
    n = as_vector(n)
    mesh = mesh or surfaces.mesh_from_shape(surface, FIELD_MESH_RESOLUTION)
    regions = degenerate_regions(surface, n, delta, mesh)
    graph = _edge_graph(mesh)

    in_region = np.zeros(len(mesh.vertices), dtype=bool)
    values = np.zeros_like(mesh.vertices)
    defects = []
    for region in regions:
        region.degree = _region_degree(mesh, region, n)
        region_values, region_defects = _fill_region(mesh, region, n, delta, graph)
        in_region[region.vertices] = True
        values[region.vertices] = region_values
        defects.extend(region_defects)

    outside = ~in_region
    values[outside] = vstar_array(mesh.vertex_normals[outside], n)
    result = TangentField(mesh, n, values, in_region, regions, defects)
    if result.total_degree != result.euler_characteristic:
        raise NumericalFailure('Total degree %d differs from the Euler characteristic %d; refine the mesh or '
                               'change delta' % (result.total_degree, result.euler_characteristic))
    return result


def field_surface_energy(samples, field, n):
    """ ⁴√24 ∫ 1 - |v·n| dH² for a tangent field v

    :type samples: anchoring.common.QuadratureSample
    :param field: callable (points, normals) -> unit tangents, e.g. a TangentField
    :rtype: float
    """
    v = field(samples.points, samples.normals)
    return math.fsum(samples.weights * FOURTH_ROOT_24 * (1. - np.abs(v @ as_vector(n))))


def degree_report(field):
    """ Poincaré-Hopf summary of a constructed field

    :type field: TangentField
    :rtype: dict
    """
    return {'regions': [{'sign': r.sign, 'loop_degree': r.degree,
                         'n_defects': sum(1 for d in field.defects
                                          if np.any(np.all(np.isclose(field.mesh.vertices[r.vertices],
                                                                      d.position), axis=1))),
                         'n_loops': len(r.loops)} for r in field.regions],
            'defects': [d.to_dict() for d in field.defects],
            'total_degree': field.total_degree,
            'euler_characteristic': field.euler_characteristic}
