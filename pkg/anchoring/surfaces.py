"""Particle boundaries: analytic shapes, surfaces of revolution and closed triangle meshes, with
outward normals, exact areas, curvature bounds and quadrature rules for surface integrals.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from anchoring.common import InputError, Direction, QuadratureSample
from anchoring.config import (MIN_RESOLUTION, MIN_TRIANGLE_AREA, MESH_MERGE_TOL, DEFAULT_RESOLUTION)

logger = logging.getLogger(__name__)


class DegenerateParameter(InputError, ValueError):
    """Raised when a profile curve has a vanishing tangent or a parameter is out of range"""


class NotC11(InputError):
    """Raised when a curvature bound is requested for a surface that is not C^{1,1}"""


class UnsupportedPair(InputError):
    """Raised for shape pairs without an exact symmetric difference formula"""


class MeshError(InputError):
    """Raised when a triangle mesh is not a closed, consistently oriented 2-manifold"""


def gauss_legendre(count, a=0., b=1.):
    """ Gauss-Legendre nodes and weights on [a, b]

    :rtype: tuple[numpy.ndarray, numpy.ndarray]
    """
    x, w = roots_legendre(count)
    half = 0.5 * (b - a)
    return a + half * (x + 1.), half * w


def _check_resolution(resolution):
    if resolution < MIN_RESOLUTION:
        raise InputError('Quadrature resolution must be at least %d' % MIN_RESOLUTION)


# Profile pieces, traced counterclockwise in the (x1, x3) half-plane on a local parameter t in [0, 1]

@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple

    @property
    def length(self):
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.start[0] + t * (self.end[0] - self.start[0]),
                         self.start[1] + t * (self.end[1] - self.start[1])], axis=-1)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        d = np.array([self.end[0] - self.start[0], self.end[1] - self.start[1]])
        return np.broadcast_to(d, t.shape + (2,)).copy()

    def curvature(self):
        return 0.

    def normal_crossings(self, n3):
        return []

    def pappus_area(self):
        return 2. * math.pi * self.length * 0.5 * (self.start[0] + self.end[0])


@dataclass(frozen=True)
class Arc:
    center: tuple
    radius: float
    start_angle: float
    end_angle: float

    @property
    def sweep(self):
        return self.end_angle - self.start_angle

    @property
    def length(self):
        return self.radius * self.sweep

    def angle(self, t):
        return self.start_angle + np.asarray(t, dtype=float) * self.sweep

    def point(self, t):
        a = self.angle(t)
        return np.stack([self.center[0] + self.radius * np.cos(a),
                         self.center[1] + self.radius * np.sin(a)], axis=-1)

    def derivative(self, t):
        a = self.angle(t)
        return self.radius * self.sweep * np.stack([-np.sin(a), np.cos(a)], axis=-1)

    def curvature(self):
        return 1. / self.radius

    def normal_crossings(self, n3):
        """ Local parameters where the profile normal has third component ±n3 (interior only)

        :rtype: list[float]
        """
        base = math.asin(min(max(n3, -1.), 1.))
        candidates = set()
        for root in (base, math.pi - base, -base, math.pi + base):
            for k in range(-2, 3):
                candidates.add(root + 2. * math.pi * k)
        ts = sorted((a - self.start_angle) / self.sweep for a in candidates)
        return [t for t in ts if 1e-12 < t < 1. - 1e-12]

    def pappus_area(self):
        return 2. * math.pi * self.radius * (self.center[0] * self.sweep
                                             + self.radius * (math.sin(self.end_angle)
                                                              - math.sin(self.start_angle)))


class RevolutionSurface:
    """ Surface generated by rotating a profile chain of segments and arcs about the e3 axis.

    The chain is traced counterclockwise in the (x1, x3) half-plane, so the outward normal of the
    profile is (γ3', -γ1')/|γ'|. It is either closed, or starts and ends on the axis.
    """

    def __init__(self, pieces):
        self.pieces = tuple(pieces)
        if not self.pieces:
            raise InputError('A profile chain needs at least one piece')

        lengths = np.array([p.length for p in self.pieces])
        if np.any(lengths <= 0):
            raise DegenerateParameter('Profile pieces must have positive length')
        self.length = float(lengths.sum())
        self.breaks = np.concatenate([[0.], np.cumsum(lengths) / self.length])
        self.breaks[-1] = 1.

        self._check_chain()

    def _check_chain(self):
        joins = list(zip(self.pieces[:-1], self.pieces[1:]))
        first = self.pieces[0].point(0.)
        last = self.pieces[-1].point(1.)
        self.closed = bool(np.allclose(first, last, atol=1e-12))
        if self.closed:
            joins.append((self.pieces[-1], self.pieces[0]))
        elif abs(first[0]) > 1e-12 or abs(last[0]) > 1e-12:
            raise InputError('An open profile must start and end on the e3 axis')

        for a, b in joins:
            if not np.allclose(a.point(1.), b.point(0.), atol=1e-12):
                raise InputError('Profile pieces must join continuously')
            ta = a.derivative(1.) / np.linalg.norm(a.derivative(1.))
            tb = b.derivative(0.) / np.linalg.norm(b.derivative(0.))
            if not np.allclose(ta, tb, atol=1e-9):
                raise InputError('Profile tangents must match at joins for a C^{1,1} surface')

        for piece in self.pieces:
            if np.min(piece.point(np.linspace(0., 1., 257))[:, 0]) < -1e-12:
                raise InputError('Profile must stay in the half-plane x1 >= 0')

    @property
    def area(self):
        return math.fsum(p.pappus_area() for p in self.pieces)

    @property
    def euler_characteristic(self):
        return 0 if self.closed else 2

    def locate(self, s):
        """ Piece index and local parameter for a global arc-length fraction s in [0, 1]

        :rtype: tuple[int, float]
        """
        if not -1e-15 <= s <= 1. + 1e-15:
            raise DegenerateParameter('Profile parameter must lie in [0, 1], got %r' % s)
        k = int(min(np.searchsorted(self.breaks, s, side='right') - 1, len(self.pieces) - 1))
        t = (s - self.breaks[k]) / (self.breaks[k + 1] - self.breaks[k])
        return k, min(max(t, 0.), 1.)

    def gamma(self, s):
        k, t = self.locate(s)
        return self.pieces[k].point(t)

    def dgamma(self, s):
        """Derivative of the profile with respect to the global parameter s"""
        k, t = self.locate(s)
        return self.pieces[k].derivative(t) / (self.breaks[k + 1] - self.breaks[k])

    def normal(self, s, theta):
        """ Outward unit normal at profile parameter s and rotation angle theta

        :rtype: Direction
        """
        d = self.dgamma(s)
        speed = float(np.hypot(d[0], d[1]))
        if speed < 1e-14:
            raise DegenerateParameter('Profile tangent vanishes at s=%r' % s)
        a, b = d[1] / speed, -d[0] / speed
        return Direction.of([a * math.cos(theta), a * math.sin(theta), b])

    def _embed(self, piece, t, theta, weights_t, weights_theta):
        """Tensor product of profile nodes t and angles theta with the revolution measure γ1|γ'|"""
        p = piece.point(t)
        d = piece.derivative(t)
        speed = np.hypot(d[:, 0], d[:, 1])
        a, b = d[:, 1] / speed, -d[:, 0] / speed

        cos, sin = np.cos(theta), np.sin(theta)
        points = np.stack([np.outer(p[:, 0], cos), np.outer(p[:, 0], sin),
                           np.outer(p[:, 1], np.ones_like(theta))], axis=-1).reshape(-1, 3)
        normals = np.stack([np.outer(a, cos), np.outer(a, sin),
                            np.outer(b, np.ones_like(theta))], axis=-1).reshape(-1, 3)
        weights = np.outer(p[:, 0] * speed * weights_t, weights_theta).ravel()
        return QuadratureSample(points, normals, np.maximum(weights, 0.))

    def sample(self, resolution=DEFAULT_RESOLUTION):
        """ Gauss-Legendre nodes along every piece times uniform angles over a full turn

        :rtype: QuadratureSample
        """
        _check_resolution(resolution)
        count = 2 * resolution
        theta = 2. * math.pi * (np.arange(count) + 0.5) / count
        w_theta = np.full(count, 2. * math.pi / count)
        t, w_t = gauss_legendre(resolution)
        return QuadratureSample.concatenate(self._embed(p, t, theta, w_t, w_theta) for p in self.pieces)

    def half_turn_rule(self, n3, resolution=DEFAULT_RESOLUTION):
        """ Quadrature rule for integrands that are even in theta, valid for directions n = (n1, 0, n3).

        Profile pieces are split where the profile normal has third component ±n3, so rings touching
        ν = ±n sit on interval ends; theta runs over [0, π] with doubled weights.

        :rtype: QuadratureSample
        """
        _check_resolution(resolution)
        theta, w_theta = gauss_legendre(resolution, 0., math.pi)
        w_theta = 2. * w_theta
        parts = []
        for piece in self.pieces:
            cuts = [0.] + piece.normal_crossings(n3) + [1.]
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                t, w_t = gauss_legendre(resolution, lo, hi)
                parts.append(self._embed(piece, t, theta, w_t, w_theta))
        return QuadratureSample.concatenate(parts)

    def max_curvature(self):
        """ Largest principal curvature: meridian curvature of arcs, and parallel curvature
        |ν1|/γ1 sampled along the profile.

        :rtype: float
        """
        kappa = max(p.curvature() for p in self.pieces)
        t = np.linspace(0., 1., 1025)
        for piece in self.pieces:
            p = piece.point(t)
            d = piece.derivative(t)
            a = d[:, 1] / np.hypot(d[:, 0], d[:, 1])
            away = p[:, 0] > 1e-9
            if np.any(away):
                kappa = max(kappa, float(np.max(np.abs(a[away]) / p[away, 0])))
        return kappa

    def grid(self, resolution):
        """ Mesh grid: uniform in s (resolution + 1 profile points) and in theta (2 * resolution)

        :return: points (n_s, n_theta, 3) and outward normals of the same shape
        """
        s = np.linspace(0., 1., resolution + 1)
        theta = 2. * math.pi * np.arange(2 * resolution + 1) / (2 * resolution)
        prof = np.array([self.gamma(v) for v in s])
        d = np.array([self.dgamma(v) for v in s])
        speed = np.hypot(d[:, 0], d[:, 1])
        a, b = d[:, 1] / speed, -d[:, 0] / speed

        cos, sin = np.cos(theta), np.sin(theta)
        points = np.stack([np.outer(prof[:, 0], cos), np.outer(prof[:, 0], sin),
                           np.outer(prof[:, 1], np.ones_like(theta))], axis=-1)
        normals = np.stack([np.outer(a, cos), np.outer(a, sin),
                            np.outer(b, np.ones_like(theta))], axis=-1)
        return points, normals


def revolution_normal(surface, s, theta):
    """ Outward unit normal of a surface of revolution at (s, theta)

    :type surface: RevolutionSurface
    :rtype: Direction
    """
    return surface.normal(s, theta)


# Analytic shapes

def _positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise InputError('Shape parameter %s must be positive, got %r' % (name, value))


@dataclass(frozen=True)
class Sphere:
    R: float
    tag = 'sphere'

    def __post_init__(self):
        _positive(R=self.R)

    @property
    def area(self):
        return 4. * math.pi * self.R ** 2

    def to_revolution(self):
        R = self.R
        return RevolutionSurface([Arc((0., 0.), R, -math.pi / 2, 0.), Arc((0., 0.), R, 0., math.pi / 2)])

    def max_curvature(self):
        return 1. / self.R


@dataclass(frozen=True)
class Spherocylinder:
    R: float
    L: float
    tag = 'spherocylinder'

    def __post_init__(self):
        _positive(R=self.R, L=self.L)

    @property
    def area(self):
        return 2. * math.pi * self.R * self.L + 4. * math.pi * self.R ** 2

    def to_revolution(self):
        R, h = self.R, self.L / 2.
        return RevolutionSurface([Arc((0., -h), R, -math.pi / 2, 0.),
                                  Segment((R, -h), (R, h)),
                                  Arc((0., h), R, 0., math.pi / 2)])

    def max_curvature(self):
        return 1. / self.R


@dataclass(frozen=True)
class Torus:
    R: float
    r: float
    tag = 'torus'

    def __post_init__(self):
        _positive(R=self.R, r=self.r)
        if not self.R > self.r:
            raise InputError('Torus requires R > r > 0')

    @property
    def area(self):
        return 4. * math.pi ** 2 * self.R * self.r

    def to_revolution(self):
        # four quarter arcs starting at the top circle keep the rule symmetric under x3 -> -x3
        quarter = math.pi / 2
        return RevolutionSurface([Arc((self.R, 0.), self.r, quarter * (1 + k), quarter * (2 + k))
                                  for k in range(4)])

    def max_curvature(self):
        return max(1. / self.r, 1. / (self.R - self.r))


def _axes(axis, sign):
    """In-face axes (u, v) with e_u x e_v = sign * e_axis"""
    u, v = (axis + 1) % 3, (axis + 2) % 3
    return (u, v) if sign > 0 else (v, u)


@dataclass(frozen=True)
class Cube:
    """ The cube ∂([-R/2, R/2]³): side R, total area 6R² """
    R: float
    tag = 'cube'

    def __post_init__(self):
        _positive(R=self.R)

    @property
    def side(self):
        return self.R

    @property
    def area(self):
        return 6. * self.R ** 2

    def sample(self, resolution=DEFAULT_RESOLUTION):
        _check_resolution(resolution)
        a = self.R / 2.
        x, w = gauss_legendre(resolution, -a, a)
        return QuadratureSample.concatenate(_face(axis, sign, a, x, w)
                                            for axis in range(3) for sign in (1., -1.))

    def max_curvature(self):
        raise NotC11('The cube has edges and corners; use RoundedCube for a C^{1,1} approximation')


def _face(axis, sign, offset, x, w):
    u, v = _axes(axis, sign)
    xu, xv = np.meshgrid(x, x, indexing='ij')
    points = np.zeros(xu.shape + (3,))
    points[..., axis] = sign * offset
    points[..., u] = xu
    points[..., v] = xv
    normals = np.zeros_like(points)
    normals[..., axis] = sign
    return QuadratureSample(points.reshape(-1, 3), normals.reshape(-1, 3), np.outer(w, w).ravel())


@dataclass(frozen=True)
class RoundedCube:
    """ The cube ∂([-R/2, R/2]³) with edges and corners rounded by fillets of radius eps < R/2 """
    R: float
    eps: float
    tag = 'rounded_cube'

    def __post_init__(self):
        _positive(R=self.R, eps=self.eps)
        if not self.eps < self.R / 2.:
            raise InputError('RoundedCube requires eps < R/2')

    @property
    def flat(self):
        """Side of the flat part of each face"""
        return self.R - 2. * self.eps

    @property
    def area(self):
        e, f = self.eps, self.flat
        return 6. * f ** 2 + 12. * (math.pi * e / 2.) * f + 4. * math.pi * e ** 2

    def sample(self, resolution=DEFAULT_RESOLUTION):
        """ Gauss-Legendre rules on 6 flat faces, 12 quarter cylinders and 8 sphere octants """
        _check_resolution(resolution)
        e, b = self.eps, self.R / 2. - self.eps
        x, w = gauss_legendre(resolution, -b, b)
        parts = [_face(axis, sign, self.R / 2., x, w) for axis in range(3) for sign in (1., -1.)]

        phi, w_phi = gauss_legendre(resolution, 0., math.pi / 2)
        for axis in range(3):
            j, k = (axis + 1) % 3, (axis + 2) % 3
            for sj in (1., -1.):
                for sk in (1., -1.):
                    pa, xa = np.meshgrid(phi, x, indexing='ij')
                    normals = np.zeros(pa.shape + (3,))
                    normals[..., j] = sj * np.cos(pa)
                    normals[..., k] = sk * np.sin(pa)
                    points = e * normals
                    points[..., axis] = xa
                    points[..., j] += sj * b
                    points[..., k] += sk * b
                    parts.append(QuadratureSample(points.reshape(-1, 3), normals.reshape(-1, 3),
                                                  e * np.outer(w_phi, w).ravel()))

        psi, w_psi = gauss_legendre(resolution, 0., math.pi / 2)
        pp, ph = np.meshgrid(psi, phi, indexing='ij')
        for s1 in (1., -1.):
            for s2 in (1., -1.):
                for s3 in (1., -1.):
                    normals = np.stack([s1 * np.sin(pp) * np.cos(ph), s2 * np.sin(pp) * np.sin(ph),
                                        s3 * np.cos(pp)], axis=-1)
                    points = e * normals + np.array([s1, s2, s3]) * b
                    weights = e * e * np.outer(w_psi * np.sin(psi), w_phi).ravel()
                    parts.append(QuadratureSample(points.reshape(-1, 3), normals.reshape(-1, 3), weights))
        return QuadratureSample.concatenate(parts)

    def max_curvature(self):
        return 1. / self.eps


SHAPES = {cls.tag: cls for cls in (Sphere, Spherocylinder, Torus, Cube, RoundedCube)}
REVOLUTION_SHAPES = (Sphere, Spherocylinder, Torus)


def shape_from_params(tag, **params):
    """ Build an analytic shape from its tag and parameters, e.g. ('torus', R=2, r=1)

    :rtype: Sphere | Spherocylinder | Torus | Cube | RoundedCube
    """
    try:
        cls = SHAPES[tag.replace('-', '_').lower()]
    except KeyError:
        raise InputError('Unknown shape "%s", choose from: %s' % (tag, ', '.join(sorted(SHAPES))))
    try:
        return cls(**{k: float(v) for k, v in params.items()})
    except TypeError as e:
        raise InputError('Bad parameters for %s: %s' % (tag, e))


def as_revolution(surface):
    """ The surface of revolution behind a surface, or None

    :rtype: RevolutionSurface | None
    """
    if isinstance(surface, RevolutionSurface):
        return surface
    if isinstance(surface, REVOLUTION_SHAPES):
        return surface.to_revolution()
    return None


def sample(surface, resolution=DEFAULT_RESOLUTION):
    """ Quadrature rule for ∫_M · dH² on any surface representation

    :rtype: QuadratureSample
    """
    _check_resolution(resolution)
    revolution = as_revolution(surface)
    if revolution is not None:
        return revolution.sample(resolution)
    return surface.sample(resolution)


def surface_area(surface):
    return surface.area


def max_curvature(surface):
    """ Largest absolute principal curvature κ; exact for analytic shapes, estimated for meshes

    :rtype: float
    """
    return surface.max_curvature()


def ray_length(surface):
    """ Admissible ray length r0 = 1/(2κ) """
    return 1. / (2. * max_curvature(surface))


def symmetric_difference_area(a, b):
    """ H²(M^ε Δ M) for a cube and its rounded approximation of the same size

    :rtype: float
    """
    if isinstance(a, RoundedCube) and isinstance(b, Cube):
        a, b = b, a
    if not (isinstance(a, Cube) and isinstance(b, RoundedCube)) or a.R != b.R:
        raise UnsupportedPair('Only (Cube(R), RoundedCube(R, eps)) pairs are supported')

    removed = 6. * (a.R ** 2 - b.flat ** 2)
    added = b.area - 6. * b.flat ** 2
    return removed + added


# Triangle meshes

class TriMesh:
    """ Closed, consistently oriented triangle mesh with per-triangle outward normals.

    Face normals are computed once from the stored orientation. Vertex normals are either supplied
    (exact normals of an analytic shape) or area weighted averages of face normals.
    """

    def __init__(self, vertices, triangles, vertex_normals=None):
        self.vertices = np.ascontiguousarray(vertices, dtype=float)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise MeshError('Vertices must have shape (V, 3)')
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise MeshError('Triangles must have shape (T, 3)')
        if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
            raise MeshError('Triangle vertex index out of range')

        corners = self.vertices[self.triangles]
        cross = np.cross(corners[:, 1] - corners[:, 0], corners[:, 2] - corners[:, 0])
        doubled = np.linalg.norm(cross, axis=1)
        if np.any(doubled / 2. < MIN_TRIANGLE_AREA):
            raise MeshError('Mesh has %d triangles below the minimum area' % np.sum(doubled / 2. < MIN_TRIANGLE_AREA))
        self.face_areas = doubled / 2.
        self.face_normals = cross / doubled[:, None]

        self._edge_census()

        if vertex_normals is None:
            acc = np.zeros_like(self.vertices)
            for k in range(3):
                np.add.at(acc, self.triangles[:, k], cross)
            vertex_normals = acc / np.linalg.norm(acc, axis=1)[:, None]
        self.vertex_normals = np.ascontiguousarray(vertex_normals, dtype=float)

    def _edge_census(self):
        v = len(self.vertices)
        t = self.triangles
        heads = np.concatenate([t[:, 0], t[:, 1], t[:, 2]])
        tails = np.concatenate([t[:, 1], t[:, 2], t[:, 0]])
        directed = heads * v + tails
        unique, counts = np.unique(directed, return_counts=True)
        if np.any(counts > 1):
            raise MeshError('Inconsistent orientation: %d directed edges used twice' % np.sum(counts > 1))
        reverse = tails * v + heads
        if not np.all(np.isin(reverse, unique)):
            raise MeshError('Mesh is not closed: %d edges have a single triangle'
                            % np.sum(~np.isin(reverse, unique)))
        self.edges = np.unique(np.sort(np.stack([heads, tails], axis=1), axis=1), axis=0)

    @classmethod
    def from_soup(cls, triangles, normals=None, tol=MESH_MERGE_TOL):
        """ Merge coincident corners of a triangle soup and drop triangles that collapse.

        :param triangles: corner positions (T, 3, 3)
        :param normals: optional corner normals (T, 3, 3); the first occurrence wins on merge
        :rtype: TriMesh
        """
        corners = np.asarray(triangles, dtype=float).reshape(-1, 3)
        keys = np.rint(corners / tol).astype(np.int64)
        _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        faces = inverse.reshape(-1, 3)
        keep = (faces[:, 0] != faces[:, 1]) & (faces[:, 1] != faces[:, 2]) & (faces[:, 2] != faces[:, 0])

        vertex_normals = None
        if normals is not None:
            vertex_normals = np.asarray(normals, dtype=float).reshape(-1, 3)[first]
        return cls(corners[first], faces[keep], vertex_normals)

    @property
    def area(self):
        return math.fsum(self.face_areas)

    @property
    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def sample(self, resolution=None):
        """ Edge-midpoint rule per triangle (exact for quadratics), each point weighted area/3 """
        c = self.vertices[self.triangles]
        mids = np.stack([(c[:, 0] + c[:, 1]) / 2., (c[:, 1] + c[:, 2]) / 2., (c[:, 2] + c[:, 0]) / 2.], axis=1)
        normals = np.repeat(self.face_normals[:, None, :], 3, axis=1)
        weights = np.repeat(self.face_areas[:, None] / 3., 3, axis=1)
        return QuadratureSample(mids.reshape(-1, 3), normals.reshape(-1, 3), weights.ravel())

    def edge_lengths(self):
        return np.linalg.norm(self.vertices[self.edges[:, 0]] - self.vertices[self.edges[:, 1]], axis=1)

    def max_curvature(self):
        """ Dihedral-angle estimate: angle between neighbouring face normals over centroid distance """
        t = self.triangles
        v = len(self.vertices)
        heads = np.concatenate([t[:, 0], t[:, 1], t[:, 2]])
        tails = np.concatenate([t[:, 1], t[:, 2], t[:, 0]])
        faces = np.tile(np.arange(len(t)), 3)
        order = np.argsort(heads * v + tails)
        lookup = (heads * v + tails)[order]
        mate = faces[order][np.searchsorted(lookup, tails * v + heads)]

        centroids = self.vertices[t].mean(axis=1)
        cosines = np.clip(np.einsum('ij,ij->i', self.face_normals[faces], self.face_normals[mate]), -1., 1.)
        distance = np.linalg.norm(centroids[faces] - centroids[mate], axis=1)
        kappa = float(np.max(np.arccos(cosines) / distance))
        logger.warning('Mesh curvature %.4g is a dihedral-angle estimate; r0 = %.4g is advisory',
                       kappa, 1. / (2. * kappa))
        return kappa


def _revolution_mesh(surface, resolution):
    points, normals = surface.grid(resolution)
    soup, soup_normals = [], []
    for quad in ((0, 0), (0, 1), (1, 1)), ((0, 0), (1, 1), (1, 0)):
        # grid index (i: along the profile, j: around the axis); outward orientation is θ x s
        corners = [points[i:points.shape[0] - 1 + i, j:points.shape[1] - 1 + j] for i, j in quad]
        corner_normals = [normals[i:normals.shape[0] - 1 + i, j:normals.shape[1] - 1 + j] for i, j in quad]
        soup.append(np.stack(corners, axis=-2).reshape(-1, 3, 3))
        soup_normals.append(np.stack(corner_normals, axis=-2).reshape(-1, 3, 3))
    return TriMesh.from_soup(np.concatenate(soup), np.concatenate(soup_normals))


def _cube_mesh(shape, resolution):
    a = shape.R / 2.
    b = a - getattr(shape, 'eps', 0.)
    x = np.linspace(-a, a, resolution + 1)
    soup, soup_normals = [], []
    for axis in range(3):
        for sign in (1., -1.):
            u, v = _axes(axis, sign)
            xu, xv = np.meshgrid(x, x, indexing='ij')
            grid = np.zeros(xu.shape + (3,))
            grid[..., axis] = sign * a
            grid[..., u] = xu
            grid[..., v] = xv

            if isinstance(shape, RoundedCube):
                core = np.clip(grid, -b, b)
                offset = grid - core
                normal = offset / np.linalg.norm(offset, axis=-1, keepdims=True)
                grid = core + shape.eps * normal
            else:
                normal = np.zeros_like(grid)
                normal[..., axis] = sign

            for quad in ((0, 0), (1, 0), (1, 1)), ((0, 0), (1, 1), (0, 1)):
                corners = [grid[i:grid.shape[0] - 1 + i, j:grid.shape[1] - 1 + j] for i, j in quad]
                corner_normals = [normal[i:normal.shape[0] - 1 + i, j:normal.shape[1] - 1 + j] for i, j in quad]
                soup.append(np.stack(corners, axis=-2).reshape(-1, 3, 3))
                soup_normals.append(np.stack(corner_normals, axis=-2).reshape(-1, 3, 3))
    return TriMesh.from_soup(np.concatenate(soup), np.concatenate(soup_normals))


def mesh_from_shape(surface, resolution=DEFAULT_RESOLUTION):
    """ Triangulate an analytic shape or surface of revolution, keeping exact vertex normals.

    :param resolution: profile intervals for surfaces of revolution (twice as many around the axis),
        grid intervals per face edge for cubes
    :rtype: TriMesh
    """
    if isinstance(surface, TriMesh):
        return surface
    revolution = as_revolution(surface)
    if revolution is not None:
        return _revolution_mesh(revolution, resolution)
    if isinstance(surface, (Cube, RoundedCube)):
        return _cube_mesh(surface, resolution)
    raise InputError('Cannot triangulate %r' % (surface,))


def read_off(path):
    """ Read a triangle mesh in OFF format

    :rtype: TriMesh
    """
    with open(path) as fin:
        tokens = [line.split('#', 1)[0].split() for line in fin]
    tokens = [t for t in tokens if t]
    if not tokens or tokens[0][0] != 'OFF':
        raise MeshError('%s: missing OFF header' % path)

    header = tokens[0][1:] or tokens.pop(1)
    try:
        nv, nf = int(header[0]), int(header[1])
        vertices = [[float(c) for c in row[:3]] for row in tokens[1:1 + nv]]
        faces = []
        for row in tokens[1 + nv:1 + nv + nf]:
            if int(row[0]) != 3:
                raise MeshError('%s: only triangles are supported' % path)
            faces.append([int(c) for c in row[1:4]])
    except (ValueError, IndexError):
        raise MeshError('%s: malformed OFF file' % path)
    return TriMesh(vertices, faces)


def read_obj(path):
    """ Read the vertices and triangular faces of an OBJ file

    :rtype: TriMesh
    """
    vertices, faces = [], []
    with open(path) as fin:
        for line in fin:
            parts = line.split()
            if not parts:
                continue
            try:
                if parts[0] == 'v':
                    vertices.append([float(c) for c in parts[1:4]])
                elif parts[0] == 'f':
                    if len(parts) != 4:
                        raise MeshError('%s: only triangles are supported' % path)
                    faces.append([int(p.split('/')[0]) - 1 for p in parts[1:]])
            except ValueError:
                raise MeshError('%s: malformed line: %s' % (path, line.strip()))
    return TriMesh(vertices, faces)


def write_off(mesh, path):
    with open(path, 'w') as out:
        out.write('OFF\n%d %d 0\n' % (len(mesh.vertices), len(mesh.triangles)))
        for v in mesh.vertices:
            out.write('%.17g %.17g %.17g\n' % tuple(v))
        for f in mesh.triangles:
            out.write('3 %d %d %d\n' % tuple(f))


def read_mesh(path):
    if path.lower().endswith('.off'):
        return read_off(path)
    if path.lower().endswith('.obj'):
        return read_obj(path)
    raise MeshError('Unknown mesh format: %s (expected .off or .obj)' % path)
