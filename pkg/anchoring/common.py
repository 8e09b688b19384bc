import math
from dataclasses import dataclass

import numpy as np

from anchoring.config import AREA_RTOL, UNIT_NORMAL_TOL


class AnchoringError(Exception):
    """Base class of all errors raised by this package"""


class InputError(AnchoringError):
    """Invalid user input: bad parameters, malformed files, unsupported requests"""


class NumericalFailure(AnchoringError):
    """A numerical procedure failed to reach its stated accuracy"""


@dataclass(frozen=True)
class Direction:
    """ A unit vector on the sphere, used for the alignment at infinity and for director values.

    Construct with :meth:`Direction.of` to normalize arbitrary non-zero input.
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.) > 1e-12:
            raise InputError('Direction must have unit length, got |n| = %.16g' % norm)

    @classmethod
    def of(cls, vector):
        """ Normalize any non-zero 3-vector into a Direction

        :param vector: three components
        :type vector: typing.Sequence[float]
        :rtype: Direction
        """
        v = np.asarray(vector, dtype=float).reshape(3)
        norm = np.linalg.norm(v)
        if not np.isfinite(norm) or norm == 0.:
            raise InputError('Cannot normalize %r into a direction' % (vector,))
        v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def vector(self):
        return np.array([self.x, self.y, self.z])

    def __neg__(self):
        return Direction(-self.x, -self.y, -self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def geodesic_distance(self, other, antipodal=False):
        """ Great-circle distance to another direction. With antipodal=True, n and -n are identified.

        :type other: Direction
        :type antipodal: bool
        :rtype: float
        """
        return geodesic_distance(self.vector, as_vector(other), antipodal)


def as_vector(n):
    """ Accept a Direction or any 3-sequence and return a normalized numpy vector

    :rtype: numpy.ndarray
    """
    if isinstance(n, Direction):
        return n.vector
    return Direction.of(n).vector


def geodesic_distance(a, b, antipodal=False):
    c = float(np.clip(np.dot(a, b), -1., 1.))
    if antipodal:
        c = abs(c)
    # atan2 form keeps precision for nearly parallel vectors
    return math.atan2(np.linalg.norm(np.cross(a, b)), c)


@dataclass(frozen=True)
class QuadratureSample:
    """ Discretization of an integral over a closed surface: points, outward unit normals, weights.

    Arrays are made read-only on construction.
    """
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = np.ascontiguousarray(self.points, dtype=float)
        normals = np.ascontiguousarray(self.normals, dtype=float)
        weights = np.ascontiguousarray(self.weights, dtype=float)

        if points.ndim != 2 or points.shape[1] != 3 or normals.shape != points.shape:
            raise InputError('Quadrature points and normals must both have shape (N, 3)')
        if weights.shape != (points.shape[0],):
            raise InputError('Quadrature weights must have shape (N,)')
        if np.any(weights < 0.):
            raise InputError('Quadrature weights must be non-negative')
        if np.any(np.abs(np.linalg.norm(normals, axis=1) - 1.) > UNIT_NORMAL_TOL):
            raise InputError('Quadrature normals must have unit length')

        for name, arr in (('points', points), ('normals', normals), ('weights', weights)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return self.weights.shape[0]

    @property
    def area(self):
        return math.fsum(self.weights)

    def check_area(self, expected, rtol=AREA_RTOL):
        """ Does the weight sum reproduce a known area?

        :type expected: float
        :type rtol: float
        :rtype: bool
        """
        return abs(self.area - expected) <= rtol * abs(expected)

    @classmethod
    def concatenate(cls, parts):
        parts = list(parts)
        return cls(np.concatenate([p.points for p in parts]),
                   np.concatenate([p.normals for p in parts]),
                   np.concatenate([p.weights for p in parts]))
