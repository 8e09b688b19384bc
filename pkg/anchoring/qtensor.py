"""Q-tensor algebra: the bulk and field potentials, spectral data and the uniaxial projection.

A Q-tensor is stored through five independent components [q11, q22, q12, q13, q23]; the sixth
follows from tracelessness, q33 = -q11 - q22.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from anchoring.common import InputError
from anchoring.config import ZERO_NORM_TOL, DEGENERACY_TOL, SQRT_2_3

logger = logging.getLogger(__name__)

IDENTITY_THIRD = np.eye(3) / 3.


class DegenerateTensor(InputError, ValueError):
    """Raised when the uniaxial decomposition or projection is requested on the degenerate set B"""


@dataclass(frozen=True)
class QTensor:
    q11: float
    q22: float
    q12: float
    q13: float
    q23: float

    @classmethod
    def from_matrix(cls, matrix):
        """ Symmetric traceless part of a 3x3 matrix

        :type matrix: numpy.ndarray
        :rtype: QTensor
        """
        m = np.asarray(matrix, dtype=float)
        m = 0.5 * (m + m.T)
        m = m - np.trace(m) * IDENTITY_THIRD
        return cls(float(m[0, 0]), float(m[1, 1]), float(m[0, 1]), float(m[0, 2]), float(m[1, 2]))

    @classmethod
    def uniaxial(cls, n, s=1.):
        """ s(n⊗n - I/3) for a (not necessarily normalized) director n

        :rtype: QTensor
        """
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        return cls.from_matrix(s * (np.outer(n, n) - IDENTITY_THIRD))

    @classmethod
    def from_row(cls, row):
        """ Inverse of :meth:`to_row`

        :param row: [q11, q22, q12, q13, q23]
        :rtype: QTensor
        """
        if len(row) != 5:
            raise InputError('A Q-tensor row needs 5 components [q11, q22, q12, q13, q23]')
        return cls(*[float(v) for v in row])

    def to_row(self):
        return [self.q11, self.q22, self.q12, self.q13, self.q23]

    @property
    def q33(self):
        return -self.q11 - self.q22

    @property
    def matrix(self):
        return np.array([[self.q11, self.q12, self.q13],
                         [self.q12, self.q22, self.q23],
                         [self.q13, self.q23, self.q33]])

    @property
    def norm(self):
        return float(np.linalg.norm(self.matrix))

    def __add__(self, other):
        return QTensor.from_matrix(self.matrix + other.matrix)

    def __mul__(self, scalar):
        return QTensor.from_matrix(self.matrix * scalar)

    __rmul__ = __mul__


Q_INF = QTensor.uniaxial([0., 0., 1.])


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: tuple
    eigenvectors: np.ndarray  # columns, ordered like eigenvalues

    @property
    def gap(self):
        """γ(Q) = λ1 - λ2"""
        return self.eigenvalues[0] - self.eigenvalues[1]


@dataclass(frozen=True)
class UniaxialDecomposition:
    s: float
    t: float
    n: np.ndarray
    m: np.ndarray

    def recompose(self):
        """ s(n⊗n - I/3 + t(m⊗m - I/3))

        :rtype: QTensor
        """
        return QTensor.from_matrix(self.s * (np.outer(self.n, self.n) - IDENTITY_THIRD
                                             + self.t * (np.outer(self.m, self.m) - IDENTITY_THIRD)))


def _fix_sign(vector):
    """Flip so that the first non-negligible component is positive"""
    for c in vector:
        if abs(c) > 1e-12:
            return vector if c > 0 else -vector
    return vector


def bulk_density(matrices):
    """ Vectorized bulk potential f over an array of symmetric traceless matrices (..., 3, 3)

    :rtype: numpy.ndarray
    """
    q = np.asarray(matrices, dtype=float)
    sq = np.einsum('...ij,...ij->...', q, q)
    cube = np.einsum('...ij,...jk,...ki->...', q, q, q)
    return -0.5 * sq - cube + 0.75 * sq * sq + 2. / 9.


def field_density(matrices):
    """ Vectorized field potential g over (..., 3, 3), with g = 0 where |Q| vanishes

    :rtype: numpy.ndarray
    """
    q = np.asarray(matrices, dtype=float)
    norm = np.sqrt(np.einsum('...ij,...ij->...', q, q))
    safe = np.where(norm < ZERO_NORM_TOL, 1., norm)
    return np.where(norm < ZERO_NORM_TOL, 0., SQRT_2_3 - q[..., 2, 2] / safe)


def distance_density(matrices):
    """ Vectorized distance to the uniaxial manifold N over (..., 3, 3)

    :rtype: numpy.ndarray
    """
    q = np.asarray(matrices, dtype=float)
    sq = np.einsum('...ij,...ij->...', q, q)
    top = np.linalg.eigvalsh(q)[..., -1]
    return np.sqrt(np.maximum(sq - 2. * top + 2. / 3., 0.))


def bulk_potential(q):
    """ Landau-de Gennes bulk potential f(Q) = -|Q|²/2 - tr(Q³) + 3|Q|⁴/4 + 2/9, non-negative and
    vanishing exactly on the uniaxial manifold N.

    :type q: QTensor
    :rtype: float
    """
    return float(bulk_density(q.matrix))


def field_potential(q):
    """ Magnetic field potential g(Q) = √(2/3) - Q33/|Q|, with the convention g(0) = 0

    :type q: QTensor
    :rtype: float
    """
    return float(field_density(q.matrix))


def spectral(q):
    """ Eigenvalues sorted descending with eigenvectors whose first non-zero component is positive

    :type q: QTensor
    :rtype: SpectralData
    """
    values, vectors = np.linalg.eigh(q.matrix)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]
    vectors = np.column_stack([_fix_sign(vectors[:, k]) for k in range(3)])
    return SpectralData(tuple(float(v) for v in values), vectors)


def in_B(q, tol=DEGENERACY_TOL):
    """ Membership in the degenerate set B = {Q = 0 or λ1 = λ2}; the eigenvalue gap is compared
    relative to |Q|.

    :type q: QTensor
    :type tol: float
    :rtype: bool
    """
    if tol <= 0:
        raise InputError('Degeneracy tolerance must be positive')
    norm = q.norm
    if norm < tol:
        return True
    return spectral(q).gap < tol * norm


def decompose(q, tol=DEGENERACY_TOL):
    """ Unique decomposition Q = s(n⊗n - I/3 + t(m⊗m - I/3)) with s >= 0, t in [0, 1], n ⟂ m

    :type q: QTensor
    :rtype: UniaxialDecomposition
    """
    if in_B(q, tol):
        raise DegenerateTensor('Q lies in the degenerate set B, decomposition is not unique')

    data = spectral(q)
    l1, l2, l3 = data.eigenvalues
    s = l1 - l3
    t = min(max((l2 - l3) / s, 0.), 1.)
    return UniaxialDecomposition(s, t, data.eigenvectors[:, 0], data.eigenvectors[:, 1])


def project_uniaxial(q, tol=DEGENERACY_TOL):
    """ Projection P(Q) = n(Q)⊗n(Q) - I/3 onto the uniaxial manifold

    :type q: QTensor
    :rtype: QTensor
    """
    if in_B(q, tol):
        raise DegenerateTensor('Projection onto N is undefined on the degenerate set B')
    return QTensor.uniaxial(spectral(q).eigenvectors[:, 0])


def dist_to_N(q):
    """ min over unit n of |Q - (n⊗n - I/3)|, which equals √(|Q|² - 2λ1 + 2/3)

    :type q: QTensor
    :rtype: float
    """
    return float(distance_density(q.matrix))


def random_qtensors(rng, count, scale=1.):
    """ Random symmetric traceless matrices with Gaussian entries

    :param rng: numpy Generator
    :param count: number of samples
    :param scale: standard deviation of the entries
    :rtype: numpy.ndarray
    """
    a = rng.standard_normal((count, 3, 3)) * scale
    a = 0.5 * (a + np.swapaxes(a, 1, 2))
    trace = np.trace(a, axis1=1, axis2=2)
    return a - trace[:, None, None] * IDENTITY_THIRD


def _annulus_matrices(draws, q0):
    """Map standard normal draws (..., 6) to matrices with √(2/3)-q0 <= |Q| <= √(2/3)+q0"""
    x = draws[..., :5]
    direction = x / np.linalg.norm(x, axis=-1, keepdims=True)
    radius = SQRT_2_3 - q0 + 2. * q0 * ndtr(draws[..., 5])

    # orthonormal basis of the symmetric traceless matrices
    c = direction * radius[..., None]
    r2, r6 = math.sqrt(2.), math.sqrt(6.)
    m = np.zeros(draws.shape[:-1] + (3, 3))
    m[..., 0, 0] = c[..., 0] / r2 - c[..., 1] / r6
    m[..., 1, 1] = -c[..., 0] / r2 - c[..., 1] / r6
    m[..., 2, 2] = 2. * c[..., 1] / r6
    for k, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        m[..., i, j] = m[..., j, i] = c[..., 2 + k] / r2
    return m


def lipschitz_g_estimate(q0, samples, seed=0):
    """ Sampled supremum of |g(Q1) - g(Q2)| / |Q1 - Q2| over pairs in the annulus
    √(2/3) - q0 <= |Q| <= √(2/3) + q0.

    The pairs for a given seed form a prefix-stable sequence, so the estimate never decreases when
    samples grows.

    :type q0: float
    :type samples: int
    :type seed: int
    :rtype: float
    """
    if not 0. < q0 < SQRT_2_3:
        raise InputError('q0 must lie in (0, √(2/3))')

    draws = np.random.default_rng(seed).standard_normal((samples, 2, 6))
    pairs = _annulus_matrices(draws, q0)
    diff = np.linalg.norm(pairs[:, 0] - pairs[:, 1], axis=(1, 2))
    keep = diff > 0.
    quotient = np.abs(field_density(pairs[keep, 0]) - field_density(pairs[keep, 1])) / diff[keep]
    estimate = float(np.max(quotient)) if quotient.size else 0.
    logger.debug('Lipschitz estimate of g on annulus q0=%g from %d pairs: %g', q0, samples, estimate)
    return estimate


def coercivity_estimate(h, samples, seed=0, scale=0.5):
    """ Sampled minimum of (f(Q) + h²g(Q)) / |Q - Q∞|² over random tensors around Q∞

    :param h: ratio of coherence lengths ξ/η
    :rtype: float
    """
    rng = np.random.default_rng(seed)
    q = Q_INF.matrix + random_qtensors(rng, samples, scale)
    dist = np.einsum('...ij,...ij->...', q - Q_INF.matrix, q - Q_INF.matrix)
    keep = dist > 0.
    ratio = (bulk_density(q[keep]) + h * h * field_density(q[keep])) / dist[keep]
    return float(np.min(ratio))


def bulk_constant_estimate(samples, seed=0, scale=0.5):
    """ Sampled lower bound for C_f in f(Q) >= C_f dist²(Q, N). Not the sharp constant.

    :rtype: float
    """
    rng = np.random.default_rng(seed)
    q = random_qtensors(rng, samples, scale)
    dist = distance_density(q)
    keep = dist > 1e-8
    return float(np.min(bulk_density(q[keep]) / dist[keep] ** 2))


def director_rate_bound(n, ndot):
    """ Both sides of ṅ3²/(1 - n3²) <= |ṅ|² along unit director curves. The left side is set to 0
    where n3² = 1.

    :param n: unit directors, shape (..., 3)
    :param ndot: their velocities, same shape
    :rtype: tuple[numpy.ndarray, numpy.ndarray]
    """
    n = np.asarray(n, dtype=float)
    ndot = np.asarray(ndot, dtype=float)
    if n.shape != ndot.shape or n.shape[-1] != 3:
        raise InputError('Directors and velocities must both have shape (..., 3)')
    transverse = 1. - n[..., 2] ** 2
    safe = np.where(transverse > 0., transverse, 1.)
    lhs = np.where(transverse > 0., ndot[..., 2] ** 2 / safe, 0.)
    return lhs, np.einsum('...i,...i->...', ndot, ndot)
