"""One dimensional reduction along rays normal to the particle: the energy along a ray and the optimal
boundary-layer profile that turns the director from its surface value towards e3.

In the rescaled variable r̃ = r/η the planar profile n = (sin Φ, 0, cos Φ) minimizes
∫ (Φ')² + √(3/2) sin²Φ dr̃, whose minimizers solve Φ' = -(3/2)^(1/4) sin Φ.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_bvp, trapezoid

from anchoring.common import InputError
from anchoring.config import (PROFILE_RATE, FOURTH_ROOT_24, SQRT_3_2, PROFILE_R_MAX, PROFILE_POINTS,
                              UNIT_DIRECTOR_TOL)
from anchoring.qtensor import bulk_density, field_density, IDENTITY_THIRD

logger = logging.getLogger(__name__)


class ProfileDomainError(InputError, ValueError):
    """Raised for angles outside [0, π/2], negative radii or non-positive depths"""


class NonUnitDirector(InputError, ValueError):
    """Raised when a sampled director deviates from unit length"""


def _check_angle(phi0):
    if not 0. <= phi0 <= math.pi / 2 + 1e-15:
        raise ProfileDomainError('Initial angle must lie in [0, π/2], got %r' % phi0)


@dataclass(frozen=True)
class RayParams:
    """ Parameters of one ray from a foot point on the surface.

    xi and eta are the nematic and magnetic coherence lengths, kappa1 and kappa2 the principal
    curvatures at the foot point and r0 the ray length.
    """
    xi: float
    eta: float
    kappa1: float = 0.
    kappa2: float = 0.
    r0: float = 1.

    def __post_init__(self):
        if self.xi <= 0 or self.eta <= 0 or self.r0 <= 0:
            raise InputError('Ray parameters xi, eta and r0 must be positive')
        kappa = max(abs(self.kappa1), abs(self.kappa2))
        if kappa > 0 and self.r0 > 1. / (2. * kappa) * (1 + 1e-12):
            raise InputError('Ray length r0=%g exceeds 1/(2κ)=%g' % (self.r0, 1. / (2. * kappa)))

    def metric(self, r):
        """Area factor (1 + rκ1)(1 + rκ2) of the parallel surface at distance r"""
        return (1. + r * self.kappa1) * (1. + r * self.kappa2)

    def metric_bounds(self):
        """ Smallest and largest metric factor over [0, r0]; the factor is quadratic in r

        :rtype: tuple[float, float]
        """
        candidates = [0., self.r0]
        product = self.kappa1 * self.kappa2
        if product != 0.:
            vertex = -(self.kappa1 + self.kappa2) / (2. * product)
            if 0. < vertex < self.r0:
                candidates.append(vertex)
        values = [self.metric(r) for r in candidates]
        return min(values), max(values)



def optimal_profile_angle(phi0, r_tilde):
    """ Optimal angle between director and e3 at rescaled depth r̃:
    Φ(r̃) = 2 atan(tan(φ0/2) exp(-(3/2)^(1/4) r̃))

    :param phi0: angle at the surface, radians in [0, π/2]
    :param r_tilde: rescaled depth(s), non-negative
    :rtype: float | numpy.ndarray
    """
    _check_angle(phi0)
    r = np.asarray(r_tilde, dtype=float)
    if np.any(r < 0):
        raise ProfileDomainError('Rescaled depth must be non-negative')
    phi = 2. * np.arctan(math.tan(phi0 / 2.) * np.exp(-PROFILE_RATE * r))
    return float(phi) if phi.ndim == 0 else phi


def profile_density(phi):
    """ Energy density (Φ')² + √(3/2) sin²Φ along the optimal profile, where Φ' = -(3/2)^(1/4) sin Φ

    :type phi: numpy.ndarray
    :rtype: numpy.ndarray
    """
    return 2. * SQRT_3_2 * np.sin(phi) ** 2


def profile_energy(phi0, r_max=PROFILE_R_MAX, points=PROFILE_POINTS):
    """ Energy of the optimal profile on [0, r_max] by the trapezoidal rule with a Richardson step at
    half resolution. Equals ⁴√24 (1 - cos φ0) up to quadrature error.

    :param phi0: surface angle in [0, π/2]
    :rtype: float
    """
    _check_angle(phi0)
    r = np.linspace(0., r_max, points)
    density = profile_density(optimal_profile_angle(phi0, r))

    fine = trapezoid(density, r)
    coarse = trapezoid(density[::2], r[::2])
    value = fine + (fine - coarse) / 3.
    logger.debug('profile energy phi0=%g: trapezoid %.15g, Richardson correction %.3g',
                 phi0, fine, (fine - coarse) / 3.)
    return float(value)


def bogomolny_defect(phi0, r_tilde):
    """ Largest violation of the first-order equation Φ' = -(3/2)^(1/4) sin Φ, with Φ' evaluated in
    closed form from the profile formula.

    :rtype: float
    """
    _check_angle(phi0)
    r = np.asarray(r_tilde, dtype=float)
    a = math.tan(phi0 / 2.)
    decay = np.exp(-PROFILE_RATE * r)
    derivative = -2. * a * PROFILE_RATE * decay / (1. + (a * decay) ** 2)
    phi = optimal_profile_angle(phi0, r)
    return float(np.max(np.abs(derivative + PROFILE_RATE * np.sin(phi))))


def profile_bvp_oracle(phi0, r_max=20., points=2001, tol=1e-10):
    """ Independent solution of the Euler-Lagrange problem Φ'' = √(3/2) sin Φ cos Φ, Φ(0) = φ0,
    Φ(r_max) = 0, by collocation. Returns the collocation solution evaluated on its input grid.

    :rtype: tuple[numpy.ndarray, numpy.ndarray]
    """
    _check_angle(phi0)
    r = np.linspace(0., r_max, points)
    guess = np.vstack([phi0 * np.exp(-r), -phi0 * np.exp(-r)])

    def rhs(_, y):
        return np.vstack([y[1], SQRT_3_2 * np.sin(y[0]) * np.cos(y[0])])

    def bc(ya, yb):
        return np.array([ya[0] - phi0, yb[0]])

    solution = solve_bvp(rhs, bc, r, guess, tol=tol, bc_tol=tol, max_nodes=200000)
    if not solution.success:
        raise ProfileDomainError('Boundary value solver failed: %s' % solution.message)
    return r, solution.sol(r)[0]


@dataclass(frozen=True)
class DecayCheck:
    measured: float
    bound: float

    @property
    def holds(self):
        return self.measured <= self.bound

    @property
    def ratio(self):
        return self.measured / self.bound if self.bound > 0 else 0.


def decay_bound_check(phi0, depth):
    """ Compare |n1|² = sin²Φ(H) at depth H with the bound 4 tan²(φ0/2) exp(-⁴√24 H)

    :param phi0: surface angle
    :param depth: rescaled depth H > 0
    :rtype: DecayCheck
    """
    if depth <= 0:
        raise ProfileDomainError('Depth H must be positive')
    measured = math.sin(optimal_profile_angle(phi0, depth)) ** 2
    bound = 4. * math.tan(phi0 / 2.) ** 2 * math.exp(-FOURTH_ROOT_24 * depth)
    return DecayCheck(measured, bound)


def ray_energy(directors, r, params):
    """ Energy along one ray: trapezoidal quadrature of ½|∂Q/∂r|² + f(Q)/ξ² + g(Q)/η² with
    Q = n⊗n - I/3, weighted by the metric factor (1 + rκ1)(1 + rκ2).

    :param directors: sampled director, shape (N, 3)
    :param r: sample depths in [0, r0], shape (N,)
    :type params: RayParams
    :rtype: float
    """
    n = np.asarray(directors, dtype=float)
    r = np.asarray(r, dtype=float)
    if n.ndim != 2 or n.shape[1] != 3 or n.shape[0] != r.shape[0]:
        raise InputError('Directors must have shape (N, 3) matching the N depths')
    if np.any(np.abs(np.linalg.norm(n, axis=1) - 1.) > UNIT_DIRECTOR_TOL):
        raise NonUnitDirector('Sampled directors must have unit length')

    q = np.einsum('ni,nj->nij', n, n) - IDENTITY_THIRD
    dq = np.gradient(q, r, axis=0, edge_order=2)
    density = (0.5 * np.einsum('nij,nij->n', dq, dq)
               + bulk_density(q) / params.xi ** 2
               + field_density(q) / params.eta ** 2)
    # every term is non-negative; clip the roundoff of f and g on uniaxial tensors
    return float(trapezoid(np.maximum(density, 0.) * params.metric(r), r))


@dataclass(frozen=True)
class BoundaryLayerProfile:
    """Samples of the optimal profile Φ on a grid of rescaled depths"""
    phi0: float
    r_tilde: np.ndarray
    phi: np.ndarray

    @classmethod
    def optimal(cls, phi0, depth=PROFILE_R_MAX, points=PROFILE_POINTS):
        r = np.linspace(0., depth, points)
        return cls(phi0, r, optimal_profile_angle(phi0, r))

    @property
    def n1(self):
        return np.sin(self.phi)

    @property
    def n3(self):
        return np.cos(self.phi)

    @property
    def energy_density(self):
        return profile_density(self.phi)

    def directors(self):
        return np.column_stack([self.n1, np.zeros_like(self.phi), self.n3])

    def rows(self):
        for row in zip(self.r_tilde, self.phi, self.n1, self.n3, self.energy_density):
            yield [float(v) for v in row]


def layer_energy(phi0, params, points=PROFILE_POINTS):
    """ η times the ray energy of the optimal profile laid along the ray at depth r/η. On flat rays it
    tends to ⁴√24 (1 - cos φ0) as η → 0 with r0/η large.

    :type params: RayParams
    :rtype: float
    """
    r = np.linspace(0., params.r0, points)
    phi = optimal_profile_angle(phi0, r / params.eta)
    directors = np.column_stack([np.sin(phi), np.zeros_like(phi), np.cos(phi)])
    return params.eta * ray_energy(directors, r, params)
