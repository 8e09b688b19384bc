"""Evaluation of the limiting anchoring energy

    E0(M; n) = ⁴√24 ∫_M 1 - √(1 - (ν·n)²) dH²

by generic surface quadrature, by the axially reduced rule for surfaces of revolution, and by the
closed forms available for spheres, spherocylinders, tori, cubes and rounded cubes.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import ellipe

from anchoring.common import InputError, Direction, as_vector
from anchoring.config import FOURTH_ROOT_24, SWITCH_DELTA, DEFAULT_RESOLUTION
from anchoring import surfaces

logger = logging.getLogger(__name__)

__all__ = ['Direction', 'EnergyValue', 'DomainError', 'e0', 'e0_quadrature', 'e0_revolution',
           'complete_elliptic_E', 'e0_sphere', 'e0_spherocylinder', 'e0_torus', 'e0_cube',
           'e0_rounded_cube', 'ENGINES']

ENGINES = ('auto', 'closed', 'revolution', 'mesh', 'quadrature')

SPHERE_FACTOR = 2. * math.pi * FOURTH_ROOT_24 * (2. - math.pi / 2.)


class DomainError(InputError, ValueError):
    """Raised for arguments outside the domain of a special function"""


@dataclass(frozen=True)
class EnergyValue:
    """ An energy in units of ⁴√24 x area, with the engine that produced it.

    est_error is None when the engine has no error estimate.
    """
    value: float
    engine: str
    est_error: float = None

    def __post_init__(self):
        if not self.value >= -1e-12:
            raise InputError('Energy must be non-negative, got %r' % self.value)

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        return {'value': self.value, 'engine': self.engine, 'est_error': self.est_error}


def _integrand(c):
    return FOURTH_ROOT_24 * (1. - np.sqrt(np.maximum(0., 1. - c * c)))


def e0_quadrature(samples, n):
    """ Σ w ⁴√24 (1 - √(max(0, 1 - (ν·n)²))) with compensated summation

    :type samples: anchoring.common.QuadratureSample
    :type n: Direction
    :rtype: EnergyValue
    """
    c = samples.normals @ as_vector(n)
    return EnergyValue(math.fsum(samples.weights * _integrand(c)), 'quadrature')


def _axial_value(surface, n, resolution):
    v = as_vector(n)
    # rotate n about e3 into the (x1, x3) half-plane; the rule is built for n = (n1, 0, n3)
    rule = surface.half_turn_rule(float(np.clip(v[2], -1., 1.)), resolution)
    rotated = np.array([math.hypot(v[0], v[1]), 0., v[2]])
    return math.fsum(rule.weights * _integrand(rule.normals @ rotated))


def e0_revolution(surface, n, resolution=DEFAULT_RESOLUTION):
    """ Axially reduced quadrature for a surface of revolution, with an error estimate from the rule
    at half resolution.

    :type surface: anchoring.surfaces.RevolutionSurface
    :type n: Direction
    :type resolution: int
    :rtype: EnergyValue
    """
    surface = surfaces.as_revolution(surface)
    if surface is None:
        raise InputError('The revolution engine needs a surface of revolution')
    value = _axial_value(surface, n, resolution)
    coarse = _axial_value(surface, n, max(resolution // 2, 8))
    return EnergyValue(value, 'revolution', abs(value - coarse))


def complete_elliptic_E(m):
    """ Complete elliptic integral of the second kind in the plus convention,
    E(m) = ∫_0^{π/2} √(1 + m sin²θ) dθ, i.e. the textbook E at parameter -m.

    :type m: float
    :rtype: float
    """
    if m < -1.:
        raise DomainError('E(m) = ∫√(1 + m sin²θ) is complex for m < -1, got %r' % m)
    return float(ellipe(-m))


def _barrel_integral(n1):
    """∫_0^{2π} 1 - √(1 - n1² cos²θ) dθ by adaptive quadrature"""
    value, _ = quad(lambda t: 1. - math.sqrt(max(0., 1. - n1 * n1 * math.cos(t) ** 2)),
                    0., 2. * math.pi, points=[math.pi / 2, 3. * math.pi / 2], epsabs=1e-13, epsrel=1e-13,
                    limit=200)
    return value


def e0_sphere(R):
    """ 2π ⁴√24 (2 - π/2) R², for every n

    :rtype: EnergyValue
    """
    if R <= 0:
        raise InputError('Sphere radius must be positive')
    return EnergyValue(SPHERE_FACTOR * R * R, 'closed-form', 0.)


def e0_spherocylinder(R, L, n):
    """ Hemispherical caps contribute the sphere value; the barrel contributes
    ⁴√24 R L (2π - 4√(1 - n1²) E(n1²/(1 - n1²))) with the plus-convention E, which is the printed
    textbook form E(1 + 1/(n1² - 1)) after the sign mapping. Near |n1| = 1 the barrel integral is
    evaluated directly.

    :param n: alignment at infinity; n1 is its component transverse to the axis
    :rtype: EnergyValue
    """
    if R <= 0 or L <= 0:
        raise InputError('Spherocylinder needs R, L > 0')
    v = as_vector(n)
    n1 = min(math.hypot(v[0], v[1]), 1.)

    if n1 > 1. - SWITCH_DELTA:
        barrel = _barrel_integral(n1)
    else:
        k = n1 * n1
        barrel = 2. * math.pi - 4. * math.sqrt(1. - k) * complete_elliptic_E(k / (1. - k))
    return EnergyValue(SPHERE_FACTOR * R * R + FOURTH_ROOT_24 * R * L * max(barrel, 0.), 'closed-form', 0.)


def e0_torus(R, r, n3, resolution=DEFAULT_RESOLUTION):
    """ Double quadrature of

        r ⁴√24 ∫∫ (R + r sin φ)(1 - √(1 - (√(1-n3²) cos θ sin φ + n3 cos φ)²)) dθ dφ

    Gauss-Legendre in φ between the angles where the integrand has kinks, and in θ over [0, π]
    with doubled weights (the integrand is even in θ).

    :type n3: float
    :rtype: EnergyValue
    """
    if not R > r > 0:
        raise InputError('Torus needs R > r > 0')
    if abs(n3) > 1. + 1e-12:
        raise InputError('|n3| must not exceed 1')
    n3 = min(max(abs(n3), 0.), 1.)  # even in n3
    value = _torus_sum(R, r, n3, resolution)
    coarse = _torus_sum(R, r, n3, max(resolution // 2, 8))
    return EnergyValue(value, 'closed-form', abs(value - coarse))


def _torus_sum(R, r, n3, resolution):
    nt = math.sqrt(max(0., 1. - n3 * n3))
    phi0 = math.atan2(nt, n3)

    cuts = sorted({(a % (2. * math.pi)) for a in (phi0, -phi0, math.pi - phi0, math.pi + phi0, 0.)})
    cuts = cuts + [cuts[0] + 2. * math.pi]
    theta, w_theta = surfaces.gauss_legendre(resolution, 0., math.pi)

    total = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo < 1e-15:
            continue
        phi, w_phi = surfaces.gauss_legendre(resolution, lo, hi)
        c = nt * np.outer(np.sin(phi), np.cos(theta)) + n3 * np.cos(phi)[:, None]
        density = (R + r * np.sin(phi))[:, None] * _integrand(c)
        total.append(2. * r * w_phi[:, None] * w_theta[None, :] * density)
    return math.fsum(np.concatenate([t.ravel() for t in total]))


def e0_cube(R, n):
    """ 2R² ⁴√24 (3 - √(1-n1²) - √(1-n2²) - √(1-n3²)) for the cube of side R

    :rtype: EnergyValue
    """
    if R <= 0:
        raise InputError('Cube size must be positive')
    v = as_vector(n)
    value = 2. * R * R * FOURTH_ROOT_24 * math.fsum(1. - math.sqrt(max(0., 1. - c * c)) for c in v)
    return EnergyValue(value, 'closed-form', 0.)


def e0_rounded_cube(R, eps, n):
    """ Exact value for the rounded cube: flat faces of side R - 2eps, four quarter cylinders along
    each axis assembling a full cylinder of length R - 2eps, and eight octants assembling a sphere
    of radius eps.

    :rtype: EnergyValue
    """
    shape = surfaces.RoundedCube(R, eps)
    v = as_vector(n)
    f = shape.flat
    faces = 2. * f * f * math.fsum(1. - math.sqrt(max(0., 1. - c * c)) for c in v)
    # cylinder along e_i sees only the transverse part √(1 - n_i²)
    edges = eps * f * math.fsum(2. * math.pi - 4. * float(ellipe(min(max(1. - c * c, 0.), 1.))) for c in v)
    corners = 2. * math.pi * eps * eps * (2. - math.pi / 2.)
    return EnergyValue(FOURTH_ROOT_24 * (faces + edges + corners), 'closed-form', 0.)


def closed_form(surface, n, resolution=DEFAULT_RESOLUTION):
    """ Closed form for an analytic shape

    :rtype: EnergyValue
    """
    if isinstance(surface, surfaces.Sphere):
        return e0_sphere(surface.R)
    if isinstance(surface, surfaces.Spherocylinder):
        return e0_spherocylinder(surface.R, surface.L, n)
    if isinstance(surface, surfaces.Torus):
        return e0_torus(surface.R, surface.r, as_vector(n)[2], resolution)
    if isinstance(surface, surfaces.Cube):
        return e0_cube(surface.R, n)
    if isinstance(surface, surfaces.RoundedCube):
        return e0_rounded_cube(surface.R, surface.eps, n)
    raise InputError('No closed form for %s' % type(surface).__name__)


def e0(surface, n, engine='auto', resolution=DEFAULT_RESOLUTION):
    """ Evaluate E0(M; n) with the chosen engine.

    auto picks the closed form for analytic shapes, the axial rule for other surfaces of revolution
    and edge-midpoint quadrature for meshes.

    :param surface: analytic shape, RevolutionSurface or TriMesh
    :param engine: one of auto, closed, revolution, mesh, quadrature
    :rtype: EnergyValue
    """
    if engine not in ENGINES:
        raise InputError('Unknown engine "%s", choose from: %s' % (engine, ', '.join(ENGINES)))
    n = Direction.of(as_vector(n))

    if engine == 'auto':
        if isinstance(surface, tuple(surfaces.SHAPES.values())):
            engine = 'closed'
        elif isinstance(surface, surfaces.RevolutionSurface):
            engine = 'revolution'
        else:
            engine = 'quadrature'
    logger.debug('E0 of %s at n=%s with engine %s', type(surface).__name__, tuple(n), engine)

    if engine == 'closed':
        return closed_form(surface, n, resolution)
    if engine == 'revolution':
        return e0_revolution(surface, n, resolution)
    if engine == 'mesh':
        result = e0_quadrature(surfaces.mesh_from_shape(surface, resolution).sample(), n)
        return EnergyValue(result.value, 'mesh')
    return e0_quadrature(surfaces.sample(surface, resolution), n)
