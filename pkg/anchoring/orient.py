"""Critical points of n ↦ E0(M; n) on the unit sphere: global minimization, a full critical-point
census, figure scans and the stability of minimizers under rounding of the cube.

A direction n is critical when the tangent residual

    ∫_M ((ν·n)ν - (ν·n)²n) / √(1 - (ν·n)²) dH²

vanishes; ⁴√24 times the residual is the Riemannian gradient of E0.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from anchoring import surfaces
from anchoring.common import InputError, NumericalFailure, Direction, as_vector, geodesic_distance
from anchoring.config import (FOURTH_ROOT_24, DEGENERATE_LOCUS_TOL, LATTICE_POINTS, AXIAL_LATTICE_POINTS,
                              CENSUS_POINTS, ORIENT_RESOLUTION, AXIS_SAMPLE_RESOLUTION, MAX_ITERATIONS,
                              NEWTON_ITERATIONS, ORIENT_TOL, POLISH_TOL, ARMIJO, NEWTON_MAX_STEP,
                              CLUSTER_RADIUS, HESSIAN_STEP, GRADIENT_STEP, MONOTONE_TOL)
from anchoring.energy import e0, e0_cube, e0_rounded_cube
from anchoring.tools import batch, fsum_rows

logger = logging.getLogger(__name__)

KINDS = ('minimum', 'maximum', 'saddle', 'degenerate')


class NoConvergence(NumericalFailure):
    """Raised when a descent run exceeds its iteration cap"""


class StabilityViolation(NumericalFailure):
    """Raised when rounded-cube minimizers fail to approach the cube minimizers"""


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _canonical(v):
    """Representative of {v, -v}: first component above roundoff is positive"""
    for c in v[::-1]:
        if abs(c) > 1e-12:
            return v if c > 0 else -v
    return v


def _tangent_basis(n):
    """Orthonormal (a, b) spanning the tangent plane at n"""
    helper = np.eye(3)[int(np.argmin(np.abs(n)))]
    a = _unit(np.cross(n, helper))
    return a, np.cross(n, a)


def _density(c):
    return FOURTH_ROOT_24 * (1. - np.sqrt(np.maximum(0., 1. - c * c)))


def _residual(normals, weights, v):
    c = normals @ v
    s2 = 1. - c * c
    keep = s2 >= DEGENERATE_LOCUS_TOL
    c, nu = c[keep], normals[keep]
    coef = weights[keep] / np.sqrt(s2[keep])
    terms = coef[:, None] * (c[:, None] * nu - (c * c)[:, None] * v[None, :])
    r = fsum_rows(terms) if len(terms) else np.zeros(3)
    return r - (r @ v) * v


def residual(samples, n):
    """ First variation of E0 at n divided by ⁴√24. Samples on the degenerate locus ν = ±n, where
    the integrand has no direction, contribute nothing.

    :type samples: anchoring.common.QuadratureSample
    :type n: Direction
    :return: tangent 3-vector, residual·n = 0
    :rtype: numpy.ndarray
    """
    return _residual(samples.normals, samples.weights, as_vector(n))


class SampleObjective:
    """E0 and its gradient from one fixed quadrature rule"""
    axial = False

    def __init__(self, samples):
        self.samples = samples

    def value(self, n):
        c = self.samples.normals @ n
        return math.fsum(self.samples.weights * _density(c))

    def values(self, directions):
        out = []
        for chunk in batch(directions, 64):
            c = self.samples.normals @ chunk.T
            out.extend(fsum_rows(self.samples.weights[:, None] * _density(c)))
        return np.array(out)

    def residual(self, n):
        return _residual(self.samples.normals, self.samples.weights, n)


class RevolutionObjective:
    """ E0 of a surface of revolution through the axially reduced rule. The value only depends on
    n3, and the residual has no component along the azimuth of n.
    """
    axial = True

    def __init__(self, surface, resolution=ORIENT_RESOLUTION):
        self.surface = surfaces.as_revolution(surface)
        self.resolution = resolution

    def _frame(self, n):
        n3 = float(np.clip(n[2], -1., 1.))
        rule = self.surface.half_turn_rule(n3, self.resolution)
        return rule, np.array([math.hypot(n[0], n[1]), 0., n3]), math.atan2(n[1], n[0])

    def value(self, n):
        rule, rotated, _ = self._frame(n)
        return math.fsum(rule.weights * _density(rule.normals @ rotated))

    def values(self, directions):
        return np.array([self.value(n) for n in directions])

    def residual(self, n):
        rule, rotated, phi = self._frame(n)
        r = _residual(rule.normals, rule.weights, rotated)
        r = np.array([r[0] * math.cos(phi), r[0] * math.sin(phi), r[2]])
        return r - (r @ n) * n


def objective_for(surface, resolution=ORIENT_RESOLUTION):
    """ The cheapest exact-enough objective for a surface

    :rtype: SampleObjective | RevolutionObjective
    """
    if surfaces.as_revolution(surface) is not None:
        return RevolutionObjective(surface, resolution)
    if isinstance(surface, surfaces.Cube):
        return SampleObjective(surfaces.sample(surface, AXIS_SAMPLE_RESOLUTION))
    return SampleObjective(surfaces.sample(surface, resolution))


def fibonacci_hemisphere(count=LATTICE_POINTS):
    """ Fibonacci lattice on the upper hemisphere: z = 1 - (i + 1/2)/count, azimuth i times the
    golden angle. One representative for every antipodal pair.

    :rtype: numpy.ndarray
    """
    i = np.arange(count)
    z = 1. - (i + 0.5) / count
    r = np.sqrt(1. - z * z)
    phi = i * math.pi * (3. - math.sqrt(5.))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def axial_lattice(count=AXIAL_LATTICE_POINTS):
    """Directions at azimuth 0 with n3 from 0 to 1"""
    n3 = np.linspace(0., 1., count)
    return np.column_stack([np.sqrt(np.maximum(0., 1. - n3 * n3)), np.zeros(count), n3])


@dataclass
class CriticalPoint:
    direction: Direction
    energy: float
    residual: float
    kind: str
    orbit: list = field(default_factory=list)
    orbit_note: str = ''
    eigenvalues: tuple = ()

    def to_dict(self):
        return {'direction': list(self.direction), 'energy': self.energy, 'residual': self.residual,
                'kind': self.kind, 'orbit': [list(d) for d in self.orbit], 'orbit_note': self.orbit_note,
                'hessian_eigenvalues': list(self.eigenvalues)}


@dataclass
class OrientationReport:
    """Critical points sorted by energy; every listed residual is below tolerance"""
    surface: str
    tolerance: float
    critical_points: list

    def __post_init__(self):
        self.critical_points.sort(key=lambda p: (p.energy, tuple(p.direction)))

    def of_kind(self, kind):
        return [p for p in self.critical_points if p.kind == kind]

    def members(self, kind):
        """All explicit orbit members of a kind, e.g. the 8 cube minima"""
        return [d for p in self.of_kind(kind) for d in p.orbit]

    @property
    def minimum(self):
        return self.critical_points[0]

    def to_dict(self):
        return {'surface': self.surface, 'tolerance': self.tolerance,
                'critical_points': [p.to_dict() for p in self.critical_points]}


@dataclass(frozen=True)
class OrientOptions:
    lattice_points: int = LATTICE_POINTS
    resolution: int = ORIENT_RESOLUTION
    max_iterations: int = MAX_ITERATIONS
    tolerance: float = ORIENT_TOL


def _descend(objective, n, opts):
    """ Armijo projected gradient with Barzilai-Borwein steps, retracting by normalization """
    value = objective.value(n)
    grad = FOURTH_ROOT_24 * objective.residual(n)
    step = 1.
    for it in range(opts.max_iterations):
        norm2 = float(grad @ grad)
        if math.sqrt(norm2) / FOURTH_ROOT_24 < POLISH_TOL:
            return n
        t = step
        while True:
            trial = _unit(n - t * grad)
            trial_value = objective.value(trial)
            if trial_value <= value - ARMIJO * t * norm2:
                break
            t *= 0.5
            if t < 1e-14:
                logger.debug('Line search stalled after %d iterations at residual %.3g',
                             it, math.sqrt(norm2) / FOURTH_ROOT_24)
                return n
        trial_grad = FOURTH_ROOT_24 * objective.residual(trial)
        s, y = trial - n, trial_grad - grad
        sy = float(s @ y)
        step = float(s @ s) / sy if sy > 1e-300 else 1.
        n, value, grad = trial, trial_value, trial_grad
    raise NoConvergence('Descent did not converge within %d iterations' % opts.max_iterations)


def _chart_gradient(objective, n, a, b, x):
    g = objective.residual(_unit(n + x[0] * a + x[1] * b))
    return np.array([g @ a, g @ b])


def _newton(objective, n, tol=ORIENT_TOL, iterations=NEWTON_ITERATIONS):
    """ Newton iterations for residual = 0 on a tangent chart, finite-difference Jacobian.

    :return: the final direction and its residual norm
    """
    for _ in range(iterations):
        r = objective.residual(n)
        if np.linalg.norm(r) < tol:
            break
        a, b = _tangent_basis(n)
        g0 = np.array([r @ a, r @ b])
        jac = np.empty((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = GRADIENT_STEP
            jac[:, j] = (_chart_gradient(objective, n, a, b, e)
                         - _chart_gradient(objective, n, a, b, -e)) / (2. * GRADIENT_STEP)
        x = np.linalg.lstsq(jac, -g0, rcond=None)[0]
        size = np.linalg.norm(x)
        if size > NEWTON_MAX_STEP:
            x *= NEWTON_MAX_STEP / size
        n = _unit(n + x[0] * a + x[1] * b)
    return n, float(np.linalg.norm(objective.residual(n)))


def value_hessian(objective, n, h=HESSIAN_STEP):
    """ Central-difference Hessian of E0 on the tangent chart x ↦ (n + x1 a + x2 b)/|.|

    :rtype: numpy.ndarray
    """
    a, b = _tangent_basis(n)

    def f(x1, x2):
        return objective.value(_unit(n + x1 * a + x2 * b))

    f0 = f(0., 0.)
    hess = np.empty((2, 2))
    hess[0, 0] = (f(h, 0.) - 2. * f0 + f(-h, 0.)) / (h * h)
    hess[1, 1] = (f(0., h) - 2. * f0 + f(0., -h)) / (h * h)
    hess[0, 1] = hess[1, 0] = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4. * h * h)
    return hess


def classify(objective, n):
    """ Minimum, maximum or saddle from the signs of the Hessian eigenvalues; eigenvalues below
    1e-3 of the largest are treated as flat directions and ignored.

    :return: kind and eigenvalues
    :rtype: tuple[str, tuple]
    """
    eig = np.linalg.eigvalsh(value_hessian(objective, n))
    scale = float(np.max(np.abs(eig)))
    signs = [np.sign(e) for e in eig if abs(e) > 1e-3 * scale] if scale > 0 else []
    if not signs:
        kind = 'degenerate'
    elif all(s > 0 for s in signs):
        kind = 'minimum'
    elif all(s < 0 for s in signs):
        kind = 'maximum'
    else:
        kind = 'saddle'
    return kind, tuple(float(e) for e in eig)


def _lattice_minima(values, points):
    """Indices of lattice points not above any of their nearest neighbours (antipodes included)"""
    mirrored = np.concatenate([points, -points])
    tree = cKDTree(mirrored)
    _, idx = tree.query(points, k=9)
    neighbours = values[idx[:, 1:] % len(points)]
    return np.flatnonzero(np.all(values[:, None] <= neighbours + 1e-14 * np.abs(values[:, None]), axis=1))


def _axial_minima(values):
    left = np.concatenate([[values[1]], values[:-1]])  # n3 -> -n3 mirror at the equator
    right = np.concatenate([values[1:], [values[-2]]])  # axial orbit collapses at the pole
    return np.flatnonzero((values <= left) & (values <= right))


def _cluster(candidates, axial):
    """ Merge converged directions closer than CLUSTER_RADIUS, identifying n with -n (and, for
    axial objectives, with every rotation about e3).
    """
    reps = []
    for n, res in candidates:
        if axial:
            n = np.array([math.hypot(n[0], n[1]), 0., abs(n[2])])
        else:
            n = _canonical(n)
        for k, (m, r) in enumerate(reps):
            if geodesic_distance(n, m, antipodal=True) < CLUSTER_RADIUS:
                if res < r:
                    reps[k] = (n, res)
                break
        else:
            reps.append((n, res))
    return reps


def _critical_point(objective, n, res):
    kind, eig = classify(objective, n)
    d = Direction.of(n)
    if objective.axial and abs(abs(n[2]) - 1.) > 1e-9:
        note = 'circle n3 = %.6g about e3, and its antipode' % abs(n[2])
        return CriticalPoint(d, objective.value(n), res, kind, [d, -d], note, eig)
    return CriticalPoint(d, objective.value(n), res, kind, [d, -d], 'antipodal pair', eig)


def _describe(surface):
    return '%s(%s)' % (type(surface).__name__, ', '.join(
        '%s=%g' % (k, v) for k, v in vars(surface).items() if isinstance(v, float)))


def _constant_report(objective, surface, lattice, values, tol):
    n = lattice[0]
    d = Direction.of(n)
    point = CriticalPoint(d, float(values[0]), float(np.linalg.norm(objective.residual(n))), 'degenerate',
                          [d, -d], 'E0 is constant on the sphere')
    return OrientationReport(_describe(surface), tol, [point])


def minimize(surface, opts=None):
    """ Global minimizers of E0(M; ·): coarse lattice scan, projected-gradient descent from every
    discrete local minimum, Newton polish, clustering and Hessian classification.

    :param opts: OrientOptions
    :rtype: OrientationReport
    """
    opts = opts or OrientOptions()
    objective = objective_for(surface, opts.resolution)
    if objective.axial:
        lattice = axial_lattice()
        values = objective.values(lattice)
        seeds = _axial_minima(values)
    else:
        lattice = fibonacci_hemisphere(opts.lattice_points)
        values = objective.values(lattice)
        seeds = _lattice_minima(values, lattice)

    if np.ptp(values) <= 1e-7 * max(1., float(np.max(values))):
        return _constant_report(objective, surface, lattice, values, opts.tolerance)
    logger.info('Descending from %d lattice minima of %d points', len(seeds), len(lattice))

    candidates = []
    for k in seeds:
        n = _descend(objective, lattice[k], opts)
        n, res = _newton(objective, n, opts.tolerance)
        if res > POLISH_TOL:
            raise NoConvergence('Polish stalled at residual %.3g from seed %s' % (res, lattice[k]))
        if res > opts.tolerance:
            logger.warning('Critical point %s polished to residual %.3g only', n, res)
        candidates.append((n, res))

    points = [_critical_point(objective, n, res) for n, res in _cluster(candidates, objective.axial)]
    best = min(p.energy for p in points)
    minima = [p for p in points if p.kind in ('minimum', 'degenerate')
              and p.energy <= best + 1e-9 * max(1., abs(best))]
    tolerance = max([opts.tolerance] + [p.residual for p in minima])
    return OrientationReport(_describe(surface), tolerance, minima)


def _axis_candidates(axial):
    if axial:
        return [np.array([0., 0., 1.]), np.array([1., 0., 0.])]
    return list(np.eye(3))


def census(surface, opts=None):
    """ All critical points: Newton iterations from lattice seeds plus the coordinate axes, where
    E0 can have cone-shaped extrema the gradient never settles on.

    :rtype: OrientationReport
    """
    opts = opts or OrientOptions(lattice_points=CENSUS_POINTS)
    objective = objective_for(surface, opts.resolution)
    seeds = axial_lattice(33) if objective.axial else fibonacci_hemisphere(opts.lattice_points)

    candidates = []
    for n in list(seeds) + _axis_candidates(objective.axial):
        n, res = _newton(objective, n, opts.tolerance)
        if res <= opts.tolerance:
            candidates.append((n, res))
        else:
            logger.debug('Newton from seed %s stopped at residual %.3g', n, res)

    points = [_critical_point(objective, n, res) for n, res in _cluster(candidates, objective.axial)]
    return OrientationReport(_describe(surface), opts.tolerance, points)


@dataclass
class ScanGrid:
    """ Energies on a figure grid: a line in n1 or n3 for revolution shapes, the (n1, n2) disk
    with n3 = √(1 - n1² - n2²) for cubes.
    """
    tag: str
    coordinates: np.ndarray
    directions: np.ndarray
    values: np.ndarray

    HEADERS = ['param1', 'param2', 'n1', 'n2', 'n3', 'E0']

    def rows(self):
        for c, n, v in zip(self.coordinates, self.directions, self.values):
            p2 = float(c[1]) if len(c) > 1 else float('nan')
            yield [float(c[0]), p2, float(n[0]), float(n[1]), float(n[2]), float(v)]


def scan(surface, name, values, engine='auto', resolution=ORIENT_RESOLUTION * 2):
    """ Evaluate E0 along a scan grid.

    :param name: 'n1' (n = (t, 0, √(1-t²))), 'n3' (n = (√(1-t²), 0, t)) or 'n1n2' (disk grid of
        values x values, points outside the unit disk dropped)
    :param values: grid coordinates in [-1, 1]
    :rtype: ScanGrid
    """
    values = np.asarray(values, dtype=float)
    if np.any(np.abs(values) > 1.):
        raise InputError('Scan coordinates must lie in [-1, 1]')

    if name == 'n1':
        coords = values[:, None]
        dirs = np.column_stack([values, np.zeros_like(values), np.sqrt(1. - values ** 2)])
    elif name == 'n3':
        coords = values[:, None]
        dirs = np.column_stack([np.sqrt(1. - values ** 2), np.zeros_like(values), values])
    elif name == 'n1n2':
        x, y = np.meshgrid(values, values, indexing='ij')
        coords = np.column_stack([x.ravel(), y.ravel()])
        coords = coords[np.einsum('ij,ij->i', coords, coords) <= 1. + 1e-15]
        dirs = np.column_stack([coords, np.sqrt(np.maximum(0., 1. - np.einsum('ij,ij->i', coords, coords)))])
    else:
        raise InputError('Unknown scan parameter "%s", use n1, n3 or n1n2' % name)

    energies = np.array([e0(surface, n, engine, resolution).value for n in dirs])
    tag = {'n1': 'n1-line', 'n3': 'n3-line', 'n1n2': 'n1n2-disk'}[name]
    return ScanGrid(tag, coords, dirs, energies)


CUBE_MINIMIZERS = np.array([[a, b, c] for a in (1., -1.) for b in (1., -1.) for c in (1., -1.)]) / math.sqrt(3.)


@dataclass(frozen=True)
class StabilityRow:
    epsilon: float
    max_min_distance: float
    energy_gap_bound: float
    energy_gap_measured: float

    HEADERS = ['epsilon', 'max_min_distance', 'energy_gap_bound', 'energy_gap_measured']

    def row(self):
        return [self.epsilon, self.max_min_distance, self.energy_gap_bound, self.energy_gap_measured]


def approx_stability(R, epsilons, delta, samples=500, seed=0, opts=None):
    """ Minimizers of rounded cubes RoundedCube(R, eps) against the eight minimizers of Cube(R).

    Checks that the largest distance from a rounded-cube minimizer to the exact set is
    nonincreasing as eps decreases and below delta for the smallest eps, and that
    |E0(M_eps; n) - E0(M; n)| <= ⁴√24 H²(M_eps Δ M) on random directions.

    :param epsilons: fillet radii, descending
    :rtype: list[StabilityRow]
    """
    epsilons = [float(e) for e in epsilons]
    if not epsilons or any(a <= b for a, b in zip(epsilons[:-1], epsilons[1:])):
        raise InputError('Fillet radii must be given in strictly descending order')
    if delta <= 0:
        raise InputError('delta must be positive')

    cube = surfaces.Cube(R)
    directions = np.random.default_rng(seed).standard_normal((samples, 3))
    directions /= np.linalg.norm(directions, axis=1)[:, None]

    rows = []
    for eps in epsilons:
        rounded = surfaces.RoundedCube(R, eps)
        report = minimize(rounded, opts)
        minima = report.members('minimum')
        if not minima:
            logger.warning('No minimum found for eps=%g', eps)
        distance = max((min(geodesic_distance(d.vector, a) for a in CUBE_MINIMIZERS) for d in minima),
                       default=math.inf)
        bound = FOURTH_ROOT_24 * surfaces.symmetric_difference_area(cube, rounded)
        gap = max(abs(e0_rounded_cube(R, eps, n).value - e0_cube(R, n).value) for n in directions)
        rows.append(StabilityRow(eps, distance, bound, gap))
        logger.info('eps=%g: %d minima, distance %.3g, energy gap %.4g <= %.4g',
                    eps, len(minima), distance, gap, bound)

        if gap > bound * (1. + 1e-9):
            raise StabilityViolation('Energy gap %.6g exceeds ⁴√24 H²(Δ) = %.6g at eps=%g' % (gap, bound, eps))
        if len(rows) > 1 and distance > rows[-2].max_min_distance + MONOTONE_TOL:
            raise StabilityViolation('Minimizer distance grew from %.3g to %.3g as eps decreased to %g'
                                     % (rows[-2].max_min_distance, distance, eps))
    if rows[-1].max_min_distance >= delta:
        raise StabilityViolation('Minimizers at eps=%g are %.3g away from the cube minimizers (delta=%g)'
                                 % (epsilons[-1], rows[-1].max_min_distance, delta))
    return rows
