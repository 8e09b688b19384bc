#!/usr/bin/env python
"""Command line front end: energies, scans, orientation search, defect construction, boundary-layer
profiles, the rounding study, figure data and a self-check suite.

Exit codes: 0 on success, 1 for bad input, 2 when a numerical procedure fails.
"""
import argparse
import configparser
import io
import logging
import math
import os
import sys

import numpy as np

from anchoring import energy, figures, orient, profile1d, surfaces, tangentfield
from anchoring.common import InputError, NumericalFailure, Direction
from anchoring.config import (OUTPUT_DIR, DEFAULT_RESOLUTION, ORIENT_RESOLUTION, ORIENT_TOL,
                              FIELD_MESH_RESOLUTION, PROFILE_R_MAX, PROFILE_POINTS, FOURTH_ROOT_24,
                              LATTICE_POINTS, CENSUS_POINTS)
from anchoring.tools import print_table, write_csv, dumps_json, parse_vector, parse_grid
from anchoring.version import __version__

logger = logging.getLogger(__name__)

CONFIG_KEYS = {
    'shape': ('shape', 'R', 'L', 'r', 'eps', 'mesh'),
    'run': ('engine', 'resolution', 'tolerance', 'output'),
    'energy': ('n',),
    'scan': ('grid',),
    'optimize': ('mode', 'lattice_points'),
    'defects': ('n', 'delta', 'dump'),
    'profile': ('phi0', 'depth', 'points'),
    'approx': ('R', 'epsilons', 'delta', 'samples', 'seed'),
    'validate': (),
    'figure': ('figure',),
}


class ConfigError(InputError):
    """Raised for unknown sections or keys in a run configuration"""


class RunConfig:
    """ Key-value run configuration in INI format, one section per subcommand plus [shape] and [run].

    Keys are case sensitive, so R and r are different parameters.
    """

    def __init__(self, sections=None, source='<config>'):
        self.source = source
        self.sections = {name: dict(values) for name, values in (sections or {}).items()}
        for name, values in self.sections.items():
            if name not in CONFIG_KEYS:
                raise ConfigError('%s: unknown section [%s]' % (source, name))
            for key in values:
                if key not in CONFIG_KEYS[name]:
                    raise ConfigError('%s: unknown key "%s" in section [%s]' % (source, key, name))

    @classmethod
    def loads(cls, text, source='<string>'):
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text, source=source)
        except configparser.Error as e:
            raise ConfigError('%s: %s' % (source, e))
        return cls({name: dict(parser[name]) for name in parser.sections()}, source)

    @classmethod
    def read(cls, path):
        if not os.path.exists(path):
            raise ConfigError('Config file %s does not exist' % path)
        with open(path) as fin:
            return cls.loads(fin.read(), path)

    def dumps(self):
        out = io.StringIO()
        for name in CONFIG_KEYS:
            if name in self.sections:
                out.write('[%s]\n' % name)
                for key in CONFIG_KEYS[name]:
                    if key in self.sections[name]:
                        out.write('%s = %s\n' % (key, self.sections[name][key]))
                out.write('\n')
        return out.getvalue()

    def get(self, section, key, default=None):
        return self.sections.get(section, {}).get(key, default)

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.sections == other.sections


def _option(args, config, section, key, default=None, cast=str):
    """Command line value, else config value, else default"""
    value = getattr(args, key, None)
    if value is None:
        value = config.get(section, key)
    if value is None:
        return default
    try:
        return cast(value)
    except ValueError:
        raise InputError('Bad value for %s: %r' % (key, value))


def _shape(args, config):
    mesh = _option(args, config, 'shape', 'mesh')
    if mesh:
        return surfaces.read_mesh(mesh)
    tag = _option(args, config, 'shape', 'shape')
    if tag is None:
        raise InputError('No shape given; use --shape or a [shape] config section')
    params = {}
    for key in ('R', 'L', 'r', 'eps'):
        value = _option(args, config, 'shape', key, cast=float)
        if value is not None:
            params[key] = value
    return surfaces.shape_from_params(tag, **params)


def _emit(text, path):
    if path in (None, '-'):
        sys.stdout.write(text + '\n')
    else:
        with open(path, 'w') as out:
            out.write(text + '\n')


def _output(args, config):
    return _option(args, config, 'run', 'output')


def _resolution(args, config, default=DEFAULT_RESOLUTION):
    return _option(args, config, 'run', 'resolution', default, int)


def cmd_energy(args, config):
    surface = _shape(args, config)
    n = _option(args, config, 'energy', 'n', Direction(0., 0., 1.), parse_vector)
    engine = _option(args, config, 'run', 'engine', 'auto')
    result = energy.e0(surface, n, engine, _resolution(args, config))
    _emit(dumps_json(result.to_dict()), _output(args, config))


def cmd_scan(args, config):
    surface = _shape(args, config)
    name, values = parse_grid(_option(args, config, 'scan', 'grid', 'n1:-0.99:0.99:48'))
    engine = _option(args, config, 'run', 'engine', 'auto')
    grid = orient.scan(surface, name, values, engine, _resolution(args, config))
    write_csv(_output(args, config), orient.ScanGrid.HEADERS, grid.rows(), comments=['scan %s' % grid.tag])


def _orient_options(args, config, lattice_points=LATTICE_POINTS):
    return orient.OrientOptions(
        lattice_points=_option(args, config, 'optimize', 'lattice_points', lattice_points, int),
        resolution=_option(args, config, 'run', 'resolution', ORIENT_RESOLUTION, int),
        tolerance=_option(args, config, 'run', 'tolerance', ORIENT_TOL, float))


def cmd_optimize(args, config):
    surface = _shape(args, config)
    mode = _option(args, config, 'optimize', 'mode', 'minimize')
    if mode not in ('minimize', 'census'):
        raise InputError('Unknown optimize mode "%s", use minimize or census' % mode)
    opts = _orient_options(args, config, LATTICE_POINTS if mode == 'minimize' else CENSUS_POINTS)
    report = orient.minimize(surface, opts) if mode == 'minimize' else orient.census(surface, opts)
    _emit(dumps_json(report.to_dict()), _output(args, config))


def cmd_defects(args, config):
    surface = _shape(args, config)
    n = _option(args, config, 'defects', 'n', Direction(0., 0., 1.), parse_vector)
    delta = _option(args, config, 'defects', 'delta', 0.2, float)
    mesh = surfaces.mesh_from_shape(surface, _resolution(args, config, FIELD_MESH_RESOLUTION))
    field = tangentfield.build_boundary_field(surface, n, delta, mesh)

    samples = mesh.sample() if isinstance(surface, surfaces.TriMesh) else surfaces.sample(surface)
    report = tangentfield.degree_report(field)
    report['field_energy'] = tangentfield.field_surface_energy(samples, field, n)
    report['E0'] = energy.e0_quadrature(samples, n).value
    _emit(dumps_json(report), _output(args, config))

    dump = _option(args, config, 'defects', 'dump')
    if dump:
        write_csv(dump, ['x1', 'x2', 'x3', 'v1', 'v2', 'v3'], field.rows())


def cmd_profile(args, config):
    phi0 = _option(args, config, 'profile', 'phi0', math.pi / 2, float)
    depth = _option(args, config, 'profile', 'depth', PROFILE_R_MAX, float)
    points = _option(args, config, 'profile', 'points', PROFILE_POINTS, int)
    prof = profile1d.BoundaryLayerProfile.optimal(phi0, depth, points)
    write_csv(_output(args, config), ['r_tilde', 'phi', 'n1', 'n3', 'energy_density'], prof.rows(),
              comments=['phi0 = %.12g, energy = %.12g' % (phi0, profile1d.profile_energy(phi0))])


def cmd_approx(args, config):
    R = _option(args, config, 'approx', 'R', 1., float)
    epsilons = _option(args, config, 'approx', 'epsilons', [0.2, 0.1, 0.05],
                       lambda s: [float(v) for v in s.split(',')] if isinstance(s, str) else s)
    delta = _option(args, config, 'approx', 'delta', 0.05, float)
    samples = _option(args, config, 'approx', 'samples', 500, int)
    seed = _option(args, config, 'approx', 'seed', 0, int)
    rows = orient.approx_stability(R, epsilons, delta, samples, seed, _orient_options(args, config))
    write_csv(_output(args, config), orient.StabilityRow.HEADERS, [r.row() for r in rows])


def cmd_figure(args, config):
    figure = _option(args, config, 'figure', 'figure', 'all')
    names = figures.FIGURES if figure == 'all' else (figure,)
    out_dir = _output(args, config)
    out_dir = out_dir if out_dir not in (None, '-') else OUTPUT_DIR
    for name in names:
        print(figures.emit_figure_data(name, out_dir, _resolution(args, config)))


def validation_checks(tolerance=1e-3):
    """ Self-check suite: (name, expected, measured, tolerance) for each check

    :rtype: list[tuple]
    """
    sphere = energy.SPHERE_FACTOR
    checks = [('sphere closed form', 5.968925, energy.e0_sphere(1.).value, 5e-6),
              ('sphere revolution', sphere,
               energy.e0_revolution(surfaces.Sphere(1.), Direction.of([0.3, -0.2, 0.9])).value, 1e-6)]

    capsule = surfaces.Spherocylinder(1., 2.)
    for n1, expected in ((0.5, 7.798653), (-0.9, 13.035740)):
        n = [n1, 0., math.sqrt(1. - n1 * n1)]
        checks.append(('capsule n1=%g' % n1, expected, energy.e0(capsule, n).value, tolerance))

    for n3, expected in ((0., 27.602923), (0.5, 34.269213), (0.75, 43.789151), (1., 63.504403)):
        checks.append(('torus n3=%g' % n3, expected, energy.e0_torus(2., 1., n3).value, tolerance))
    checks.append(('torus n3=1 reduction', 2. * math.pi * FOURTH_ROOT_24 * (4. * math.pi - 8.),
                   energy.e0_torus(2., 1., 1.).value, 1e-9))

    census = orient.census(surfaces.Cube(1.))
    for kind, count in (('minimum', 8), ('maximum', 6), ('saddle', 12)):
        checks.append(('cube %s count' % kind, count, len(census.members(kind)), 0))

    phi0 = math.pi / 3
    checks.append(('profile energy', FOURTH_ROOT_24 * (1. - math.cos(phi0)), profile1d.profile_energy(phi0), 1e-6))

    field = tangentfield.build_boundary_field(surfaces.Sphere(1.), [0., 0., 1.], 0.2)
    checks.append(('sphere total degree', 2, field.total_degree, 0))
    return checks


def cmd_validate(args, config):
    tolerance = _option(args, config, 'run', 'tolerance', 1e-3, float)
    rows, failed = [], 0
    for name, expected, measured, tol in validation_checks(tolerance):
        ok = abs(measured - expected) <= tol
        failed += not ok
        rows.append([name, '%.9g' % expected, '%.9g' % measured, 'ok' if ok else 'FAIL'])
    print_table(['Check', 'Expected', 'Measured', 'Status'], rows)
    if failed:
        raise NumericalFailure('%d of %d checks failed' % (failed, len(rows)))


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code"""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write('%s: error: %s\n' % (self.prog, message))
        sys.exit(1)


def subcommand_header(name):
    header = r"""
/-------------{pad}-\
| Subcommand: {name} |
\-------------{pad}-/""".format(pad='-' * len(name), name=name)
    return header


def _add_shape_arguments(p):
    p.add_argument('--shape', help='Shape tag: %s' % ', '.join(sorted(surfaces.SHAPES)))
    p.add_argument('--R', type=float, help='Size: radius (sphere, spherocylinder), center-line radius '
                                           '(torus) or side (cube, rounded cube)')
    p.add_argument('--L', type=float, help='Spherocylinder barrel length')
    p.add_argument('--r', type=float, help='Torus tube radius')
    p.add_argument('--eps', type=float, help='Rounded cube fillet radius')
    p.add_argument('--mesh', help='Closed triangle mesh (.off or .obj) instead of an analytic shape')


def build_parser():
    common = ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='count', default=0, help='More logging (-vv for debug).')
    common.add_argument('--config', help='Run configuration file (INI format).')
    common.add_argument('--tolerance', type=float, help='Override the numerical tolerance.')
    common.add_argument('--resolution', type=int, help='Quadrature or mesh resolution.')
    common.add_argument('-o', '--output', help='Output file (stdout by default), or directory for figure.')

    parser = ArgumentParser(prog='anchoring',
                            description='Limiting anchoring energy of colloids in a nematic liquid crystal.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    command_parsers = parser.add_subparsers(title='Available subcommands', dest='command',
                                            description='For detailed subcommand help run: <subcommand> -h.')

    p = command_parsers.add_parser('energy', parents=[common], help='Evaluate E0(M; n) as JSON.')
    _add_shape_arguments(p)
    p.add_argument('--n', help='Alignment at infinity, "x,y,z" (default 0,0,1).')
    p.add_argument('--engine', choices=energy.ENGINES, help='Evaluation engine (default auto).')
    p.set_defaults(func=cmd_energy)

    p = command_parsers.add_parser('scan', parents=[common], help='Scan E0 over a grid of directions as CSV.')
    _add_shape_arguments(p)
    p.add_argument('--grid', help='name:start:stop:count or name=v1,v2,...; name is n1, n3 or n1n2.')
    p.add_argument('--engine', choices=energy.ENGINES, help='Evaluation engine (default auto).')
    p.set_defaults(func=cmd_scan)

    p = command_parsers.add_parser('optimize', parents=[common], help='Critical points of E0 as JSON.')
    _add_shape_arguments(p)
    p.add_argument('--mode', choices=('minimize', 'census'), help='Global minima only, or every critical point.')
    p.add_argument('--lattice-points', dest='lattice_points', type=int, help='Coarse scan lattice size.')
    p.set_defaults(func=cmd_optimize)

    p = command_parsers.add_parser('defects', parents=[common], help='Build the boundary field and its defects.')
    _add_shape_arguments(p)
    p.add_argument('--n', help='Alignment at infinity, "x,y,z" (default 0,0,1).')
    p.add_argument('--delta', type=float, help='Radius of the degenerate regions (default 0.2).')
    p.add_argument('--dump', help='CSV file for the vertex field (x1, x2, x3, v1, v2, v3).')
    p.set_defaults(func=cmd_defects)

    p = command_parsers.add_parser('profile', parents=[common], help='Optimal boundary-layer profile as CSV.')
    p.add_argument('--phi0', type=float, help='Surface angle in [0, π/2] (default π/2).')
    p.add_argument('--depth', type=float, help='Rescaled depth H (default %g).' % PROFILE_R_MAX)
    p.add_argument('--points', type=int, help='Number of samples.')
    p.set_defaults(func=cmd_profile)

    p = command_parsers.add_parser('approx', parents=[common], help='Rounded-cube stability study as CSV.')
    p.add_argument('--R', type=float, help='Cube side (default 1).')
    p.add_argument('--epsilons', help='Fillet radii, descending, comma separated (default 0.2,0.1,0.05).')
    p.add_argument('--delta', type=float, help='Required minimizer distance at the smallest radius.')
    p.add_argument('--samples', type=int, help='Random directions for the energy gap (default 500).')
    p.add_argument('--seed', type=int, help='Seed for the random directions.')
    p.set_defaults(func=cmd_approx)

    p = command_parsers.add_parser('validate', parents=[common], help='Run the self-check suite.')
    p.set_defaults(func=cmd_validate)

    p = command_parsers.add_parser('figure', parents=[common], help='Write figure data CSV files.')
    p.add_argument('--figure', choices=figures.FIGURES + ('all',), help='Figure to emit (default all).')
    p.set_defaults(func=cmd_figure)
    parser.command_parsers = command_parsers
    return parser


def _setup_logging(verbosity):
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(verbosity, 2)]
    logging.basicConfig(stream=sys.stderr, level=level, format='%(levelname)s %(name)s: %(message)s',
                        force=True)


def run(argv=None):
    """ Parse arguments and run one subcommand

    :return: exit code
    :rtype: int
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code or 0
    if not getattr(args, 'func', None):
        parser.print_help()
        for subp in parser.command_parsers.choices.values():
            print(subcommand_header(subp.prog))
            subp.print_help()
        return 1

    _setup_logging(args.verbose)
    try:
        config = RunConfig.read(args.config) if args.config else RunConfig()
        if args.tolerance is not None:
            config.sections.setdefault('run', {})['tolerance'] = str(args.tolerance)
        if getattr(args, 'engine', None) is not None:
            config.sections.setdefault('run', {})['engine'] = args.engine
        if args.resolution is not None:
            config.sections.setdefault('run', {})['resolution'] = str(args.resolution)
        np.seterr(invalid='ignore')
        args.func(args, config)
    except InputError as e:
        logger.error('%s', e)
        return 1
    except NumericalFailure as e:
        logger.error('%s', e)
        return 2
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
