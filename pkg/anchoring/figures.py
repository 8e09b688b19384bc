"""Reference energy curves for the capsule and torus figures, and writers for the figure data.

Capsule values are E0 - E0(sphere) for R = 1, L = 2 against the transverse component n1; torus
values are E0 for R = 2, r = 1 against n3.
"""
import logging
import os

import numpy as np

from anchoring import surfaces
from anchoring.common import InputError
from anchoring.config import OUTPUT_DIR
from anchoring.energy import SPHERE_FACTOR
from anchoring.orient import scan
from anchoring.tools import write_csv

logger = logging.getLogger(__name__)

FIGURES = ('capsule', 'torus', 'cube-heatmap')

CAPSULE_SHAPE = surfaces.Spherocylinder(1., 2.)
TORUS_SHAPE = surfaces.Torus(2., 1.)
CUBE_SHAPE = surfaces.Cube(1.)

CAPSULE_EXCESS = [
    (-0.99, 9.60282),
    (-0.975, 9.0470157),
    (-0.95, 8.2881565),
    (-0.925, 7.6413149),
    (-0.9, 7.0668152),
    (-0.875, 6.5459916),
    (-0.85, 6.0679461),
    (-0.8, 5.2137358),
    (-0.75, 4.4678824),
    (-0.7, 3.8093796),
    (-0.65, 3.224605),
    (-0.6, 2.7040743),
    (-0.55, 2.2408598),
    (-0.5, 1.829728),
    (-0.45, 1.466629),
    (-0.4, 1.1483766),
    (-0.35, 0.872438),
    (-0.3, 0.63679118),
    (-0.25, 0.43982321),
    (-0.2, 0.2802611),
    (-0.15, 0.1571199),
    (-0.1, 0.0696658),
    (-0.05, 0.01739),
    (0, 0),
    (0.05, 0.01739),
    (0.1, 0.0696658),
    (0.15, 0.1571199),
    (0.2, 0.2802611),
    (0.25, 0.43982321),
    (0.3, 0.63679118),
    (0.35, 0.872438),
    (0.4, 1.1483766),
    (0.45, 1.466629),
    (0.5, 1.829728),
    (0.55, 2.2408598),
    (0.6, 2.7040743),
    (0.65, 3.224605),
    (0.7, 3.8093796),
    (0.75, 4.4678824),
    (0.8, 5.2137358),
    (0.85, 6.0679461),
    (0.875, 6.5459916),
    (0.9, 7.0668152),
    (0.925, 7.6413149),
    (0.95, 8.2881565),
    (0.975, 9.0470157),
    (0.99, 9.60282),
]

TORUS = [
    (-1, 63.504403),
    (-0.99, 61.815481),
    (-0.98, 60.511893),
    (-0.975, 59.918862),
    (-0.95, 57.297653),
    (-0.925, 55.042305),
    (-0.9, 53.026138),
    (-0.875, 51.189197),
    (-0.85, 49.496297),
    (-0.825, 47.924279),
    (-0.8, 46.456751),
    (-0.75, 43.789151),
    (-0.7, 41.424505),
    (-0.65, 39.317792),
    (-0.6, 37.437495),
    (-0.55, 35.760484),
    (-0.5, 34.269213),
    (-0.45, 32.950054),
    (-0.4, 31.792253),
    (-0.35, 30.787237),
    (-0.3, 29.928142),
    (-0.25, 29.209488),
    (-0.2, 28.626937),
    (-0.15, 28.177129),
    (-0.1, 27.857561),
    (-0.05, 27.666499),
    (0, 27.602923),
    (0.05, 27.666499),
    (0.1, 27.857561),
    (0.15, 28.177129),
    (0.2, 28.626937),
    (0.25, 29.209488),
    (0.3, 29.928142),
    (0.35, 30.787237),
    (0.4, 31.792253),
    (0.45, 32.950054),
    (0.5, 34.269213),
    (0.55, 35.760484),
    (0.6, 37.437495),
    (0.65, 39.317792),
    (0.7, 41.424505),
    (0.75, 43.789151),
    (0.8, 46.456751),
    (0.825, 47.924279),
    (0.85, 49.496297),
    (0.875, 51.189197),
    (0.9, 53.026138),
    (0.925, 55.042305),
    (0.95, 57.297653),
    (0.975, 59.918862),
    (0.98, 60.511893),
    (0.99, 61.815481),
    (1, 63.504403),
]


def capsule_reference():
    """ (n1, E0) pairs of the capsule figure

    :rtype: numpy.ndarray
    """
    data = np.array(CAPSULE_EXCESS)
    data[:, 1] += SPHERE_FACTOR
    return data


def torus_reference():
    return np.array(TORUS)


def figure_data(figure, resolution=128, grid_points=101):
    """ Headers and rows of one figure

    :param figure: capsule, torus or cube-heatmap
    :rtype: tuple[list[str], list[list[float]]]
    """
    if figure == 'capsule':
        grid = scan(CAPSULE_SHAPE, 'n1', capsule_reference()[:, 0], resolution=resolution)
        return ['n1', 'E0'], [[c[0], v] for c, v in zip(grid.coordinates, grid.values)]
    if figure == 'torus':
        grid = scan(TORUS_SHAPE, 'n3', torus_reference()[:, 0], resolution=resolution)
        return ['n3', 'E0'], [[c[0], v] for c, v in zip(grid.coordinates, grid.values)]
    if figure == 'cube-heatmap':
        grid = scan(CUBE_SHAPE, 'n1n2', np.linspace(-1., 1., grid_points), resolution=resolution)
        return ['n1', 'n2', 'E0'], [[c[0], c[1], v] for c, v in zip(grid.coordinates, grid.values)]
    raise InputError('Unknown figure "%s", choose from: %s' % (figure, ', '.join(FIGURES)))


def emit_figure_data(figure, output_dir=None, resolution=128):
    """ Write the data of one figure to <output_dir>/<figure>.csv

    :return: path of the written file
    :rtype: str
    """
    headers, rows = figure_data(figure, resolution)
    path = os.path.join(output_dir or OUTPUT_DIR, '%s.csv' % figure)
    write_csv(path, headers, rows, comments=['E0 in units of the limiting surface energy, figure %s' % figure])
    logger.info('Wrote %d rows to %s', len(rows), path)
    return path
