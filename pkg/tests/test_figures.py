import os

import numpy as np
import pytest

from anchoring import figures
from anchoring.common import InputError
from anchoring.config import FOURTH_ROOT_24
from anchoring.energy import SPHERE_FACTOR


def test_capsule_curve_matches_reference():
    headers, rows = figures.figure_data('capsule')
    assert headers == ['n1', 'E0']
    rows = np.array(rows)
    reference = figures.capsule_reference()
    assert np.allclose(rows[:, 0], reference[:, 0])
    assert np.max(np.abs(rows[:, 1] - reference[:, 1])) < 1e-3


def test_capsule_reference_is_symmetric():
    reference = figures.capsule_reference()
    assert np.allclose(reference[:, 1], reference[::-1, 1])
    assert reference[np.argmin(reference[:, 1]), 1] == pytest.approx(SPHERE_FACTOR)


def test_torus_curve_matches_reference():
    headers, rows = figures.figure_data('torus')
    assert headers == ['n3', 'E0']
    rows = np.array(rows)
    assert np.max(np.abs(rows[:, 1] - figures.torus_reference()[:, 1])) < 1e-3


def test_cube_heatmap():
    headers, rows = figures.figure_data('cube-heatmap', resolution=16, grid_points=11)
    assert headers == ['n1', 'n2', 'E0']
    rows = np.array(rows)
    assert np.all(rows[:, 0] ** 2 + rows[:, 1] ** 2 <= 1. + 1e-12)
    assert rows[:, 2].max() == pytest.approx(2. * FOURTH_ROOT_24)
    assert rows[:, 2].min() >= 6. * FOURTH_ROOT_24 * (1. - np.sqrt(2. / 3.)) - 1e-9


def test_unknown_figure():
    with pytest.raises(InputError):
        figures.figure_data('dodecahedron')


def test_emit_figure_data(tmp_path):
    path = figures.emit_figure_data('torus', str(tmp_path / 'figs'))
    assert path == os.path.join(str(tmp_path / 'figs'), 'torus.csv')
    with open(path) as fin:
        lines = fin.read().splitlines()
    assert lines[0].startswith('#')
    assert lines[1] == 'n3,E0'
    assert len(lines) == 2 + len(figures.TORUS)
