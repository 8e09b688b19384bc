import csv
import json
import math
import os

import pytest

from anchoring import cli
from anchoring.cli import RunConfig, ConfigError
from anchoring.config import FOURTH_ROOT_24


def run_json(capsys, argv):
    assert cli.run(argv) == 0
    return json.loads(capsys.readouterr().out)


def read_csv(path):
    with open(path) as fin:
        return list(csv.reader(line for line in fin if not line.startswith('#')))


def test_energy_torus(capsys):
    data = run_json(capsys, ['energy', '--shape', 'torus', '--R', '2', '--r', '1', '--n', '0,0,1'])
    assert data['value'] == pytest.approx(63.504403, abs=1e-3)
    assert data['engine'] == 'closed-form'
    assert set(data) == {'value', 'engine', 'est_error'}


def test_energy_engine_flag(capsys):
    data = run_json(capsys, ['energy', '--shape', 'sphere', '--R', '1', '--n', '1,1,0', '--engine', 'revolution'])
    assert data['engine'] == 'revolution'
    assert data['value'] == pytest.approx(5.968925, abs=1e-5)


def test_energy_from_mesh(tmp_path, capsys):
    from anchoring import surfaces
    path = str(tmp_path / 'cube.off')
    surfaces.write_off(surfaces.mesh_from_shape(surfaces.Cube(1.), 4), path)
    data = run_json(capsys, ['energy', '--mesh', path, '--n', '0,0,1'])
    assert data['value'] == pytest.approx(2. * FOURTH_ROOT_24)


def test_input_errors_exit_1(capsys):
    assert cli.run(['energy', '--shape', 'sphere']) == 1
    assert cli.run(['energy', '--shape', 'hexagon', '--R', '1']) == 1
    assert cli.run(['energy', '--shape', 'sphere', '--R', '1', '--n', '0,0']) == 1
    assert cli.run(['energy', '--shape', 'sphere', '--R', '1', '--n', '0,0,0']) == 1
    assert cli.run(['energy', '--shape', 'torus', '--R', '1', '--r', '2']) == 1
    assert cli.run(['energy', '--shape', 'sphere', '--R', 'one']) == 1
    assert cli.run(['nonsense']) == 1
    assert cli.run([]) == 1


def test_help_exits_0(capsys):
    assert cli.run(['energy', '-h']) == 0
    assert '--engine' in capsys.readouterr().out


def test_scan_csv(tmp_path):
    path = str(tmp_path / 'scan.csv')
    argv = ['scan', '--shape', 'spherocylinder', '--R', '1', '--L', '2', '--grid', 'n1=0,0.5', '-o', path]
    assert cli.run(argv) == 0
    rows = read_csv(path)
    assert rows[0] == ['param1', 'param2', 'n1', 'n2', 'n3', 'E0']
    assert float(rows[2][-1]) == pytest.approx(7.798653, abs=1e-3)


def test_profile_csv(tmp_path):
    path = str(tmp_path / 'profile.csv')
    assert cli.run(['profile', '--phi0', str(math.pi / 2), '--depth', '5', '--points', '11', '-o', path]) == 0
    rows = read_csv(path)
    assert rows[0] == ['r_tilde', 'phi', 'n1', 'n3', 'energy_density']
    assert len(rows) == 12
    assert float(rows[1][1]) == pytest.approx(math.pi / 2)


def test_profile_rejects_bad_angle():
    assert cli.run(['profile', '--phi0', '3']) == 1


def test_optimize_cube(capsys):
    data = run_json(capsys, ['optimize', '--shape', 'cube', '--R', '1', '--lattice-points', '256'])
    energies = [p['energy'] for p in data['critical_points']]
    assert len(energies) == 4
    assert energies[0] == pytest.approx(6. * FOURTH_ROOT_24 * (1. - math.sqrt(2. / 3.)), abs=1e-8)


def test_defects_sphere(tmp_path, capsys):
    dump = str(tmp_path / 'field.csv')
    data = run_json(capsys, ['defects', '--shape', 'sphere', '--R', '1', '--n', '0,0,1', '--delta', '0.3',
                             '--resolution', '32', '--dump', dump])
    assert data['total_degree'] == 2 == data['euler_characteristic']
    assert len(data['defects']) == 2
    assert data['field_energy'] >= data['E0'] - 1e-9
    assert read_csv(dump)[0] == ['x1', 'x2', 'x3', 'v1', 'v2', 'v3']


def test_figure_files(tmp_path, capsys):
    assert cli.run(['figure', '--figure', 'torus', '-o', str(tmp_path)]) == 0
    path = capsys.readouterr().out.strip()
    assert os.path.basename(path) == 'torus.csv'
    rows = read_csv(path)
    assert rows[0] == ['n3', 'E0']
    values = {float(n3): float(e) for n3, e in rows[1:]}
    assert values[1.] == pytest.approx(63.504403, abs=1e-3)


def test_config_file(tmp_path, capsys):
    path = tmp_path / 'run.ini'
    path.write_text('[shape]\nshape = torus\nR = 2\nr = 1\n\n[energy]\nn = 0,0,1\n')
    data = run_json(capsys, ['energy', '--config', str(path)])
    assert data['value'] == pytest.approx(63.504403, abs=1e-3)
    # command line flags win over the file
    data = run_json(capsys, ['energy', '--config', str(path), '--n', '1,0,0'])
    assert data['value'] == pytest.approx(27.602923, abs=1e-3)


def test_config_errors(tmp_path):
    path = tmp_path / 'bad.ini'
    path.write_text('[shape]\nshape = torus\nradius = 2\n')
    with pytest.raises(ConfigError, match='radius'):
        RunConfig.read(str(path))
    assert cli.run(['energy', '--config', str(path)]) == 1
    assert cli.run(['energy', '--config', str(tmp_path / 'missing.ini')]) == 1
    with pytest.raises(ConfigError):
        RunConfig.loads('[plot]\ncolor = red\n')


def test_config_round_trip():
    config = RunConfig({'shape': {'shape': 'rounded_cube', 'R': '1', 'eps': '0.1'},
                        'run': {'resolution': '64'}, 'approx': {'epsilons': '0.2,0.1'}})
    assert RunConfig.loads(config.dumps()) == config
    assert config.get('shape', 'eps') == '0.1'
    assert config.get('scan', 'grid', 'n1=0') == 'n1=0'


def test_validate_failure_exits_2(capsys):
    assert cli.run(['validate', '--tolerance', '0']) == 2
    assert 'FAIL' in capsys.readouterr().out


def test_validate_passes(capsys):
    assert cli.run(['validate']) == 0
    out = capsys.readouterr().out
    assert 'FAIL' not in out
    assert 'torus n3=1 reduction' in out
