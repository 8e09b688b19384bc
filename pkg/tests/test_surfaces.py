import math

import numpy as np
import pytest

from anchoring import surfaces
from anchoring.common import InputError
from anchoring.surfaces import (Sphere, Spherocylinder, Torus, Cube, RoundedCube, RevolutionSurface, Arc,
                                Segment, TriMesh, MeshError, NotC11, UnsupportedPair, DegenerateParameter)

ANALYTIC = [Sphere(1.), Spherocylinder(1., 2.), Torus(2., 1.), Cube(1.), RoundedCube(1., 0.1)]


@pytest.mark.parametrize('shape', ANALYTIC, ids=lambda s: s.tag)
def test_sample_reproduces_area(shape):
    assert surfaces.sample(shape, 32).check_area(shape.area, rtol=1e-10)


@pytest.mark.parametrize('shape', ANALYTIC, ids=lambda s: s.tag)
def test_sample_normals_point_outward(shape):
    rule = surfaces.sample(shape, 16)
    # every shape here is star-shaped about its center or, for the torus, about the tube center line
    if isinstance(shape, Torus):
        rho = np.hypot(rule.points[:, 0], rule.points[:, 1])
        center = np.column_stack([rule.points[:, 0], rule.points[:, 1], np.zeros(len(rule))]) * (shape.R / rho)[:, None]
        outward = rule.points - center
    else:
        outward = rule.points
    assert np.all(np.einsum('ij,ij->i', rule.normals, outward) > 0.)


def test_divergence_theorem():
    # ∫ x·ν dH² = 3 vol for every closed surface
    rule = surfaces.sample(Spherocylinder(1., 2.), 32)
    volume = 4. / 3. * math.pi + math.pi * 2.
    assert math.fsum(rule.weights * np.einsum('ij,ij->i', rule.points, rule.normals)) == pytest.approx(3. * volume)


def test_revolution_profiles():
    sphere = Sphere(2.).to_revolution()
    assert not sphere.closed
    assert sphere.euler_characteristic == 2
    assert sphere.area == pytest.approx(16. * math.pi)
    assert np.allclose(sphere.gamma(0.5), [2., 0.])
    assert tuple(sphere.normal(0.5, math.pi / 2)) == pytest.approx((0., 1., 0.))

    torus = Torus(2., 1.).to_revolution()
    assert torus.closed
    assert torus.euler_characteristic == 0
    assert np.allclose(torus.gamma(0.), [2., 1.])
    assert tuple(torus.normal(0., 0.)) == pytest.approx((0., 0., 1.), abs=1e-15)


def test_profile_validation():
    with pytest.raises(InputError):
        RevolutionSurface([])
    with pytest.raises(InputError):
        # does not reach the axis
        RevolutionSurface([Segment((1., -1.), (1., 1.))])
    with pytest.raises(InputError):
        # tangent jumps at the join
        RevolutionSurface([Segment((0., -1.), (1., 0.)), Segment((1., 0.), (0., 1.))])
    with pytest.raises(DegenerateParameter):
        Sphere(1.).to_revolution().locate(1.5)


def test_arc_normal_crossings():
    arc = Arc((0., 0.), 1., -math.pi / 2, math.pi / 2)
    # the arc normal (cos a, sin a) has third component ±0.5 at a = ±π/6
    assert arc.normal_crossings(0.5) == pytest.approx([1. / 3., 2. / 3.])
    assert Segment((1., 0.), (1., 1.)).normal_crossings(0.5) == []


@pytest.mark.parametrize('n3', [0., 0.3, 0.9, 1.])
def test_half_turn_rule_area(n3):
    rule = Torus(2., 1.).to_revolution().half_turn_rule(n3, 16)
    assert rule.check_area(8. * math.pi ** 2, rtol=1e-10)


def test_shape_parameters():
    with pytest.raises(InputError):
        Sphere(0.)
    with pytest.raises(InputError):
        Torus(1., 1.)
    with pytest.raises(InputError):
        RoundedCube(1., 0.5)
    with pytest.raises(InputError):
        surfaces.shape_from_params('dodecahedron', R=1.)
    assert surfaces.shape_from_params('rounded-cube', R=1, eps=0.1) == RoundedCube(1., 0.1)
    assert surfaces.shape_from_params('torus', R='2', r='1') == Torus(2., 1.)


def test_curvature_bounds():
    assert surfaces.max_curvature(Sphere(2.)) == 0.5
    assert surfaces.max_curvature(Torus(3., 1.)) == 1.
    assert surfaces.ray_length(RoundedCube(1., 0.1)) == pytest.approx(0.05)
    assert Spherocylinder(1., 2.).to_revolution().max_curvature() == pytest.approx(1.)
    with pytest.raises(NotC11):
        surfaces.max_curvature(Cube(1.))


def test_rounded_cube_area():
    eps = 0.1
    f = 1. - 2. * eps
    assert RoundedCube(1., eps).area == pytest.approx(6. * f * f + 6. * math.pi * eps * f + 4. * math.pi * eps * eps)


def test_symmetric_difference():
    cube = Cube(1.)
    rounded = RoundedCube(1., 0.1)
    value = surfaces.symmetric_difference_area(cube, rounded)
    assert value == surfaces.symmetric_difference_area(rounded, cube)
    assert value == pytest.approx(6. * (1. - 0.64) + rounded.area - 6. * 0.64)
    smaller = surfaces.symmetric_difference_area(cube, RoundedCube(1., 0.05))
    assert 0. < smaller < value
    with pytest.raises(UnsupportedPair):
        surfaces.symmetric_difference_area(cube, RoundedCube(2., 0.1))
    with pytest.raises(UnsupportedPair):
        surfaces.symmetric_difference_area(cube, Sphere(1.))


@pytest.mark.parametrize('shape, chi', [(Sphere(1.), 2), (Spherocylinder(1., 2.), 2), (Torus(2., 1.), 0),
                                        (Cube(1.), 2), (RoundedCube(1., 0.2), 2)], ids=lambda v: str(v))
def test_mesh_topology(shape, chi):
    mesh = surfaces.mesh_from_shape(shape, 16)
    assert mesh.euler_characteristic == chi
    assert np.allclose(np.linalg.norm(mesh.vertex_normals, axis=1), 1.)
    # face orientation agrees with the exact vertex normals; cube edge vertices carry one face normal
    corner_normals = mesh.vertex_normals[mesh.triangles].mean(axis=1)
    agreement = np.einsum('ij,ij->i', corner_normals, mesh.face_normals)
    assert np.all(agreement >= 0. if isinstance(shape, Cube) else agreement > 0.)


def test_mesh_area_converges():
    coarse = surfaces.mesh_from_shape(Sphere(1.), 16).area
    fine = surfaces.mesh_from_shape(Sphere(1.), 64).area
    assert coarse < fine < 4. * math.pi
    assert 4. * math.pi - fine < 4. * math.pi - coarse
    assert surfaces.mesh_from_shape(Cube(1.), 8).area == pytest.approx(6.)


def test_mesh_sample():
    mesh = surfaces.mesh_from_shape(Cube(2.), 4)
    rule = mesh.sample()
    assert len(rule) == 3 * len(mesh.triangles)
    assert rule.area == pytest.approx(24.)


def tetrahedron():
    vertices = [[1., 1., 1.], [1., -1., -1.], [-1., 1., -1.], [-1., -1., 1.]]
    triangles = [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]
    return vertices, triangles


def test_mesh_validation():
    vertices, triangles = tetrahedron()
    mesh = TriMesh(vertices, triangles)
    assert mesh.euler_characteristic == 2
    assert len(mesh.edges) == 6
    assert np.all(np.einsum('ij,ij->i', mesh.face_normals, mesh.vertices[mesh.triangles].mean(axis=1)) > 0.)

    with pytest.raises(MeshError):
        TriMesh(vertices, triangles[:3])
    with pytest.raises(MeshError):
        TriMesh(vertices, [[0, 2, 1]] + triangles[1:])
    with pytest.raises(MeshError):
        TriMesh(vertices, [[0, 1, 4]] + triangles[1:])


def test_mesh_curvature_estimate():
    kappa = surfaces.mesh_from_shape(Sphere(1.), 32).max_curvature()
    assert 0.5 < kappa < 2.


def test_off_round_trip(tmp_path):
    mesh = surfaces.mesh_from_shape(Torus(2., 1.), 8)
    path = str(tmp_path / 'torus.off')
    surfaces.write_off(mesh, path)
    loaded = surfaces.read_mesh(path)
    assert np.allclose(loaded.vertices, mesh.vertices)
    assert loaded.euler_characteristic == 0


def test_read_obj(tmp_path):
    vertices, triangles = tetrahedron()
    path = tmp_path / 'tet.obj'
    path.write_text(''.join('v %g %g %g\n' % tuple(v) for v in vertices)
                    + ''.join('f %d/1 %d/1 %d/1\n' % tuple(i + 1 for i in t) for t in triangles))
    assert surfaces.read_mesh(str(path)).area == pytest.approx(TriMesh(vertices, triangles).area)
    with pytest.raises(MeshError):
        surfaces.read_mesh(str(tmp_path / 'tet.stl'))
