import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from anchoring import qtensor
from anchoring.common import InputError
from anchoring.qtensor import QTensor, Q_INF, DegenerateTensor

component = st.floats(-2., 2., allow_nan=False)
rows = st.lists(component, min_size=5, max_size=5)
directions = st.tuples(component, component, component).filter(lambda v: np.linalg.norm(v) > 0.1)


def test_row_layout():
    q = QTensor.from_row([1., 2., 3., 4., 5.])
    assert q.q33 == -3.
    assert np.allclose(q.matrix, q.matrix.T)
    assert q.to_row() == [1., 2., 3., 4., 5.]
    with pytest.raises(InputError):
        QTensor.from_row([1., 2.])


def test_bulk_potential_values():
    assert qtensor.bulk_potential(QTensor(0., 0., 0., 0., 0.)) == pytest.approx(2. / 9.)
    assert qtensor.bulk_potential(Q_INF) == pytest.approx(0., abs=1e-14)
    assert qtensor.bulk_potential(QTensor.uniaxial([1., 1., 0.])) == pytest.approx(0., abs=1e-14)


def test_field_potential_values():
    assert qtensor.field_potential(Q_INF) == pytest.approx(0., abs=1e-14)
    assert qtensor.field_potential(QTensor(0., 0., 0., 0., 0.)) == 0.
    # director orthogonal to the field
    assert qtensor.field_potential(QTensor.uniaxial([1., 0., 0.])) == pytest.approx(1.5 * math.sqrt(2. / 3.))


@given(rows)
def test_bulk_potential_non_negative(row):
    assert qtensor.bulk_potential(QTensor.from_row(row)) >= -1e-12


@given(rows)
def test_field_potential_range(row):
    g = qtensor.field_potential(QTensor.from_row(row))
    assert -1e-12 <= g <= 2. * math.sqrt(2. / 3.) + 1e-12


@given(directions)
def test_uniaxial_lies_on_N(n):
    q = QTensor.uniaxial(n)
    assert qtensor.dist_to_N(q) == pytest.approx(0., abs=1e-7)
    assert not qtensor.in_B(q)
    assert np.allclose(qtensor.project_uniaxial(q).matrix, q.matrix, atol=1e-12)


def test_distance_of_zero():
    assert qtensor.dist_to_N(QTensor(0., 0., 0., 0., 0.)) == pytest.approx(math.sqrt(2. / 3.))


def test_spectral_order_and_sign():
    data = qtensor.spectral(Q_INF)
    assert data.eigenvalues[0] == pytest.approx(2. / 3.)
    assert data.gap == pytest.approx(1.)
    assert np.allclose(data.eigenvectors[:, 0], [0., 0., 1.])


def test_degenerate_set():
    assert qtensor.in_B(QTensor(0., 0., 0., 0., 0.))
    oblate = -1. * Q_INF
    assert qtensor.in_B(oblate)
    with pytest.raises(DegenerateTensor):
        qtensor.decompose(oblate)
    with pytest.raises(DegenerateTensor):
        qtensor.project_uniaxial(oblate)
    with pytest.raises(InputError):
        qtensor.in_B(Q_INF, tol=0.)


@given(rows)
def test_decomposition_recomposes(row):
    q = QTensor.from_row(row)
    if qtensor.in_B(q, 1e-6):
        return
    d = qtensor.decompose(q)
    assert d.s >= 0.
    assert 0. <= d.t <= 1.
    assert abs(d.n @ d.m) < 1e-9
    assert np.allclose(d.recompose().matrix, q.matrix, atol=1e-9)


def test_projection_ignores_scale():
    q = 2.5 * QTensor.uniaxial([0., 1., 1.])
    assert np.allclose(qtensor.project_uniaxial(q).matrix, QTensor.uniaxial([0., 1., 1.]).matrix)


def test_lipschitz_estimate_grows_with_samples():
    small = qtensor.lipschitz_g_estimate(0.2, 200, seed=3)
    large = qtensor.lipschitz_g_estimate(0.2, 2000, seed=3)
    assert 0. < small <= large
    with pytest.raises(InputError):
        qtensor.lipschitz_g_estimate(1., 10)


def test_vectorized_densities_match_scalar():
    rng = np.random.default_rng(0)
    mats = qtensor.random_qtensors(rng, 20)
    for m, f, g in zip(mats, qtensor.bulk_density(mats), qtensor.field_density(mats)):
        q = QTensor.from_matrix(m)
        assert f == pytest.approx(qtensor.bulk_potential(q))
        assert g == pytest.approx(qtensor.field_potential(q))


def test_bulk_constant_positive():
    assert qtensor.bulk_constant_estimate(500) > 0.


def test_coercivity_estimate_grows_with_h():
    weak = qtensor.coercivity_estimate(0.5, 500, seed=2)
    strong = qtensor.coercivity_estimate(2., 500, seed=2)
    assert 0. <= weak <= strong


def fibonacci_sphere(count):
    k = np.arange(count) + 0.5
    z = 1. - 2. * k / count
    phi = math.pi * (3. - math.sqrt(5.)) * k
    rho = np.sqrt(1. - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def test_potentials_non_negative_on_many_samples():
    mats = qtensor.random_qtensors(np.random.default_rng(11), 100000)
    assert np.min(qtensor.bulk_density(mats)) >= -1e-12
    assert np.min(qtensor.field_density(mats)) >= -1e-12


@pytest.mark.parametrize('s', [0., 0.01, 0.5, 1., 2., 3.])
def test_field_potential_vanishes_on_the_ray(s):
    assert qtensor.field_potential(s * Q_INF) == pytest.approx(0., abs=1e-12)


def test_bulk_zero_set_is_N():
    rng = np.random.default_rng(5)
    n = rng.standard_normal((2000, 3))
    n /= np.linalg.norm(n, axis=1)[:, None]
    uniaxial = np.einsum('ki,kj->kij', n, n) - qtensor.IDENTITY_THIRD
    kick = qtensor.random_qtensors(rng, 2000)
    kick /= np.linalg.norm(kick, axis=(1, 2))[:, None, None]
    # f is close to 3/2 dist² next to N; sizes are kept out of the band between the two thresholds
    size = rng.choice([1e-9, 1e-8, 1e-7, 1e-2, 1e-1], 2000)
    q = np.concatenate([uniaxial + size[:, None, None] * kick, qtensor.random_qtensors(rng, 2000)])
    small = qtensor.bulk_density(q) < 1e-10
    near = qtensor.distance_density(q) < 1e-5
    assert small.any() and (~small).any()
    assert np.array_equal(small, near)


@pytest.mark.parametrize('seed', range(5))
def test_distance_matches_sphere_sampling(seed):
    sphere = fibonacci_sphere(100000)
    for m in qtensor.random_qtensors(np.random.default_rng(seed), 4, 0.5):
        q = QTensor.from_matrix(m)
        # |Q - (n⊗n - I/3)|² = |Q|² - 2 n·Qn + 2/3 for traceless Q
        sampled = q.norm ** 2 - 2. * np.einsum('ki,ij,kj->k', sphere, m, sphere) + 2. / 3.
        exact = qtensor.dist_to_N(q)
        assert math.sqrt(max(np.min(sampled), 0.)) >= exact - 1e-12
        assert np.min(sampled) - exact ** 2 < 1e-3


@given(rows)
def test_field_potential_of_projection(row):
    q = QTensor.from_row(row)
    if qtensor.in_B(q, 1e-6):
        return
    n = qtensor.spectral(q).eigenvectors[:, 0]
    p = qtensor.project_uniaxial(q)
    assert qtensor.field_potential(p) == pytest.approx(math.sqrt(1.5) * (1. - n[2] ** 2), abs=1e-12)


@given(rows)
def test_projection_is_idempotent(row):
    q = QTensor.from_row(row)
    if qtensor.in_B(q, 1e-6):
        return
    p = qtensor.project_uniaxial(q)
    assert qtensor.spectral(p).gap == pytest.approx(1., abs=1e-12)
    assert np.allclose(qtensor.project_uniaxial(p).matrix, p.matrix, atol=1e-12)


@given(rows)
def test_spectral_data_rebuilds_tensor(row):
    q = QTensor.from_row(row)
    data = qtensor.spectral(q)
    rebuilt = data.eigenvectors @ np.diag(data.eigenvalues) @ data.eigenvectors.T
    assert np.allclose(rebuilt, q.matrix, atol=1e-12)
    assert list(data.eigenvalues) == sorted(data.eigenvalues, reverse=True)


@pytest.mark.parametrize('h', [0.1, 0.01])
def test_coercivity_positive(h):
    assert qtensor.coercivity_estimate(h, 100000, seed=4) > 0.


@pytest.mark.parametrize('seed', range(10))
def test_director_rate_bound_on_smooth_curves(seed):
    rng = np.random.default_rng(seed)
    a, b, c, d = rng.standard_normal((4, 3))
    t = np.linspace(0., 2. * math.pi, 400)
    step = 1e-5

    def curve(s):
        v = a + np.outer(np.cos(s), b) + np.outer(np.sin(s), c) + np.outer(np.cos(2. * s), d)
        return v / np.linalg.norm(v, axis=1)[:, None]

    n = curve(t)
    ndot = (curve(t + step) - curve(t - step)) / (2. * step)
    keep = 1. - n[:, 2] ** 2 > 1e-3
    lhs, rhs = qtensor.director_rate_bound(n[keep], ndot[keep])
    assert np.all(lhs <= rhs + 1e-8)


def test_director_rate_bound_on_great_circle():
    # equality along meridians
    t = np.linspace(0.1, 3., 50)
    n = np.column_stack([np.sin(t), np.zeros_like(t), np.cos(t)])
    ndot = np.column_stack([np.cos(t), np.zeros_like(t), -np.sin(t)])
    lhs, rhs = qtensor.director_rate_bound(n, ndot)
    assert np.allclose(lhs, rhs)
    with pytest.raises(InputError):
        qtensor.director_rate_bound(n, ndot[:, :2])
