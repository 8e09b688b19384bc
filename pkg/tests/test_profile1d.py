import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from anchoring import profile1d
from anchoring.common import InputError
from anchoring.config import FOURTH_ROOT_24
from anchoring.profile1d import RayParams, BoundaryLayerProfile, ProfileDomainError, NonUnitDirector

angles = st.floats(0., math.pi / 2, allow_nan=False)


@given(angles)
def test_profile_energy_closed_form(phi0):
    assert profile1d.profile_energy(phi0) == pytest.approx(FOURTH_ROOT_24 * (1. - math.cos(phi0)), abs=1e-6)


def test_profile_endpoints():
    assert profile1d.optimal_profile_angle(0.7, 0.) == pytest.approx(0.7)
    assert profile1d.optimal_profile_angle(0.7, 40.) < 1e-15
    assert profile1d.optimal_profile_angle(0., 3.) == 0.


@given(angles)
def test_profile_solves_first_order_equation(phi0):
    assert profile1d.bogomolny_defect(phi0, np.linspace(0., 20., 201)) < 1e-12


@pytest.mark.parametrize('phi0', [0.3, 1.0, math.pi / 2])
def test_profile_matches_collocation(phi0):
    r, phi = profile1d.profile_bvp_oracle(phi0)
    assert np.max(np.abs(phi - profile1d.optimal_profile_angle(phi0, r))) < 1e-6


@pytest.mark.parametrize('phi0', [0.2, 1.0, math.pi / 2])
@pytest.mark.parametrize('depth', [0.5, 2., 8.])
def test_decay_bound(phi0, depth):
    check = profile1d.decay_bound_check(phi0, depth)
    assert check.holds
    assert 0. < check.ratio <= 1.


def test_domain_errors():
    with pytest.raises(ProfileDomainError):
        profile1d.optimal_profile_angle(2., 1.)
    with pytest.raises(ProfileDomainError):
        profile1d.optimal_profile_angle(0.5, -1.)
    with pytest.raises(ProfileDomainError):
        profile1d.decay_bound_check(0.5, 0.)
    with pytest.raises(InputError):
        profile1d.profile_energy(-0.1)


def test_ray_energy_of_optimal_profile():
    phi0 = 1.1
    r = np.linspace(0., 30., 6001)
    prof = BoundaryLayerProfile(phi0, r, profile1d.optimal_profile_angle(phi0, r))
    value = profile1d.ray_energy(prof.directors(), r, RayParams(xi=1., eta=1., r0=30.))
    assert value == pytest.approx(FOURTH_ROOT_24 * (1. - math.cos(phi0)), rel=1e-3)


def test_ray_energy_of_aligned_director_vanishes():
    r = np.linspace(0., 0.4, 50)
    n = np.tile([0., 0., 1.], (50, 1))
    value = profile1d.ray_energy(n, r, RayParams(0.1, 0.1, kappa1=1., kappa2=1., r0=0.4))
    assert 0. <= value < 1e-14


def test_ray_params_validation():
    assert RayParams(1., 1., kappa1=2., r0=0.25).metric(0.25) == pytest.approx(1.5)
    with pytest.raises(InputError):
        RayParams(1., 1., kappa1=2., r0=0.5)
    with pytest.raises(InputError):
        RayParams(0., 1.)


def test_ray_energy_rejects_bad_directors():
    r = np.linspace(0., 1., 5)
    with pytest.raises(NonUnitDirector):
        profile1d.ray_energy(np.full((5, 3), 1.), r, RayParams(1., 1.))
    with pytest.raises(InputError):
        profile1d.ray_energy(np.zeros((4, 3)), r, RayParams(1., 1.))


def test_profile_rows():
    prof = BoundaryLayerProfile.optimal(math.pi / 2, depth=5., points=11)
    rows = list(prof.rows())
    assert len(rows) == 11
    r, phi, n1, n3, density = rows[0]
    assert r == 0.
    assert phi == pytest.approx(math.pi / 2)
    assert n1 == pytest.approx(1.)
    assert n3 == pytest.approx(0., abs=1e-15)
    assert density == pytest.approx(2. * math.sqrt(1.5))


@pytest.mark.parametrize('phi0', np.linspace(0., math.pi / 2, 20))
def test_profile_energy_on_angle_grid(phi0):
    assert profile1d.profile_energy(phi0) == pytest.approx(FOURTH_ROOT_24 * (1. - math.cos(phi0)), abs=1e-6)


def test_profile_energy_increases_with_angle():
    values = [profile1d.profile_energy(phi0) for phi0 in np.linspace(0., math.pi / 2, 20)]
    assert values[0] == pytest.approx(0., abs=1e-12)
    assert all(a < b for a, b in zip(values[:-1], values[1:]))


@pytest.mark.parametrize('phi0', [0.1, 0.8, math.pi / 2])
@pytest.mark.parametrize('depth', [2., 4., 6.])
def test_decay_at_moderate_depths(phi0, depth):
    check = profile1d.decay_bound_check(phi0, depth)
    assert check.measured <= check.bound
    # the bound is sharp at depth: sin²Φ(H) / (4 tan²(φ0/2) e^{-⁴√24 H}) tends to 1
    assert check.ratio > 0.5


@pytest.mark.parametrize('phi0', [0.4, 1.2])
@pytest.mark.parametrize('eta', [0.1, 0.01, 0.001])
def test_layer_energy_rescaling(phi0, eta):
    value = profile1d.layer_energy(phi0, RayParams(xi=eta / 10., eta=eta, r0=10. * eta))
    assert value == pytest.approx(FOURTH_ROOT_24 * (1. - math.cos(phi0)), rel=1e-2)


@pytest.mark.parametrize('kappa', [-1., 0.5, 2.])
def test_curved_ray_within_metric_bounds(kappa):
    phi0, eta = 1.0, 0.02
    r0 = min(10. * eta, 1. / (2. * abs(kappa)))
    curved = RayParams(xi=0.002, eta=eta, kappa1=kappa, kappa2=kappa, r0=r0)
    flat = RayParams(xi=0.002, eta=eta, r0=r0)
    low, high = curved.metric_bounds()
    assert (1. - r0 * abs(kappa)) ** 2 - 1e-12 <= low <= high <= (1. + r0 * abs(kappa)) ** 2 + 1e-12
    value, reference = profile1d.layer_energy(phi0, curved), profile1d.layer_energy(phi0, flat)
    assert low * reference * (1. - 1e-12) <= value <= high * reference * (1. + 1e-12)


def test_metric_bounds_with_interior_extremum():
    # (1 + r)(1 - 0.8 r) peaks at r = 1/8
    params = RayParams(1., 1., kappa1=1., kappa2=-0.8, r0=0.5)
    low, high = params.metric_bounds()
    assert high == pytest.approx(1.0125)
    assert low == pytest.approx(0.9)
    assert RayParams(1., 1.).metric_bounds() == (1., 1.)
