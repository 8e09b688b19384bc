import os

import hypothesis
import numpy as np
import pytest

from anchoring import surfaces

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture
def sphere():
    return surfaces.Sphere(1.)


@pytest.fixture
def capsule():
    return surfaces.Spherocylinder(1., 2.)


@pytest.fixture
def torus():
    return surfaces.Torus(2., 1.)


@pytest.fixture
def cube():
    return surfaces.Cube(1.)
