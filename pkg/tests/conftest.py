import random

import pytest

from tests import families


@pytest.fixture
def favorite():
    """facets {1,2,3} and {3,4}"""
    return families.complex_of((1, 2, 3), (3, 4))


@pytest.fixture
def triangle_boundary():
    return families.complex_of((1, 2), (1, 3), (2, 3))


@pytest.fixture
def two_triangles():
    """two triangles sharing the vertex 1"""
    return families.complex_of((1, 2, 3), (1, 4, 5))


@pytest.fixture
def rp2():
    """minimal triangulation of the real projective plane"""
    return families.complex_of(*families.RP2_FACETS)


@pytest.fixture
def cone_rp2():
    return families.complex_of(*(facet + (7,) for facet in families.RP2_FACETS))


@pytest.fixture
def xy2z():
    return families.x_plus_y_equals(2)


@pytest.fixture
def xyzw():
    return families.x_plus_y_equals_z_plus_w()


@pytest.fixture
def rng():
    return random.Random(20240611)
