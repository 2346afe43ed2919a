import pytest

from picard_tools.binoid import BinoidPresentation, Relation, difference_group, free_binoid, smash_free
from picard_tools.divisors import (
    class_group,
    cone_facets,
    positive_grading,
    regular_in_codim1_check,
    valuation_matrix,
)
from picard_tools.errors import NotFullDimensional, NotPointed
from picard_tools.exactalg import FinAbGroup
from tests import families


@pytest.fixture
def numerical_semigroup():
    """the monoid generated by 2 and 3 in N"""
    return BinoidPresentation(("x", "y"), (Relation((3, 0), (0, 2)),))


def test_valuations_of_x_plus_y_z_plus_w(xyzw):
    matrix = valuation_matrix(xyzw)
    assert matrix.primes == ((0, 2), (0, 3), (1, 2), (1, 3))
    assert matrix.values.tolist() == [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
    assert class_group(xyzw) == FinAbGroup.free(1)


@pytest.mark.parametrize("n", range(1, 7))
def test_x_plus_y_equals_nz(n):
    binoid = families.x_plus_y_equals(n)
    assert valuation_matrix(binoid).values.tolist() == [[n, 0, 1], [0, n, 1]]
    expected = FinAbGroup() if n == 1 else FinAbGroup(0, (n,))
    assert class_group(binoid) == expected


def test_free_binoid_has_trivial_class_group():
    binoid = free_binoid(3)
    matrix = valuation_matrix(binoid)
    assert matrix.primes == ((0,), (1,), (2,))
    assert matrix.values.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert class_group(binoid).is_trivial


def test_facet_normals_are_nonnegative_on_generators(xyzw, xy2z):
    """tests every facet normal supports the cone and touches it."""
    for binoid in (xyzw, xy2z, free_binoid(4)):
        gamma = difference_group(binoid)
        normals = cone_facets(gamma)
        assert normals == sorted(normals)
        for normal in normals:
            values = [sum(a * b for a, b in zip(normal, gamma.image(i))) for i in range(binoid.rank)]
            assert min(values) == 0


def test_positive_grading(xy2z):
    gamma = difference_group(xy2z)
    grading = positive_grading(gamma)
    assert all(sum(a * b for a, b in zip(grading, gamma.image(i))) > 0 for i in range(3))


def test_cone_preconditions():
    with pytest.raises(NotFullDimensional):
        cone_facets(difference_group(BinoidPresentation(("x",), (Relation((2,), (1,)),))))
    with pytest.raises(NotPointed):
        cone_facets(difference_group(BinoidPresentation(("x", "y"), (Relation((2, 1), (1, 0)),))))


def test_valuation_matrix_to_dict(xy2z):
    data = valuation_matrix(xy2z).to_dict()
    assert data["primes"] == [["x", "z"], ["y", "z"]]
    assert data["values"] == [[2, 0, 1], [0, 2, 1]]


def test_regular_in_codimension_one(xyzw, xy2z):
    for binoid in (xyzw, xy2z, free_binoid(2)):
        verdict = regular_in_codim1_check(binoid)
        assert verdict.certified
        assert verdict.label == "certified"
    assert regular_in_codim1_check(xy2z).evidence == (
        "<x,z>: z has valuation 1",
        "<y,z>: z has valuation 1",
    )


def test_regularity_unknown_without_uniformizer(numerical_semigroup):
    verdict = regular_in_codim1_check(numerical_semigroup)
    assert not verdict.certified
    assert verdict.to_dict() == {
        "verdict": "unknown",
        "evidence": ["<x,y>: no element of valuation 1 found"],
    }
    assert class_group(numerical_semigroup).is_trivial


@pytest.mark.parametrize("n", [2, 3])
def test_class_group_ignores_free_factor(n, xyzw):
    for binoid in (families.x_plus_y_equals(n), xyzw):
        assert class_group(smash_free(binoid, 1)) == class_group(binoid)
