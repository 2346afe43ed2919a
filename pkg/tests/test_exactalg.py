from math import gcd

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from picard_tools.errors import CompositionNonzero, NoIntegerSolution
from picard_tools.exactalg import (
    CochainComplex,
    FinAbGroup,
    GroupExpr,
    coefficient_cohomology,
    cokernel,
    complex_cohomology,
    identity,
    image_basis,
    int_matrix,
    is_zero,
    kernel_basis,
    matmul,
    smith_normal_form,
    solve_integer,
    zeros,
)


def random_matrix(rng, rows, cols, low=-9, high=9):
    return int_matrix([[rng.randint(low, high) for _ in range(cols)] for _ in range(rows)], shape=(rows, cols))


def oracle_invariants(matrix) -> list[int]:
    """nonzero invariant factors from sympy"""
    if 0 in matrix.shape:
        return []
    snf = sympy_snf(Matrix(matrix.tolist()), domain=ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0)


def oracle_rank(matrix) -> int:
    if 0 in matrix.shape:
        return 0
    return Matrix(matrix.tolist()).rank()


def test_smith_of_identity():
    decomposition = smith_normal_form(identity(2))
    assert decomposition.diagonal == (1, 1)
    assert (decomposition.U == identity(2)).all()
    assert (decomposition.V == identity(2)).all()


def test_smith_diagonal_from_minors():
    assert smith_normal_form(int_matrix([[2, 4], [6, 8]])).diagonal == (2, 4)


@pytest.mark.parametrize("n", [2, 3, 5, 12])
def test_smith_of_x_plus_y_relations(n):
    matrix = int_matrix([[n, 0], [0, n], [1, 1]])
    assert smith_normal_form(matrix).diagonal == (1, n)


def test_smith_of_empty_matrices():
    assert smith_normal_form(zeros(0, 3)).diagonal == ()
    assert smith_normal_form(zeros(2, 0)).rank == 0


def test_smith_reconstruction(rng):
    """tests U·A·V = S with unimodular transforms on random matrices."""
    for _ in range(200):
        a = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8))
        d = smith_normal_form(a)

        assert (matmul(matmul(d.U, a), d.V) == d.S).all()
        assert abs(Matrix(d.U.tolist()).det()) == 1
        assert abs(Matrix(d.V.tolist()).det()) == 1

        off_diagonal = [d.S[i, j] for i in range(a.shape[0]) for j in range(a.shape[1]) if i != j]
        assert all(x == 0 for x in off_diagonal)
        diagonal = d.diagonal
        assert all(x >= 0 for x in diagonal)
        assert all(b % a_ == 0 if a_ else b == 0 for a_, b in zip(diagonal, diagonal[1:]))


def test_smith_matches_sympy(rng):
    for _ in range(40):
        a = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), -5, 5)
        nonzero = [x for x in smith_normal_form(a).diagonal if x]
        assert nonzero == oracle_invariants(a)


def test_cokernel_examples():
    assert cokernel(zeros(2, 2)) == FinAbGroup.free(2)
    assert cokernel(int_matrix([[4, 0, 1], [0, 4, 1]])) == FinAbGroup(0, (4,))
    images = [(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)]
    columns = int_matrix([list(row) for row in zip(*images)])
    assert cokernel(columns) == FinAbGroup.free(1)


def test_cokernel_invariant_under_unimodular_change(rng):
    a = random_matrix(rng, 3, 4, -4, 4)
    left = int_matrix([[1, 2, 0], [0, 1, 0], [3, 7, 1]])
    right = int_matrix([[1, 0, 0, 0], [5, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert cokernel(matmul(matmul(left, a), right)) == cokernel(a)


def test_kernel_and_image_bases():
    a = int_matrix([[1, 2, 3], [2, 4, 6]])
    kernel = kernel_basis(a)
    assert kernel.shape == (3, 2)
    assert is_zero(matmul(a, kernel))

    image = image_basis(int_matrix([[2, 4], [0, 0]]))
    assert image.shape == (2, 1)
    assert abs(image[0, 0]) == 2


def test_solve_integer():
    a = int_matrix([[2, 1], [0, 3]])
    rhs = int_matrix([[5], [6]])
    x = solve_integer(a, rhs)
    assert (matmul(a, x) == rhs).all()

    with pytest.raises(NoIntegerSolution):
        solve_integer(int_matrix([[2]]), int_matrix([[1]]))
    with pytest.raises(NoIntegerSolution):
        solve_integer(int_matrix([[1], [1]]), int_matrix([[1], [2]]))


def test_complex_cohomology_of_x_plus_y_2z():
    differential = int_matrix([[1, -1], [0, 2]])
    assert complex_cohomology(zeros(2, 1), differential).is_trivial
    assert complex_cohomology(differential, zeros(0, 2)) == FinAbGroup(0, (2,))


def test_complex_cohomology_of_zero_maps():
    assert complex_cohomology(zeros(3, 3), zeros(3, 3)) == FinAbGroup.free(3)


def test_complex_cohomology_rejects_noncomplex():
    with pytest.raises(CompositionNonzero):
        complex_cohomology(identity(2), identity(2))


def integer_left_kernel(matrix) -> list[list[int]]:
    """rows y with y·matrix = 0, scaled to integers, via sympy"""
    rows = []
    for vector in Matrix(matrix.tolist()).T.nullspace():
        scale = 1
        for entry in vector:
            scale = scale * entry.q // gcd(scale, entry.q)
        rows.append([int(entry * scale) for entry in vector])
    return rows


def random_cochain_complex(rng) -> CochainComplex:
    """C^0 -> C^1 -> C^2 -> C^3 whose later differentials factor through left kernels."""
    ranks = [rng.randint(1, 4), rng.randint(2, 5), rng.randint(2, 5), rng.randint(1, 4)]
    first = random_matrix(rng, ranks[1], ranks[0], -3, 3)
    differentials = [first]
    for k in (1, 2):
        kernel = integer_left_kernel(differentials[-1])
        rows = []
        for _ in range(ranks[k + 1]):
            weights = [rng.randint(-3, 3) for _ in kernel]
            rows.append([sum(w * row[j] for w, row in zip(weights, kernel)) for j in range(ranks[k])])
        differentials.append(int_matrix(rows, shape=(ranks[k + 1], ranks[k])))
    return CochainComplex(0, tuple(ranks), tuple(differentials))


def test_complex_cohomology_matches_sympy_oracle(rng):
    for _ in range(25):
        complex_ = random_cochain_complex(rng)
        groups = complex_.cohomology()
        for k, group in enumerate(groups):
            d_in = complex_.differentials[k - 1] if k > 0 else zeros(complex_.ranks[k], 0)
            d_out = complex_.differentials[k] if k < 3 else zeros(0, complex_.ranks[k])
            expected_rank = complex_.ranks[k] - oracle_rank(d_in) - oracle_rank(d_out)
            assert group.free_rank == expected_rank
            assert list(group.invariant_factors) == [d for d in oracle_invariants(d_in) if d > 1]


def test_euler_characteristic(rng):
    for _ in range(10):
        complex_ = random_cochain_complex(rng)
        alternating = sum((-1) ** k * g.free_rank for k, g in enumerate(complex_.cohomology()))
        assert complex_.euler_characteristic() == alternating


def test_cochain_complex_checks_shapes():
    with pytest.raises(ValueError):
        CochainComplex(0, (2, 3), (zeros(2, 2),))
    with pytest.raises(ValueError):
        CochainComplex(0, (2, 3), ())


def test_fin_ab_group_canonical_form():
    assert FinAbGroup.from_cyclic(0, [2, 3]) == FinAbGroup(0, (6,))
    assert FinAbGroup.from_cyclic(1, [4, 2, 0, 1]) == FinAbGroup(2, (2, 4))
    assert FinAbGroup.free(1).direct_sum(FinAbGroup(0, (2,))) == FinAbGroup(1, (2,))
    with pytest.raises(ValueError):
        FinAbGroup(0, (2, 3))
    with pytest.raises(ValueError):
        FinAbGroup(0, (1,))


def test_fin_ab_group_text_and_json():
    assert str(FinAbGroup()) == "0"
    assert str(FinAbGroup.free(1)) == "Z"
    assert str(FinAbGroup(2, (2,))) == "Z^2 + Z/2"
    assert FinAbGroup(1, (3,)).to_dict() == {"free_rank": 1, "torsion": [3]}


def test_coefficient_cohomology_examples():
    assert coefficient_cohomology(FinAbGroup.free(1), FinAbGroup(), "K*") == GroupExpr("K*", 1)
    torsion_sub = coefficient_cohomology(FinAbGroup(), FinAbGroup(0, (2,)), "K*")
    assert torsion_sub == GroupExpr("K*", 0, (), (2,))
    assert str(torsion_sub) == "K*[2]"
    assert coefficient_cohomology(FinAbGroup(), FinAbGroup(), "K*").is_trivial


def test_group_expr_evaluation():
    expr = GroupExpr("G", free_power=2, cotorsion=(2,), torsion_sub=(4,))
    assert expr.evaluate() == FinAbGroup(2, (2,))
    assert expr.evaluate(2) == FinAbGroup(0, (2, 2, 2, 2))
    assert expr.evaluate(3) == FinAbGroup(0, (3, 3))
    assert str(expr) == "(G)^2 + G/2G + G[4]"
    assert expr.to_dict() == {"symbol": "G", "free": 2, "cotorsion": [2], "torsion_sub": [4]}
