import numpy as np
import pytest

from perpsys import data
from perpsys.errors import SingularMatrixError
from perpsys.gf import (FieldElement, Matrix, all_matrices, eigenspace, general_linear,
                        mat_inverse, mat_rank, rref, solve_homogeneous)


def test_field_element_arithmetic():
    a, b = FieldElement(2), FieldElement(5)
    assert b.value == 2
    assert (a + b).value == 1
    assert (a * b).value == 1
    assert (-a).value == 1
    assert a.inv().value == 2
    with pytest.raises(ZeroDivisionError):
        FieldElement(0).inv()


def test_modulus_restricted():
    with pytest.raises(ValueError):
        Matrix([[1]], p=4)
    with pytest.raises(ValueError):
        FieldElement(1, 17)


def test_rank_examples():
    assert mat_rank(Matrix.identity(2)) == 2
    assert mat_rank(data.R_DEFAULT + data.I2) == 1
    assert mat_rank(data.X) == 2


def test_inverse_examples():
    assert mat_inverse(Matrix.identity(3)) == Matrix.identity(3)
    assert mat_inverse(data.X) == Matrix([[0, 2], [1, 0]])
    with pytest.raises(SingularMatrixError):
        mat_inverse(Matrix([[1, 1], [2, 2]]))


def test_rref_examples():
    z, piv = rref(Matrix.zeros(2, 2))
    assert z.is_zero() and piv == ()
    m, piv = rref(Matrix.identity(2) * 2)
    assert m == Matrix.identity(2) and piv == (0, 1)
    assert rref(data.X)[0] == Matrix.identity(2)


def test_solve_homogeneous_examples():
    assert solve_homogeneous(Matrix.identity(6)).nrows == 0
    assert solve_homogeneous(Matrix.zeros(1, 15)).nrows == 15
    k = solve_homogeneous(Matrix([[1, 1, 0]]))
    assert (Matrix([[1, 1, 0]]) @ k.T).is_zero() and k.nrows == 2


def test_eigenspace():
    assert eigenspace(Matrix.identity(4), 1).nrows == 4
    assert eigenspace(Matrix.identity(4) * 2, 2).nrows == 4
    cd = data.C_GEN @ data.D_GEN
    spaces = {lam: eigenspace(cd, lam) for lam in (1, 2)}
    big = max(spaces.values(), key=lambda m: m.nrows)
    assert big.nrows == 2
    assert big.tolist() == [[1, 0, 1, 2, 2, 0], [0, 1, 1, 0, 2, 2]]


def test_matrix_is_immutable():
    m = Matrix([[1, 2], [0, 1]])
    with pytest.raises(ValueError):
        m.array[0, 0] = 2


def test_power_and_json():
    m = Matrix([[1, 1], [0, 1]])
    assert m ** 3 == Matrix.identity(2)
    assert m ** -1 @ m == Matrix.identity(2)
    assert Matrix.from_json(m.to_json()) == m


def test_general_linear_order():
    assert len(all_matrices(2)) == 81
    assert len(general_linear(2)) == 48
    assert len(general_linear(2, 2)) == 6


def test_block_shape():
    m = Matrix.block([[data.I2, data.O2], [data.O2, data.X]])
    assert m.shape == (4, 4) and m[3, 2] == 2


def test_random_identities():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a, b, c = (Matrix(rng.integers(0, 3, (6, 6))) for _ in range(3))
        assert (a @ b) @ c == a @ (b @ c)
        r, _ = rref(a)
        assert mat_rank(r) == mat_rank(a) and rref(r)[0] == r
        assert solve_homogeneous(a).nrows + mat_rank(a) == 6
        if mat_rank(a) == 6:
            assert mat_inverse(a) @ a == Matrix.identity(6)
