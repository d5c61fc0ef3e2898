"""Explicit matrices of the construction over GF(3).

Block matrices are written as 2 x 2 blocks; lines as 2 x 6 row matrices.
"""
from .gf import Matrix

P = 3

I2 = Matrix.identity(2, P)
O2 = Matrix.zeros(2, 2, P)
X = Matrix([[0, 1], [2, 0]], P)

# the four seed lines: a frame of PG(2,9) blown up to PG(5,3)
F4_BASES = (
    Matrix.block([[I2, O2, O2]], P),
    Matrix.block([[O2, I2, O2]], P),
    Matrix.block([[O2, O2, I2]], P),
    Matrix.block([[I2, I2, I2]], P),
)

M0_GRAM = Matrix.block([[O2, X, X], [X, O2, X], [X, X, O2]], P)

# representative (I R S) of the 24-line set chosen for the fifth line
R_DEFAULT = Matrix([[2, 0], [2, 2]], P)
S_DEFAULT = Matrix([[2, 2], [0, 2]], P)

C0 = Matrix([[2, 1], [0, 1]], P)
C_GEN = Matrix.block([[O2, O2, C0], [O2, C0, O2], [C0, O2, O2]], P)
D_GEN = Matrix([
    [1, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 2, 2],
    [0, 0, 0, 0, 0, 1],
    [0, 1, 0, 1, 0, 1],
    [1, 0, 1, 0, 1, 0],
], P)

# invariant symplectic form of <C, D>; blocks A, B, C of the 5-line form family
A15 = Matrix([[2, 2], [0, 0]], P)
B15 = Matrix([[0, 0], [1, 1]], P)
C15 = Matrix([[0, 0], [1, 0]], P)
M15_GRAM = Matrix([
    [0, 0, 2, 2, 0, 0],
    [0, 0, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 0],
    [0, 2, 0, 2, 0, 0],
    [0, 2, 0, 0, 0, 0],
], P)

# the eight matrices Y of GL(2,3) with Y - I invertible and Y + I of rank 1
EIGHT_MATRICES = tuple(Matrix(m, P) for m in (
    [[0, 1], [2, 1]], [[0, 2], [1, 1]], [[1, 1], [2, 0]], [[1, 2], [1, 0]],
    [[2, 0], [1, 2]], [[2, 0], [2, 2]], [[2, 1], [0, 2]], [[2, 2], [0, 2]],
))

# the six 5-cycles of <C, D> as printed, keyed by the word that produces them
FIVE_CYCLES = {
    "CD": [[1, 2, 1, 2, 1, 2], [1, 0, 1, 0, 1, 0], [0, 0, 0, 0, 1, 2],
           [0, 0, 0, 0, 0, 1], [0, 2, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]],
    "DC": [[0, 0, 0, 0, 2, 2], [0, 0, 0, 0, 2, 1], [1, 1, 0, 0, 0, 0],
           [0, 1, 0, 0, 0, 0], [0, 1, 0, 1, 0, 1], [2, 1, 2, 1, 2, 1]],
    "D^-1CD^2": [[1, 2, 0, 1, 2, 0], [1, 0, 2, 0, 2, 2], [0, 0, 0, 0, 1, 1],
                 [0, 0, 0, 0, 0, 1], [0, 2, 0, 2, 0, 2], [1, 0, 1, 0, 1, 0]],
    "D^2CD^-1": [[0, 0, 2, 2, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 1, 1],
                 [0, 0, 0, 0, 1, 2], [1, 2, 1, 2, 1, 2], [1, 0, 1, 0, 1, 0]],
    "CD^-1CD^2C": [[2, 2, 2, 2, 2, 2], [2, 1, 2, 1, 2, 1], [1, 2, 0, 0, 0, 0],
                   [0, 1, 0, 0, 0, 0], [0, 2, 1, 1, 0, 1], [1, 1, 1, 2, 2, 1]],
    "CD^2CD^-1C": [[0, 1, 0, 1, 0, 1], [2, 1, 2, 1, 2, 1], [0, 1, 0, 0, 0, 0],
                   [2, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 2, 1, 0, 0]],
}

# the six fixed lines, in printed order
F6_PRINTED = (
    [[1, 0, 1, 2, 2, 0], [0, 1, 1, 0, 2, 2]],
    [[1, 0, 1, 2, 1, 1], [0, 1, 1, 0, 2, 0]],
    [[1, 0, 0, 2, 0, 1], [0, 1, 1, 1, 2, 1]],
    [[1, 0, 0, 2, 2, 0], [0, 1, 1, 1, 2, 2]],
    [[1, 0, 2, 2, 1, 1], [0, 1, 0, 2, 2, 0]],
    [[1, 0, 2, 2, 0, 1], [0, 1, 0, 2, 2, 1]],
)

# the fifteen lines, in printed order
F15_PRINTED = (
    [[1, 0, 2, 2, 2, 2], [0, 1, 0, 2, 0, 2]],
    [[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 1]],
    [[1, 0, 1, 0, 2, 2], [0, 1, 0, 1, 0, 2]],
    [[0, 0, 1, 0, 1, 2], [0, 0, 0, 1, 1, 0]],
    [[1, 0, 0, 2, 1, 0], [0, 1, 1, 1, 0, 1]],
    [[0, 0, 1, 0, 1, 1], [0, 0, 0, 1, 2, 0]],
    [[1, 0, 2, 0, 0, 0], [0, 1, 2, 2, 0, 0]],
    [[1, 0, 1, 2, 0, 0], [0, 1, 1, 0, 0, 0]],
    [[1, 0, 1, 0, 0, 0], [0, 1, 0, 1, 0, 0]],
    [[1, 0, 2, 0, 2, 0], [0, 1, 2, 2, 2, 2]],
    [[1, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 1]],
    [[0, 0, 1, 0, 1, 0], [0, 0, 0, 1, 0, 1]],
    [[1, 0, 0, 0, 2, 2], [0, 1, 0, 0, 0, 2]],
    [[1, 0, 2, 0, 1, 0], [0, 1, 2, 2, 0, 1]],
    [[1, 0, 1, 0, 1, 1], [0, 1, 0, 1, 2, 0]],
)
