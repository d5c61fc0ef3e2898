"""Exact linear algebra over a small prime field GF(p).

Matrices are immutable: every operation returns a fresh value. Entries are
kept as a read-only ``uint8`` array, always reduced modulo ``p``.
"""
import numpy as np

from . import _kernels
from .errors import SingularMatrixError

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)


def _check_modulus(p):
    if p not in SMALL_PRIMES:
        raise ValueError(f"modulus must be a prime <= 13, got {p}")


class FieldElement:
    """An element of GF(p)."""

    __slots__ = ("value", "p")

    def __init__(self, value, p=3):
        _check_modulus(p)
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("field elements of different moduli")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inv(self):
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in GF(p)")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inv()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF{self.p}({self.value})"


class Matrix:
    """Immutable matrix over GF(p)."""

    __slots__ = ("_a", "p")

    def __init__(self, rows, p=3, ncols=None):
        _check_modulus(p)
        if isinstance(rows, Matrix):
            rows = rows._a
        arr = np.array(rows, dtype=np.int64)
        if arr.size == 0:
            if ncols is None:
                ncols = arr.shape[1] if arr.ndim == 2 else 0
            arr = np.zeros((0, ncols), dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array of rows, got shape {arr.shape}")
        a = (arr % p).astype(np.uint8)
        a.flags.writeable = False
        self._a = a
        self.p = p

    @classmethod
    def _wrap(cls, arr, p):
        m = cls.__new__(cls)
        a = np.ascontiguousarray(arr, dtype=np.uint8)
        a.flags.writeable = False
        m._a = a
        m.p = p
        return m

    @classmethod
    def identity(cls, n, p=3):
        return cls._wrap(np.eye(n, dtype=np.uint8), p)

    @classmethod
    def zeros(cls, rows, cols, p=3):
        return cls._wrap(np.zeros((rows, cols), dtype=np.uint8), p)

    @classmethod
    def block(cls, blocks, p=3):
        arrs = [[np.asarray(b._a if isinstance(b, Matrix) else b, dtype=np.int64)
                 for b in row] for row in blocks]
        return cls(np.block(arrs), p)

    @property
    def array(self):
        """Read-only view of the entries."""
        return self._a

    @property
    def shape(self):
        return self._a.shape

    @property
    def nrows(self):
        return self._a.shape[0]

    @property
    def ncols(self):
        return self._a.shape[1]

    @property
    def T(self):
        return Matrix._wrap(self._a.T, self.p)

    def tolist(self):
        return self._a.tolist()

    def __getitem__(self, idx):
        out = self._a[idx]
        if np.ndim(out) == 0:
            return int(out)
        if np.ndim(out) == 1:
            return tuple(int(x) for x in out)
        return Matrix._wrap(out, self.p)

    def _other(self, other):
        if isinstance(other, Matrix):
            if other.p != self.p:
                raise ValueError("matrices over different fields")
            return other._a.astype(np.int64)
        return np.asarray(other, dtype=np.int64)

    def __matmul__(self, other):
        return Matrix._wrap((self._a.astype(np.int64) @ self._other(other)) % self.p, self.p)

    def __rmatmul__(self, other):
        return Matrix._wrap((np.asarray(other, dtype=np.int64) @ self._a) % self.p, self.p)

    def __add__(self, other):
        return Matrix._wrap((self._a.astype(np.int64) + self._other(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return Matrix._wrap((self._a.astype(np.int64) - self._other(other)) % self.p, self.p)

    def __rsub__(self, other):
        return Matrix._wrap((self._other(other) - self._a.astype(np.int64)) % self.p, self.p)

    def __neg__(self):
        return Matrix._wrap((-self._a.astype(np.int64)) % self.p, self.p)

    def __mul__(self, scalar):
        s = scalar.value if isinstance(scalar, FieldElement) else int(scalar)
        return Matrix._wrap((self._a.astype(np.int64) * s) % self.p, self.p)

    __rmul__ = __mul__

    def __pow__(self, n):
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        base = self if n >= 0 else mat_inverse(self)
        n = abs(n)
        out = Matrix.identity(self.nrows, self.p)
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.p == other.p and self._a.shape == other._a.shape
                and bool(np.array_equal(self._a, other._a)))

    def __hash__(self):
        return hash((self.p, self._a.shape, self._a.tobytes()))

    def key(self):
        """Sort key: lexicographic on shape then entries."""
        return (self._a.shape, self._a.tobytes())

    def is_zero(self):
        return not self._a.any()

    def rank(self):
        return mat_rank(self)

    def inverse(self):
        return mat_inverse(self)

    def rref(self):
        return rref(self)

    def to_json(self):
        return self._a.tolist()

    @classmethod
    def from_json(cls, data, p=3, ncols=None):
        return cls(data, p, ncols=ncols)

    def __repr__(self):
        return f"Matrix({self._a.tolist()}, p={self.p})"


def as_matrix(m, p=3):
    return m if isinstance(m, Matrix) else Matrix(m, p)


def mat_rank(m):
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return _kernels.rank(m.array, m.p)


def rref(m):
    """Return the reduced row echelon form (zero rows kept at the bottom) and pivots."""
    if m.nrows == 0 or m.ncols == 0:
        return m, ()
    red, piv = _kernels.rref(m.array, m.p)
    full = np.zeros(m.shape, dtype=np.uint8)
    full[:len(piv)] = red
    return Matrix._wrap(full, m.p), piv


def row_basis(m):
    """Nonzero rows of the RREF of ``m``."""
    if m.nrows == 0 or m.ncols == 0:
        return Matrix.zeros(0, m.ncols, m.p)
    red, _ = _kernels.rref(m.array, m.p)
    return Matrix._wrap(red, m.p)


def mat_inverse(m):
    n = m.nrows
    if n != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    aug = np.hstack([m.array, np.eye(n, dtype=np.uint8)])
    red, piv = _kernels.rref(aug, m.p)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularMatrixError(f"matrix has rank {mat_rank(m)} < {n}")
    return Matrix._wrap(red[:, n:], m.p)


def solve_homogeneous(constraints):
    """Basis (rows, in RREF) of {x : constraints @ x^T = 0}."""
    n = constraints.ncols
    p = constraints.p
    if constraints.nrows == 0:
        return Matrix.identity(n, p)
    red, piv = _kernels.rref(constraints.array, p)
    free = [c for c in range(n) if c not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(piv):
            basis[i, pc] = -int(red[r, f])
    return row_basis(Matrix(basis % p, p, ncols=n))


def eigenspace(m, lam):
    """Basis of the row eigenspace {x : x @ m = lam * x}.

    Row vectors are used throughout the library (subspaces map by ``basis @ g``),
    so this is the kernel of ``(m - lam*I)^T``.
    """
    lam = lam.value if isinstance(lam, FieldElement) else int(lam)
    shifted = m - Matrix.identity(m.nrows, m.p) * lam
    return solve_homogeneous(shifted.T)


def all_matrices(n, p=3):
    """Every n x n matrix over GF(p), in lexicographic order of entries."""
    grid = np.indices((p,) * (n * n)).reshape(n * n, -1).T
    return [Matrix._wrap(row.reshape(n, n), p) for row in grid.astype(np.uint8)]


def general_linear(n, p=3):
    """The elements of GL(n, p) in lexicographic order (practical for n <= 3)."""
    return [m for m in all_matrices(n, p) if mat_rank(m) == n]
