"""Subspaces of PG(d, q): canonical form, span, meet, enumeration."""
import itertools
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import AmbientMismatchError, TooLargeError
from .gf import Matrix, row_basis, solve_homogeneous

ENUMERATION_LIMIT = 10 ** 7


def gaussian_binomial(n, k, q):
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q)."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


class Subspace:
    """A projective subspace, stored by its canonical RREF basis.

    Two subspaces are equal exactly when their canonical bases are identical.
    ``vdim`` is the vector dimension, ``pdim = vdim - 1`` the projective one.
    """

    __slots__ = ("basis", "d")

    def __init__(self, basis, d):
        self.basis = basis
        self.d = d

    @property
    def q(self):
        return self.basis.p

    @property
    def vdim(self):
        return self.basis.nrows

    @property
    def pdim(self):
        return self.basis.nrows - 1

    def is_empty(self):
        return self.basis.nrows == 0

    def rows(self):
        return tuple(tuple(r) for r in self.basis.tolist())

    def contains(self, other):
        _same_ambient(self, other)
        if other.vdim > self.vdim:
            return False
        stacked = np.vstack([self.basis.array, other.basis.array])
        return _rank(stacked, self.q) == self.vdim

    def __contains__(self, other):
        return self.contains(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.d == other.d and self.basis == other.basis

    def __hash__(self):
        return hash((self.d, self.basis))

    def sort_key(self):
        return (self.vdim, self.basis.array.tobytes())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_json(self):
        return {"basis": self.basis.to_json(), "d": self.d, "q": self.q}

    @classmethod
    def from_json(cls, data):
        return canonicalize(Matrix(data["basis"], data["q"], ncols=data["d"] + 1), d=data["d"])

    def __repr__(self):
        body = " / ".join(" ".join(str(x) for x in r) for r in self.basis.tolist())
        return f"Subspace({body or 'empty'})"


def _rank(arr, p):
    if arr.shape[0] == 0:
        return 0
    return _kernels.rank(arr, p)


def _same_ambient(a, b):
    if a.d != b.d or a.q != b.q:
        raise AmbientMismatchError(f"PG({a.d},{a.q}) vs PG({b.d},{b.q})")


def canonicalize(rows, d=None, q=None):
    """Canonical subspace spanned by ``rows`` (a Matrix or nested list)."""
    if not isinstance(rows, Matrix):
        rows = Matrix(rows, q or 3)
    if d is None:
        d = rows.ncols - 1
    return Subspace(row_basis(rows), d)


def span(a, b):
    _same_ambient(a, b)
    stacked = np.vstack([a.basis.array, b.basis.array])
    return canonicalize(Matrix._wrap(stacked, a.q), a.d)


def meet(a, b):
    """Intersection, computed as the annihilator of the sum of annihilators."""
    _same_ambient(a, b)
    if a.is_empty() or b.is_empty():
        return empty_subspace(a.d, a.q)
    ann = np.vstack([solve_homogeneous(a.basis).array, solve_homogeneous(b.basis).array])
    return Subspace(solve_homogeneous(Matrix._wrap(ann, a.q)), a.d)


def empty_subspace(d, q=3):
    return Subspace(Matrix.zeros(0, d + 1, q), d)


def whole_space(d, q=3):
    return Subspace(Matrix.identity(d + 1, q), d)


def vdim_span(a, b):
    return _rank(np.vstack([a.basis.array, b.basis.array]), a.q)


def are_disjoint(a, b):
    """True when the subspaces meet trivially."""
    return vdim_span(a, b) == a.vdim + b.vdim


def normalized_coefficients(k, q):
    """All nonzero vectors of GF(q)^k with first nonzero entry 1, lexicographic."""
    out = [v for v in itertools.product(range(q), repeat=k)
           if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
    return np.array(out, dtype=np.int64).reshape(len(out), k)


def points_of(s):
    """All points (1-dim canonical subspaces) of ``s``, lexicographic."""
    if s.is_empty():
        return []
    vecs = normalized_coefficients(s.vdim, s.q) @ s.basis.array.astype(np.int64) % s.q
    pts = [Subspace(Matrix._wrap(_normalize_rows(v[None, :], s.q), s.q), s.d) for v in vecs]
    return sorted(pts)


def _normalize_rows(vecs, q):
    """Scale each nonzero row so its first nonzero entry is 1."""
    vecs = np.asarray(vecs, dtype=np.int64) % q
    first = np.argmax(vecs != 0, axis=1)
    lead = vecs[np.arange(len(vecs)), first]
    inv = np.array([0] + [pow(x, q - 2, q) for x in range(1, q)], dtype=np.int64)
    return (vecs * inv[lead][:, None]) % q


def _pivot_pattern_bases(k, n, q):
    """All canonical k x n RREF matrices of rank k, lexicographically sorted."""
    chunks = []
    for piv in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        base = np.zeros((k, n), dtype=np.uint8)
        for r, c in enumerate(piv):
            base[r, c] = 1
        if free:
            vals = np.indices((q,) * len(free)).reshape(len(free), -1).T.astype(np.uint8)
            block = np.repeat(base[None], len(vals), axis=0)
            rr, cc = zip(*free)
            block[:, list(rr), list(cc)] = vals
        else:
            block = base[None]
        chunks.append(block)
    allb = np.concatenate(chunks) if chunks else np.zeros((0, k, n), np.uint8)
    order = np.lexsort(allb.reshape(len(allb), -1).T[::-1])
    return np.ascontiguousarray(allb[order])


class AmbientSpace:
    """PG(d, q) with cached point and subspace tables."""

    def __init__(self, d=5, q=3):
        self.d = d
        self.q = q
        self.n = d + 1
        self._subspace_arrays = {}
        self._subspace_lists = {}

    def __repr__(self):
        return f"AmbientSpace(PG({self.d},{self.q}))"

    @property
    def npoints(self):
        return (self.q ** self.n - 1) // (self.q - 1)

    def count(self, vdim):
        return gaussian_binomial(self.n, vdim, self.q)

    @cached_property
    def vector_weights(self):
        """Base-q place values: vector v has index v @ weights."""
        return self.q ** np.arange(self.n - 1, -1, -1, dtype=np.int64)

    @cached_property
    def point_array(self):
        """(npoints, n) normalised point representatives, lexicographic."""
        return np.ascontiguousarray(_pivot_pattern_bases(1, self.n, self.q)[:, 0, :])

    @cached_property
    def point_index_table(self):
        """Maps the base-q index of any vector to its point id (-1 for zero)."""
        table = -np.ones(self.q ** self.n, dtype=np.int64)
        pts = self.point_array.astype(np.int64)
        for s in range(1, self.q):
            table[(pts * s % self.q) @ self.vector_weights] = np.arange(len(pts))
        return table

    def point_ids(self, vecs):
        vecs = np.asarray(vecs, dtype=np.int64) % self.q
        return self.point_index_table[vecs @ self.vector_weights]

    def subspace_array(self, vdim):
        """(N, vdim, n) canonical bases of all subspaces of that vector dimension."""
        if vdim not in self._subspace_arrays:
            if self.count(vdim) > ENUMERATION_LIMIT:
                raise TooLargeError(f"{self.count(vdim)} subspaces of vdim {vdim}")
            self._subspace_arrays[vdim] = _pivot_pattern_bases(vdim, self.n, self.q)
        return self._subspace_arrays[vdim]

    def subspaces(self, vdim):
        if vdim not in self._subspace_lists:
            self._subspace_lists[vdim] = [Subspace(Matrix._wrap(b, self.q), self.d)
                                          for b in self.subspace_array(vdim)]
        return self._subspace_lists[vdim]

    def line_array(self):
        return self.subspace_array(2)

    def lines(self):
        return self.subspaces(2)

    def solids(self):
        return self.subspaces(4)

    def point_id_array(self, vdim):
        """(N, #points per subspace) point ids of every subspace of the given vdim."""
        bases = self.subspace_array(vdim).astype(np.int64)
        coeffs = normalized_coefficients(vdim, self.q)
        vecs = np.einsum("ck,nkj->ncj", coeffs, bases) % self.q
        return self.point_index_table[vecs @ self.vector_weights]

    def subspace_point_ids(self, s):
        coeffs = normalized_coefficients(s.vdim, self.q)
        return np.sort(self.point_ids(coeffs @ s.basis.array.astype(np.int64)))


def enumerate_lines(space):
    """All lines of ``space`` in lexicographic canonical order."""
    return list(space.lines())
