"""Symplectic and orthogonal polarities, the opposite relation, perp-system checks."""
import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DegenerateFormError, NonIntegralError
from .gf import Matrix, mat_rank, solve_homogeneous
from .projective import AmbientSpace, Subspace, are_disjoint, canonicalize


class AlternatingForm:
    """Symplectic form x @ gram @ y^T with gram^T = -gram and zero diagonal."""

    def __init__(self, gram):
        if not isinstance(gram, Matrix):
            gram = Matrix(gram)
        if gram.nrows != gram.ncols:
            raise ValueError("Gram matrix must be square")
        if gram.T != -gram or any(gram[i, i] for i in range(gram.nrows)):
            raise ValueError("Gram matrix is not alternating")
        self.gram = gram
        self.nondegenerate = mat_rank(gram) == gram.nrows

    @property
    def bilinear(self):
        return self.gram

    def __eq__(self, other):
        return isinstance(other, AlternatingForm) and self.gram == other.gram

    def __hash__(self):
        return hash(("alt", self.gram))

    def __repr__(self):
        return f"AlternatingForm({self.gram.tolist()})"


class QuadraticForm:
    """Q(x) = x @ sym @ x^T; the polar bilinear form is 2 * sym (p odd)."""

    def __init__(self, sym):
        if not isinstance(sym, Matrix):
            sym = Matrix(sym)
        if sym.T != sym:
            raise ValueError("quadratic form needs a symmetric matrix")
        if sym.p == 2:
            raise ValueError("symmetric-matrix quadratic forms need odd characteristic")
        self.sym = sym
        self.nondegenerate = mat_rank(sym) == sym.nrows

    @property
    def bilinear(self):
        return self.sym * 2

    def value(self, x):
        x = np.asarray(x, dtype=np.int64)
        return int(x @ self.sym.array.astype(np.int64) @ x) % self.sym.p

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.sym == other.sym

    def __hash__(self):
        return hash(("quad", self.sym))

    def __repr__(self):
        return f"QuadraticForm({self.sym.tolist()})"


class QuadricType(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    DEGENERATE = "degenerate"


@dataclass
class PerpSystemReport:
    line_count: int
    bound: int | None
    all_nonsingular: bool
    pairwise_opposite: bool
    pairwise_disjoint: bool
    is_partial_perp_system: bool
    is_maximal: bool
    failing_pairs: list = field(default_factory=list)

    def to_json(self):
        return {
            "line_count": self.line_count,
            "bound": self.bound,
            "all_nonsingular": self.all_nonsingular,
            "pairwise_opposite": self.pairwise_opposite,
            "pairwise_disjoint": self.pairwise_disjoint,
            "is_partial_perp_system": self.is_partial_perp_system,
            "is_maximal": self.is_maximal,
            "failing_pairs": [list(f) for f in self.failing_pairs],
        }


def _require_nondegenerate(f):
    if not f.nondegenerate:
        raise DegenerateFormError("form is degenerate")


def perp(s, f):
    """Polar subspace of ``s``: {x : basis_s @ B @ x^T = 0}."""
    _require_nondegenerate(f)
    if s.is_empty():
        return canonicalize(Matrix.identity(s.d + 1, s.q), s.d)
    return Subspace(solve_homogeneous(s.basis @ f.bilinear), s.d)


def pairing(a, b, f):
    """The matrix basis_a @ B @ basis_b^T."""
    return a.basis @ f.bilinear @ b.basis.T


def is_totally_isotropic(s, f):
    return pairing(s, s, f).is_zero()


def are_opposite(a, b, f):
    """Lines are opposite when their pairing matrix is invertible.

    Equivalently perp(a) meets b trivially. With a == b this is non-singularity.
    """
    _require_nondegenerate(f)
    if a.vdim != b.vdim:
        return False
    return mat_rank(pairing(a, b, f)) == a.vdim


def perp_bound(d, r, q):
    """Largest possible size of a perp-system of r-spaces in PG(d, q)."""
    if (d - 2 * r - 1) % 2 or (d + 1) % 2 or d - 2 * r - 1 < 0:
        raise NonIntegralError(f"non-integral exponents for (d, r) = ({d}, {r})")
    e = (d - 2 * r - 1) // 2
    num = q ** e * (q ** ((d + 1) // 2) + 1)
    den = q ** e + 1
    if num % den:
        raise NonIntegralError(f"{num}/{den} is not an integer")
    return num // den


def pairing_dets(lines, f):
    """(L, L) array of determinants of the 2 x 2 pairing matrices of lines."""
    p = f.bilinear.p
    B = np.stack([l.basis.array for l in lines]).astype(np.int64)
    G = f.bilinear.array.astype(np.int64)
    P = np.einsum("irk,kc,jsc->ijrs", B, G, B) % p
    return (P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]) % p


def verify_perp_system(lines, f):
    """Check every perp-system predicate; failures are collected, not raised."""
    lines = list(lines)
    _require_nondegenerate(f)
    n = len(lines)
    failing = []
    if any(l.vdim != 2 for l in lines):
        raise ValueError("perp-system verification expects lines")
    dets = pairing_dets(lines, f) if n else np.zeros((0, 0))
    nonsingular = opposite = disjoint = True
    for i in range(n):
        if not dets[i, i]:
            nonsingular = False
            failing.append((i, i, "singular"))
    for i, j in itertools.combinations(range(n), 2):
        if not dets[i, j]:
            opposite = False
            failing.append((i, j, "not opposite"))
        if not are_disjoint(lines[i], lines[j]):
            disjoint = False
            failing.append((i, j, "not disjoint"))
    d = lines[0].d if lines else f.bilinear.nrows - 1
    try:
        bound = perp_bound(d, 1, f.bilinear.p)
    except NonIntegralError:
        bound = None
    partial = nonsingular and opposite
    return PerpSystemReport(
        line_count=n, bound=bound, all_nonsingular=nonsingular,
        pairwise_opposite=opposite and nonsingular, pairwise_disjoint=disjoint,
        is_partial_perp_system=partial,
        is_maximal=partial and disjoint and bound is not None and n == bound,
        failing_pairs=failing,
    )


def quadric_point_counts(n, q):
    """Singular-point counts (hyperbolic, elliptic) of a nondegenerate quadric in n = 2m vars."""
    if n % 2:
        raise ValueError("only an even number of variables has two quadric types")
    m = n // 2
    hyp = (q ** m - 1) * (q ** (m - 1) + 1) // (q - 1)
    ell = (q ** m + 1) * (q ** (m - 1) - 1) // (q - 1)
    return hyp, ell


def singular_point_count(qf, space=None):
    sym = qf.sym
    space = space or AmbientSpace(sym.nrows - 1, sym.p)
    pts = space.point_array.astype(np.int64)
    vals = np.einsum("ni,ij,nj->n", pts, sym.array.astype(np.int64), pts) % sym.p
    return int((vals == 0).sum())


def classify_quadric(qf, space=None):
    """(QuadricType, number of singular points), decided by counting points."""
    count = singular_point_count(qf, space)
    if not qf.nondegenerate:
        return QuadricType.DEGENERATE, count
    hyp, ell = quadric_point_counts(qf.sym.nrows, qf.sym.p)
    if count == hyp:
        return QuadricType.HYPERBOLIC, count
    if count == ell:
        return QuadricType.ELLIPTIC, count
    raise AssertionError(f"nondegenerate quadric with {count} points")


@dataclass
class Lemma1Result:
    gram: Matrix
    violations: list
    form: AlternatingForm | None
    report: PerpSystemReport | None

    @property
    def accepted(self):
        return not self.violations


def lemma1_gram(A, B, C, signs):
    """Assemble the block Gram with diagonal blocks signs[i] * X."""
    from .data import X
    e1, e2, e3 = (X * s for s in signs)
    return Matrix.block([[e1, A, B], [-A.T, e2, C], [-B.T, -C.T, e3]], X.p), (e1, e2, e3)


def lemma1_gram_family(A, B, C, signs=(1, 1, 1)):
    """Check whether the block Gram built from (A, B, C, signs) makes F4 a partial perp-system.

    The conditions tested are: A, B, C invertible; the sum of all blocks nonzero;
    and the row-block sums pairing l1, l2, l3 with l4 invertible.
    """
    from .data import F4_BASES
    A, B, C = (m if isinstance(m, Matrix) else Matrix(m) for m in (A, B, C))
    if any(s not in (1, -1, 2) for s in signs):
        raise ValueError("signs must be +1 or -1")
    gram, (e1, e2, e3) = lemma1_gram(A, B, C, signs)
    violations = []
    for name, m in (("A", A), ("B", B), ("C", C)):
        if mat_rank(m) < 2:
            violations.append(f"{name} not invertible")
    total = e1 + e2 + e3 + A + B + C - A.T - B.T - C.T
    if total.is_zero():
        violations.append("block sum is zero")
    for name, m in (("e1*X+A+B", e1 + A + B), ("e2*X-A^T+C", e2 - A.T + C),
                    ("e3*X-B^T-C^T", e3 - B.T - C.T)):
        if mat_rank(m) < 2:
            violations.append(f"{name} not invertible")
    form = AlternatingForm(gram)
    report = None
    if form.nondegenerate:
        report = verify_perp_system([canonicalize(b) for b in F4_BASES], form)
    elif not violations:
        violations.append("Gram matrix degenerate")
    return Lemma1Result(gram=gram, violations=violations,
                        form=None if violations else form, report=report)


def alternating_basis(n, p=3):
    """Basis E_ij - E_ji (i < j) of the alternating n x n matrices."""
    out = []
    for i, j in itertools.combinations(range(n), 2):
        a = np.zeros((n, n), dtype=np.int64)
        a[i, j], a[j, i] = 1, -1
        out.append(Matrix(a, p))
    return out


def symmetric_basis(n, p=3):
    """Basis E_ij + E_ji (i <= j, diagonal E_ii) of the symmetric n x n matrices."""
    out = []
    for i in range(n):
        for j in range(i, n):
            a = np.zeros((n, n), dtype=np.int64)
            a[i, j] = a[j, i] = 1
            out.append(Matrix(a, p))
    return out


def combine(coeffs, basis):
    p = basis[0].p
    arr = np.tensordot(np.asarray(coeffs, dtype=np.int64),
                       np.stack([b.array for b in basis]).astype(np.int64), axes=1)
    return Matrix(arr % p, p)


def nondegenerate_mask(grams, p):
    """Boolean mask of full-rank matrices in a (G, n, n) stack."""
    _, ranks = _kernels.rref_batch(grams, p)
    return ranks == grams.shape[1]
