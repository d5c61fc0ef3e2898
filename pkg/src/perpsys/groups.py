"""Matrix groups over GF(p) acting on the right of row-vector subspaces."""
import itertools
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels
from .errors import CapExceededError
from .forms import alternating_basis, symmetric_basis
from .gf import Matrix, mat_inverse, solve_homogeneous
from .projective import canonicalize

DEFAULT_CAP = 100_000


class MatrixGroup:
    """A group given by invertible generators; the closure is materialised on demand."""

    def __init__(self, generators, projective=False):
        generators = tuple(generators)
        if not generators:
            raise ValueError("need at least one generator")
        n, p = generators[0].nrows, generators[0].p
        for g in generators:
            if g.shape != (n, n) or g.p != p:
                raise ValueError("generators must share size and modulus")
            mat_inverse(g)  # raises SingularMatrixError
        self.generators = generators
        self.projective = projective
        self.n = n
        self.p = p
        self._elements = None

    def elements(self, cap=DEFAULT_CAP):
        if self._elements is None:
            self._elements = closure(self, cap)
        return self._elements

    @property
    def is_materialized(self):
        return self._elements is not None

    def order(self):
        return len(self.elements())

    def projective_elements(self):
        return projective_quotient(self.elements())

    def conjugate(self, h):
        """The group h^-1 G h."""
        hi = mat_inverse(h)
        return MatrixGroup([hi @ g @ h for g in self.generators], self.projective)

    def to_json(self):
        return {"generators": [g.to_json() for g in self.generators],
                "order": len(self._elements) if self._elements is not None else None}

    def __repr__(self):
        return f"MatrixGroup({len(self.generators)} generators, n={self.n}, p={self.p})"


def closure(group, cap=DEFAULT_CAP):
    """All elements, by breadth-first right multiplication; deterministic order."""
    gens = group.generators if isinstance(group, MatrixGroup) else tuple(group)
    n, p = gens[0].nrows, gens[0].p
    ident = Matrix.identity(n, p)
    seen = {ident}
    out = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y not in seen:
                    if len(out) >= cap:
                        raise CapExceededError(f"group order exceeds cap {cap}")
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
        frontier = nxt
    return out


def projective_element(m):
    """Scale ``m`` so that its first nonzero entry is 1."""
    flat = m.array.ravel()
    lead = int(flat[np.flatnonzero(flat)[0]])
    return m if lead == 1 else m * pow(lead, m.p - 2, m.p)


def projective_quotient(elements):
    """Distinct normalised elements, in order of first appearance."""
    seen = {}
    for m in elements:
        pm = projective_element(m)
        seen.setdefault(pm, None)
    return list(seen)


def is_scalar(m):
    a = m.array
    return not (a - np.diag(np.diag(a))).any() and len(set(np.diag(a).tolist())) == 1


def projective_order(m, limit=10_000):
    x = m
    for k in range(1, limit + 1):
        if is_scalar(x):
            return k
        x = x @ m
    raise ValueError("element order exceeds limit")


def commutator(a, b):
    """[a, b] = a^-1 b^-1 a b."""
    return mat_inverse(a) @ mat_inverse(b) @ a @ b


def check_relations(Cm, Dm):
    """Evaluate the defining relations of SL(2,5):2 as exact matrix identities."""
    I = Matrix.identity(Cm.nrows, Cm.p)
    return {
        "C^2=1": Cm ** 2 == I,
        "D^8=1": Dm ** 8 == I,
        "[C,D^4]=1": commutator(Cm, Dm ** 4) == I,
        "(CD)^5=1": (Cm @ Dm) ** 5 == I,
        "[C,D]^3=1": commutator(Cm, Dm) ** 3 == I,
    }


def line_action(g, line):
    """Image of a subspace under right multiplication by g."""
    return canonicalize(line.basis @ g, line.d)


def orbit(group, line):
    """Orbit of a subspace under the generators, in BFS order."""
    gens = group.generators if isinstance(group, MatrixGroup) else tuple(group)
    seen = {line}
    out = [line]
    frontier = [line]
    while frontier:
        nxt = []
        for l in frontier:
            for g in gens:
                m = line_action(g, l)
                if m not in seen:
                    seen.add(m)
                    out.append(m)
                    nxt.append(m)
        frontier = nxt
    return out


def permutation_on(g, subspaces):
    """Permutation of a g-invariant list of subspaces as a tuple of indices, or None."""
    index = {s: i for i, s in enumerate(subspaces)}
    out = []
    for s in subspaces:
        j = index.get(line_action(g, s))
        if j is None:
            return None
        out.append(j)
    return tuple(out)


def stabilizes_setwise(g, subspaces):
    return permutation_on(g, subspaces) is not None


def elements_of_projective_order(group, n):
    """Projective elements of order n, sorted by their normalised entries."""
    found = [m for m in group.projective_elements() if projective_order(m) == n]
    return sorted(found, key=Matrix.key)


def _image_bases(bases, g):
    return (bases.astype(np.int64) @ g.array.astype(np.int64)) % g.p


def fixed_line_mask(g, space):
    """Boolean mask over ``space.line_array()`` of the lines fixed by g."""
    bases = space.line_array()
    images, _ = _kernels.rref_batch(_image_bases(bases, g).astype(np.uint8), g.p)
    return (images == bases).all(axis=(1, 2))


def fixed_lines(g, space):
    """All lines l with l @ g = l, by scanning every canonical line."""
    lines = space.lines()
    return [lines[i] for i in np.flatnonzero(fixed_line_mask(g, space))]


def fixed_lines_many(elements, space, jobs=1):
    """fixed_lines for several elements; ``jobs`` only affects scheduling."""
    if jobs <= 1:
        return [fixed_lines(g, space) for g in elements]
    space.lines()  # fill caches before threads share them
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda g: fixed_lines(g, space), elements))


def _solve_forms(constraint_cols, basis):
    """Combine kernel vectors of the column-stacked linear map into matrices."""
    p = basis[0].p
    system = Matrix(np.array(constraint_cols, dtype=np.int64).T % p, p, ncols=len(basis))
    kernel = solve_homogeneous(system)
    arr = np.stack([b.array for b in basis]).astype(np.int64)
    return [Matrix(np.tensordot(np.array(v, dtype=np.int64), arr, axes=1) % p, p)
            for v in kernel.tolist()]


def forms_vanishing_on_lines(lines, n=6, p=3):
    """Basis of alternating M with l @ M @ l^T = 0 for every subspace l given."""
    basis = alternating_basis(n, p)
    lines = list(lines)
    if not lines:
        return basis
    cols = []
    for b in basis:
        vals = []
        for l in lines:
            rows = l.basis.array.astype(np.int64)
            for u, v in itertools.combinations(range(len(rows)), 2):
                vals.append(int(rows[u] @ b.array.astype(np.int64) @ rows[v]) % p)
        cols.append(vals)
    return _solve_forms(cols, basis)


def _multipliers(gens, scalar):
    if isinstance(scalar, int):
        return [scalar] * len(gens)
    scalar = list(scalar)
    if len(scalar) != len(gens):
        raise ValueError("one multiplier per generator")
    return scalar


def _invariant(gens, basis, scalar):
    cols = []
    mults = _multipliers(gens, scalar)
    for b in basis:
        vals = []
        for g, s in zip(gens, mults):
            vals.extend(((g @ b @ g.T) - b * s).array.ravel().tolist())
        cols.append(vals)
    return _solve_forms(cols, basis)


def _gens(group):
    return group.generators if isinstance(group, MatrixGroup) else tuple(group)


def invariant_alternating_forms(group, scalar=1):
    """Basis of alternating M with g @ M @ g^T = s_g * M for every generator g.

    ``scalar`` is one multiplier for all generators or a tuple of them.
    """
    gens = _gens(group)
    return _invariant(gens, alternating_basis(gens[0].nrows, gens[0].p), scalar)


def invariant_quadratic_forms(group, scalar=1):
    """Basis of symmetric B with g @ B @ g^T = s_g * B for every generator g."""
    gens = _gens(group)
    return _invariant(gens, symmetric_basis(gens[0].nrows, gens[0].p), scalar)


def polarity_invariant_forms(group, kind="alternating"):
    """Forms whose polarity every generator preserves, grouped by multipliers.

    Returns {multipliers: basis} over all assignments of nonzero scalars to
    the generators, keeping only the nonzero solution spaces.
    """
    gens = _gens(group)
    solve = invariant_alternating_forms if kind == "alternating" else invariant_quadratic_forms
    out = {}
    for mults in itertools.product(range(1, gens[0].p), repeat=len(gens)):
        basis = solve(gens, mults)
        if basis:
            out[mults] = basis
    return out


def cyclic_subgroups(elements):
    """Distinct cyclic subgroups <g>, each keyed by its first generator in ``elements``."""
    seen = set()
    out = []
    for g in elements:
        members = frozenset(closure([g]))
        if members not in seen:
            seen.add(members)
            out.append((g, len(members)))
    return out


def in_span(m, basis):
    """Whether matrix m lies in the linear span of ``basis``."""
    if not basis:
        return m.is_zero()
    rows = np.stack([b.array.ravel() for b in basis])
    base_rank = _kernels.rank(rows, m.p)
    return _kernels.rank(np.vstack([rows, m.array.ravel()[None]]), m.p) == base_rank


def in_h_form(m):
    """Whether m is block-diagonal diag(E, E, E) with 2 x 2 blocks."""
    a = m.array
    E = a[:2, :2]
    target = np.kron(np.eye(3, dtype=np.uint8), E)
    return bool(np.array_equal(a, target))


def block_scalar(E, copies=3):
    return Matrix(np.kron(np.eye(copies, dtype=np.int64), E.array.astype(np.int64)), E.p)
