"""Mathon's 21-line perp-system of PG(5,3), built from four seed lines.

Stages: F4 -> L (24 lines) -> F5 -> stabiliser <C, D> -> F6 (fixed lines of
5-cycles) -> F15 (one line per solid spanned by two F6 lines) -> M21.
"""
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, data
from .errors import (NotInLError, PipelineInvariantViolated,
                     RecoveryAmbiguousError, UniquenessViolatedError,
                     WitnessNotFoundError)
from .forms import (AlternatingForm, QuadraticForm, QuadricType,
                    classify_quadric, nondegenerate_mask, perp,
                    quadric_point_counts, verify_perp_system)
from .geometries import spreads, synthemes
from .gf import Matrix, general_linear, mat_inverse, mat_rank
from .groups import (MatrixGroup, block_scalar, check_relations,
                     cyclic_subgroups, elements_of_projective_order,
                     fixed_lines_many, invariant_quadratic_forms, line_action,
                     stabilizes_setwise)
from .projective import AmbientSpace, Subspace, canonicalize, meet, span

P = data.P


@dataclass(frozen=True)
class LineSet:
    """Ordered, duplicate-free collection of lines with a stage label."""

    label: str
    lines: tuple

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if len(set(self.lines)) != len(self.lines):
            raise PipelineInvariantViolated(f"{self.label}: duplicate lines")
        if any(l.vdim != 2 for l in self.lines):
            raise PipelineInvariantViolated(f"{self.label}: not all elements are lines")

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __getitem__(self, i):
        return self.lines[i]

    def as_set(self):
        return frozenset(self.lines)

    def bases(self):
        return np.stack([l.basis.array for l in self.lines])

    def to_json(self):
        return [l.basis.to_json() for l in self.lines]

    @classmethod
    def from_json(cls, label, rows):
        return cls(label, [canonicalize(Matrix(r, P)) for r in rows])


def _require(cond, msg):
    if not cond:
        raise PipelineInvariantViolated(msg)


def f4():
    return LineSet("F4", [canonicalize(b) for b in data.F4_BASES])


def m0():
    return AlternatingForm(data.M0_GRAM)


def eight_matrices():
    """Matrices Y of GL(2,3) with Y - I invertible and Y + I of rank 1."""
    I = data.I2
    return [Y for Y in general_linear(2, P)
            if mat_rank(Y - I) == 2 and mat_rank(Y + I) == 1]


def rank_one_partners(mats):
    """For each Y, the indices of Z in ``mats`` with rank(Y + Z) = 1."""
    return [[j for j, Z in enumerate(mats) if mat_rank(Y + Z) == 1] for Y in mats]


def admissible_pairs(mats=None):
    """Pairs (R, S) from the eight-matrix class meeting every rank condition."""
    mats = mats if mats is not None else eight_matrices()
    I = data.I2
    return [(R, S) for R in mats for S in mats
            if mat_rank(R + S) == 1 and mat_rank(R + S + I) == 1]


def irs_line(R, S):
    return canonicalize(Matrix.block([[data.I2, R, S]], P))


def irs_blocks(line):
    """(R, S) of a line whose canonical form is (I R S), else None."""
    a = line.basis.array
    if not np.array_equal(a[:, :2], np.eye(2, dtype=np.uint8)):
        return None
    return Matrix(a[:, 2:4], P), Matrix(a[:, 4:6], P)


def irs_shape_ok(R, S):
    I = data.I2
    return (all(mat_rank(m) == 2 for m in (R, S, R - I, S - I))
            and all(mat_rank(m) == 1 for m in (R + S, R + I, S + I, R + S + I)))


def _solids_of_pairs(lines):
    return [span(a, b) for a, b in itertools.combinations(lines, 2)]


def _batch_ranks(stacks):
    return _kernels.rref_batch(np.ascontiguousarray(stacks, dtype=np.uint8), P)[1]


def quotient_ranks(sub, bases):
    """rank(sub + line) - vdim(sub) for each basis in a (N, r, n) stack.

    Rows are first reduced by the RREF basis of ``sub``, which clears its pivot
    columns; only the small remainder is row-reduced.
    """
    S = sub.basis.array.astype(np.int64)
    piv = [int(np.flatnonzero(row)[0]) for row in S]
    free = [c for c in range(S.shape[1]) if c not in piv]
    b = bases.astype(np.int64)
    reduced = (b - np.einsum("nrk,kc->nrc", b[:, :, piv], S)) % P
    return _batch_ranks(reduced[:, :, free])


def l_condition_mask(bases, form=None, seeds=None):
    """Mask over a (N, 2, 6) stack of lines satisfying the four-line conditions.

    Totally isotropic for M0, disjoint from each solid spanned by two seed
    lines, and meeting l^perp in exactly one point for each seed line l.
    """
    form = form or m0()
    seeds = list(seeds or f4())
    b = bases.astype(np.int64)
    G = form.gram.array.astype(np.int64)
    ok = ~(np.einsum("nrk,kc,nsc->nrs", b, G, b) % P).any(axis=(1, 2))
    for sol in _solids_of_pairs(seeds):
        ok &= quotient_ranks(sol, bases) == 2
    for l in seeds:
        ok &= quotient_ranks(perp(l, form), bases) == 1
    return ok


def compute_L(space=None):
    """The 24 lines of L, computed twice: from the eight-matrix class and by
    filtering every line of PG(5,3). Ordered with the default (I R S) first,
    then lexicographically."""
    space = space or AmbientSpace(5, P)
    by_class = [irs_line(R, S) for R, S in admissible_pairs()]
    class_ok = l_condition_mask(np.stack([l.basis.array for l in by_class]))
    _require(class_ok.all(), "an (I R S) candidate fails the geometric conditions")
    mask = l_condition_mask(space.line_array())
    lines = space.lines()
    by_filter = [lines[i] for i in np.flatnonzero(mask)]
    _require(len(by_filter) == 24, f"|L| = {len(by_filter)}, expected 24")
    _require(set(by_filter) == set(by_class), "the two computations of L disagree")
    for l in by_filter:
        blocks = irs_blocks(l)
        _require(blocks is not None and irs_shape_ok(*blocks), f"{l} is not of shape (I R S)")
    default = irs_line(data.R_DEFAULT, data.S_DEFAULT)
    _require(default in by_filter, "default (I R S) line is not in L")
    ordered = [default] + sorted(l for l in by_filter if l != default)
    return LineSet("L", ordered)


def seed_line(seed=0, L=None):
    if isinstance(seed, tuple):
        line = irs_line(*seed)
        L = L or compute_L()
        if line not in L.as_set():
            raise NotInLError(f"{line} is not in L")
        return line
    L = L or compute_L()
    if not 0 <= seed < len(L):
        raise NotInLError(f"seed index {seed} out of range 0..{len(L) - 1}")
    return L[seed]


def f5(seed=0, L=None):
    """F4 together with one line of L (default: the (I R S) with the listed R, S)."""
    return LineSet("F5", list(f4()) + [seed_line(seed, L)])


def h_group():
    """Element-wise stabiliser of F4: diag(E, E, E) for E in GL(2,3)."""
    return MatrixGroup([block_scalar(E) for E in (Matrix([[2, 0], [0, 1]], P),
                                                  Matrix([[2, 1], [2, 0]], P))])


def transporter(target, L=None):
    """First h = diag(E, E, E) (E in lexicographic order) mapping the default line to target."""
    default = irs_line(data.R_DEFAULT, data.S_DEFAULT)
    for E in general_linear(2, P):
        h = block_scalar(E)
        if line_action(h, default) == target:
            return h
    raise NotInLError(f"no element of H maps the default line to {target}")


def f5_stabilizer(seed=0, L=None):
    """<C, D>, conjugated to the chosen seed; verified to stabilise F5."""
    h = transporter(seed_line(seed, L), L)
    group = MatrixGroup([data.C_GEN, data.D_GEN])
    if h != Matrix.identity(6, P):
        group = group.conjugate(h)
    Cm, Dm = group.generators
    rel = check_relations(Cm, Dm)
    _require(all(rel.values()), f"relations fail: {rel}")
    F5 = f5(seed, L)
    for g in group.generators:
        _require(stabilizes_setwise(g, list(F5)), "generator does not stabilise F5")
    _require(len(group.elements()) == 240, f"|<C,D>| = {len(group.elements())}")
    return group


def five_cycle_fixed_lines(group, space, jobs=1):
    """(projective 5-cycle, its fixed lines) for every order-5 element."""
    cycles = elements_of_projective_order(group, 5)
    return list(zip(cycles, fixed_lines_many(cycles, space, jobs)))


def f6(group, space=None, jobs=1):
    """Lines fixed by some 5-cycle of the stabiliser."""
    space = space or AmbientSpace(5, P)
    table = five_cycle_fixed_lines(group, space, jobs)
    _require(len(table) == 24, f"{len(table)} projective elements of order 5")
    out = []
    for g, fixed in table:
        _require(len(fixed) == 1, f"a 5-cycle fixes {len(fixed)} lines")
        if fixed[0] not in out:
            out.append(fixed[0])
    _require(len(out) == 6, f"|F6| = {len(out)}")
    return LineSet("F6", out)


def lemma_five_conditions(M, R, S):
    """Block-shape conditions of the 5-line form family for Gram matrix M."""
    g = M.gram if isinstance(M, AlternatingForm) else M
    a = g.array
    blk = lambda i, j: Matrix(a[2 * i:2 * i + 2, 2 * j:2 * j + 2], P)
    A, B, C = blk(0, 1), blk(0, 2), blk(1, 2)
    s1 = A + B + C
    s2 = A @ R.T + B @ S.T + R @ C @ S.T
    return {
        "zero diagonal blocks": all(blk(i, i).is_zero() for i in range(3)),
        "A+B+C symmetric": s1 == s1.T,
        "AR^T+BS^T+RCS^T symmetric": s2 == s2.T,
    }


def m15(seed=0, L=None):
    """The explicit invariant symplectic form, transported to the chosen seed."""
    line = seed_line(seed, L)
    h = transporter(line, L)
    hi = mat_inverse(h)
    form = AlternatingForm(hi @ data.M15_GRAM @ hi.T)
    _require(form.nondegenerate, "M15 is degenerate")
    cond = lemma_five_conditions(form, *irs_blocks(line))
    _require(all(cond.values()), f"M15 block conditions fail: {cond}")
    return form


@dataclass
class F15Candidates:
    pair: tuple
    solid: Subspace
    candidates: list


def solve_f15(F6, M, space=None):
    """For each solid spanned by two F6 lines, every line of it that is
    opposite to all of F6 and disjoint from the other 14 solids."""
    F6 = list(F6)
    _require(len(F6) == 6, "need six lines")
    _require(M.nondegenerate, "form must be nondegenerate")
    sub_lines = AmbientSpace(3, P).line_array().astype(np.int64)
    pairs = list(itertools.combinations(range(6), 2))
    solids = {pr: span(F6[pr[0]], F6[pr[1]]) for pr in pairs}
    f6b = np.stack([l.basis.array for l in F6]).astype(np.int64)
    G = M.gram.array.astype(np.int64)
    out = []
    for pr in pairs:
        sol = solids[pr]
        _require(sol.vdim == 4, f"span of pair {pr} is not a solid")
        cand = (sub_lines @ sol.basis.array.astype(np.int64)) % P
        cand, _ = _kernels.rref_batch(cand.astype(np.uint8), P)
        c = cand.astype(np.int64)
        pair_m = np.einsum("nrk,kc,msc->nmrs", c, G, f6b) % P
        det = (pair_m[..., 0, 0] * pair_m[..., 1, 1] - pair_m[..., 0, 1] * pair_m[..., 1, 0]) % P
        ok = (det != 0).all(axis=1)
        for other in pairs:
            if other == pr:
                continue
            ob = np.broadcast_to(solids[other].basis.array, (len(c), 4, 6))
            ok &= _batch_ranks(np.concatenate([ob, cand], axis=1)) == 6
        found = sorted(Subspace(Matrix._wrap(cand[i], P), 5) for i in np.flatnonzero(ok))
        out.append(F15Candidates(pr, sol, found))
    return out


def f15(F6, M, space=None):
    table = solve_f15(F6, M, space)
    for entry in table:
        if len(entry.candidates) != 1:
            raise UniquenessViolatedError(
                f"solid {entry.pair} has {len(entry.candidates)} candidate lines")
    return LineSet("F15", [e.candidates[0] for e in table])


@dataclass
class Construction:
    """Every intermediate object of one run of the construction."""

    seed_index: int
    space: AmbientSpace
    F4: LineSet
    M0: AlternatingForm
    L: LineSet
    F5: LineSet
    transporter: Matrix
    group: MatrixGroup
    F6: LineSet
    M15: AlternatingForm
    f15_table: list
    F15: LineSet
    M21: LineSet
    perp_report: object
    timings_ms: dict = field(default_factory=dict)


def construct(seed_index=0, jobs=1, space=None):
    """Run F4 -> L -> F5 -> <C,D> -> F6 -> F15 -> M21 for one seed line of L."""
    space = space or AmbientSpace(5, P)
    timings = {}

    def timed(name, fn, *args):
        t0 = time.perf_counter()
        out = fn(*args)
        timings[name] = round((time.perf_counter() - t0) * 1000, 3)
        return out

    F4 = timed("F4", f4)
    M0 = m0()
    L = timed("L", compute_L, space)
    F5 = timed("F5", f5, seed_index, L)
    h = transporter(F5[4], L)
    group = timed("stabilizer", f5_stabilizer, seed_index, L)
    F6 = timed("F6", f6, group, space, jobs)
    M15 = timed("M15", m15, seed_index, L)
    table = timed("F15", solve_f15, F6, M15, space)
    for entry in table:
        if len(entry.candidates) != 1:
            raise UniquenessViolatedError(
                f"solid {entry.pair} has {len(entry.candidates)} candidate lines")
    F15 = LineSet("F15", [e.candidates[0] for e in table])
    M21 = LineSet("M21", list(F6) + list(F15))
    report = timed("perp_check", verify_perp_system, M21, M15)
    return Construction(seed_index, space, F4, M0, L, F5, h, group, F6, M15,
                        table, F15, M21, report, timings)


def mathon(seed_index=0, jobs=1, space=None):
    """The 21 lines and their perp-system report for the invariant form."""
    c = construct(seed_index, jobs, space)
    _require(c.perp_report.is_maximal, "M21 is not a maximal perp-system")
    return c.M21, c.perp_report


@dataclass
class ComplementReport:
    covered_points: int
    uncovered_points: int
    doubly_covered: int
    solids: list
    pairwise_meets_are_lines: bool
    solids_per_point: dict
    solids_are_perps: bool | None

    @property
    def ok(self):
        return (self.covered_points == 84 and self.uncovered_points == 280
                and self.doubly_covered == 0 and len(self.solids) == 21
                and self.pairwise_meets_are_lines
                and set(self.solids_per_point) == {3}
                and self.solids_are_perps is not False)

    def to_json(self):
        return {
            "covered_points": self.covered_points,
            "uncovered_points": self.uncovered_points,
            "doubly_covered": self.doubly_covered,
            "solid_count": len(self.solids),
            "solids": [s.basis.to_json() for s in self.solids],
            "pairwise_meets_are_lines": self.pairwise_meets_are_lines,
            "solids_per_uncovered_point": {str(k): v for k, v in sorted(self.solids_per_point.items())},
            "solids_are_perps": self.solids_are_perps,
        }


def complement_analysis(M21, space=None, form=None):
    """Solids of PG(5,3) lying wholly in the points not covered by M21."""
    space = space or AmbientSpace(5, P)
    ids = np.concatenate([space.subspace_point_ids(l) for l in M21])
    covered = np.zeros(space.npoints, dtype=bool)
    covered[ids] = True
    doubly = len(ids) - int(covered.sum())
    solid_pts = space.point_id_array(4)
    inside = (~covered[solid_pts]).all(axis=1)
    idx = np.flatnonzero(inside)
    solids = [space.solids()[i] for i in idx]
    meets_ok = all(meet(a, b).vdim == 2 for a, b in itertools.combinations(solids, 2))
    per_point = np.zeros(space.npoints, dtype=np.int64)
    np.add.at(per_point, solid_pts[idx].ravel(), 1)
    values, counts = np.unique(per_point[~covered], return_counts=True)
    dist = {int(v): int(c) for v, c in zip(values, counts)}
    perps = None
    if form is not None:
        perps = set(solids) == {perp(l, form) for l in M21}
    return ComplementReport(int(covered.sum()), int((~covered).sum()), doubly,
                            solids, meets_ok, dist, perps)


@dataclass
class RecoveryResult:
    lines: LineSet
    spread: tuple
    qualifying_spreads: int
    meets: dict

    def to_json(self):
        return {
            "qualifying_spreads": self.qualifying_spreads,
            "spread": [[list(d) for d in s] for s in self.spread],
            "lines": self.lines.to_json(),
        }


def recover_f5(F6):
    """Recover F5 from F6: for the one spread of synthemes on the six labels whose
    synthemes each give three solids meeting in a line, return those five lines."""
    F6 = list(F6)
    _require(len(F6) == 6, "need six lines")
    solid = {frozenset((i, j)): span(F6[i - 1], F6[j - 1])
             for i, j in itertools.combinations(range(1, 7), 2)}
    syn_meet = {}
    for s in synthemes():
        a, b, c = (solid[frozenset(d)] for d in s)
        syn_meet[s] = meet(meet(a, b), c)
    qualifying = [sp for sp in spreads() if all(syn_meet[s].vdim == 2 for s in sp)]
    if len(qualifying) != 1:
        raise RecoveryAmbiguousError(f"{len(qualifying)} spreads qualify")
    sp = qualifying[0]
    lines = LineSet("F5", [syn_meet[s] for s in sp])
    return RecoveryResult(lines, sp, len(qualifying), {s: syn_meet[s] for s in sp})


@dataclass
class PolarityWitness:
    form: QuadraticForm
    kind: QuadricType
    singular_points: int
    source: str
    report: object

    def to_json(self):
        return {"sym": self.form.sym.to_json(), "type": self.kind.value,
                "singular_points": self.singular_points, "source": self.source,
                "report": self.report.to_json()}


@dataclass
class PolaritySearchResult:
    witnesses: dict
    invariant_candidates: int = 0
    random_candidates: int = 0
    subgroups_scanned: int = 0

    def to_json(self):
        return {
            "witnesses": {k.value: w.to_json() for k, w in sorted(self.witnesses.items())},
            "invariant_candidates": self.invariant_candidates,
            "random_candidates": self.random_candidates,
            "subgroups_scanned": self.subgroups_scanned,
        }


def _normalized_coefficient_grid(dim):
    from .projective import normalized_coefficients
    return normalized_coefficients(dim, P)


def find_epsilon_polarities(M21, group=None, budget=100_000, seed=1, max_dim=9,
                            subgroups="cyclic", chunk=2048):
    """Search for a hyperbolic and an elliptic quadric for which M21 is a perp-system.

    First every member of the invariant quadratic-form spaces of the cyclic
    subgroups of ``group`` (smallest spaces first, up to ``max_dim``) is tried,
    then up to ``budget`` seeded random symmetric matrices.
    """
    group = group or MatrixGroup([data.C_GEN, data.D_GEN])
    lines = list(M21)
    bases = np.stack([l.basis.array for l in lines])
    hyp_n, ell_n = quadric_point_counts(6, P)
    want = {hyp_n: QuadricType.HYPERBOLIC, ell_n: QuadricType.ELLIPTIC}
    space = AmbientSpace(5, P)
    pts = space.point_array.astype(np.int64)
    result = PolaritySearchResult({})

    def consider(grams, source_of):
        grams = np.ascontiguousarray(grams, dtype=np.uint8)
        keep = nondegenerate_mask(grams, P)
        idx = np.flatnonzero(keep)
        if not len(idx):
            return
        ok = _kernels.pairs_opposite(bases, grams[idx], P)
        for i in idx[ok]:
            vals = np.einsum("ni,ij,nj->n", pts, grams[i].astype(np.int64), pts) % P
            kind = want.get(int((vals == 0).sum()))
            if kind is not None and kind not in result.witnesses:
                qf = QuadraticForm(Matrix(grams[i], P))
                kind2, npts = classify_quadric(qf, space)
                report = verify_perp_system(lines, qf)
                if kind2 == kind and report.is_partial_perp_system:
                    result.witnesses[kind] = PolarityWitness(qf, kind, npts, source_of(i), report)

    if subgroups == "cyclic":
        candidates = [(g, [g]) for g, _ in cyclic_subgroups(group.elements())]
    elif subgroups == "full":
        candidates = [(None, list(group.generators))]
    else:
        raise ValueError(f"unknown subgroup strategy {subgroups!r}")
    spaces = []
    for order_idx, (g, gens) in enumerate(candidates):
        basis = invariant_quadratic_forms(gens)
        if 0 < len(basis) <= max_dim:
            spaces.append((len(basis), order_idx, g, basis))
    spaces.sort(key=lambda t: (t[0], t[1]))
    for dim, order_idx, g, basis in spaces:
        if len(result.witnesses) == 2:
            break
        result.subgroups_scanned += 1
        coeffs = _normalized_coefficient_grid(dim)
        arr = np.stack([b.array for b in basis]).astype(np.int64)
        grams = np.tensordot(coeffs, arr, axes=1) % P
        result.invariant_candidates += len(grams)
        label = "cyclic subgroup #%d" % order_idx if g is not None else "whole group"
        consider(grams, lambda i, label=label, coeffs=coeffs: f"invariant form of {label}, "
                 f"coefficients {coeffs[i].tolist()}")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(6)
    done = 0
    while len(result.witnesses) < 2 and done < budget:
        k = min(chunk, budget - done)
        upper = rng.integers(0, P, size=(k, len(iu[0])))
        grams = np.zeros((k, 6, 6), dtype=np.int64)
        grams[:, iu[0], iu[1]] = upper
        grams[:, iu[1], iu[0]] = upper
        start = done
        consider(grams, lambda i, start=start: f"random sample #{start + i} (seed {seed})")
        done += k
    result.random_candidates = done
    missing = [t.value for t in (QuadricType.HYPERBOLIC, QuadricType.ELLIPTIC)
               if t not in result.witnesses]
    if missing:
        err = WitnessNotFoundError(f"no {' or '.join(missing)} witness after "
                                   f"{result.invariant_candidates} invariant and {done} random candidates")
        err.result = result
        raise err
    return result
