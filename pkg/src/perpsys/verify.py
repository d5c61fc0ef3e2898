"""Stage-by-stage verification checklists and the full pipeline report."""
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import data, geometries as geo, pipeline as pl
from .errors import PerpsysError
from .forms import (is_totally_isotropic, lemma1_gram_family, perp, perp_bound,
                    verify_perp_system)
from .gf import Matrix, general_linear, mat_inverse, mat_rank
from .groups import (check_relations, forms_vanishing_on_lines, in_span,
                     invariant_alternating_forms, invariant_quadratic_forms,
                     line_action, orbit, permutation_on,
                     polarity_invariant_forms, stabilizes_setwise)
from .projective import AmbientSpace, are_disjoint, canonicalize, span

SCHEMA_VERSION = 1

ASSUMPTIONS = (
    "the projective image of <C,D> (order 120) is the full stabiliser of F5 in PGL(6,3); "
    "only containment is verified",
    "S5 is maximal in PGSp(6,3); not verified",
    "the 21-solid complement configuration is unique up to projectivity; not verified",
)

NOTES = (
    "lines are enumerated in PG(5,3), which has 11011 lines",
)


@dataclass
class Check:
    name: str
    passed: bool
    value: object = None

    def to_json(self):
        return {"pass": bool(self.passed), "value": self.value}


@dataclass
class Section:
    key: str
    title: str
    checks: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    def add(self, name, passed, value=None):
        self.checks.append(Check(name, bool(passed), value))

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {c.name: c.to_json() for c in self.checks}


def _guard(section, name, fn):
    """Run fn; a library error becomes a failed check instead of a crash."""
    try:
        return fn()
    except PerpsysError as e:
        section.add(name, False, f"{type(e).__name__}: {e}")
        return None


class Context:
    """Lazily computed shared objects for one seed."""

    def __init__(self, seed_index=0, jobs=1, lemma1_samples=500, sample_seed=2024):
        self.seed_index = seed_index
        self.jobs = jobs
        self.lemma1_samples = lemma1_samples
        self.sample_seed = sample_seed
        self.space = AmbientSpace(5, data.P)
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def L(self):
        return self.get("L", lambda: pl.compute_L(self.space))

    @property
    def F4(self):
        return pl.f4()

    @property
    def F5(self):
        return self.get("F5", lambda: pl.f5(self.seed_index, self.L))

    @property
    def h(self):
        return self.get("h", lambda: pl.transporter(self.F5[4], self.L))

    @property
    def group(self):
        return self.get("group", lambda: pl.f5_stabilizer(self.seed_index, self.L))

    @property
    def five_cycles(self):
        return self.get("cycles", lambda: pl.five_cycle_fixed_lines(self.group, self.space, self.jobs))

    @property
    def F6(self):
        return self.get("F6", lambda: pl.f6(self.group, self.space, self.jobs))

    @property
    def M15(self):
        return self.get("M15", lambda: pl.m15(self.seed_index, self.L))

    @property
    def f15_table(self):
        return self.get("f15", lambda: pl.solve_f15(self.F6, self.M15, self.space))

    @property
    def F15(self):
        return self.get("F15", lambda: pl.f15(self.F6, self.M15, self.space))

    @property
    def M21(self):
        return self.get("M21", lambda: pl.LineSet("M21", list(self.F6) + list(self.F15)))

    def transported(self, rows):
        """Canonical image of printed lines under the seed's transporter."""
        return {line_action(self.h, canonicalize(Matrix(r, data.P))) for r in rows}


def section_seed_lines(ctx):
    s = Section("seed_lines", "Four seed lines and the Gram family on them")
    F4, M0 = ctx.F4, pl.m0()
    s.add("|F4| = 4", len(F4) == 4, len(F4))
    s.add("F4 pairwise disjoint", all(are_disjoint(a, b) for a, b in itertools.combinations(F4, 2)))
    s.add("spans of pairs are solids",
          all(span(a, b).vdim == 4 for a, b in itertools.combinations(F4, 2)))
    s.add("M0 nondegenerate", M0.nondegenerate, mat_rank(M0.gram))
    s.add("F4 totally isotropic for M0", all(is_totally_isotropic(l, M0) for l in F4))
    I, O = data.I2, data.O2
    want1 = canonicalize(Matrix.block([[I, O, O], [O, I, -I]], data.P))
    want4 = canonicalize(Matrix.block([[I, O, -I], [O, I, -I]], data.P))
    s.add("perp(l1, M0) = (I O O / O I -I)", perp(F4[0], M0) == want1)
    s.add("perp(l4, M0) = (I O -I / O I -I)", perp(F4[3], M0) == want4)
    rng = np.random.default_rng(ctx.sample_seed)
    agree = accepted = 0
    for _ in range(ctx.lemma1_samples):
        A, B, C = (Matrix(rng.integers(0, 3, (2, 2)), data.P) for _ in range(3))
        signs = tuple(int(x) for x in rng.choice([1, -1], 3))
        res = lemma1_gram_family(A, B, C, signs)
        geometric = res.report is not None and res.report.is_partial_perp_system
        agree += res.accepted == geometric
        accepted += res.accepted
    s.add("block conditions <=> F4 partial perp-system (random sample)",
          agree == ctx.lemma1_samples, f"{agree}/{ctx.lemma1_samples} agree, {accepted} accepted")
    return s


def section_L(ctx):
    s = Section("L", "The 24-line set L and the group H")
    eight = pl.eight_matrices()
    s.add("eight matrices", len(eight) == 8, len(eight))
    s.add("eight matrices match the listed class", set(eight) == set(data.EIGHT_MATRICES))
    gl = general_linear(2, data.P)
    s.add("class closed under GL(2,3)-conjugation",
          all(mat_inverse(E) @ Y @ E in set(eight) for E in gl for Y in eight))
    partners = pl.rank_one_partners(eight)
    s.add("three rank-one partners each", all(len(p) == 3 for p in partners),
          [len(p) for p in partners])
    pairs = pl.admissible_pairs(eight)
    s.add("admissible (R, S) pairs", len(pairs) == 24, len(pairs))
    L = _guard(s, "L computed two ways", lambda: ctx.L)
    if L is None:
        return s
    s.add("|L| = 24 (class and full-scan agree)", len(L) == 24, len(L))
    default = pl.irs_line(data.R_DEFAULT, data.S_DEFAULT)
    s.add("default (I R S) in L", default in L.as_set())
    s.add("R-blocks of L are the eight matrices",
          {pl.irs_blocks(l)[0] for l in L} == set(eight))
    H = pl.h_group()
    s.add("|H| = 48", H.order() == 48, H.order())
    proj = H.projective_elements()
    s.add("|H / scalars| = 24", len(proj) == 24, len(proj))
    s.add("H-orbit of default line is L", set(orbit(H, default)) == L.as_set())
    ident = Matrix.identity(6, data.P)
    s.add("H acts regularly on L",
          all(line_action(h, l) != l for h in proj if h != ident for l in L))
    return s


def section_F5(ctx):
    s = Section("F5", "F5, its stabiliser <C,D> and the symplectic forms on it")
    F5 = _guard(s, "F5", lambda: ctx.F5)
    if F5 is None:
        return s
    s.add("|F5| = 5", len(F5) == 5, len(F5))
    s.add("F5 pairwise disjoint", all(are_disjoint(a, b) for a, b in itertools.combinations(F5, 2)))
    group = _guard(s, "stabiliser", lambda: ctx.group)
    if group is None:
        return s
    rel = check_relations(*group.generators)
    for name, ok in rel.items():
        s.add(name, ok)
    s.add("|<C,D>| = 240", group.order() == 240, group.order())
    proj = group.projective_elements()
    s.add("projective order 120", len(proj) == 120, len(proj))
    s.add("generators stabilise F5", all(stabilizes_setwise(g, list(F5)) for g in group.generators))
    perms = [permutation_on(g, list(F5)) for g in proj]
    ident_perm = tuple(range(5))
    faithful = len(set(perms)) == 120 and perms.count(ident_perm) == 1
    s.add("faithful action on F5 with image of order 120", faithful, len(set(perms)))
    s.add("<C,D>-orbit of l1 is F5", set(orbit(group, F5[0])) == F5.as_set())
    fam4 = forms_vanishing_on_lines(list(ctx.F4))
    s.add("forms vanishing on F4: dimension 11", len(fam4) == 11, len(fam4))
    fam5 = forms_vanishing_on_lines(list(F5))
    s.add("forms vanishing on F5: dimension 10", len(fam5) == 10, len(fam5))
    R, S = pl.irs_blocks(F5[4])
    s.add("every basis form has the block shape",
          all(all(pl.lemma_five_conditions(b, R, S).values()) for b in fam5))
    M15 = _guard(s, "M15", lambda: ctx.M15)
    if M15 is None:
        return s
    s.add("M15 nondegenerate", M15.nondegenerate)
    s.add("M15 block conditions", all(pl.lemma_five_conditions(M15, R, S).values()))
    s.add("M15 vanishes on F5", in_span(M15.gram, fam5))
    strict = invariant_alternating_forms(group)
    s.add("alternating forms fixed exactly by C and D", len(strict) == 0, len(strict))
    alt = polarity_invariant_forms(group, "alternating")
    dims = {str(list(k)): len(v) for k, v in alt.items()}
    s.add("invariant symplectic polarity: dimension 1 (C, D scale it by -1)",
          list(alt) == [(2, 2)] and len(alt[(2, 2)]) == 1, dims)
    s.add("invariant symplectic polarity is M15",
          bool(alt) and all(in_span(M15.gram, b) for b in alt.values()))
    quad = invariant_quadratic_forms(group)
    s.add("invariant quadratic forms: dimension 0", len(quad) == 0, len(quad))
    s.add("no quadratic form preserved up to scalars",
          not polarity_invariant_forms(group, "quadratic"))
    return s


def section_F6(ctx):
    s = Section("F6", "Fixed lines of the 5-cycles")
    table = _guard(s, "5-cycles", lambda: ctx.five_cycles)
    if table is None:
        return s
    s.add("24 projective elements of order 5", len(table) == 24, len(table))
    counts = [len(f) for _, f in table]
    s.add("each fixes exactly one line", all(c == 1 for c in counts), sorted(set(counts)))
    F6 = _guard(s, "F6", lambda: ctx.F6)
    if F6 is None:
        return s
    s.add("|F6| = 6", len(F6) == 6, len(F6))
    s.add("F6 pairwise disjoint", all(are_disjoint(a, b) for a, b in itertools.combinations(F6, 2)))
    s.add("F6 matches the listed lines", F6.as_set() == ctx.transported(data.F6_PRINTED))
    M15 = _guard(s, "M15", lambda: ctx.M15)
    if M15 is not None:
        rep = verify_perp_system(F6, M15)
        s.add("F6 partial perp-system for M15", rep.is_partial_perp_system)
    return s


def section_F15(ctx):
    s = Section("F15", "One line in each solid spanned by two F6 lines")
    table = _guard(s, "candidate scan", lambda: ctx.f15_table)
    if table is None:
        return s
    s.add("15 solids", len(table) == 15, len(table))
    for e in table:
        i, j = e.pair
        s.add(f"unique line in span(m{i + 1}, m{j + 1})", len(e.candidates) == 1, len(e.candidates))
    F15 = _guard(s, "F15", lambda: ctx.F15)
    if F15 is None:
        return s
    s.add("F15 matches the listed lines", F15.as_set() == ctx.transported(data.F15_PRINTED))
    solids = [e.solid for e in table]
    s.add("each line in exactly its own solid, disjoint from the others",
          all(solids[k].contains(l) and all(are_disjoint(l, solids[m]) for m in range(15) if m != k)
              for k, l in enumerate(F15)))
    return s


def section_perp(ctx):
    s = Section("perp_system", "The 21-line perp-system")
    M21 = _guard(s, "M21", lambda: ctx.M21)
    if M21 is None:
        return s
    rep = verify_perp_system(M21, ctx.M15)
    ctx._cache["perp_report"] = rep
    bound = perp_bound(5, 1, 3)
    s.add("|M| = 21", len(M21) == 21, len(M21))
    s.add("perp_bound(5,1,3) = 21", bound == 21, bound)
    s.add("pairwise disjoint", rep.pairwise_disjoint)
    s.add("all lines non-singular", rep.all_nonsingular)
    s.add("pairwise opposite", rep.pairwise_opposite)
    s.add("maximal perp-system", rep.is_maximal)
    s.add("generators stabilise M", all(stabilizes_setwise(g, list(M21)) for g in ctx.group.generators))
    return s


def section_complement(ctx):
    s = Section("complement", "Solids in the complement of M")
    rep = pl.complement_analysis(ctx.M21, ctx.space, ctx.M15)
    ctx._cache["complement"] = rep
    s.add("84 covered points, none twice", rep.covered_points == 84 and rep.doubly_covered == 0,
          rep.covered_points)
    s.add("280 uncovered points", rep.uncovered_points == 280, rep.uncovered_points)
    s.add("21 solids in the complement", len(rep.solids) == 21, len(rep.solids))
    s.add("solids pairwise meet in lines", rep.pairwise_meets_are_lines)
    s.add("3 solids through each complement point", set(rep.solids_per_point) == {3},
          {str(k): v for k, v in sorted(rep.solids_per_point.items())})
    s.add("complement solids are the perps of M", bool(rep.solids_are_perps))
    return s


def section_inverse(ctx):
    s = Section("inverse", "Recovering F5 from F6 via synthemes")
    s.add("15 synthemes", len(geo.synthemes()) == 15, len(geo.synthemes()))
    s.add("6 spreads", len(geo.spreads()) == 6, len(geo.spreads()))
    rec = _guard(s, "recovery", lambda: pl.recover_f5(ctx.F6))
    if rec is None:
        return s
    ctx._cache["recovery"] = rec
    s.add("qualifying spreads", rec.qualifying_spreads == 1, rec.qualifying_spreads)
    s.add("recovered lines equal F5", rec.lines.as_set() == ctx.F5.as_set())
    return s


def section_w2(ctx):
    s = Section("W2", "The generalized quadrangle W(2)")
    F10 = geo.f10(ctx.F5, ctx.M15)
    ctx._cache["F10"] = F10
    s.add("|F10| = 10", len(F10) == 10, len(F10))
    s.add("F10 and F5 disjoint as sets", not (F10.as_set() & ctx.F5.as_set()))
    w2 = geo.build_w2(ctx.F15, ctx.F5, F10, ctx.M15)
    ctx._cache["w2"] = w2
    s.add("15 points, 15 lines", (w2.npoints, w2.nlines) == (15, 15), [w2.npoints, w2.nlines])
    try:
        st = geo.check_gq(w2)
        s.add("GQ of order (2,2)", st == (2, 2), list(st))
    except PerpsysError as e:
        s.add("GQ of order (2,2)", False, str(e))
    syl = geo.sylvester_model()
    try:
        s.add("Sylvester model is GQ(2,2)", geo.check_gq(syl) == (2, 2))
    except PerpsysError as e:
        s.add("Sylvester model is GQ(2,2)", False, str(e))
    iso = geo.isomorphism(w2, syl, point_map={k: k for k in range(15)})
    s.add("isomorphic to Sylvester model with m_ij -> {i,j}", iso is not None,
          iso.to_json() if iso else None)
    rec = ctx._cache.get("recovery") or pl.recover_f5(ctx.F6)
    eq = geo.w2_proof_equivalences(ctx.F6, ctx.F15, rec.lines, ctx.M15, rec.spread)
    for name, ok in eq.items():
        s.add(name, ok)
    return s


def section_linear(ctx):
    s = Section("linear_representation", "Partial geometry and strongly regular graph")
    lr = geo.linear_representation(ctx.M21)
    s.add("729 points, 1701 lines", (lr.npoints, lr.nlines) == (729, 1701), [lr.npoints, lr.nlines])
    try:
        pg = geo.check_partial_geometry(lr)
        s.add("pg(8,20,2)", (pg.s, pg.t, pg.alpha) == (8, 20, 2), [pg.s, pg.t, pg.alpha])
        srg = geo.check_srg(lr, pg)
        s.add("srg(729,168,27,42), counted = formula", srg.as_tuple() == (729, 168, 27, 42),
              list(srg.as_tuple()))
        ctx._cache["pg"], ctx._cache["srg"] = pg, srg
    except PerpsysError as e:
        s.add("partial geometry / srg", False, f"{type(e).__name__}: {e}")
    w2 = ctx._cache.get("w2")
    if w2 is not None:
        try:
            pg2 = geo.check_partial_geometry(w2)
            srg2 = geo.check_srg(w2, pg2)
            s.add("W(2) is pg(2,2,1) with srg(15,6,1,3)",
                  (pg2.s, pg2.t, pg2.alpha, srg2.as_tuple()) == (2, 2, 1, (15, 6, 1, 3)))
        except PerpsysError as e:
            s.add("W(2) is pg(2,2,1) with srg(15,6,1,3)", False, str(e))
    return s


SECTIONS = (section_seed_lines, section_L, section_F5, section_F6, section_F15,
            section_perp, section_complement, section_inverse, section_w2, section_linear)

# per-stage subsets selectable from the command line, keyed by line count / family id
STAGE_SECTIONS = {
    1: (section_seed_lines,),
    4: (section_L,),
    5: (section_F5,),
    6: (section_F6,),
    15: (section_F15,),
}


def run_sections(ctx, funcs):
    out = []
    for fn in funcs:
        t0 = time.perf_counter()
        try:
            sec = fn(ctx)
        except PerpsysError as e:
            sec = Section(fn.__name__.removeprefix("section_"), fn.__name__)
            sec.add("stage completed", False, f"{type(e).__name__}: {e}")
        sec.elapsed_ms = round((time.perf_counter() - t0) * 1000, 3)
        out.append(sec)
    return out


def _grams_json(ctx):
    out = {"M0": pl.m0().gram.to_json()}
    if "F5" in ctx._cache:
        out["family_basis"] = [b.to_json() for b in forms_vanishing_on_lines(list(ctx.F5))]
    if "M15" in ctx._cache:
        out["M15"] = ctx.M15.gram.to_json()
    return out


def full_report(seed_index=0, jobs=1, timings=False, sections=SECTIONS, command="pipeline"):
    """Run the selected sections and assemble the JSON-ready report."""
    ctx = Context(seed_index, jobs)
    secs = run_sections(ctx, sections)
    stages = {}
    for key in ("F4", "L", "F5", "F6", "F15", "M21", "F10"):
        val = ctx.F4 if key == "F4" else ctx._cache.get(key)
        if val is not None:
            stages[key] = val.to_json()
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed_index": seed_index,
        "ok": all(s.passed for s in secs),
        "counts": {k: len(v) for k, v in stages.items()},
        "checks": {s.key: s.to_json() for s in secs},
        "stages": stages,
        "grams": _grams_json(ctx),
    }
    if "group" in ctx._cache:
        g = ctx.group
        report["groups"] = {
            "stabilizer": {"generators": [m.to_json() for m in g.generators],
                           "order": g.order(), "projective_order": len(g.projective_elements())},
            "transporter": ctx.h.to_json(),
        }
    extra = {}
    if "perp_report" in ctx._cache:
        extra["perp_system"] = ctx._cache["perp_report"].to_json()
    if "complement" in ctx._cache:
        extra["complement"] = ctx._cache["complement"].to_json()
    if "recovery" in ctx._cache:
        extra["recovery"] = ctx._cache["recovery"].to_json()
    if "w2" in ctx._cache:
        extra["w2"] = ctx._cache["w2"].to_json()
    if "pg" in ctx._cache:
        extra["partial_geometry"] = ctx._cache["pg"].to_json()
        extra["srg"] = ctx._cache["srg"].to_json()
    report["results"] = extra
    report["assumptions"] = list(ASSUMPTIONS)
    report["notes"] = list(NOTES)
    report["timings_ms"] = {s.key: s.elapsed_ms for s in secs} if timings else {}
    return report, secs
