import itertools
import json

import numpy as np
import pytest

from perpsys import data, pipeline as pl
from perpsys.errors import (NotInLError, PipelineInvariantViolated, UniquenessViolatedError,
                            WitnessNotFoundError)
from perpsys.forms import QuadricType, classify_quadric, verify_perp_system
from perpsys.gf import Matrix, mat_inverse, mat_rank
from perpsys.groups import forms_vanishing_on_lines, in_span, line_action, stabilizes_setwise
from perpsys.projective import are_disjoint, canonicalize, meet, span

# the solid each listed F15 line lies in, as a pair of positions in the listed F6
F15_BY_PAIR = {
    (0, 1): [[1, 0, 1, 2, 0, 0], [0, 1, 1, 0, 0, 0]],
    (0, 2): [[1, 0, 1, 0, 2, 2], [0, 1, 0, 1, 0, 2]],
    (0, 3): [[1, 0, 2, 0, 2, 0], [0, 1, 2, 2, 2, 2]],
    (0, 4): [[1, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 1]],
    (0, 5): [[0, 0, 1, 0, 1, 1], [0, 0, 0, 1, 2, 0]],
    (1, 2): [[0, 0, 1, 0, 1, 0], [0, 0, 0, 1, 0, 1]],
    (1, 3): [[1, 0, 0, 0, 2, 2], [0, 1, 0, 0, 0, 2]],
    (1, 4): [[1, 0, 1, 0, 1, 1], [0, 1, 0, 1, 2, 0]],
    (1, 5): [[1, 0, 2, 0, 1, 0], [0, 1, 2, 2, 0, 1]],
    (2, 3): [[1, 0, 0, 2, 1, 0], [0, 1, 1, 1, 0, 1]],
    (2, 4): [[1, 0, 2, 0, 0, 0], [0, 1, 2, 2, 0, 0]],
    (2, 5): [[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 1]],
    (3, 4): [[0, 0, 1, 0, 1, 2], [0, 0, 0, 1, 1, 0]],
    (3, 5): [[1, 0, 1, 0, 0, 0], [0, 1, 0, 1, 0, 0]],
    (4, 5): [[1, 0, 2, 2, 2, 2], [0, 1, 0, 2, 0, 2]],
}


def lines_of(rows):
    return {canonicalize(Matrix(r)) for r in rows}


def test_f4_and_m0():
    F4 = pl.f4()
    assert len(F4) == 4
    assert all(meet(a, b).is_empty() for a, b in itertools.combinations(F4, 2))
    assert all(span(a, b).pdim == 3 for a, b in itertools.combinations(F4, 2))
    M0 = pl.m0()
    assert M0.gram.T == -M0.gram and mat_rank(M0.gram) == 6


def test_eight_matrices():
    eight = pl.eight_matrices()
    assert len(eight) == 8 and set(eight) == set(data.EIGHT_MATRICES)
    assert all(len(p) == 3 for p in pl.rank_one_partners(eight))
    assert len(pl.admissible_pairs()) == 24


def test_compute_L(space):
    L = pl.compute_L(space)
    assert len(L) == 24
    assert L[0] == pl.irs_line(data.R_DEFAULT, data.S_DEFAULT)
    assert list(L)[1:] == sorted(list(L)[1:])
    assert {pl.irs_blocks(l)[0] for l in L} == set(data.EIGHT_MATRICES)
    assert all(pl.irs_shape_ok(*pl.irs_blocks(l)) for l in L)


def test_l_condition_mask_rejects_seed_lines():
    mask = pl.l_condition_mask(np.stack([l.basis.array for l in pl.f4()]))
    assert not mask.any()


def test_f5_choices(run):
    F5 = pl.f5()
    assert len(F5) == 5 and all(are_disjoint(a, b) for a, b in itertools.combinations(F5, 2))
    other = pl.f5(7, run.L)
    h = pl.transporter(other[4])
    assert {line_action(h, l) for l in F5} == other.as_set()
    assert pl.f5((data.R_DEFAULT, data.S_DEFAULT)) == F5
    with pytest.raises(NotInLError):
        pl.f5((data.I2, data.I2))
    with pytest.raises(NotInLError):
        pl.f5(24, run.L)


def test_line_set_invariants():
    l = pl.f4()[0]
    with pytest.raises(PipelineInvariantViolated):
        pl.LineSet("x", [l, l])
    with pytest.raises(PipelineInvariantViolated):
        pl.LineSet("x", [span(l, pl.f4()[1])])
    F4 = pl.f4()
    assert pl.LineSet.from_json("F4", json.loads(json.dumps(F4.to_json()))) == F4


def test_stabilizer(run):
    g = run.group
    assert g.order() == 240
    assert all(stabilizes_setwise(x, list(run.F5)) for x in g.generators)
    assert all(stabilizes_setwise(x, list(run.M21)) for x in g.generators)


def test_f6(run):
    assert len(run.F6) == 6
    assert [l.basis.tolist() for l in run.F6] == [list(r) for r in data.F6_PRINTED]
    assert run.F6[0].rows() == ((1, 0, 1, 2, 2, 0), (0, 1, 1, 0, 2, 2))
    assert all(are_disjoint(a, b) for a, b in itertools.combinations(run.F6, 2))


def test_m15(run):
    M = run.M15
    A, B, C = data.A15, data.B15, data.C15
    assert A + B + C == Matrix([[2, 2], [2, 1]])
    assert mat_rank(M.gram) == 6 and M.gram == data.M15_GRAM
    assert in_span(M.gram, forms_vanishing_on_lines(list(run.F5)))
    assert all(pl.lemma_five_conditions(M, data.R_DEFAULT, data.S_DEFAULT).values())


def test_f15(run):
    table = run.f15_table
    assert [e.pair for e in table] == list(itertools.combinations(range(6), 2))
    assert all(len(e.candidates) == 1 for e in table)
    assert run.F15.as_set() == lines_of(data.F15_PRINTED)
    assert run.F15[0] == canonicalize(Matrix(F15_BY_PAIR[(0, 1)]))
    for e in table:
        assert e.candidates[0] == canonicalize(Matrix(F15_BY_PAIR[e.pair]))
    assert table[0].solid.vdim == 4


def test_f15_uniqueness_violation(run):
    with pytest.raises(UniquenessViolatedError):
        pl.f15(run.F6, pl.m0())


def test_f15_lines_in_one_solid(run):
    solids = [span(a, b) for a, b in itertools.combinations(run.F6, 2)]
    for l in run.F15:
        inside = [s.contains(l) for s in solids]
        assert sum(inside) == 1
        assert all(are_disjoint(l, s) for s, i in zip(solids, inside) if not i)


def test_mathon():
    M21, rep = pl.mathon()
    assert len(M21) == 21
    assert rep.pairwise_disjoint and rep.is_maximal and rep.bound == 21


def test_complement(run):
    rep = pl.complement_analysis(run.M21, run.space, run.M15)
    assert rep.ok
    assert rep.covered_points == 84 and rep.uncovered_points == 280
    assert len(rep.solids) == 21 and rep.solids_per_point == {3: 280}
    assert rep.solids_are_perps
    assert pl.complement_analysis(run.M21, run.space).solids_are_perps is None


def test_complement_of_partial_set(run):
    rep = pl.complement_analysis(run.F6, run.space)
    assert rep.covered_points == 24 and not rep.ok


def test_recover_f5(run):
    rec = pl.recover_f5(run.F6)
    assert rec.qualifying_spreads == 1
    assert rec.lines.as_set() == run.F5.as_set()
    with pytest.raises(PipelineInvariantViolated):
        pl.recover_f5(list(run.F6)[:5])


def test_polarity_search(run):
    res = pl.find_epsilon_polarities(run.M21, run.group)
    assert set(res.witnesses) == {QuadricType.HYPERBOLIC, QuadricType.ELLIPTIC}
    for kind, w in res.witnesses.items():
        assert classify_quadric(w.form) == (kind, 130 if kind is QuadricType.HYPERBOLIC else 112)
        assert verify_perp_system(run.M21, w.form).is_maximal
    again = pl.find_epsilon_polarities(run.M21, run.group)
    assert json.dumps(again.to_json()) == json.dumps(res.to_json())


def test_polarity_search_budget_exhausted(run):
    with pytest.raises(WitnessNotFoundError) as info:
        pl.find_epsilon_polarities(run.M21, run.group, budget=500, max_dim=0, seed=3)
    assert info.value.result.random_candidates == 500
    with pytest.raises(WitnessNotFoundError):
        pl.find_epsilon_polarities(run.M21, run.group, budget=0, subgroups="full")
    with pytest.raises(ValueError):
        pl.find_epsilon_polarities(run.M21, run.group, subgroups="nope")


def test_all_seeds_equivariant(run):
    base = run.M21.as_set()
    for k in range(24):
        c = pl.construct(k, space=run.space)
        assert (len(c.L), len(c.F5), len(c.F6), len(c.F15), len(c.M21)) == (24, 5, 6, 15, 21)
        assert c.perp_report.is_maximal
        assert {line_action(c.transporter, l) for l in base} == c.M21.as_set()
        hi = mat_inverse(c.transporter)
        assert c.M15.gram == hi @ data.M15_GRAM @ hi.T


def test_stage_determinism():
    a, b = pl.construct(3), pl.construct(3)
    assert a.M21.to_json() == b.M21.to_json()
    assert [l.rows() for l in a.F6] == [l.rows() for l in b.F6]


def test_quotient_ranks_match_direct_ranks(space):
    import numpy as np
    from perpsys.gf import Matrix, mat_rank
    from perpsys.projective import canonicalize
    rng = np.random.default_rng(5)
    bases = space.line_array()[rng.choice(11011, 300, replace=False)]
    for k in (1, 3, 4):
        sub = canonicalize(Matrix(rng.integers(0, 3, (k, 6)), 3))
        got = pl.quotient_ranks(sub, bases)
        want = [mat_rank(Matrix(np.vstack([sub.basis.array, b]), 3)) - sub.vdim for b in bases]
        assert got.tolist() == want
