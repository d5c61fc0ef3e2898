import itertools

import numpy as np
import pytest

from perpsys import geometries as geo
from perpsys.errors import (NotAGQError, NotAPartialGeometryError, NotAPartialLinearSpaceError,
                            NotSRGError, PipelineInvariantViolated)
from perpsys.forms import perp
from perpsys.projective import canonicalize, span


@pytest.fixture(scope="module")
def w2(run):
    F10 = geo.f10(run.F5, run.M15)
    return geo.build_w2(run.F15, run.F5, F10, run.M15)


@pytest.fixture(scope="module")
def linrep(run):
    return geo.linear_representation(run.M21)


def test_incidence_structure_checks():
    with pytest.raises(NotAPartialLinearSpaceError):
        geo.IncidenceStructure(3, [[0, 1, 2], [0, 1]])
    with pytest.raises(ValueError):
        geo.IncidenceStructure(3, [[0, 0, 1]])
    with pytest.raises(ValueError):
        geo.IncidenceStructure(3, [[0, 5]])
    g = geo.grid(3)
    assert geo.IncidenceStructure.from_json(g.to_json()).lines == g.lines


def test_params_validation():
    with pytest.raises(ValueError):
        geo.SRGParams(10, 3, 0, 2)
    assert geo.SRGParams(10, 3, 0, 1).as_tuple() == (10, 3, 0, 1)
    with pytest.raises(ValueError):
        geo.PGParams(0, 2, 1)
    assert geo.PGParams(8, 20, 2).srg().as_tuple() == (729, 168, 27, 42)
    assert geo.PGParams(2, 2, 1).srg().as_tuple() == (15, 6, 1, 3)


def test_f10(run):
    F10 = geo.f10(run.F5, run.M15)
    assert len(F10) == 10 and all(l.pdim == 1 for l in F10)
    assert not F10.as_set() & run.F5.as_set()
    assert F10[0] == perp(span(run.F5[0], run.F5[1]), run.M15)
    with pytest.raises(PipelineInvariantViolated):
        geo.f10(list(run.F5)[:4], run.M15)


def test_w2_is_gq(w2):
    assert (w2.npoints, w2.nlines) == (15, 15)
    assert set(w2.line_sizes()) == {3} and set(w2.point_degrees()) == {3}
    assert geo.check_gq(w2) == (2, 2)
    assert geo.check_partial_geometry(w2) == geo.PGParams(2, 2, 1)
    assert geo.check_srg(w2).as_tuple() == (15, 6, 1, 3)


def test_sylvester(w2):
    syl = geo.sylvester_model()
    assert len(geo.duads()) == 15 and len(geo.synthemes()) == 15
    assert all(len(s) == 3 for s in geo.synthemes())
    assert len(geo.spreads()) == 6
    assert geo.check_gq(syl) == (2, 2)
    sp = geo.spreads()[0]
    extra = geo.complementary_syntheme(sp, 0, 1)
    assert extra not in sp


def test_grid():
    g = geo.grid(3)
    assert geo.check_gq(g) == (2, 1)
    with pytest.raises(NotAPartialGeometryError):
        geo.check_partial_geometry(geo.IncidenceStructure(3, [[0, 1, 2]]))


def test_not_gq():
    tri = geo.IncidenceStructure(3, [[0, 1], [1, 2], [0, 2]])
    with pytest.raises(NotAGQError):
        geo.check_gq(tri)
    uneven = geo.IncidenceStructure(4, [[0, 1, 2], [2, 3]])
    with pytest.raises(NotAGQError):
        geo.check_gq(uneven)


def test_not_srg():
    path = [[1 if abs(i - j) == 1 else 0 for j in range(4)] for i in range(4)]
    with pytest.raises(NotSRGError):
        geo.srg_parameters(path)


def test_isomorphism(w2):
    syl = geo.sylvester_model()
    iso = geo.isomorphism(w2, syl, point_map={k: k for k in range(15)})
    assert iso is not None and iso.points == tuple(range(15))
    assert geo.is_isomorphism(w2, syl, iso)
    assert geo.is_isomorphism(syl, w2, iso.inverse())
    assert geo.isomorphism(w2, geo.grid(3)) is None
    ident = geo.isomorphism(syl, syl)
    assert ident is not None and geo.is_isomorphism(syl, syl, ident)


def test_isomorphism_respects_forced_points():
    g = geo.grid(3)
    iso = geo.isomorphism(g, g, point_map={0: 4})
    assert iso.points[0] == 4 and geo.is_isomorphism(g, g, iso)
    rows_only = geo.IncidenceStructure(9, [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7],
                                           [2, 5, 8]])
    assert geo.isomorphism(g, rows_only) is not None
    bad = geo.IncidenceStructure(9, [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 4, 8], [1, 5, 6],
                                     [2, 3, 7]])
    assert geo.isomorphism(g, bad) is not None
    assert geo.isomorphism(g, bad, point_map={0: 0, 1: 1, 3: 3, 4: 5}) is None


def test_proof_equivalences(run):
    from perpsys.pipeline import recover_f5
    rec = recover_f5(run.F6)
    eq = geo.w2_proof_equivalences(run.F6, run.F15, rec.lines, run.M15, rec.spread)
    assert all(eq.values()) and len(eq) == 3


def test_w2_incidence_rules_disjoint(run):
    F10 = geo.f10(run.F5, run.M15)
    inc = geo.w2_incidence(run.F15, run.F5, F10, run.M15)
    assert inc[:, :5].sum(axis=0).tolist() == [3] * 5
    assert inc.sum(axis=0).tolist() == [3] * 15


def test_linear_representation(linrep):
    assert (linrep.npoints, linrep.nlines) == (729, 1701)
    assert set(linrep.line_sizes()) == {9} and set(linrep.point_degrees()) == {21}
    pg = geo.check_partial_geometry(linrep)
    assert (pg.s, pg.t, pg.alpha) == (8, 20, 2)
    srg = geo.check_srg(linrep, pg)
    assert srg.as_tuple() == (729, 168, 27, 42)
    assert srg.k * (srg.k - srg.lam - 1) == (srg.v - srg.k - 1) * srg.mu


def test_linear_representation_of_non_perp_set(run):
    a, b = run.M21[0].basis.array, run.M21[1].basis.array
    transversal = canonicalize(np.array([a[0], b[0]]) % 3, 2)
    with pytest.raises(NotAPartialLinearSpaceError):
        geo.linear_representation(list(run.M21)[:20] + [transversal])
    with pytest.raises(ValueError):
        geo.linear_representation(list(run.M21)[:20] + [span(run.M21[0], run.M21[1])])
    partial = geo.linear_representation(list(run.F6))
    with pytest.raises(NotAPartialGeometryError):
        geo.check_partial_geometry(partial)


def test_duads_synthemes_relation():
    for sp in geo.spreads():
        covered = [d for s in sp for d in s]
        assert sorted(covered) == sorted(geo.duads())
    for a, b in itertools.combinations(geo.synthemes(), 2):
        assert len(set(a) & set(b)) <= 1
