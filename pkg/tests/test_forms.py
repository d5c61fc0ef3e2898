import numpy as np
import pytest

from perpsys import data
from perpsys.errors import DegenerateFormError, NonIntegralError
from perpsys.forms import (AlternatingForm, QuadraticForm, QuadricType, are_opposite,
                           classify_quadric, is_totally_isotropic, lemma1_gram_family, perp,
                           perp_bound, quadric_point_counts, verify_perp_system)
from perpsys.gf import Matrix
from perpsys.pipeline import f4, m0
from perpsys.projective import canonicalize, whole_space

I, O, X = data.I2, data.O2, data.X


def test_alternating_form_validation():
    with pytest.raises(ValueError):
        AlternatingForm(Matrix.identity(6))
    assert not AlternatingForm(Matrix.zeros(6, 6)).nondegenerate
    assert m0().nondegenerate


def test_quadratic_form_validation():
    with pytest.raises(ValueError):
        QuadraticForm(Matrix([[0, 1], [0, 0]]))
    q = QuadraticForm(Matrix.identity(6))
    assert q.value([1, 1, 0, 0, 0, 0]) == 2
    assert q.bilinear == Matrix.identity(6) * 2


def test_perp_examples():
    l1, _, _, l4 = f4()
    assert perp(l1, m0()) == canonicalize(Matrix.block([[I, O, O], [O, I, -I]]))
    assert perp(l4, m0()) == canonicalize(Matrix.block([[I, O, -I], [O, I, -I]]))
    assert perp(whole_space(5), m0()).is_empty()
    with pytest.raises(DegenerateFormError):
        perp(l1, AlternatingForm(Matrix.zeros(6, 6)))


def test_isotropy_and_opposite():
    l1, l2, l3, l4 = f4()
    assert all(is_totally_isotropic(l, m0()) for l in (l1, l2, l3, l4))
    assert not are_opposite(l1, l1, m0())
    A = B = C = Matrix([[1, 1], [0, 1]])
    gram = Matrix.block([[X, A, B], [-A.T, X, C], [-B.T, -C.T, X]])
    f = AlternatingForm(gram)
    assert not is_totally_isotropic(l1, f)
    assert are_opposite(l1, l2, f)


def test_perp_bound():
    assert perp_bound(5, 1, 3) == 21
    assert perp_bound(5, 1, 2) == 6
    assert perp_bound(7, 3, 3) == 41
    with pytest.raises(NonIntegralError):
        perp_bound(6, 1, 3)
    with pytest.raises(NonIntegralError):
        perp_bound(5, 3, 3)


def test_verify_perp_system_examples(run):
    rep = verify_perp_system(run.M21, run.M15)
    assert rep.is_maximal and rep.line_count == rep.bound == 21 and not rep.failing_pairs
    six = verify_perp_system(run.F6, run.M15)
    assert six.is_partial_perp_system and not six.is_maximal
    bad = verify_perp_system(f4(), m0())
    assert not bad.all_nonsingular and not bad.is_partial_perp_system
    # distinct seed lines pair through X, so only the diagonal fails
    assert {r for _, _, r in bad.failing_pairs} == {"singular"}
    assert not bad.pairwise_opposite
    assert bad.to_json()["failing_pairs"][0] == [0, 0, "singular"]


def test_quadric_classification():
    hyp_sym = Matrix([[0, 2, 0, 0, 0, 0], [2, 0, 0, 0, 0, 0], [0, 0, 0, 2, 0, 0],
                      [0, 0, 2, 0, 0, 0], [0, 0, 0, 0, 0, 2], [0, 0, 0, 0, 2, 0]])
    assert classify_quadric(QuadraticForm(hyp_sym)) == (QuadricType.HYPERBOLIC, 130)
    ell_sym = Matrix.block([[hyp_sym.array[:4, :4], np.zeros((4, 2), int)],
                            [np.zeros((2, 4), int), np.eye(2, dtype=int)]])
    assert classify_quadric(QuadraticForm(ell_sym)) == (QuadricType.ELLIPTIC, 112)
    assert classify_quadric(QuadraticForm(Matrix.zeros(6, 6)))[0] is QuadricType.DEGENERATE
    assert quadric_point_counts(6, 3) == (130, 112)


def test_random_nondegenerate_quadrics_have_two_counts():
    rng = np.random.default_rng(12)
    seen = set()
    for _ in range(200):
        u = rng.integers(0, 3, (6, 6))
        q = QuadraticForm(Matrix((u + u.T) % 3))
        if q.nondegenerate:
            seen.add(classify_quadric(q)[1])
    assert seen == {112, 130}


def test_lemma1_examples():
    res = lemma1_gram_family(X, X, X)
    assert not res.accepted and res.form is None
    singular = lemma1_gram_family(Matrix([[1, 0], [0, 0]]), I, I)
    assert "A not invertible" in singular.violations
    with pytest.raises(ValueError):
        lemma1_gram_family(I, I, I, signs=(1, 0, 1))


def test_lemma1_equivalence_sample():
    rng = np.random.default_rng(21)
    accepted = 0
    for _ in range(500):
        A, B, C = (Matrix(rng.integers(0, 3, (2, 2))) for _ in range(3))
        signs = tuple(int(s) for s in rng.choice([1, -1], 3))
        res = lemma1_gram_family(A, B, C, signs)
        geometric = res.report is not None and res.report.is_partial_perp_system
        assert res.accepted == geometric
        accepted += res.accepted
        if res.accepted:
            assert res.form.nondegenerate
    assert accepted > 0


def test_opposite_symmetry_and_involution():
    rng = np.random.default_rng(13)
    f = m0()
    for _ in range(300):
        a = canonicalize(Matrix(rng.integers(0, 3, (2, 6))))
        b = canonicalize(Matrix(rng.integers(0, 3, (2, 6))))
        if a.vdim != 2 or b.vdim != 2:
            continue
        assert are_opposite(a, b, f) == are_opposite(b, a, f)
        assert are_opposite(a, b, f) == meet_empty(perp(a, f), b)
        assert perp(perp(a, f), f) == a
        assert a.vdim + perp(a, f).vdim == 6


def meet_empty(a, b):
    from perpsys.projective import meet
    return meet(a, b).is_empty()
