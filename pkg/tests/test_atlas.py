import itertools

import pytest

from conftest import alg
from evosquare import atlas, evo
from evosquare.errors import BudgetExceeded, InputError, UnsupportedField
from evosquare.evo import Flavor
from evosquare.fields import FieldSpec

# (idempotent, null-cube, isotropic) class counts, confirmed exhaustively for the
# finite fields by test_completeness_against_brute_force and the F4 scratch run
COUNTS = {
    ("F2", 2): (2, 1, 1),
    ("F2", 3): (4, 2, 2),
    ("F3", 2): (3, 1, 1),
    ("F3", 3): (5, 3, 2),
    ("F4", 3): (4, 2, 2),
    ("F9", 3): (5, 3, 2),
    ("R", 3): (6, 3, 2),
    ("C", 4): (4, 3, 3),
}


@pytest.mark.parametrize("key", sorted(COUNTS))
def test_counts(key):
    table = atlas.enumerate_classes(FieldSpec.parse(key[0]), key[1])
    c = table.counts
    assert (c[Flavor.IDEMPOTENT], c[Flavor.NULL_CUBE], c[Flavor.ISOTROPIC]) == COUNTS[key]


def test_enumeration_is_deterministic():
    K = FieldSpec.parse("F9")
    assert atlas.enumerate_classes(K, 3).to_dict() == atlas.enumerate_classes(K, 3).to_dict()


@pytest.mark.parametrize("name,n", [("F3", 3), ("F4", 3), ("F9", 3), ("R", 3), ("C", 4), ("F5", 4)])
def test_soundness(name, n):
    table = atlas.enumerate_classes(FieldSpec.parse(name), n)
    for x, y in itertools.combinations(table.entries, 2):
        assert not evo.is_isomorphic(x.algebra, y.algebra)


def all_algebras(K, n):
    vecs = [v for v in itertools.product(K.elements(), repeat=n) if any(v)]
    seen = set()
    for lam in vecs:
        for a in vecs:
            A = evo.from_presentation(K, lam, a)
            if A.C not in seen:
                seen.add(A.C)
                yield A


@pytest.mark.parametrize("name,n", [("F2", 1), ("F2", 2), ("F2", 3), ("F3", 1), ("F3", 2), ("F3", 3)])
def test_completeness_against_brute_force(name, n):
    K = FieldSpec.parse(name)
    table = atlas.enumerate_classes(K, n)
    for A in all_algebras(K, n):
        matches = table.matches(A)
        assert len(matches) == 1
        oracle = [k for k, e in enumerate(table.entries) if atlas.brute_force_iso(A, e.algebra)]
        assert oracle == matches


def test_gl_order():
    assert atlas.gl_order(3, 3) == 11232
    assert atlas.gl_order(4, 3) == 181440
    assert len(atlas._invertible_matrices(FieldSpec.parse("F3"), 3)) == 11232
    assert len(atlas._invertible_matrices(FieldSpec.parse("F2"), 4)) == atlas.gl_order(2, 4)


def test_brute_force_examples():
    A = alg("F3", [0, 1, 1], [1, 0, 0])
    B = alg("F3", [0, 1, 2], [1, 0, 0])
    assert not atlas.brute_force_iso(A, B)
    F = atlas.brute_force_witness(A, A)
    assert F is not None and evo.check_morphism(F, A, A)


def test_oracle_symmetry():
    pairs = list(atlas.random_pairs(FieldSpec.parse("F3"), 3, 40, seed=7))
    for A, B in pairs:
        assert atlas.brute_force_iso(A, B) == atlas.brute_force_iso(B, A)


def test_brute_force_limits():
    with pytest.raises(BudgetExceeded):
        atlas.brute_force_iso(alg("F5", [1, 1, 1], [1, 0, 0]), alg("F5", [1, 1, 1], [1, 0, 0]))
    with pytest.raises(UnsupportedField):
        atlas.brute_force_iso(alg("R", [1], [1]), alg("R", [1], [1]))


def test_disguised_pairs_are_isomorphic():
    K = FieldSpec.parse("F5")
    for k, (A, B) in enumerate(atlas.random_pairs(K, 3, 30, seed=3)):
        if k % 2:
            v = evo.is_isomorphic(A, B)
            assert v.isomorphic and evo.check_morphism(v.witness, A, B)


def test_oracle_check_report():
    report = atlas.oracle_check(FieldSpec.parse("F2"), 3, 30, seed=5)
    assert report.ok and report.agreements == 30
    assert 0 < report.isomorphic < 30


def test_enumerate_rejects_bad_input():
    with pytest.raises(InputError):
        atlas.enumerate_classes(FieldSpec.parse("F3"), 0)
    with pytest.raises(UnsupportedField):
        atlas.enumerate_classes(FieldSpec.parse("Q"), 2)
    with pytest.raises(BudgetExceeded):
        atlas.enumerate_classes(FieldSpec.parse("F3"), 3, budget=10)


def test_unknown_case():
    with pytest.raises(InputError):
        atlas.verify_paper("f7-dim2")


def test_report_c_dim4_passes():
    report = atlas.verify_paper("c-dim4")
    assert report.verdict
    assert report.to_dict()["verdict"] == "pass"
    assert any("four" in c.note for c in report.checks)


def test_report_f9_exposes_collapses():
    report = atlas.verify_paper("f9-dim3")
    assert all(len(r.matches) == 1 for r in report.representatives)
    pairs = [tuple(c["labels"]) for c in report.collapses]
    assert ("3a", "3b") in pairs and ("3e", "3f") in pairs and ("2a", "2b") in pairs and ("1c", "1d") in pairs
    for c in report.collapses:
        reps = {r.label: r for r in report.representatives}
        assert reps[c["labels"][0]].matches == reps[c["labels"][1]].matches
    assert not report.verdict


def test_report_f4_orbits_and_group():
    report = atlas.verify_paper("f4-dim3")
    checks = {c.name: c for c in report.checks}
    assert checks["orthogonal group"].ok and checks["isotropic orbits"].ok
    assert checks["count IsotropicNonAnn dimAnn=1"].computed == 1


def test_report_r_dim3_signatures():
    report = atlas.verify_paper("r-dim3")
    checks = {c.name: c for c in report.checks}
    assert checks["Idempotent signatures"].ok and checks["count Idempotent"].ok
    assert checks["count NullCube"].computed == 3
    flips = [c for c in report.checks if c.name.startswith("flavour of")]
    assert len(flips) == 4


def test_report_text_and_json_agree():
    report = atlas.verify_paper("f4-dim3")
    text = report.to_text()
    assert "verdict: FAIL" in text
    assert report.to_dict()["verdict"] == "fail"
