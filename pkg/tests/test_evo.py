from fractions import Fraction

import pytest

from conftest import alg
from evosquare import atlas, evo
from evosquare import linalg as la
from evosquare.errors import FieldMismatch, InputError, PreconditionError, RankTooLarge, RankZero, UnsupportedField
from evosquare.evo import Flavor
from evosquare.fields import FieldSpec


def test_validate_rejects_wrong_rank():
    K = FieldSpec.parse("F3")
    with pytest.raises(RankZero):
        evo.validate(K, 2, [["0", "0"], ["0", "0"]])
    with pytest.raises(RankTooLarge) as info:
        evo.validate(K, 2, [["1", "0"], ["0", "1"]])
    assert info.value.hypothesis == "dim(A²) = 1"
    with pytest.raises(InputError):
        evo.validate(K, 2, [["1", "0"]])


def test_presentation_recovers_product():
    A = alg("F9", ["1+i", 0, 2], [0, "i", 1])
    P = evo.presentation(A)
    assert P.a[next(i for i, x in enumerate(P.a) if x)] == A.field.one
    for i in range(3):
        assert tuple(P.lam[i] * x for x in P.a) == A.C[i]


def test_product_is_form_times_generator():
    A = alg("F5", [1, 2, 0], [1, 1, 3])
    P = evo.presentation(A)
    K = A.field
    u, v = (K(1), K(2), K(3)), (K(4), K(0), K(1))
    assert A.product(u, v) == la.scale(P.pair(u, v), P.a)


@pytest.mark.parametrize("lam,a,flavor,d", [
    ([1, 1, 1], [1, 0, 0], Flavor.IDEMPOTENT, 0),
    ([0, 1, 1], [1, 0, 0], Flavor.NULL_CUBE, 1),
    ([0, 1, 2], [1, 1, 1], Flavor.ISOTROPIC, 1),
    ([0, 0, 1], [0, 0, 1], Flavor.IDEMPOTENT, 2),
])
def test_flavours(lam, a, flavor, d):
    P = evo.presentation(alg("F3", lam, a))
    assert evo.classify_flavor(P) is flavor
    assert evo.annihilator(P)[1] == d


def test_idempotent():
    A = alg("F5", [2, 1, 0], [1, 1, 0])
    e = evo.idempotent(evo.presentation(A))
    assert A.product(e, e) == e and any(e)
    with pytest.raises(PreconditionError):
        evo.idempotent(evo.presentation(alg("F5", [0, 1, 0], [1, 0, 0])))


# Each row: field, (lambda_A, a_A), (lambda_B, a_B), isomorphic?  The finite ones
# are re-checked against the exhaustive oracle below.
CASES = [
    ("F3", ([0, 1, 1], [1, 0, 0]), ([0, 1, 2], [1, 0, 0]), False),
    ("F3", ([0, 0, 1], [1, 0, 0]), ([0, 0, 2], [1, 0, 0]), True),
    ("F3", ([1, 1, 1], [1, 0, 0]), ([2, 1, 1], [1, 0, 0]), True),
    ("F3", ([1, 1, 1], [1, 0, 0]), ([1, 1, 2], [1, 0, 0]), False),
    ("F3", ([1, 1, 1], [0, 1, 1]), ([1, 2, 2], [0, 1, 1]), False),
    ("F3", ([1, 1, 1], [1, 1, 1]), ([2, 2, 2], [1, 1, 1]), True),
    ("F3", ([0, 1, 2], [1, 1, 1]), ([0, 1, 2], [0, 1, 1]), True),
    ("F4", ([1, 1, 1], [1, 1, 1]), ([1, 1, 1], [1, 0, 0]), False),
    ("F4", ([0, 1, 1], [0, 1, 1]), ([0, 1, 1], [1, 1, 1]), True),
    ("F4", ([0, 1, 1], [1, 1, 1]), ([0, 1, 1], [1, "a", "a"]), True),
    ("F4", ([1, 1, 0], [1, 0, 0]), ([1, 0, 0], [1, 0, 0]), False),
    ("F2", ([1, 1, 1, 1], [1, 1, 0, 0]), ([1, 1, 1, 1], [1, 1, 1, 1]), False),
    ("F9", ([1, 1, 1], [1, 0, 0]), (["1+i", 1, 1], [1, 0, 0]), True),
    ("F9", ([0, 1, 1], [0, 1, 0]), ([0, "1+i", 1], [0, 1, 0]), False),
]


@pytest.mark.parametrize("name,x,y,expected", CASES)
def test_decision_and_witness(name, x, y, expected):
    A, B = alg(name, *x), alg(name, *y)
    v = evo.is_isomorphic(A, B)
    assert v.isomorphic is expected
    if expected:
        assert v.witness is not None and evo.check_morphism(v.witness, A, B)
    else:
        assert v.witness is None and v.reason


@pytest.mark.parametrize("name,x,y,expected", [c for c in CASES if c[0] != "F9"])
def test_cases_agree_with_oracle(name, x, y, expected):
    assert atlas.brute_force_iso(alg(name, *x), alg(name, *y)) is expected


def test_reasons_name_the_invariant():
    v = evo.is_isomorphic(alg("F3", [0, 1, 1], [1, 0, 0]), alg("F3", [0, 1, 2], [1, 0, 0]))
    assert v.reason == "discriminants [1] vs [ω]"
    v = evo.is_isomorphic(alg("F3", [0, 1, 1], [1, 0, 0]), alg("F3", [1, 1, 1], [1, 0, 0]))
    assert "flavours" in v.reason


def test_real_sign_flip_is_isomorphic():
    A, B = alg("R", [0, 0, 1], [1, 0, 0]), alg("R", [0, 0, -1], [1, 0, 0])
    v = evo.is_isomorphic(A, B)
    assert v.isomorphic and evo.check_morphism(v.witness, A, B)


def test_real_signature_distinguishes_idempotent_flavour():
    A, B = alg("R", [1, 1, 1], [1, 0, 0]), alg("R", [1, 1, -1], [1, 0, 0])
    assert not evo.is_isomorphic(A, B)


def test_real_witness_with_rational_scalars():
    A = alg("R", [1, 4, 0], [1, 0, 0])
    B = alg("R", [1, 1, 0], [1, 0, 0])
    v = evo.is_isomorphic(A, B)
    assert v.isomorphic and evo.check_morphism(v.witness, A, B)


def test_closure_without_rational_witness():
    A = alg("C", [1, 1, 1, 0], [1, 2, 0, 5])
    v = evo.is_isomorphic(A, evo.canonical_form(A))
    assert v.isomorphic and v.witness is None


def test_plain_rationals_are_not_classified():
    with pytest.raises(UnsupportedField):
        evo.invariants(alg("Q", [1, 1], [1, 0]))


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        evo.is_isomorphic(alg("F3", [1], [1]), alg("F5", [1], [1]))


def test_check_morphism_rejects():
    A = alg("F3", [1, 1], [1, 0])
    K = A.field
    singular = ((K.one, K.one), (K.one, K.one))
    assert not evo.check_morphism(singular, A, A)
    swap = ((K.zero, K.one), (K.one, K.zero))
    assert not evo.check_morphism(swap, A, A)
    assert evo.check_morphism(la.identity(K, 2), A, A)


@pytest.mark.parametrize("name", ["F2", "F3", "F4", "F5", "F9", "R", "C"])
def test_canonical_form_is_idempotent_and_equivalent(name):
    K = FieldSpec.parse(name)
    for entry in atlas.enumerate_classes(K, 3).entries:
        C = entry.algebra
        assert evo.canonical_form(C) == C
        assert evo.invariants(C) == entry.bundle


def test_canonical_form_of_disguised_algebra():
    A = alg("F5", [0, 2, 3], [4, 1, 3])
    C = evo.canonical_form(A)
    v = evo.is_isomorphic(A, C)
    assert v.isomorphic and evo.check_morphism(v.witness, A, C)


def test_realize_rejects_impossible_bundles():
    K = FieldSpec.parse("F9")
    bundle = evo.InvariantBundle(3, 2, Flavor.IDEMPOTENT, evo.forms.FormInvariants(1, 1, discriminant=evo.forms.SquareClass.OMEGA))
    with pytest.raises(PreconditionError):
        evo.realize(K, bundle)
