import itertools
from fractions import Fraction

import pytest

from evosquare import forms
from evosquare import linalg as la
from evosquare.errors import PreconditionError, UnsupportedField, WitnessUnavailable
from evosquare.fields import FieldSpec, SquareClass
from evosquare.forms import DiagonalForm, FormInvariants, GramForm


def D(field, *entries):
    if isinstance(field, str):
        field = FieldSpec.parse(field)
    return DiagonalForm(field, tuple(field(x) if isinstance(x, int) else field.parse_scalar(x) for x in entries))


def naive_group(form):
    K = form.field
    n = form.n
    G = form.matrix()
    out = []
    for entries in itertools.product(K.elements(), repeat=n * n):
        M = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if la.congruent(K, M, G) == G:
            out.append(M)
    return out


def test_diagonalize_hyperbolic_plane():
    Q = FieldSpec.parse("Q")
    G = GramForm(Q, ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))))
    P, Dg = forms.diagonalize(G)
    assert la.congruent(Q, P, G.G) == Dg.matrix()
    assert Dg.d == (Fraction(2), Fraction(-1, 2))


def test_gram_must_be_symmetric():
    Q = FieldSpec.parse("Q")
    with pytest.raises(PreconditionError):
        GramForm(Q, ((Fraction(0), Fraction(1)), (Fraction(2), Fraction(0))))


def test_char2_refuses_alternating_forms():
    K = FieldSpec.parse("F2")
    G = GramForm(K, ((K.zero, K.one), (K.one, K.zero)))
    with pytest.raises(PreconditionError):
        forms.diagonalize(G)


def test_invariants_f9():
    inv = forms.form_invariants(D("F9", "1+i", 1, 1))
    assert inv == FormInvariants(3, 3, discriminant=SquareClass.OMEGA)
    assert forms.isometric(D("F9", 1, 1), D("F9", 1, -1))
    assert not forms.isometric(D("F9", 1, 1), D("F9", "1+i", 1))


def test_invariants_real():
    inv = forms.form_invariants(D("R", 1, -1, 0))
    assert inv.rank == 2 and inv.signature == (1, 1)
    assert forms.similarity_invariants(D("R", -1, -1, 1)).signature == (2, 1)


def test_similarity_normalises_odd_rank():
    K = FieldSpec.parse("F9")
    assert forms.similarity_invariants(D(K, "1+i", 1, 1)) == forms.similarity_invariants(D(K, 1, 1, 1))
    assert forms.similarity_invariants(D(K, "1+i", 1)) != forms.similarity_invariants(D(K, 1, 1))
    c = forms.similarity_factor(D(K, 0, 0, 1), D(K, 0, 0, "1+i"))
    assert c == K.nonsquare


def test_rational_needs_a_mode():
    with pytest.raises(UnsupportedField):
        forms.form_invariants(D("Q", 1, 2))


def test_canonical_diagonal_realises_invariants():
    for name in ("F3", "F9", "R", "C", "F4"):
        K = FieldSpec.parse(name)
        for entries in [(1, 1, 0), (1, 1, 1), (1, 0, 0)]:
            for c in K.representatives():
                form = D(K, *entries).scaled(c)
                inv = forms.form_invariants(form)
                canon = DiagonalForm(K, forms.canonical_diagonal(K, inv))
                assert forms.form_invariants(canon) == inv


def test_represent_and_isotropic():
    K = FieldSpec.parse("F9")
    v = forms.represent_value(D(K, 1, 1), K.nonsquare)
    assert D(K, 1, 1).value(v) == K.nonsquare
    assert forms.find_isotropic(D(K, "1+i", 1)) is None
    assert forms.find_isotropic(D("F4", 1, 1)) == (FieldSpec.parse("F4").one,) * 2
    R = FieldSpec.parse("R")
    assert forms.find_isotropic(D(R, 1, 1)) is None
    w = forms.find_isotropic(D(R, 1, -1))
    assert any(w) and D(R, 1, -1).value(w) == 0


def test_isotropic_over_closure_without_rational_witness():
    C = FieldSpec.parse("C")
    # 1 + 3 = 4 is a square, so (1,3) would be easy; (1,1) needs sqrt(-1)
    assert forms.has_isotropic(D(C, 1, 1))
    with pytest.raises(WitnessUnavailable):
        forms.find_isotropic(D(C, 1, 1))


def test_hyperbolic_pair_real():
    R = FieldSpec.parse("R")
    form = D(R, 1, -1)
    w = (Fraction(1), Fraction(1))
    w2 = forms.hyperbolic_pair(form, w)
    assert form.pair(w, w2) == 1 and form.value(w2) == 0


def test_orthogonal_group_f4_is_klein():
    K = FieldSpec.parse("F4")
    a, b = K.parse_scalar("a"), K.parse_scalar("b")
    one, zero = K.one, K.zero
    group = set(forms.orthogonal_group(D(K, 1, 1)))
    assert group == {((one, zero), (zero, one)), ((zero, one), (one, zero)),
                     ((a, b), (b, a)), ((b, a), (a, b))}


@pytest.mark.parametrize("name,n,order", [("F3", 2, 8), ("F3", 3, 48), ("F4", 2, 4), ("F2", 3, 6), ("F5", 2, 8)])
def test_orthogonal_group_against_naive_filter(name, n, order):
    form = D(name, *([1] * n))
    group = forms.orthogonal_group(form)
    assert len(group) == order
    assert set(group) == set(naive_group(form))


def test_orthogonal_group_orders_of_non_identity_forms():
    # O(1,1) over F5 contains the split torus of order 4 and reflections: 8 in all
    form = D("F5", 1, 2)
    assert len(forms.orthogonal_group(form)) == len(naive_group(form))


def test_isotropic_orbits_f4():
    K = FieldSpec.parse("F4")
    orbits = forms.isotropic_orbits(D(K, 1, 1))
    got = {o.members for o in orbits}
    assert got == {((K.parse_scalar(x),) * 2,) for x in ("1", "a", "b")}


def test_isometry_maps_forms():
    for name in ("F3", "F9", "F4", "R"):
        K = FieldSpec.parse(name)
        pairs = [((1, 1, 0), (0, 1, 1)), ((4, 4), (1, 1)) if name == "R" else ((-1, -1), (1, 1))]
        for x, y in pairs:
            A, B = D(K, *x), D(K, *y)
            if forms.isometric(A, B):
                theta = forms.isometry(A, B)
                assert la.congruent(K, theta, B.matrix()) == A.matrix()


def test_transporter_char_not_2():
    K = FieldSpec.parse("F3")
    form = D(K, 1, 1)
    w1 = (K.one, K.one)
    w2 = (K.one, K(2))
    theta = forms.transporter(form, w1, form, w2)
    assert la.matvec(K, theta, w1) == w2
    assert la.congruent(K, theta, form.matrix()) == form.matrix()


def test_transporter_anisotropic():
    K = FieldSpec.parse("F5")
    form = D(K, 1, 1, 1)
    w1 = (K.one, K.zero, K.zero)
    w2 = (K.zero, K.zero, K(4))
    theta = forms.transporter(form, w1, form, w2)
    assert la.matvec(K, theta, w1) == w2


def test_transporter_char2_may_fail():
    K = FieldSpec.parse("F4")
    form = D(K, 1, 1)
    a = K.parse_scalar("a")
    assert forms.transporter(form, (K.one, K.one), form, (a, a)) is None


def test_orbit_representative_is_least():
    K = FieldSpec.parse("F4")
    form = D(K, 1, 1, 1)
    v = (K.one, K.one, K.one)
    assert forms.orbit_representative(form, v) == v
    e = (K.zero, K.one, K.zero)
    assert forms.orbit_representative(form, e) == (K.zero, K.zero, K.one)
