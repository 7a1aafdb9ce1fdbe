from fractions import Fraction

import pytest

from evosquare import linalg as la
from evosquare.errors import PreconditionError
from evosquare.fields import FieldSpec

Q = FieldSpec.parse("Q")


def m(rows):
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def test_inverse_and_rank():
    A = m([[1, 2], [3, 4]])
    assert la.matmul(Q, A, la.inverse(Q, A)) == la.identity(Q, 2)
    assert la.rank(Q, m([[1, 2], [2, 4]])) == 1
    with pytest.raises(PreconditionError):
        la.inverse(Q, m([[1, 2], [2, 4]]))


def test_nullspace_and_completion():
    M = m([[1, 1, 0]])
    ns = la.nullspace(Q, M)
    assert len(ns) == 2 and all(la.matvec(Q, M, v) == (0,) for v in ns)
    basis = la.complete_basis(Q, [(Fraction(0), Fraction(1), Fraction(1))], 3)
    assert la.rank(Q, tuple(basis)) == 3


def test_diag_congruent_matches_general_congruence():
    P = m([[1, 2, 0], [0, 1, 3], [2, 0, 1]])
    d = (Fraction(1), Fraction(-2), Fraction(0))
    assert la.diag_congruent(Q, P, d) == la.congruent(Q, P, la.diag(Q, d))
