"""Evolution algebras whose square is one-dimensional.

An algebra is given by its structure matrix ``C`` in a natural basis: row i
holds the coordinates of e_i^2, and e_i e_j = 0 for i != j.  When rank(C) = 1
we can write C = lambda (x) a, so that xy = <x, y> a for the diagonal form
<x, y> = sum_i lambda_i x_i y_i.

Isomorphism.  A linear bijection F is an isomorphism A -> B exactly when
F(a) = c b and <Fx, Fy>_B = c <x, y>_A for some nonzero c.  Because the
generator is only defined up to a scalar, the form of an algebra with
a^2 = 0 is only defined up to rescaling; the complete invariants are

* idempotent flavour: the isometry class of the canonical form mu * lambda
  (mu = <a, a>, so the idempotent e = a / mu has norm 1), plus in
  characteristic 2 the orbit of e under the orthogonal group of W;
* a in Ann(A): dim Ann(A) and the similarity class of W;
* a isotropic, not in Ann(A): dim Ann(A) and the similarity class of W, plus
  in characteristic 2 the orbit of w (the W-part of a) under O(W) x K*.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field

from . import forms
from . import linalg as la
from .errors import (InputError, PreconditionError, RankTooLarge, RankZero, UnsupportedField,
                     WitnessUnavailable, FieldMismatch)
from .fields import QUADRATIC_CLOSURE
from .forms import DiagonalForm, FormInvariants


class Flavor(enum.IntEnum):
    NULL_CUBE = 1
    ISOTROPIC = 2
    IDEMPOTENT = 3

    @property
    def label(self):
        return {1: "NullCube", 2: "IsotropicNonAnn", 3: "Idempotent"}[self.value]

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class EvolutionAlgebra:
    field: object
    C: tuple
    label: str | None = dc_field(default=None, compare=False)

    @property
    def n(self):
        return len(self.C)

    def product(self, u, v):
        out = [self.field.zero] * self.n
        for k in range(self.n):
            c = u[k] * v[k]
            if c:
                for t, x in enumerate(self.C[k]):
                    if x:
                        out[t] = out[t] + c * x
        return tuple(out)

    def structure_text(self):
        return la.format_matrix(self.field, self.C)


def validate(field, n, C, label=None):
    """Build an algebra from an n x n structure matrix, insisting on rank 1."""
    if len(C) != n or any(len(row) != n for row in C):
        raise InputError(f"structure matrix must be {n} x {n}")
    rows = tuple(tuple(_coerce(field, x) for x in row) for row in C)
    r = la.rank(field, rows)
    if r == 0:
        raise RankZero("structure matrix is zero: A² = 0, so the hypothesis dim(A²) = 1 fails")
    if r > 1:
        raise RankTooLarge(f"structure matrix has rank {r}: the hypothesis dim(A²) = 1 fails")
    return EvolutionAlgebra(field, rows, label)


def _coerce(field, x):
    if isinstance(x, str):
        return field.parse_scalar(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return field(x)
    return field.check(x)


def from_presentation(field, lam, a, label=None):
    """The algebra with xy = <x, y>_lambda a."""
    lam = [_coerce(field, x) for x in lam]
    a = [_coerce(field, x) for x in a]
    C = tuple(tuple(l * x for x in a) for l in lam)
    return validate(field, len(lam), C, label)


@dataclass(frozen=True)
class OneDimSquarePresentation:
    field: object
    a: tuple
    lam: tuple

    def gram(self):
        return DiagonalForm(self.field, self.lam)

    def pair(self, u, v):
        return la.bil(self.field, self.lam, u, v)


def presentation(A):
    """Generator a (first nonzero coordinate 1) and weights lambda with C = lambda (x) a."""
    field = A.field
    row = next(r for r in A.C if any(r))
    lead = next(x for x in row if x)
    a = tuple(x / lead for x in row)
    k = next(i for i, x in enumerate(a) if x)
    lam = tuple(r[k] for r in A.C)
    assert all(tuple(l * x for x in a) == r for l, r in zip(lam, A.C))
    return OneDimSquarePresentation(field, a, lam)


def annihilator(P):
    """Indices i with lambda_i = 0 (they span Ann(A)) and their number."""
    idx = tuple(i for i, x in enumerate(P.lam) if not x)
    return idx, len(idx)


def classify_flavor(P):
    if P.pair(P.a, P.a):
        return Flavor.IDEMPOTENT
    if all(not (x * l) for x, l in zip(P.a, P.lam)):
        return Flavor.NULL_CUBE
    return Flavor.ISOTROPIC


def idempotent(P):
    mu = P.pair(P.a, P.a)
    if not mu:
        raise PreconditionError("(A²)² = 0: there is no nonzero idempotent")
    e = tuple(x / mu for x in P.a)
    # e.e = <e, e> a = a / mu
    assert la.scale(P.pair(e, e), P.a) == e
    return e


@dataclass(frozen=True)
class _Parts:
    pres: OneDimSquarePresentation
    flavor: Flavor
    ann: tuple
    W: tuple
    D: DiagonalForm      # form on W
    w: tuple             # W-part of a
    x: tuple             # Ann-part of a
    mu: object           # <a, a>


def _parts(A):
    P = presentation(A)
    ann, _ = annihilator(P)
    W = tuple(i for i in range(A.n) if i not in ann)
    return _Parts(P, classify_flavor(P), ann, W, DiagonalForm(A.field, tuple(P.lam[i] for i in W)),
                  tuple(P.a[i] for i in W), tuple(P.a[i] for i in ann), P.pair(P.a, P.a))


@dataclass(frozen=True)
class InvariantBundle:
    """Complete isomorphism invariant over the supported fields."""

    n: int
    dim_ann: int
    flavor: Flavor
    w_part: FormInvariants
    orbit_label: tuple | None = None

    def to_dict(self, field):
        out = {"n": self.n, "dim_ann": self.dim_ann, "flavor": int(self.flavor),
               "flavor_name": self.flavor.label, "w_part": self.w_part.to_dict()}
        if self.orbit_label is not None:
            out["orbit_label"] = [field.format(x) for x in self.orbit_label]
        return out

    def describe(self, field):
        s = f"n={self.n}, dimAnn={self.dim_ann}, {self.flavor.label}, W: {self.w_part}"
        if self.orbit_label is not None:
            s += ", orbit " + "(" + ",".join(field.format(x) for x in self.orbit_label) + ")"
        return s


def _require_classifying(field):
    if not field.is_finite and field.mode is None:
        raise UnsupportedField("isomorphism over Q itself is not decided; use mode real or quadratic-closure")


def _unit_form(field, m):
    return DiagonalForm(field, (field.one,) * m)


def _to_unit_coordinates(field, D, v):
    """Characteristic 2: D = S^2 with S diagonal; S v lives in the identity form."""
    return tuple(field.sqrt(d) * x for d, x in zip(D.d, v))


def invariants(A):
    field = A.field
    _require_classifying(field)
    pt = _parts(A)
    label = None
    if pt.flavor is Flavor.IDEMPOTENT:
        canon = pt.D.scaled(pt.mu)
        w_part = forms.form_invariants(canon)
        if field.characteristic == 2:
            e = tuple(x / pt.mu for x in pt.w)
            label = forms.orbit_representative(_unit_form(field, canon.n),
                                               _to_unit_coordinates(field, canon, e))
    else:
        w_part = forms.similarity_invariants(pt.D)
        if pt.flavor is Flavor.ISOTROPIC and field.characteristic == 2:
            label = forms.orbit_representative(_unit_form(field, pt.D.n),
                                               _to_unit_coordinates(field, pt.D, pt.w), scalars=True)
    return InvariantBundle(A.n, len(pt.ann), pt.flavor, w_part, label)


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def _difference(ia, ib, field):
    if ia.n != ib.n:
        return f"dimensions {ia.n} vs {ib.n}"
    if ia.flavor != ib.flavor:
        return f"flavours {ia.flavor.label} vs {ib.flavor.label}"
    if ia.dim_ann != ib.dim_ann:
        return f"annihilator dimensions {ia.dim_ann} vs {ib.dim_ann}"
    wa, wb = ia.w_part, ib.w_part
    if wa != wb:
        if wa.rank == wb.rank and wa.discriminant is not None:
            return f"discriminants {wa.discriminant} vs {wb.discriminant}"
        if wa.rank == wb.rank and wa.signature is not None:
            return "signatures ({},{}) vs ({},{})".format(*wa.signature, *wb.signature)
        return f"W forms differ: {wa} vs {wb}"

    def fmt(v):
        return "(" + ",".join(field.format(x) for x in v) + ")"
    return f"orbit labels {fmt(ia.orbit_label)} vs {fmt(ib.orbit_label)}"


def is_isomorphic(A, B, witness=True):
    """Decide A = B; positive answers carry an explicit isomorphism when one is built.

    Over finite fields a witness is always produced.  Over the rational modes
    the decision is the classification over R or C and the witness is None
    when the isomorphism needs irrational scalars.
    """
    if A.field != B.field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    ia, ib = invariants(A), invariants(B)
    if ia != ib:
        return IsoVerdict(False, None, _difference(ia, ib, A.field))
    if not witness:
        return IsoVerdict(True, None, "equal invariants")
    try:
        F = _build_witness(A, B)
    except WitnessUnavailable:
        if A.field.is_finite:
            raise
        return IsoVerdict(True, None, "equal invariants (no rational witness constructed)")
    return IsoVerdict(True, F, "equal invariants; witness verified")


def _multipliers(field, pa, pb):
    if pa.flavor is Flavor.IDEMPOTENT:
        return [pa.mu / pb.mu]
    if pa.flavor is Flavor.ISOTROPIC and field.characteristic == 2:
        return list(field.elements()[1:])
    c = forms.similarity_factor(pa.D, pb.D)
    return [] if c is None else [c]


def _build_witness(A, B):
    field = A.field
    pa, pb = _parts(A), _parts(B)
    for c in _multipliers(field, pa, pb):
        Dc = pa.D.scaled(c)
        if not forms.isometric(Dc, pb.D):
            continue
        if pa.flavor is Flavor.NULL_CUBE:
            theta = forms.isometry(Dc, pb.D)
        else:
            theta = forms.transporter(Dc, pa.w, pb.D, la.scale(c, pb.w))
            if theta is None:
                continue
        F = _assemble(field, A.n, pa, pb, c, theta)
        if not check_morphism(F, A, B):
            raise AssertionError("assembled witness fails the morphism check")
        return F
    raise AssertionError("equal invariants but no witness was found")


def _assemble(field, n, pa, pb, c, theta):
    d = len(pa.ann)
    target = la.scale(c, pb.x)
    if pa.flavor is Flavor.NULL_CUBE:
        src = la.from_columns(la.complete_basis(field, [pa.x], d))
        dst = la.from_columns(la.complete_basis(field, [target], d))
        xi = la.matmul(field, dst, la.inverse(field, src))
        shear, ell = None, None
    else:
        xi = la.identity(field, d)
        shear = la.sub(target, la.matvec(field, xi, pa.x)) if d else ()
        k = next(i for i, v in enumerate(pa.w) if v)
        ell = [field.zero] * len(pa.w)
        ell[k] = field.one / pa.w[k]
    cols = [None] * n
    for r, j in enumerate(pa.ann):
        col = [field.zero] * n
        for s, i in enumerate(pb.ann):
            col[i] = xi[s][r]
        cols[j] = tuple(col)
    for s, j in enumerate(pa.W):
        col = [field.zero] * n
        for t, i in enumerate(pb.W):
            col[i] = theta[t][s]
        if shear is not None and ell[s]:
            for t, i in enumerate(pb.ann):
                col[i] = col[i] + ell[s] * shear[t]
        cols[j] = tuple(col)
    return la.from_columns(cols)


def check_morphism(F, A, B):
    """True iff F is invertible and F(e_i)F(e_j) = F(e_i e_j) for all i <= j."""
    field = A.field
    if B.field != field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    n = A.n
    if B.n != n or len(F) != n or any(len(r) != n for r in F):
        raise InputError("dimension mismatch")
    if not la.is_invertible(field, F):
        return False
    images = la.columns(F)
    zero = tuple(field.zero for _ in range(n))
    for i in range(n):
        for j in range(i, n):
            lhs = B.product(images[i], images[j])
            rhs = la.matvec(field, F, A.C[i]) if i == j else zero
            if lhs != rhs:
                return False
    return True


# -- canonical forms ---------------------------------------------------------


def realize(field, bundle):
    """The canonical algebra with the given invariants (annihilator coordinates first)."""
    _require_classifying(field)
    n, d = bundle.n, bundle.dim_ann
    m = n - d
    zero, one = field.zero, field.one
    W = forms.canonical_diagonal(field, bundle.w_part)
    if bundle.flavor is Flavor.ISOTROPIC and not field.is_finite and field.mode == QUADRATIC_CLOSURE:
        # same class over the closure, but with a rational isotropic vector
        W = (one, -one) + W[2:]
    lam = (zero,) * d + tuple(W)
    if bundle.flavor is Flavor.NULL_CUBE:
        if d < 1:
            raise PreconditionError("a must lie in a nonzero annihilator")
        a = (one,) + (zero,) * (n - 1)
    elif bundle.orbit_label is not None:
        a = (zero,) * d + tuple(bundle.orbit_label)
    elif bundle.flavor is Flavor.IDEMPOTENT:
        if m < 1 or W[0] != one:
            raise PreconditionError(f"W of type {bundle.w_part} has no unit vector in canonical position")
        a = (zero,) * d + (one,) + (zero,) * (m - 1)
    else:
        w = forms.find_isotropic(DiagonalForm(field, tuple(W)))
        if w is None:
            raise PreconditionError(f"W of type {bundle.w_part} has no isotropic vector")
        a = (zero,) * d + tuple(w)
    A = from_presentation(field, lam, a)
    if invariants(A) != bundle:
        raise PreconditionError(f"invariants {bundle.describe(field)} are not realisable")
    return A


def canonical_form(A):
    return realize(A.field, invariants(A))
