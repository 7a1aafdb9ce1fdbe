"""Symmetric bilinear forms over the supported fields.

Invariants, isometry decisions and explicit isometries.  Diagonal forms are
the common currency: evolution algebras hand us diagonal Gram matrices for
free, and everything else is diagonalized first (characteristic != 2 only).

An isometry ``theta`` from a form ``D1`` to a form ``D2`` is stored as the
matrix whose columns are the images of the basis vectors, so that
``theta^T D2 theta = D1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .errors import BudgetExceeded, FieldMismatch, PreconditionError, UnsupportedField, WitnessUnavailable
from .fields import QUADRATIC_CLOSURE, REAL, SquareClass

GROUP_BUDGET = 2 ** 24
SEARCH_BUDGET = 2 ** 16
RATIONAL_HEIGHT = 12


@dataclass(frozen=True)
class GramForm:
    field: object
    G: tuple

    def __post_init__(self):
        G = tuple(tuple(r) for r in self.G)
        object.__setattr__(self, "G", G)
        if any(G[i][j] != G[j][i] for i in range(len(G)) for j in range(i)):
            raise PreconditionError("Gram matrix is not symmetric")

    @property
    def n(self):
        return len(self.G)


@dataclass(frozen=True)
class DiagonalForm:
    field: object
    d: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(self.field.check(x) for x in self.d))

    @property
    def n(self):
        return len(self.d)

    def value(self, v):
        return la.quad(self.field, self.d, v)

    def pair(self, u, v):
        return la.bil(self.field, self.d, u, v)

    def nondegenerate_indices(self):
        return tuple(i for i, x in enumerate(self.d) if x)

    def restrict(self, indices):
        return DiagonalForm(self.field, tuple(self.d[i] for i in indices))

    def scaled(self, c):
        return DiagonalForm(self.field, tuple(c * x for x in self.d))

    def matrix(self):
        return la.diag(self.field, self.d)

    def is_nondegenerate(self):
        return all(self.d)

    def __str__(self):
        return "diag(" + ", ".join(self.field.format(x) for x in self.d) + ")"


@dataclass(frozen=True)
class FormInvariants:
    """Rank plus the field-dependent detail that completes it.

    ``signature`` is set in real-closure mode, ``discriminant`` over finite
    fields of odd characteristic; otherwise the rank alone is complete.
    """

    n: int
    rank: int
    signature: tuple | None = None
    discriminant: SquareClass | None = None

    @property
    def detail(self):
        if self.signature is not None:
            return "signature"
        if self.discriminant is not None:
            return "discriminant"
        return "rank-only"

    def __str__(self):
        s = f"rank {self.rank}"
        if self.signature is not None:
            s += f", signature ({self.signature[0]},{self.signature[1]})"
        if self.discriminant is not None:
            s += f", discriminant {self.discriminant}"
        return s

    def to_dict(self):
        out = {"n": self.n, "rank": self.rank, "detail": self.detail}
        if self.signature is not None:
            out["signature"] = list(self.signature)
        if self.discriminant is not None:
            out["discriminant"] = self.discriminant.value
        return out


def _same_field(*forms):
    f = forms[0].field
    for g in forms[1:]:
        if g.field != f:
            raise FieldMismatch(f"forms over {f} and {g.field}")
    return f


def _require_classifying(field):
    if not field.is_finite and field.mode is None:
        raise UnsupportedField("forms over Q need a mode (real or quadratic-closure) to be classified")


def _unit(field, n, i):
    return tuple(field.one if k == i else field.zero for k in range(n))


# -- invariants -------------------------------------------------------------


def radical_indices(D):
    """0-based indices of the zero diagonal entries (they span the radical)."""
    return tuple(i for i, x in enumerate(D.d) if not x)


def diagonalize(form):
    """Congruence diagonalization: returns (P, D) with P^T G P = diag(D)."""
    field = form.field
    n = form.n
    G = form.G
    if field.characteristic == 2:
        if any(G[i][j] for i in range(n) for j in range(n) if i != j):
            raise PreconditionError("cannot diagonalize a non-diagonal form in characteristic 2")
        return la.identity(field, n), DiagonalForm(field, tuple(G[i][i] for i in range(n)))
    A = [list(r) for r in G]
    P = [list(r) for r in la.identity(field, n)]

    def add_multiple(j, k, f):
        # e_j <- e_j + f e_k
        for r in range(n):
            A[r][j] = A[r][j] + f * A[r][k]
        for c in range(n):
            A[j][c] = A[j][c] + f * A[k][c]
        for r in range(n):
            P[r][j] = P[r][j] + f * P[r][k]

    def swap(j, k):
        A[j], A[k] = A[k], A[j]
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in P:
            row[j], row[k] = row[k], row[j]

    for k in range(n):
        if not A[k][k]:
            j = next((j for j in range(k + 1, n) if A[j][j]), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j]), None)
                if j is None:
                    continue
                add_multiple(k, j, field.one)
        piv = A[k][k]
        for j in range(k + 1, n):
            if A[k][j]:
                add_multiple(j, k, -A[k][j] / piv)
    P = tuple(tuple(r) for r in P)
    D = DiagonalForm(field, tuple(A[i][i] for i in range(n)))
    assert la.congruent(field, P, G) == D.matrix()
    return P, D


def form_invariants(D):
    field = D.field
    _require_classifying(field)
    nonzero = [x for x in D.d if x]
    rank = len(nonzero)
    if field.is_finite and field.p != 2:
        prod = field.one
        for x in nonzero:
            prod = prod * x
        return FormInvariants(D.n, rank, discriminant=field.square_class(prod))
    if not field.is_finite and field.mode == REAL:
        pos = sum(1 for x in nonzero if x > 0)
        return FormInvariants(D.n, rank, signature=(pos, rank - pos))
    return FormInvariants(D.n, rank)


def similarity_invariants(D):
    """Invariants of D up to isometry *and* a nonzero rescaling of the form.

    Rescaling by c multiplies the discriminant by c^rank and can swap the
    signature, so: odd-rank discriminants normalise to [1] and signatures to
    (max, min).
    """
    inv = form_invariants(D)
    if inv.signature is not None:
        p, q = inv.signature
        return FormInvariants(inv.n, inv.rank, signature=(max(p, q), min(p, q)))
    if inv.discriminant is not None and inv.rank % 2 == 1:
        return FormInvariants(inv.n, inv.rank, discriminant=SquareClass.ONE)
    return inv


def isometric(D1, D2):
    _same_field(D1, D2)
    return D1.n == D2.n and form_invariants(D1) == form_invariants(D2)


def similarity_factor(D1, D2):
    """A scalar c with c*D1 isometric to D2 (a square-class representative), or None."""
    field = _same_field(D1, D2)
    for c in field.representatives():
        if isometric(D1.scaled(c), D2):
            return c
    return None


def canonical_diagonal(field, inv):
    """The canonical diagonal entries realising ``inv`` (radical last)."""
    one, zero = field.one, field.zero
    pad = (zero,) * (inv.n - inv.rank)
    if inv.signature is not None:
        p, q = inv.signature
        return (one,) * p + (-one,) * q + pad
    if inv.discriminant is not None and inv.rank > 0:
        delta = one if inv.discriminant is SquareClass.ONE else field.nonsquare
        return (one,) * (inv.rank - 1) + (delta,) + pad
    return (one,) * inv.rank + pad


# -- representing values, isotropic vectors -----------------------------------


def _small_rationals(height=RATIONAL_HEIGHT):
    seen = {Fraction(0)}
    out = [Fraction(0)]
    for h in range(1, height + 1):
        for num in range(0, h + 1):
            for den in range(1, h + 1):
                if max(num, den) != h:
                    continue
                x = Fraction(num, den)
                for y in (x, -x):
                    if y not in seen:
                        seen.add(y)
                        out.append(y)
    return out


def _candidates(field):
    return field.elements() if field.is_finite else _small_rationals()


def _represent_fast(field, d, c):
    """Search single coordinates, then pairs, then (rationals) small triples."""
    n = len(d)
    idx = [i for i in range(n) if d[i]]
    zero = field.zero
    for i in idx:
        s = field.sqrt(c / d[i])
        if s is not None:
            v = [zero] * n
            v[i] = s
            return tuple(v)
    cands = _candidates(field)
    for i, j in itertools.combinations(idx, 2):
        for x in cands:
            s = field.sqrt((c - d[i] * x * x) / d[j])
            if s is not None:
                v = [zero] * n
                v[i], v[j] = x, s
                return tuple(v)
    if not field.is_finite:
        small = _small_rationals(4)
        for i, j, k in itertools.combinations(idx, 3):
            for x in small:
                for y in small:
                    s = field.sqrt((c - d[i] * x * x - d[j] * y * y) / d[k])
                    if s is not None:
                        v = [zero] * n
                        v[i], v[j], v[k] = x, y, s
                        return tuple(v)
    return None


def _exhaustive(field, D, predicate, budget):
    """First vector (enumeration order, supported on the nondegenerate part) satisfying predicate."""
    idx = D.nondegenerate_indices()
    if field.q ** len(idx) > budget:
        return None, False
    zero = field.zero
    for coords in itertools.product(field.elements(), repeat=len(idx)):
        v = [zero] * D.n
        for i, x in zip(idx, coords):
            v[i] = x
        v = tuple(v)
        if predicate(v):
            return v, True
    return None, True


def _represents_over_closure(D, c):
    """Decision over R / the quadratic closure (no witness)."""
    nonzero = [x for x in D.d if x]
    if D.field.mode == REAL:
        return any((x > 0) == (c > 0) for x in nonzero) or (
            any(x > 0 for x in nonzero) and any(x < 0 for x in nonzero))
    return bool(nonzero)


def represent_value(D, c, budget=SEARCH_BUDGET):
    """A vector v in the nondegenerate part with D(v) = c, or None if none exists.

    Finite fields search exhaustively in enumeration order when q^rank is
    within ``budget`` (so the first such vector is returned), otherwise fall
    back to a pairwise search, which is complete for rank >= 2.  Over the
    rationals a bounded search is used; WitnessUnavailable signals that a
    vector exists over R / C but none was found over Q.
    """
    field = D.field
    field.check(c)
    if not c:
        return tuple(field.zero for _ in D.d)
    if field.is_finite:
        v, done = _exhaustive(field, D, lambda v: D.value(v) == c, budget)
        if done:
            return v
        v = _represent_fast(field, D.d, c)
        if v is None and len(D.nondegenerate_indices()) >= 2:
            raise BudgetExceeded("representation search incomplete")
        return v
    _require_classifying(field)
    if not _represents_over_closure(D, c):
        return None
    v = _represent_fast(field, D.d, c)
    if v is None:
        raise WitnessUnavailable(f"{D} represents {field.format(c)} but no rational vector was found")
    return v


def has_isotropic(D):
    """Whether the nondegenerate part has a nonzero isotropic vector (decision only)."""
    field = D.field
    nonzero = [x for x in D.d if x]
    r = len(nonzero)
    if r < 2:
        return False
    if field.is_finite:
        if field.p == 2 or r >= 3:
            return True
        return field.is_square(-nonzero[0] / nonzero[1])
    _require_classifying(field)
    if field.mode == REAL:
        return any(x > 0 for x in nonzero) and any(x < 0 for x in nonzero)
    return True


def find_isotropic(D, budget=SEARCH_BUDGET):
    """A nonzero isotropic vector of the nondegenerate part, or None if there is none.

    Deterministic: over finite fields within budget, the first one in
    enumeration order.  Raises WitnessUnavailable over Q when one exists over
    R / C but no rational vector was constructed.
    """
    field = D.field
    if not has_isotropic(D):
        return None
    if field.is_finite:
        v, done = _exhaustive(field, D, lambda v: any(v) and not D.value(v), budget)
        if done:
            return v
    n = D.n
    idx = D.nondegenerate_indices()
    zero = field.zero
    for i, j in itertools.combinations(idx, 2):
        s = field.sqrt(-D.d[j] / D.d[i])
        if s is not None:
            v = [zero] * n
            v[i], v[j] = s, field.one
            return tuple(v)
    for i in idx:
        rest = tuple(zero if k == i else D.d[k] for k in range(n))
        if not field.is_finite and field.mode == REAL and not _represents_over_closure(
                DiagonalForm(field, rest), -D.d[i]):
            continue
        u = _represent_fast(field, rest, -D.d[i])
        if u is not None:
            v = list(u)
            v[i] = field.one
            return tuple(v)
    if field.is_finite:
        raise BudgetExceeded("isotropic search incomplete")
    raise WitnessUnavailable(f"{D} is isotropic over the closure but no rational isotropic vector was found")


def hyperbolic_pair(D, w):
    """Partner w' of an isotropic w: <w, w'> = 1 and <w', w'> = 0 (characteristic != 2)."""
    field = D.field
    if field.characteristic == 2:
        raise PreconditionError("hyperbolic pairs are built only in characteristic != 2")
    w = tuple(w)
    if not any(w):
        raise PreconditionError("w is zero")
    if D.value(w):
        raise PreconditionError("w is anisotropic")
    k = next((k for k in range(D.n) if D.d[k] and w[k]), None)
    if k is None:
        raise PreconditionError("w lies in the radical")
    v = _unit(field, D.n, k)
    u = la.scale(field.one / D.pair(w, v), v)
    w2 = la.sub(u, la.scale(D.value(u) / field(2), w))
    assert D.pair(w, w2) == field.one and not D.value(w2)
    return w2


# -- explicit isometries ------------------------------------------------------


def _orthogonal_basis_with_norms(field, G, targets):
    """Vectors f_k with f_i^T G f_j = [i == j] * targets[i] (characteristic != 2)."""
    m = len(G)
    basis = [_unit(field, m, k) for k in range(m)]
    found = []
    for t in targets:
        Gb = tuple(tuple(la.gram_bil(field, G, u, v) for v in basis) for u in basis)
        P, Db = diagonalize(GramForm(field, Gb))
        ob = [_combine(field, basis, la.column(P, j)) for j in range(len(basis))]
        y = _represent_fast(field, Db.d, t)
        if y is None:
            if field.is_finite:
                raise PreconditionError("forms are not isometric")
            raise WitnessUnavailable("no rational vector of the required norm was found")
        found.append(_combine(field, ob, y))
        row = tuple(dj * yj for dj, yj in zip(Db.d, y))
        basis = [_combine(field, ob, z) for z in la.nullspace(field, (row,))]
    return found


def _combine(field, vectors, coeffs):
    n = len(vectors[0]) if vectors else 0
    out = [field.zero] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i in range(n):
                out[i] = out[i] + c * v[i]
    return tuple(out)


def _gram_isometry(field, G1, G2):
    """theta with theta^T G2 theta = G1 for isometric nondegenerate Gram matrices."""
    if not G1:
        return ()
    P1, D1 = diagonalize(GramForm(field, G1))
    R = la.from_columns(_orthogonal_basis_with_norms(field, G2, D1.d))
    return la.matmul(field, R, la.inverse(field, P1))


def _char2_scaling(field, d):
    return tuple(field.sqrt(x) for x in d)


def _embed(field, D1, D2, inner):
    """Extend an isometry between nondegenerate parts by matching radicals in order."""
    n = D1.n
    nd1, nd2 = D1.nondegenerate_indices(), D2.nondegenerate_indices()
    r1, r2 = radical_indices(D1), radical_indices(D2)
    cols = [None] * n
    for k, j in enumerate(nd1):
        col = [field.zero] * n
        for s, i in enumerate(nd2):
            col[i] = inner[s][k]
        cols[j] = tuple(col)
    for j, i in zip(r1, r2):
        cols[j] = _unit(field, n, i)
    return la.from_columns(cols)


def _check_isometry(D1, D2, theta):
    field = D1.field
    if la.diag_congruent(field, theta, D2.d) != D1.matrix():
        raise AssertionError("constructed map is not an isometry")


def isometry(D1, D2):
    """An explicit isometry from D1 to D2 (theta^T D2 theta = D1)."""
    field = _same_field(D1, D2)
    if not isometric(D1, D2):
        raise PreconditionError(f"{D1} and {D2} are not isometric")
    a = D1.restrict(D1.nondegenerate_indices())
    b = D2.restrict(D2.nondegenerate_indices())
    if field.characteristic == 2:
        s1, s2 = _char2_scaling(field, a.d), _char2_scaling(field, b.d)
        inner = la.diag(field, tuple(x / y for x, y in zip(s1, s2)))
    else:
        inner = la.from_columns(_orthogonal_basis_with_norms(field, b.matrix(), a.d), a.n)
    theta = _embed(field, D1, D2, inner)
    _check_isometry(D1, D2, theta)
    return theta


def transporter(D1, w1, D2, w2, budget=GROUP_BUDGET):
    """An isometry theta: D1 -> D2 with theta(w1) = w2, or None if none exists.

    ``w1``, ``w2`` must lie in the nondegenerate parts and have equal norms
    (isotropic in the classical use).  In characteristic != 2 the map is
    built from hyperbolic pairs (or the line of an anisotropic vector) plus an
    isometry of the orthogonal complements, so it always exists; in
    characteristic 2 the orthogonal group is searched.
    """
    field = _same_field(D1, D2)
    w1, w2 = tuple(w1), tuple(w2)
    if not isometric(D1, D2):
        raise PreconditionError(f"{D1} and {D2} are not isometric")
    for D, w in ((D1, w1), (D2, w2)):
        if not any(w):
            raise PreconditionError("vectors must be nonzero")
        if any(w[i] for i in radical_indices(D)):
            raise PreconditionError("vectors must lie in the nondegenerate part")
    if D1.value(w1) != D2.value(w2):
        raise PreconditionError("vectors have different norms")
    if D1 == D2 and w1 == w2:
        return la.identity(field, D1.n)
    nd1, nd2 = D1.nondegenerate_indices(), D2.nondegenerate_indices()
    a, b = D1.restrict(nd1), D2.restrict(nd2)
    u1 = tuple(w1[i] for i in nd1)
    u2 = tuple(w2[i] for i in nd2)
    if field.characteristic == 2:
        s1, s2 = _char2_scaling(field, a.d), _char2_scaling(field, b.d)
        x1 = tuple(s * x for s, x in zip(s1, u1))
        x2 = tuple(s * x for s, x in zip(s2, u2))
        ident = DiagonalForm(field, (field.one,) * a.n)
        M = next((M for M in orthogonal_group(ident, budget) if la.matvec(field, M, x1) == x2), None)
        if M is None:
            return None
        inner = la.matmul(field, la.matmul(field, la.diag(field, tuple(1 / s for s in s2)), M),
                          la.diag(field, s1))
    else:
        if a.value(u1):
            frame1, frame2 = [u1], [u2]
        else:
            frame1 = [u1, hyperbolic_pair(a, u1)]
            frame2 = [u2, hyperbolic_pair(b, u2)]
        n1 = la.nullspace(field, tuple(tuple(x * y for x, y in zip(a.d, f)) for f in frame1))
        n2 = la.nullspace(field, tuple(tuple(x * y for x, y in zip(b.d, f)) for f in frame2))
        g1 = tuple(tuple(a.pair(u, v) for v in n1) for u in n1)
        g2 = tuple(tuple(b.pair(u, v) for v in n2) for u in n2)
        eta = _gram_isometry(field, g1, g2)
        images = [_combine(field, n2, la.column(eta, k)) for k in range(len(n1))]
        src = la.from_columns(frame1 + n1)
        dst = la.from_columns(frame2 + images)
        inner = la.matmul(field, dst, la.inverse(field, src))
    theta = _embed(field, D1, D2, inner)
    _check_isometry(D1, D2, theta)
    if la.matvec(field, theta, w1) != w2:
        raise AssertionError("transporter does not map w1 to w2")
    return theta


# -- orthogonal groups and orbits ---------------------------------------------


def orthogonal_group(D, budget=GROUP_BUDGET):
    """All M with M^T D M = D, for a nondegenerate D over a small finite field."""
    field = D.field
    if not field.is_finite:
        raise UnsupportedField("orthogonal groups are enumerated over finite fields only")
    if not D.is_nondegenerate():
        raise PreconditionError(f"{D} is degenerate")
    if field.q ** (D.n * D.n) > budget:
        raise BudgetExceeded(f"q^(n^2) = {field.q ** (D.n * D.n)} exceeds budget {budget}")
    return _orthogonal_group(D)


@lru_cache(maxsize=64)
def _orthogonal_group(D):
    field = D.field
    n = D.n
    vectors = list(itertools.product(field.elements(), repeat=n))
    by_norm = {}
    for v in vectors:
        by_norm.setdefault(D.value(v), []).append(v)
    out = []

    def extend(cols):
        j = len(cols)
        if j == n:
            out.append(la.from_columns(cols))
            return
        for v in by_norm.get(D.d[j], ()):
            if all(not D.pair(c, v) for c in cols):
                extend(cols + [v])

    extend([])
    return tuple(out)


@dataclass(frozen=True)
class Orbit:
    representative: tuple
    members: tuple


def _orbit(D, v, group, scalars):
    field = D.field
    factors = field.elements()[1:] if scalars else (field.one,)
    return {la.scale(s, la.matvec(field, M, v)) for M in group for s in factors}


def isotropic_orbits(D, budget=GROUP_BUDGET):
    """Orbits of the orthogonal group on the nonzero isotropic vectors."""
    field = D.field
    group = orthogonal_group(D, budget)
    isotropic = [v for v in itertools.product(field.elements(), repeat=D.n) if any(v) and not D.value(v)]
    seen = set()
    orbits = []
    for v in isotropic:
        if v in seen:
            continue
        members = tuple(sorted(_orbit(D, v, group, False), key=field.vector_key))
        seen.update(members)
        orbits.append(Orbit(members[0], members))
    return orbits


def orbit_representative(D, v, scalars=False, budget=GROUP_BUDGET):
    """Least vector (enumeration order) in the orbit of v under O(D), times K* if ``scalars``."""
    orthogonal_group(D, budget)
    return _orbit_table(D, scalars)[tuple(v)]


@lru_cache(maxsize=64)
def _orbit_table(D, scalars):
    """Every vector of K^n mapped to the least member of its orbit."""
    field = D.field
    group = _orthogonal_group(D)
    table = {}
    for v in itertools.product(field.elements(), repeat=D.n):
        if v not in table:
            orbit = _orbit(D, v, group, scalars)
            rep = min(orbit, key=field.vector_key)
            for u in orbit:
                table[u] = rep
    return table
