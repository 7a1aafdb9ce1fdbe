"""Dense exact linear algebra over a :class:`~evosquare.fields.FieldSpec`.

Matrices are tuples of row tuples, vectors are tuples.  Nothing here is
clever; sizes are tiny and exactness is the point.
"""

from __future__ import annotations

from .errors import PreconditionError


def zeros(field, rows, cols):
    z = field.zero
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity(field, n):
    z, o = field.zero, field.one
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def diag(field, d):
    z = field.zero
    n = len(d)
    return tuple(tuple(d[i] if i == j else z for j in range(n)) for i in range(n))


def transpose(M):
    return tuple(zip(*M)) if M else ()


def from_columns(cols, nrows=None):
    if not cols:
        return tuple(() for _ in range(nrows or 0))
    return tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))


def column(M, j):
    return tuple(row[j] for row in M)


def columns(M):
    return [column(M, j) for j in range(len(M[0]))] if M and M[0] else []


def dot(field, u, v):
    s = field.zero
    for x, y in zip(u, v):
        s = s + x * y
    return s


def matmul(field, A, B):
    Bt = transpose(B)
    return tuple(tuple(dot(field, row, col) for col in Bt) for row in A)


def matvec(field, M, v):
    return tuple(dot(field, row, v) for row in M)


def scale(c, v):
    return tuple(c * x for x in v)


def add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def is_zero_vector(v):
    return not any(v)


def congruent(field, P, G):
    """Return P^T G P."""
    return matmul(field, matmul(field, transpose(P), G), P)


def diag_congruent(field, P, d):
    """Return P^T diag(d) P without forming the diagonal matrix."""
    cols = range(len(P[0])) if P else range(0)
    z = field.zero
    out = []
    for i in cols:
        row = []
        for j in cols:
            s = z
            for k, dk in enumerate(d):
                if dk:
                    x, y = P[k][i], P[k][j]
                    if x and y:
                        s = s + dk * x * y
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def _echelon(field, M):
    """Row-reduced echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(field, M):
    if not M or not M[0]:
        return 0
    return len(_echelon(field, M)[1])


def inverse(field, M):
    n = len(M)
    aug = [tuple(row) + id_row for row, id_row in zip(M, identity(field, n))]
    rows, pivots = _echelon(field, aug)
    if pivots[:n] != list(range(n)):
        raise PreconditionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows[:n])


def is_invertible(field, M):
    return len(M) == len(M[0]) and rank(field, M) == len(M)


def nullspace(field, M, ncols=None):
    """Basis (list of vectors) of {x : M x = 0}."""
    if not M:
        n = ncols
        return [tuple(field.one if i == j else field.zero for i in range(n)) for j in range(n)]
    n = len(M[0])
    rows, pivots = _echelon(field, M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * n
        x[f] = field.one
        for r, pc in enumerate(pivots):
            x[pc] = -rows[r][f]
        basis.append(tuple(x))
    return basis


def complete_basis(field, vectors, n):
    """Extend independent ``vectors`` to a basis of K^n with standard vectors."""
    basis = list(vectors)
    for j in range(n):
        if len(basis) == n:
            break
        e = tuple(field.one if i == j else field.zero for i in range(n))
        if rank(field, transpose(tuple(basis + [e]))) == len(basis) + 1:
            basis.append(e)
    return basis


def quad(field, d, v):
    """Value of the diagonal form diag(d) on v."""
    s = field.zero
    for di, vi in zip(d, v):
        if di and vi:
            s = s + di * vi * vi
    return s


def bil(field, d, u, v):
    s = field.zero
    for di, ui, vi in zip(d, u, v):
        if di and ui and vi:
            s = s + di * ui * vi
    return s


def gram_bil(field, G, u, v):
    return dot(field, u, matvec(field, G, v))


def format_matrix(field, M):
    return [[field.format(x) for x in row] for row in M]
