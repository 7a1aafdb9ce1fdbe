"""Isomorphism classes, an exhaustive oracle, and checks against published tables."""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources

import numpy as np

from . import evo, forms
from . import linalg as la
from .errors import BudgetExceeded, FieldMismatch, InputError, UnsupportedField, WitnessUnavailable
from .evo import Flavor, InvariantBundle
from .fields import FieldSpec, REAL
from .forms import DiagonalForm, FormInvariants

ORACLE_BUDGET = 2 ** 18


# -- enumeration ---------------------------------------------------------------


@dataclass(frozen=True)
class ClassEntry:
    bundle: InvariantBundle
    algebra: evo.EvolutionAlgebra


@dataclass
class ClassTable:
    field: FieldSpec
    n: int
    entries: list

    @property
    def counts(self):
        return {f: sum(1 for e in self.entries if e.bundle.flavor is f) for f in Flavor}

    def count(self, flavor, dim_ann=None):
        return sum(1 for e in self.entries
                   if e.bundle.flavor == flavor and (dim_ann is None or e.bundle.dim_ann == dim_ann))

    def filter(self, flavor):
        return [e for e in self.entries if e.bundle.flavor == flavor]

    def matches(self, A):
        """Indices of the entries isomorphic to A (equal invariant bundles)."""
        bundle = evo.invariants(A)
        return [k for k, e in enumerate(self.entries) if e.bundle == bundle]

    def to_dict(self):
        f = self.field
        return {
            "field": f.descriptor(),
            "n": self.n,
            "counts": {str(int(k)): v for k, v in self.counts.items()},
            "entries": [{"invariants": e.bundle.to_dict(f),
                         "structure": la.format_matrix(f, e.algebra.C)} for e in self.entries],
        }

    def to_text(self):
        f = self.field
        lines = [f"classes over {f}, n = {self.n}"]
        rows = []
        for k, e in enumerate(self.entries):
            b = e.bundle
            P = evo.presentation(e.algebra)
            rows.append((str(k + 1), b.flavor.label, str(b.dim_ann), str(b.w_part),
                         "(" + ",".join(f.format(x) for x in P.lam) + ")",
                         "(" + ",".join(f.format(x) for x in P.a) + ")"))
        head = ("#", "flavour", "dimAnn", "W", "lambda", "a")
        lines += _aligned(head, rows)
        counts = self.counts
        lines.append("counts: " + ", ".join(f"{fl.label} {counts[fl]}" for fl in Flavor))
        return "\n".join(lines)


def _form_classes(field, m):
    """One canonical diagonal form per isometry class of nondegenerate forms of dim m."""
    one = field.one
    if m == 0:
        return [DiagonalForm(field, ())]
    if field.is_finite and field.p != 2:
        return [DiagonalForm(field, (one,) * m), DiagonalForm(field, (one,) * (m - 1) + (field.nonsquare,))]
    if not field.is_finite and field.mode == REAL:
        return [DiagonalForm(field, (one,) * p + (-one,) * (m - p)) for p in range(m, -1, -1)]
    return [DiagonalForm(field, (one,) * m)]


def _has_isotropic(D):
    try:
        return forms.find_isotropic(D) is not None
    except WitnessUnavailable:
        return True


def _represents_one(D):
    try:
        return forms.represent_value(D, D.field.one) is not None
    except WitnessUnavailable:
        return True


def _char2_labels(field, m, norm, scalars, budget):
    unit = DiagonalForm(field, (field.one,) * m)
    labels = set()
    for v in itertools.product(field.elements(), repeat=m):
        if any(v) and unit.value(v) == norm:
            labels.add(forms.orbit_representative(unit, v, scalars=scalars, budget=budget))
    return sorted(labels, key=field.vector_key)


def enumerate_classes(field, n, budget=forms.GROUP_BUDGET):
    """Every isomorphism class of n-dimensional algebras with dim(A²) = 1."""
    evo._require_classifying(field)
    if n < 1:
        raise InputError("dimension must be at least 1")
    if field.is_finite and field.q ** n > budget:
        raise BudgetExceeded(f"{field.q}^{n} vectors exceed the budget {budget}")
    char2 = field.characteristic == 2
    bundles = []
    for d in range(1, n):
        seen = set()
        for D in _form_classes(field, n - d):
            inv = forms.similarity_invariants(D)
            if inv not in seen:
                seen.add(inv)
                bundles.append(InvariantBundle(n, d, Flavor.NULL_CUBE, inv))
    for d in range(0, n - 1):
        m = n - d
        if char2:
            inv = FormInvariants(m, m)
            for label in _char2_labels(field, m, field.zero, True, budget):
                bundles.append(InvariantBundle(n, d, Flavor.ISOTROPIC, inv, label))
            continue
        seen = set()
        for D in _form_classes(field, m):
            inv = forms.similarity_invariants(D)
            if inv not in seen and _has_isotropic(D):
                seen.add(inv)
                bundles.append(InvariantBundle(n, d, Flavor.ISOTROPIC, inv))
    for d in range(0, n):
        m = n - d
        if char2:
            inv = FormInvariants(m, m)
            for label in _char2_labels(field, m, field.one, False, budget):
                bundles.append(InvariantBundle(n, d, Flavor.IDEMPOTENT, inv, label))
            continue
        for D in _form_classes(field, m):
            if _represents_one(D):
                bundles.append(InvariantBundle(n, d, Flavor.IDEMPOTENT, forms.form_invariants(D)))
    bundles.sort(key=lambda b: (-int(b.flavor), b.dim_ann))
    entries = [ClassEntry(b, evo.realize(field, b)) for b in bundles]
    for x, y in itertools.combinations(entries, 2):
        if evo.is_isomorphic(x.algebra, y.algebra, witness=False):
            raise AssertionError(f"duplicate classes {x.bundle} and {y.bundle}")
    return ClassTable(field, n, entries)


# -- exhaustive oracle -----------------------------------------------------------


def gl_order(q, n):
    return math.prod(q ** n - q ** i for i in range(n))


class _Tables:
    def __init__(self, field):
        self.elements = field.elements()
        self.pos = {x: k for k, x in enumerate(self.elements)}
        q = len(self.elements)
        dtype = np.int16 if q > 127 else np.int8
        self.add = np.array([[self.pos[x + y] for y in self.elements] for x in self.elements], dtype=dtype)
        self.mul = np.array([[self.pos[x * y] for y in self.elements] for x in self.elements], dtype=dtype)
        self.neg = np.array([self.pos[-x] for x in self.elements], dtype=dtype)
        self.dtype = dtype

    def encode(self, M):
        return np.array([[self.pos[x] for x in row] for row in M], dtype=np.intp)


@lru_cache(maxsize=None)
def _tables(field):
    return _Tables(field)


@lru_cache(maxsize=8)
def _invertible_matrices(field, n):
    """All of GL(n, q) as an (N, n, n) array of element positions, in enumeration order."""
    T = _tables(field)
    q = field.q
    idx = np.arange(q ** (n * n), dtype=np.int64)
    powers = q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    M = ((idx[:, None] // powers) % q).astype(T.dtype).reshape(-1, n, n)
    det = np.zeros(len(M), dtype=T.dtype)
    for perm in itertools.permutations(range(n)):
        term = M[:, 0, perm[0]]
        for i in range(1, n):
            term = T.mul[term, M[:, i, perm[i]]]
        inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        if inversions % 2:
            term = T.neg[term]
        det = T.add[det, term]
    return M[det != 0]


def brute_force_witness(A, B, budget=ORACLE_BUDGET):
    """First invertible F (enumeration order) with F(e_i)F(e_j) = F(e_i e_j), or None."""
    field = A.field
    if B.field != field:
        raise FieldMismatch(f"{A.field} vs {B.field}")
    if not field.is_finite:
        raise UnsupportedField("the exhaustive oracle needs a finite field")
    n = A.n
    if B.n != n:
        return None
    size = gl_order(field.q, n)
    if size > budget:
        raise BudgetExceeded(f"|GL({n}, {field.q})| = {size} exceeds the budget {budget}")
    T = _tables(field)
    M = _invertible_matrices(field, n)
    CA, CB = T.encode(A.C), T.encode(B.C)
    alive = np.arange(len(M))
    for i in range(n):
        for j in range(i, n):
            sub = M[alive]
            prods = [T.mul[sub[:, k, i], sub[:, k, j]] for k in range(n)]
            ok = np.ones(len(sub), dtype=bool)
            for t in range(n):
                lhs = np.zeros(len(sub), dtype=T.dtype)
                for k in range(n):
                    if CB[k, t]:
                        lhs = T.add[lhs, T.mul[prods[k], CB[k, t]]]
                rhs = np.zeros(len(sub), dtype=T.dtype)
                if i == j:
                    for l in range(n):
                        if CA[i, l]:
                            rhs = T.add[rhs, T.mul[sub[:, t, l], CA[i, l]]]
                ok &= lhs == rhs
            alive = alive[ok]
            if not len(alive):
                return None
    F = M[alive[0]]
    return tuple(tuple(T.elements[int(x)] for x in row) for row in F)


def brute_force_iso(A, B, budget=ORACLE_BUDGET):
    return brute_force_witness(A, B, budget) is not None


# -- random cross-checks -----------------------------------------------------------


@dataclass
class OracleReport:
    field: FieldSpec
    n: int
    trials: int
    seed: int
    isomorphic: int = 0
    agreements: int = 0
    disagreements: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return not self.disagreements

    def to_dict(self):
        f = self.field
        return {"field": f.descriptor(), "dim": self.n, "trials": self.trials, "seed": self.seed,
                "isomorphic_pairs": self.isomorphic, "agreements": self.agreements,
                "disagreements": [{"A": la.format_matrix(f, A.C), "B": la.format_matrix(f, B.C),
                                   "is_isomorphic": v, "brute_force": w} for A, B, v, w in self.disagreements],
                "verdict": "pass" if self.ok else "fail"}

    def to_text(self):
        lines = [f"oracle check over {self.field}, n = {self.n}, trials = {self.trials}, seed = {self.seed}",
                 f"isomorphic pairs: {self.isomorphic}, non-isomorphic pairs: {self.trials - self.isomorphic}",
                 f"agreements: {self.agreements}/{self.trials}"]
        for A, B, v, w in self.disagreements:
            lines.append(f"DISAGREE: decision {v}, brute force {w}: {A.C} vs {B.C}")
        lines.append("verdict: " + ("pass" if self.ok else "FAIL"))
        return "\n".join(lines)


def _random_vector(rng, elements, n):
    while True:
        v = tuple(rng.choice(elements) for _ in range(n))
        if any(v):
            return v


def _disguise(field, rng, lam, a):
    """Same algebra in a permuted, rescaled basis with a rescaled generator."""
    n = len(lam)
    nonzero = field.elements()[1:]
    perm = list(range(n))
    rng.shuffle(perm)
    s = [rng.choice(nonzero) for _ in range(n)]
    t = rng.choice(nonzero)
    lam2 = tuple(s[i] * s[i] * lam[perm[i]] / t for i in range(n))
    a2 = tuple(t * a[perm[i]] / s[i] for i in range(n))
    return lam2, a2


def random_pairs(field, n, trials, seed):
    """Seeded pairs of rank-one algebras; odd trials are disguised copies."""
    rng = random.Random(seed)
    elements = field.elements()
    for k in range(trials):
        lam = _random_vector(rng, elements, n)
        a = _random_vector(rng, elements, n)
        A = evo.from_presentation(field, lam, a)
        if k % 2:
            lam2, a2 = _disguise(field, rng, lam, a)
        else:
            lam2, a2 = _random_vector(rng, elements, n), _random_vector(rng, elements, n)
        yield A, evo.from_presentation(field, lam2, a2)


def oracle_check(field, n, trials, seed, budget=ORACLE_BUDGET):
    report = OracleReport(field, n, trials, seed)
    for A, B in random_pairs(field, n, trials, seed):
        v = evo.is_isomorphic(A, B).isomorphic
        w = brute_force_iso(A, B, budget)
        report.isomorphic += w
        if v == w:
            report.agreements += 1
        else:
            report.disagreements.append((A, B, v, w))
    return report


# -- published tables --------------------------------------------------------------

CASES = ("f9-dim3", "f4-dim3", "r-dim3", "c-dim4")


@dataclass
class Check:
    name: str
    expected: object
    computed: object
    ok: bool
    note: str = ""


@dataclass
class RepresentativeMatch:
    label: str
    product: str
    stated_flavor: int
    computed_flavor: int
    matches: list
    witness: tuple | None = None


@dataclass
class VerificationReport:
    case: str
    field: FieldSpec
    table: ClassTable
    checks: list
    representatives: list
    collapses: list
    notes: list

    @property
    def verdict(self):
        return all(c.ok for c in self.checks) and all(len(r.matches) == 1 for r in self.representatives)

    def to_dict(self):
        f = self.field
        return {
            "case": self.case,
            "field": f.descriptor(),
            "checks": [{"name": c.name, "expected": c.expected, "computed": c.computed, "ok": c.ok,
                        **({"note": c.note} if c.note else {})} for c in self.checks],
            "representatives": [{"label": r.label, "product": r.product, "stated_flavor": r.stated_flavor,
                                 "computed_flavor": r.computed_flavor,
                                 "matches": [k + 1 for k in r.matches]} for r in self.representatives],
            "collapses": [{"labels": list(c["labels"]), "class": c["class"] + 1,
                           **({"witness": la.format_matrix(f, c["witness"])} if c["witness"] else {})}
                          for c in self.collapses],
            "notes": list(self.notes),
            "classes": self.table.to_dict()["entries"],
            "verdict": "pass" if self.verdict else "fail",
        }

    def to_text(self):
        f = self.field
        lines = [f"case {self.case} over {f}", ""]
        head = ("check", "expected", "computed", "ok")
        rows = [(c.name, _show(c.expected), _show(c.computed), "yes" if c.ok else "NO") for c in self.checks]
        lines += _aligned(head, rows)
        for c in self.checks:
            if c.note:
                lines.append(f"  note ({c.name}): {c.note}")
        lines.append("")
        head = ("rep", "product", "stated", "computed", "class")
        rows = [(r.label, r.product, str(r.stated_flavor), str(r.computed_flavor),
                 ",".join(str(k + 1) for k in r.matches) or "none") for r in self.representatives]
        lines += _aligned(head, rows)
        for c in self.collapses:
            line = "isomorphic although listed separately: " + ", ".join(c["labels"])
            if c["witness"]:
                line += "; F = " + _show(la.format_matrix(f, c["witness"]))
            lines.append(line)
        for note in self.notes:
            lines.append("note: " + note)
        lines += ["", self.table.to_text(), "", "verdict: " + ("pass" if self.verdict else "FAIL")]
        return "\n".join(lines)


def _show(x):
    return json.dumps(x, ensure_ascii=False) if not isinstance(x, str) else x


def _aligned(head, rows):
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(len(head))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head] + rows]


def load_case(case):
    if case not in CASES:
        raise InputError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    text = resources.files("evosquare").joinpath("data").joinpath(f"{case}.json").read_text(encoding="utf-8")
    return json.loads(text)


def verify_paper(case):
    data = load_case(case)
    field = FieldSpec.from_descriptor(data["field"])
    n = data["dim"]
    table = enumerate_classes(field, n)
    checks = []
    for item in data.get("counts", []):
        flavor, d = Flavor(item["flavor"]), item.get("dim_ann")
        got = table.count(flavor, d)
        name = f"count {flavor.label}" + (f" dimAnn={d}" if d is not None else "")
        checks.append(Check(name, item["count"], got, got == item["count"], item.get("note", "")))
    if "signatures" in data:
        got = [list(e.bundle.w_part.signature) for e in table.filter(Flavor.IDEMPOTENT)]
        want = data["signatures"]
        checks.append(Check("Idempotent signatures", want, got, sorted(got) == sorted(want)))
    if "ranks" in data:
        got = [e.bundle.w_part.rank for e in table.filter(Flavor.IDEMPOTENT)]
        checks.append(Check("Idempotent ranks", data["ranks"], got, sorted(got) == sorted(data["ranks"])))
    if "orthogonal_group" in data:
        group_data = data["orthogonal_group"]
        D = DiagonalForm(field, tuple(field.parse_scalar(x) for x in group_data["form"]))
        group = forms.orthogonal_group(D)
        got = sorted(la.format_matrix(field, M) for M in group)
        checks.append(Check("orthogonal group", sorted(group_data["matrices"]), got, got == sorted(group_data["matrices"])))
        orbits = sorted([[field.format(x) for x in v] for v in o.members] for o in forms.isotropic_orbits(D))
        checks.append(Check("isotropic orbits", sorted(group_data["orbits"]), orbits, orbits == sorted(group_data["orbits"])))
    reps = []
    for item in data["products"]:
        A = evo.validate(field, n, item["structure"], item["label"])
        reps.append((A, RepresentativeMatch(item["label"], item["product"], item["flavor"],
                                            int(evo.classify_flavor(evo.presentation(A))), table.matches(A))))
    for A, r in reps:
        if r.stated_flavor != r.computed_flavor:
            checks.append(Check(f"flavour of {r.label}", r.stated_flavor, r.computed_flavor, False))
    collapses = []
    groups = {}
    for A, r in reps:
        if len(r.matches) == 1:
            groups.setdefault(r.matches[0], []).append(A)
    for k, members in sorted(groups.items()):
        if len(members) > 1:
            witness = evo.is_isomorphic(members[0], members[1]).witness
            collapses.append({"labels": [A.label for A in members], "class": k, "witness": witness})
    return VerificationReport(case, field, table, checks, [r for _, r in reps], collapses, data.get("notes", []))
