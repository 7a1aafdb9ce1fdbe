"""Command-line interface.

Algebra files are JSON objects::

    {"field": {"kind": "finite", "p": 3, "deg": 2}, "dim": 3,
     "structure": [["1", "0", "0"], ["1", "0", "0"], ["1", "0", "0"]],
     "label": "optional"}

Row i of ``structure`` holds the coordinates of e_i^2.  Exit codes: 0 success,
1 domain error, 2 usage or parse error, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import atlas, evo
from . import linalg as la
from .errors import DomainError, EvoError, HypothesisViolation, InputError, ParseError
from .fields import FieldSpec

_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|-?\d+(?:\.\d+)?')


def _positions(text, n):
    """(line, column) of the scalar tokens of ``structure``, row-major."""
    start = text.find('"structure"')
    if start < 0:
        return {}
    start = text.index(":", start) + 1
    out = {}
    for k, m in enumerate(_TOKEN.finditer(text, start)):
        if k == n * n:
            break
        line = text.count("\n", 0, m.start()) + 1
        col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
        out[divmod(k, n)] = (line, col)
    return out


def parse_document(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("an algebra document must be a JSON object", 1, 1)
    for key in ("field", "dim", "structure"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    field = FieldSpec.from_descriptor(doc["field"])
    n = doc["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"dim must be a positive integer, got {n!r}")
    S = doc["structure"]
    if not isinstance(S, list) or len(S) != n or any(not isinstance(r, list) or len(r) != n for r in S):
        raise ParseError(f"structure must be a {n} x {n} array")
    where = _positions(text, n)
    rows = []
    for i, row in enumerate(S):
        out = []
        for j, x in enumerate(row):
            try:
                out.append(field.parse_scalar(x))
            except InputError as exc:
                line, col = where.get((i, j), (None, None))
                raise ParseError(f"structure[{i}][{j}]: {exc}", line, col) from None
        rows.append(out)
    label = doc.get("label")
    return evo.validate(field, n, rows, label)


def load_algebra(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_document(text)


def algebra_document(A):
    doc = {"field": A.field.descriptor(), "dim": A.n, "structure": la.format_matrix(A.field, A.C)}
    if A.label is not None:
        doc["label"] = A.label
    return doc


def _vec(field, v):
    return "(" + ",".join(field.format(x) for x in v) + ")"


def _dump(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2)


# -- subcommands ------------------------------------------------------------------


def cmd_analyze(args, out):
    A = load_algebra(args.file)
    f = A.field
    P = evo.presentation(A)
    _, d = evo.annihilator(P)
    flavor = evo.classify_flavor(P)
    e = evo.idempotent(P) if flavor is evo.Flavor.IDEMPOTENT else None
    bundle = None
    if f.is_finite or f.mode is not None:
        bundle = evo.invariants(A)
    if args.json:
        doc = {"field": f.descriptor(), "dim": A.n, "a": [f.format(x) for x in P.a],
               "lambda": [f.format(x) for x in P.lam], "dim_ann": d,
               "flavor": int(flavor), "flavor_name": flavor.label,
               "idempotent": [f.format(x) for x in e] if e else None,
               "invariants": bundle.to_dict(f) if bundle else None}
        print(_dump(doc), file=out)
        return 0
    print(f"field: {f}", file=out)
    print(f"dim: {A.n}", file=out)
    print(f"a = {_vec(f, P.a)}", file=out)
    print(f"lambda = {_vec(f, P.lam)}", file=out)
    print(f"dimAnn = {d}", file=out)
    print(f"flavour: {flavor.label} ({int(flavor)})", file=out)
    if e:
        print(f"idempotent: {_vec(f, e)}", file=out)
    if bundle:
        print(f"invariants: {bundle.describe(f)}", file=out)
    else:
        print("invariants: not classified over Q itself", file=out)
    return 0


def cmd_iso(args, out):
    A, B = load_algebra(args.file1), load_algebra(args.file2)
    v = evo.is_isomorphic(A, B, witness=args.witness)
    f = A.field
    checked = evo.check_morphism(v.witness, A, B) if v.witness is not None else None
    if args.json:
        doc = {"isomorphic": v.isomorphic, "reason": v.reason}
        if args.witness:
            doc["witness"] = la.format_matrix(f, v.witness) if v.witness is not None else None
            doc["check_morphism"] = checked
        print(_dump(doc), file=out)
        return 0
    if not v.isomorphic:
        print(f"NOT isomorphic: {v.reason}", file=out)
        return 0
    print("isomorphic", file=out)
    if args.witness:
        if v.witness is None:
            print(f"witness: none ({v.reason})", file=out)
        else:
            print("witness F (columns are the images of the basis):", file=out)
            for row in la.format_matrix(f, v.witness):
                print("  [" + ", ".join(row) + "]", file=out)
            print(f"check_morphism: {'true' if checked else 'false'}", file=out)
    return 0


def cmd_canon(args, out):
    A = load_algebra(args.file)
    C = evo.canonical_form(A)
    C = evo.EvolutionAlgebra(C.field, C.C, A.label)
    print(_dump(algebra_document(C)), file=out)
    return 0


def cmd_enumerate(args, out):
    field = FieldSpec.parse(args.field)
    table = atlas.enumerate_classes(field, args.dim, **_budget(args))
    if args.flavor is not None:
        table = atlas.ClassTable(table.field, table.n, table.filter(evo.Flavor(args.flavor)))
    print(_dump(table.to_dict()) if args.json else table.to_text(), file=out)
    return 0


def cmd_verify(args, out):
    report = atlas.verify_paper(args.case)
    print(_dump(report.to_dict()) if args.json else report.to_text(), file=out)
    return 0 if report.verdict else 3


def cmd_oracle(args, out):
    field = FieldSpec.parse(args.field)
    report = atlas.oracle_check(field, args.dim, args.trials, args.seed, **_budget(args))
    print(_dump(report.to_dict()) if args.json else report.to_text(), file=out)
    return 0 if report.ok else 3


def _budget(args):
    return {} if args.budget is None else {"budget": args.budget}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="override the search budget")
    p = argparse.ArgumentParser(prog="evosquare",
                                description="Evolution algebras with one-dimensional square.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--budget", type=int, default=None, help="override the search budget")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="presentation, flavour and invariants")
    s.add_argument("file")
    s.set_defaults(run=cmd_analyze)

    s = sub.add_parser("iso", parents=[common], help="decide isomorphism")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--witness", action="store_true", help="print an explicit isomorphism")
    s.set_defaults(run=cmd_iso)

    s = sub.add_parser("canon", parents=[common], help="canonical form document")
    s.add_argument("file")
    s.set_defaults(run=cmd_canon)

    s = sub.add_parser("enumerate", parents=[common], help="list all isomorphism classes")
    s.add_argument("--field", required=True, help="F9, GF(4), R, C, ...")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--flavor", type=int, choices=(1, 2, 3))
    s.set_defaults(run=cmd_enumerate)

    s = sub.add_parser("verify-paper", parents=[common], help="check the published tables")
    s.add_argument("--case", required=True, choices=atlas.CASES)
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("oracle-check", parents=[common], help="compare against brute force")
    s.add_argument("--field", required=True)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(run=cmd_oracle)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except HypothesisViolation as exc:
        print(f"error: hypothesis {exc.hypothesis} violated: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, EvoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
