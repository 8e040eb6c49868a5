"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 internal
inconsistency detected by the cross-check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from k3zariski.arith import as_place, to_rational
from k3zariski.errors import Degenerate, DomainError, InternalInconsistency

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _load_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object")
    return data


def _int_matrix(rows) -> list[list[int]]:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("'gram' must be a non-empty list of lists")
    if any(len(r) != len(rows) for r in rows):
        raise InputError("'gram' must be square")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r):
        raise InputError("'gram' entries must be integers")
    return rows


def load_lattice(path: str):
    from k3zariski.zariski import SurfaceLattice

    data = _load_json(path)
    if "gram" not in data:
        raise InputError("lattice file needs a 'gram' key")
    gram = _int_matrix(data["gram"])
    labels = data.get("labels") or ()
    try:
        return SurfaceLattice(tuple(map(tuple, gram)), tuple(labels))
    except DomainError as exc:
        raise InputError(str(exc)) from exc


def load_form(path: str):
    from k3zariski.quadform import QuadraticForm

    data = _load_json(path)
    try:
        if "diag" in data:
            if not isinstance(data["diag"], list) or not data["diag"]:
                raise InputError("'diag' must be a non-empty list")
            return QuadraticForm.diagonal([to_rational(x) for x in data["diag"]])
        if "gram" in data:
            rows = data["gram"]
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise InputError("'gram' must be a list of lists")
            return QuadraticForm([[to_rational(x) for x in r] for r in rows])
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    raise InputError("form file needs a 'diag' or 'gram' key")


# ---------------------------------------------------------------------------


def cmd_hilbert(args) -> int:
    from k3zariski.hilbert import hilbert_symbol, product_formula_check

    try:
        a, b = to_rational(args.a), to_rational(args.b)
        place = as_place(args.place)
        s = hilbert_symbol(a, b, place)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    print("+1" if s == 1 else "-1")
    if args.table:
        rep = product_formula_check(a, b)
        for v, val in rep.table.items():
            print(f"{v}\t{'+1' if val == 1 else '-1'}")
        print(f"product\t{'+1' if rep.product == 1 else '-1'}")
    return EXIT_OK


def cmd_form_analyze(args) -> int:
    from k3zariski.quadform import (
        critical_places,
        discriminant,
        is_isotropic_global,
        local_invariants,
        signature,
    )

    q = load_form(args.file)
    try:
        disc = discriminant(q)
    except Degenerate as exc:
        raise InputError(f"{exc}; isotropy is only decided for nondegenerate forms") from exc
    verdict = is_isotropic_global(q, witness_height=args.height)
    _emit(
        {
            "dimension": q.n,
            "signature": list(signature(q)),
            "discriminant": str(disc),
            "diagonal": [str(c) for c in q.diagonalization.coeffs],
            "local_invariants": [local_invariants(q, v).to_dict() for v in critical_places(q)],
            "isotropy": verdict.to_dict(),
        }
    )
    return EXIT_OK


def cmd_k3_classify(args) -> int:
    from k3zariski.classify import decide_d1

    lat = load_lattice(args.file)
    try:
        v = decide_d1(lat.gram, height=args.height, corroborate=not args.no_corroborate)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    out = v.to_dict()
    out["labels"] = list(lat.labels)
    _emit(out)
    return EXIT_INCONSISTENT if v.answer == "Inconsistent" else EXIT_OK


def cmd_zariski(args) -> int:
    from k3zariski.zariski import zariski_decompose

    lat = load_lattice(args.file)
    try:
        coeffs = [int(t) for t in args.divisor.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse divisor {args.divisor!r}") from exc
    try:
        dec = zariski_decompose(lat, coeffs)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    out = dec.to_dict()
    out["labels"] = list(lat.labels)
    out["divisor"] = coeffs
    _emit(out)
    return EXIT_OK


def cmd_search(args) -> int:
    from k3zariski.classify import CSV_HEADER, search_lattices

    try:
        rows = search_lattices(
            args.rho,
            args.max_entry,
            case=args.case,
            verdict=args.verdict,
            height=args.height,
            workers=args.workers,
        )
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_INCONSISTENT if any(r.verdict == "Inconsistent" for r in rows) else EXIT_OK


def cmd_selfcheck(args) -> int:
    from k3zariski.selfcheck import run_all

    results = run_all(sweep=not args.quick)
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name.ljust(width)}  {r.detail}")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_INCONSISTENT


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="k3zariski", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("hilbert", help="local Hilbert symbol (a,b)_v")
    h.add_argument("a")
    h.add_argument("b")
    h.add_argument("place", help="'inf' or a prime")
    h.add_argument("--table", action="store_true", help="print all critical places and the product")
    h.set_defaults(func=cmd_hilbert)

    f = sub.add_parser("form-analyze", aliases=["form"], help="analyze a quadratic form file")
    f.add_argument("file")
    f.add_argument("--height", type=int, default=64, help="witness search height")
    f.set_defaults(func=cmd_form_analyze)

    c = sub.add_parser("k3-classify", aliases=["classify"], help="decide d(X)=1 for a K3 intersection matrix")
    c.add_argument("file")
    c.add_argument("--height", type=int, default=500, help="integer zero search height")
    c.add_argument("--no-corroborate", action="store_true", help="skip the bounded Zariski sweep")
    c.set_defaults(func=cmd_k3_classify)

    z = sub.add_parser("zariski", help="Zariski decomposition of an effective divisor")
    z.add_argument("file")
    z.add_argument("--divisor", required=True, help="comma-separated coefficients, e.g. 1,1")
    z.set_defaults(func=cmd_zariski)

    s = sub.add_parser("search", help="enumerate and classify admissible lattices")
    s.add_argument("--rho", type=int, required=True, choices=(2, 3, 4))
    s.add_argument("--max-entry", type=int, required=True, help="largest half off-diagonal entry")
    s.add_argument("--case", type=int, choices=range(1, 7))
    s.add_argument("--verdict", choices=("D1", "NotD1", "Inconsistent"))
    s.add_argument("--height", type=int, default=500)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_search)

    sc = sub.add_parser("selfcheck", help="run the reference-value battery")
    sc.add_argument("--quick", action="store_true", help="skip the product-formula sweep")
    sc.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
