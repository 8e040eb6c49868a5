"""Decide whether a candidate Neron-Severi lattice of a K3 surface can have
d(X) = 1, i.e. integral Zariski decompositions for every integral
pseudoeffective divisor.

Pipeline: admissibility checks, anisotropy of the intersection form, match
against the six admissible shapes, the arithmetic condition attached to the
shape, and a cross-check against brute force. Input matrices carry full
intersection numbers (e.g. 4); shape parameters are half of them (m = 2).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from k3zariski.arith import factorize, odd_prime_divisors, three_squares_excluded, three_squares_shape
from k3zariski.errors import DomainError
from k3zariski.hilbert import hilbert_symbol
from k3zariski.quadform import (
    QuadraticForm,
    critical_places,
    is_isotropic_global,
    local_invariants,
    signature,
)

SUFFICIENCY_CAVEAT = (
    "D1 means every necessary condition of the classification holds and the "
    "bounded Zariski-denominator sweep found no fractional decomposition; the "
    "converse direction and existence of the surface are not computed here"
)
NOMATCH_CAVEAT = (
    "zero pattern is not one of the six admissible shapes; NotD1 relies on "
    "the exhaustiveness of the shape list"
)


def _as_int_matrix(gram) -> list[list[int]]:
    try:
        rows = [[int(x) for x in r] for r in gram]
        if any(int(x) != x for r in gram for x in r):
            raise ValueError
    except (TypeError, ValueError) as exc:
        raise DomainError("intersection matrix must have integer entries") from exc
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DomainError("intersection matrix must be square")
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
        raise DomainError("intersection matrix must be symmetric")
    return rows


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    citation: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail, "reason": self.citation}


@dataclass
class Diagnostics:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


def validate_k3(gram) -> Diagnostics:
    g = _as_int_matrix(gram)
    rho = len(g)
    off = [g[i][j] for i in range(rho) for j in range(i + 1, rho)]
    diag = Diagnostics()
    diag.checks.append(
        Check(
            "rho_range",
            2 <= rho <= 4,
            f"rho = {rho}",
            "d(X)=1 forbids square-zero classes, forcing 2 <= rho <= 4",
        )
    )
    diag.checks.append(
        Check(
            "minus_two_diagonal",
            all(g[i][i] == -2 for i in range(rho)),
            f"diagonal = {[g[i][i] for i in range(rho)]}",
            "every negative curve on a K3 surface is a smooth rational (-2)-curve",
        )
    )
    bad = sorted({x for x in off if not (x == 0 or (x >= 4 and x % 2 == 0))})
    diag.checks.append(
        Check(
            "off_diagonal_values",
            not bad,
            "all off-diagonal entries in {0, 4, 6, 8, ...}" if not bad else f"offending entries {bad}",
            "C^2 | C.D and two curves that are not negative definite meet in 2b with b > 1",
        )
    )
    sig_ok, sig_detail = False, "degenerate"
    if rho >= 1:
        sig = signature(g)
        sig_ok = sig == (1, rho - 1, 0)
        sig_detail = f"signature (n+, n-, n0) = {sig}"
    diag.checks.append(
        Check(
            "hodge_signature",
            sig_ok,
            sig_detail,
            "Hodge index: NS(X) is nondegenerate of signature (1, rho-1)",
        )
    )
    diag.checks.append(
        Check(
            "even_lattice",
            all(g[i][i] % 2 == 0 for i in range(rho)),
            "all self-intersections even" if all(g[i][i] % 2 == 0 for i in range(rho)) else "odd self-intersection",
            "NS of a K3 surface is an even lattice",
        )
    )
    return diag


# ---------------------------------------------------------------------------
# case matching


@dataclass
class CaseMatch:
    case_id: int | None
    permutation: tuple[int, ...]
    params: dict[str, int]
    gram: list[list[int]]

    def to_dict(self) -> dict:
        return {
            "case": self.case_id,
            "permutation": list(self.permutation),
            "params": dict(self.params),
        }


def _permute(g, perm) -> list[list[int]]:
    return [[g[i][j] for j in perm] for i in perm]


def _zero_pairs(g) -> set[tuple[int, int]]:
    n = len(g)
    return {(i, j) for i in range(n) for j in range(i + 1, n) if g[i][j] == 0}


def match_case(gram) -> CaseMatch:
    """Find the shape (1)-(6) under some relabeling of the curves."""
    g = _as_int_matrix(gram)
    rho = len(g)
    zeros = _zero_pairs(g)
    target: set[tuple[int, int]] | None = None
    case = None
    if rho == 2 and not zeros:
        case, target = 1, set()
    elif rho == 3 and len(zeros) == 1:
        case, target = 2, {(0, 1)}
    elif rho == 3 and not zeros:
        case, target = 3, set()
    elif rho == 4 and len(zeros) == 3:
        case, target = 4, {(0, 1), (0, 2), (1, 2)}
    elif rho == 4 and len(zeros) == 1:
        case, target = 5, {(0, 1)}
    elif rho == 4 and not zeros:
        case, target = 6, set()
    if case is not None:
        for perm in itertools.permutations(range(rho)):
            pg = _permute(g, perm)
            if _zero_pairs(pg) == target:
                return CaseMatch(case, perm, _extract(case, pg), pg)
    return CaseMatch(None, tuple(range(rho)), {}, g)


def _extract(case: int, g) -> dict[str, int]:
    def h(i, j):
        return g[i][j] // 2

    if case == 1:
        return {"b": h(0, 1)}
    if case == 2:
        return {"m": h(0, 2), "n": h(1, 2)}
    if case == 3:
        return {"l": h(0, 1), "m": h(0, 2), "n": h(1, 2)}
    if case == 4:
        return {"l1": h(0, 3), "l2": h(1, 3), "l3": h(2, 3)}
    if case == 5:
        return {"m1": h(0, 2), "m2": h(0, 3), "m3": h(1, 2), "m4": h(1, 3), "m5": h(2, 3)}
    return {f"s{i + 1}{j + 1}": h(i, j) for i in range(4) for j in range(i + 1, 4)}


# ---------------------------------------------------------------------------
# case conditions


@dataclass
class ConditionReport:
    case_id: int
    holds: bool
    certificate_primes: tuple[int, ...]
    quantities: dict[str, int]
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "case": self.case_id,
            "holds": self.holds,
            "certificate_primes": list(self.certificate_primes),
            "quantities": dict(self.quantities),
            "notes": list(self.notes),
        }


def half_form(match: CaseMatch) -> QuadraticForm:
    """The form with -1 on the diagonal, i.e. half the intersection form."""
    return QuadraticForm([[x // 2 if i != j else -1 for j, x in enumerate(r)] for i, r in enumerate(match.gram)])


def _critical_odd_primes(q: QuadraticForm) -> set[int]:
    return {v.p for v in critical_places(q) if not v.is_infinite and v.p != 2}


def check_case_condition(match: CaseMatch) -> ConditionReport:
    """Evaluate the arithmetic condition attached to the matched shape."""
    if match.case_id is None:
        raise DomainError("no admissible shape matched")
    c = match.case_id
    pr = match.params
    if any(v < 2 for v in pr.values()):
        return ConditionReport(c, False, (), dict(pr), ["a shape parameter is below 2"])

    if c == 1:
        b = pr["b"]
        return ConditionReport(
            1, True, (), {"b": b, "b^2-1": b * b - 1},
            ["-2x^2 + 4bxy - 2y^2 has discriminant 16(b^2-1), a nonsquare for b > 1"],
        )

    if c == 2:
        m, n = pr["m"], pr["n"]
        d = m * m + n * n - 1
        cands = odd_prime_divisors(d)
        cert = tuple(p for p in cands if hilbert_symbol(d, -1, p) == -1)
        fac = factorize(d).primes
        elementary = tuple(p for p in cands if p % 4 == 3 and fac[p] % 2 == 1)
        if cert != elementary:
            from k3zariski.errors import InternalInconsistency

            raise InternalInconsistency(
                f"(D,-1)_p test {cert} disagrees with p = 3 mod 4 odd-multiplicity test {elementary}"
            )
        return ConditionReport(
            2, bool(cert), cert, {"m": m, "n": n, "m^2+n^2-1": d},
            [f"elementary test (p = 3 mod 4, odd multiplicity) gives {list(elementary)}"],
        )

    if c == 3:
        l, m, n = pr["l"], pr["m"], pr["n"]
        e = l * l - 1
        f = l * l + m * m + n * n + 2 * l * m * n - 1
        cands = odd_prime_divisors(e * f)
        cert = tuple(p for p in cands if hilbert_symbol(e, f, p) == -1)
        return ConditionReport(
            3, bool(cert), cert, {"l": l, "m": m, "n": n, "l^2-1": e, "l^2+m^2+n^2+2lmn-1": f},
            ["tested (l^2-1, l^2+m^2+n^2+2lmn-1)_p over odd p dividing the product"],
        )

    if c == 4:
        l1, l2, l3 = pr["l1"], pr["l2"], pr["l3"]
        s = l1 * l1 + l2 * l2 + l3 * l3 - 1
        holds = three_squares_excluded(s)
        q = {"l1": l1, "l2": l2, "l3": l3, "l1^2+l2^2+l3^2-1": s}
        notes = []
        if holds:
            a, k = three_squares_shape(s)
            q.update({"a": a, "k": k})
            notes.append(f"{s} = 4^{a}(8*{k}-1) is not a sum of three squares; obstruction at 2")
        else:
            notes.append(f"{s} is a sum of three squares")
        return ConditionReport(4, holds, (2,) if holds else (), q, notes)

    q = half_form(match)
    if c == 5:
        m1, m2, m3, m4, m5 = (pr[f"m{i}"] for i in range(1, 6))
        a = m1 * m1 + m3 * m3 - 1
        b = m1 * m2 + m3 * m4 + m5
        cc = m2 * m2 + m4 * m4 - 1
        quant = {"A": a, "B": b, "C": cc, "B^2-AC": b * b - a * cc}
        if b * b <= a * cc:
            return ConditionReport(5, False, (), quant, ["signature precondition B^2 > AC fails"])
        cands = sorted(set(odd_prime_divisors(2 * a)) | _critical_odd_primes(q))
        cert = tuple(
            p for p in cands
            if local_invariants(q, p).d_square
            and hilbert_symbol(-a, -1, p) == -hilbert_symbol(-1, -1, p)
        )
        return ConditionReport(
            5, bool(cert), cert, quant,
            ["candidate primes widened to all critical odd primes of the form; "
             "at odd p not dividing A the symbol test is vacuous"],
        )

    s = pr
    s12, s13, s14, s23, s24, s34 = (s[k] for k in ("s12", "s13", "s14", "s23", "s24", "s34"))
    e = s12 * s12 - 1
    a = e * (s13 * s13 - 1) - (s12 * s13 + s23) ** 2
    b = e * (s13 * s14 + s34) - (s12 * s13 + s23) * (s12 * s14 + s24)
    d = e * (s14 * s14 - 1) - (s12 * s14 + s24) ** 2
    delta = a * d - b * b
    neg_a = s12 * s12 + s13 * s13 + s23 * s23 + 2 * s12 * s13 * s23 - 1
    assert neg_a == -a
    quant = {"A": a, "B": b, "D": d, "E": e, "AD-B^2": delta, "F": -delta, "EF": -e * delta}
    notes = ["second symbol argument taken as s12^2+s13^2+s23^2+2*s12*s13*s23-1 = -A"]
    if delta <= 0:
        return ConditionReport(6, False, (), quant, notes + ["signature precondition AD-B^2 > 0 fails"])
    cands = sorted(set(odd_prime_divisors(e * neg_a)) | _critical_odd_primes(q))
    cert = tuple(p for p in cands if local_invariants(q, p).d_square and hilbert_symbol(e, neg_a, p) == -1)
    for p in odd_prime_divisors(e * neg_a):
        if hilbert_symbol(e, neg_a, p) == -1 and not local_invariants(q, p).d_square:
            notes.append(f"(E,-A)_{p} = -1 but the discriminant is not a square at {p}")
    return ConditionReport(6, bool(cert), cert, quant, notes)


# ---------------------------------------------------------------------------
# decision


@dataclass
class K3Verdict:
    gram: list[list[int]]
    diagnostics: Diagnostics
    answer: str  # "D1", "NotD1", "Inconsistent"
    reasons: list[str] = field(default_factory=list)
    anisotropy: object = None  # IsotropyVerdict
    match: CaseMatch | None = None
    condition: ConditionReport | None = None
    crosscheck: object = None  # CrosscheckReport
    numthm: object = None  # NumThmReport
    bounded_denominator: int | None = None
    bounded_height: int | None = None
    caveats: list[str] = field(default_factory=list)

    @property
    def case_id(self) -> int | None:
        return self.match.case_id if self.match else None

    @property
    def certificate_primes(self) -> tuple[int, ...]:
        return self.condition.certificate_primes if self.condition else ()

    @property
    def consistent(self) -> bool:
        return self.crosscheck is None or self.crosscheck.consistent

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "reasons": list(self.reasons),
            "gram": self.gram,
            "admissibility": [c.to_dict() for c in self.diagnostics.checks],
            "anisotropy": self.anisotropy.to_dict() if self.anisotropy is not None else None,
            "case": self.match.to_dict() if self.match else None,
            "condition": self.condition.to_dict() if self.condition else None,
            "crosscheck": self.crosscheck.to_dict() if self.crosscheck is not None else None,
            "numthm": self.numthm.to_dict() if self.numthm is not None else None,
            "bounded_denominator": (
                {"height": self.bounded_height, "max_denominator": self.bounded_denominator}
                if self.bounded_denominator is not None
                else None
            ),
            "caveats": list(self.caveats),
        }


def decide_d1(gram, height: int = 500, corroborate: bool = True, bound_height: int = 6) -> K3Verdict:
    from k3zariski.oracle import crosscheck
    from k3zariski.zariski import MODEL_NOTE, check_numthm, max_denominator_bounded

    g = _as_int_matrix(gram)
    diag = validate_k3(g)
    v = K3Verdict(g, diag, "NotD1")
    if not diag.ok:
        v.reasons = [f"{c.name}: {c.detail} ({c.citation})" for c in diag.failed()]
        return v

    q = QuadraticForm(g)
    v.anisotropy = is_isotropic_global(q, witness_height=0)
    v.match = match_case(g)
    if v.match.case_id is not None:
        v.condition = check_case_condition(v.match)
    v.crosscheck = crosscheck(g, height=height, condition=v.condition)
    if v.anisotropy.isotropic and v.crosscheck.witness is not None:
        v.anisotropy.witness = v.crosscheck.witness

    if corroborate:
        v.numthm = check_numthm(g)
        v.bounded_height = bound_height
        v.bounded_denominator = max_denominator_bounded(g, bound_height)
        v.caveats.append(MODEL_NOTE)

    if not v.crosscheck.consistent:
        v.answer = "Inconsistent"
        v.reasons = list(v.crosscheck.problems)
        return v
    if v.anisotropy.isotropic:
        w = v.anisotropy.witness
        v.reasons.append(
            "intersection form is isotropic over Q"
            + (f": D = {list(w)} has D^2 = 0" if w else "")
            + "; a nonzero square-zero class rules out d(X) = 1"
        )
    if v.match.case_id is None:
        v.reasons.append(NOMATCH_CAVEAT)
        v.caveats.append(NOMATCH_CAVEAT)
    elif not v.condition.holds:
        v.reasons.append(f"case {v.match.case_id} condition fails")
    if v.reasons:
        return v
    v.answer = "D1"
    v.reasons.append(
        f"case {v.match.case_id} condition holds"
        + (f" with certificate primes {list(v.condition.certificate_primes)}" if v.condition.certificate_primes else "")
    )
    v.caveats.append(SUFFICIENCY_CAVEAT)
    return v


# ---------------------------------------------------------------------------
# enumeration


@dataclass
class CatalogRow:
    gram: list[list[int]]
    rho: int
    case_id: int | None
    verdict: str
    certificate_primes: tuple[int, ...]
    strongly_primitive: bool

    def csv_fields(self) -> list[str]:
        return [
            ";".join(",".join(str(x) for x in r) for r in self.gram),
            str(self.rho),
            "" if self.case_id is None else str(self.case_id),
            self.verdict,
            " ".join(str(p) for p in self.certificate_primes),
            "1" if self.strongly_primitive else "0",
        ]


CSV_HEADER = ["canonical_gram", "rho", "case", "verdict", "certificate_primes", "strongly_primitive"]


def canonical_form(gram) -> list[list[int]]:
    """Lexicographically smallest row-major relabeling."""
    g = _as_int_matrix(gram)
    best = None
    for perm in itertools.permutations(range(len(g))):
        pg = _permute(g, perm)
        flat = [x for r in pg for x in r]
        if best is None or flat < best[0]:
            best = (flat, pg)
    return best[1]


def _candidates(rho: int, max_half_entry: int) -> list[list[list[int]]]:
    values = [0] + list(range(2, max_half_entry + 1))
    pairs = list(itertools.combinations(range(rho), 2))
    seen = set()
    out = []
    for halves in itertools.product(values, repeat=len(pairs)):
        g = [[-2 if i == j else 0 for j in range(rho)] for i in range(rho)]
        for (i, j), s in zip(pairs, halves):
            g[i][j] = g[j][i] = 2 * s
        c = canonical_form(g)
        key = tuple(x for r in c for x in r)
        if key in seen:
            continue
        seen.add(key)
        if validate_k3(c).ok:
            out.append(c)
    out.sort(key=lambda m: [x for r in m for x in r])
    return out


def _row(args) -> CatalogRow:
    g, height, corroborate = args
    v = decide_d1(g, height=height, corroborate=corroborate)
    rho = len(g)
    halves = [g[i][j] // 2 for i in range(rho) for j in range(i + 1, rho)]
    gcd = 0
    for s in halves:
        gcd = math.gcd(gcd, s)
    return CatalogRow(g, rho, v.case_id, v.answer, v.certificate_primes, gcd == 1 and v.answer == "D1")


def search_lattices(
    rho: int,
    max_half_entry: int,
    case: int | None = None,
    verdict: str | None = None,
    height: int = 500,
    corroborate: bool = False,
    workers: int = 1,
) -> list[CatalogRow]:
    """Classify every admissible matrix with half-entries in {0} U [2, max_half_entry]."""
    if rho not in (2, 3, 4):
        raise DomainError("rho must be 2, 3 or 4")
    if max_half_entry < 2:
        raise DomainError("max_half_entry must be >= 2")
    mats = _candidates(rho, max_half_entry)
    if case is not None:
        mats = [m for m in mats if match_case(m).case_id == case]
    jobs = [(m, height, corroborate) for m in mats]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_row, jobs, chunksize=8))
    else:
        rows = [_row(j) for j in jobs]
    if verdict is not None:
        rows = [r for r in rows if r.verdict == verdict]
    return rows


def permuted(gram: Sequence[Sequence[int]], perm: Sequence[int]) -> list[list[int]]:
    return _permute(_as_int_matrix(gram), perm)
