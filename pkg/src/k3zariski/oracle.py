"""Brute-force verification independent of the Hilbert-symbol engine.

* :func:`find_integer_zero` scans integer vectors by height.
* :func:`local_solubility_search` decides primitive solubility of
  ``q(x) = 0 mod p**k`` by exhaustive residue search.
* :func:`crosscheck` runs the case condition, the invariant engine and the
  brute-force searches side by side on a K3 Gram matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from k3zariski import _linalg
from k3zariski.arith import factorize, is_prime, vp
from k3zariski.errors import BudgetExceeded, DomainError

DEFAULT_HEIGHT = 500
PREFIX_BUDGET = 60_000_000
NODE_BUDGET = 400_000
_CHUNK = 1 << 20


def integer_gram(q, primitive: bool = True) -> list[list[int]]:
    """Clear denominators of a Gram matrix; with ``primitive`` also divide out the content.

    Both scalings have the same zeros over Z. Congruences mod p**k do see the
    content, so the local search keeps it.
    """
    rows = q.gram if hasattr(q, "gram") else q
    rows = [[Fraction(x) for x in r] for r in rows]
    den = 1
    for r in rows:
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
    g = [[int(x * den) for x in r] for r in rows]
    c = 0
    for r in g:
        for x in r:
            c = math.gcd(c, x)
    if primitive and c > 1:
        g = [[x // c for x in r] for r in g]
    return g


def _qval(g: list[list[int]], x: Sequence[int]) -> int:
    n = len(g)
    return sum(g[i][j] * x[i] * x[j] for i in range(n) for j in range(n))


# ---------------------------------------------------------------------------
# local solubility


def default_precision(q, p: int) -> int:
    """Lifting-safe precision 2*vp(4*|det|) + 3 for the integer Gram matrix."""
    g = integer_gram(q, primitive=False)
    d = abs(int(_linalg.det(g)))
    if d == 0:
        raise DomainError("degenerate form")
    return 2 * vp(4 * d, p) + 3


def _extra(p: int) -> int:
    # q(x) mod 2**(j+1) depends only on x mod 2**j, so a 2-adic node carries one more level
    return 1 if p == 2 else 0


def _children(g, r, j, p) -> Iterator[tuple[int, ...]]:
    """Lifts r + p**j t of a level-j node that vanish mod p**(j+1+extra)."""
    n = len(g)
    pj = p**j
    if p == 2 or j == 0:
        m = pj * p ** (1 + _extra(p))
        for t in itertools.product(range(p), repeat=n):
            x = tuple(ri + pj * ti for ri, ti in zip(r, t))
            if _qval(g, x) % m == 0:
                yield x
        return
    # odd p, j >= 1: q(r + p^j t) = q(r) + 2 p^j (G r).t  (mod p^(j+1))
    c = (_qval(g, r) // pj) % p
    grad = [2 * sum(g[i][k] * r[k] for k in range(n)) % p for i in range(n)]
    free = next((i for i in range(n) if grad[i]), None)
    if free is None:
        if c == 0:
            for t in itertools.product(range(p), repeat=n):
                yield tuple(ri + pj * ti for ri, ti in zip(r, t))
        return
    inv = pow(grad[free], -1, p)
    others = [i for i in range(n) if i != free]
    for rest in itertools.product(range(p), repeat=n - 1):
        t = [0] * n
        for i, v in zip(others, rest):
            t[i] = v
        s = c + sum(grad[i] * t[i] for i in others)
        t[free] = (-s * inv) % p
        yield tuple(ri + pj * ti for ri, ti in zip(r, t))


def _level_one(g, p) -> Iterator[tuple[int, ...]]:
    n = len(g)
    if p**n > NODE_BUDGET * 8:
        raise BudgetExceeded(f"{p}^{n} residues mod p exceed the budget")
    grid = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(-1, n)
    m = p ** (1 + _extra(p))
    ga = np.array([[x % m for x in r] for r in g], dtype=np.int64)
    vals = np.einsum("ki,ij,kj->k", grid, ga, grid) % m
    ok = (vals == 0) & grid.any(axis=1)
    for row in grid[ok]:
        yield tuple(int(v) for v in row)


def _hensel_liftable(g, r, j, p) -> bool:
    """A node with v(q(r)) >= j + extra lifts to a p-adic zero when some 2(Gr)_i is small.

    Newton on t -> q(r + t e_i) needs v(q(r)) > 2 v(2 (Gr)_i): at least 1 for
    odd p with (Gr)_i a unit, at least 3 for p = 2 with (Gr)_i odd.
    """
    if j + _extra(p) < (3 if p == 2 else 1):
        return False
    return any(sum(gi[k] * r[k] for k in range(len(r))) % p for gi in g)


def local_solubility_search(q, p: int, k: int | None = None, budget: int = NODE_BUDGET) -> bool:
    """True iff q(x) = 0 mod p**k has a solution with some coordinate prime to p.

    A rational Gram matrix is first multiplied by its common denominator.

    Depth-first over residues mod p, p**2, ...; a residue mod p**(j+1) can
    only solve the congruence if its reduction mod p**j does, so the search is
    exhaustive. Nodes passing the Hensel test stop the search early. Raises
    BudgetExceeded past ``budget`` nodes.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    g = integer_gram(q, primitive=False)
    if k is None:
        k = default_precision(g, p)
    if k < 1:
        raise DomainError("precision must be >= 1")
    if p == 2 and k == 1:
        return any(_qval(g, x) % 2 == 0 for x in itertools.product(range(2), repeat=len(g)) if any(x))
    g = [[x % p**k for x in r] for r in g]
    visited = 0
    stack: list[tuple[tuple[int, ...], int]] = []
    for r in _level_one(g, p):
        if 1 + _extra(p) >= k:
            return True
        stack.append((r, 1))
        while stack:
            node, j = stack.pop()
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"local search at p={p}, k={k} exceeded {budget} nodes")
            if _hensel_liftable(g, node, j, p):
                return True
            kids = _children(g, node, j, p)
            if j + 1 + _extra(p) >= k:
                if next(kids, None) is not None:
                    return True
                continue
            # push in reverse so lexicographically first child is explored first
            level = list(itertools.islice(kids, budget))
            stack.extend((c, j + 1) for c in reversed(level))
    return False


# ---------------------------------------------------------------------------
# integer zeros


def _is_definite(g) -> bool:
    minors = _linalg.leading_minors(g)
    pos = all(m > 0 for m in minors)
    neg = all((m < 0) if i % 2 == 0 else (m > 0) for i, m in enumerate(minors))
    return pos or neg


def _sieve_excludes(g) -> bool:
    """True if some local obstruction proves q has no nonzero integer zero."""
    if _is_definite(g):
        return True
    d = int(_linalg.det(g))
    if d == 0:
        return False
    for p in factorize(2 * d).primes:
        try:
            if not local_solubility_search(g, p):
                return True
        except BudgetExceeded:
            continue
    return False


def _isqrt_vec(v: np.ndarray) -> np.ndarray:
    s = np.floor(np.sqrt(np.maximum(v, 0).astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > v, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= v, s + 1, s)
    return s


def _prefixes(n1: int, h: int, start: int, stop: int) -> np.ndarray:
    """Rows (x0, ..., x_{n1-1}) with x0 in [start, stop) and the rest in [-h, h]."""
    x0 = np.arange(start, stop, dtype=np.int64)
    rest = np.arange(-h, h + 1, dtype=np.int64)
    axes = [x0] + [rest] * (n1 - 1)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _zeros_in_box(g: list[list[int]], h: int) -> list[tuple[int, ...]]:
    """All primitive canonical zeros of max-norm <= h (g[-1][-1] != 0)."""
    n = len(g)
    a = g[-1][-1]
    lin = np.array([g[i][-1] for i in range(n - 1)], dtype=np.int64)
    head = np.array([r[:-1] for r in g[:-1]], dtype=np.int64)
    bound_l = h * int(np.abs(lin).sum())
    bound_q = h * h * int(np.abs(head).sum())
    if bound_l * bound_l + abs(a) * bound_q >= 2**62:
        raise BudgetExceeded("search values overflow 64-bit arithmetic")
    rows_per_x0 = (2 * h + 1) ** (n - 2)
    step = max(1, _CHUNK // rows_per_x0)
    found = []
    for start in range(0, h + 1, step):
        pre = _prefixes(n - 1, h, start, min(h + 1, start + step))
        lv = pre @ lin
        qv = np.einsum("ki,ij,kj->k", pre, head, pre)
        # a x^2 + 2 L x + Q = 0  =>  x = (-L +- sqrt(L^2 - a Q)) / a
        disc = lv * lv - a * qv
        s = _isqrt_vec(disc)
        ok = (disc >= 0) & (s * s == disc)
        if not ok.any():
            continue
        pre, lv, s = pre[ok], lv[ok], s[ok]
        for sgn in (1, -1):
            num = -lv + sgn * s
            good = (num % a == 0)
            xs = num[good] // a
            cand = np.concatenate([pre[good], xs[:, None]], axis=1)
            cand = cand[np.abs(xs) <= h]
            for row in cand:
                v = tuple(int(t) for t in row)
                if _canonical_primitive(v):
                    found.append(v)
    return found


def _canonical_primitive(v: tuple[int, ...]) -> bool:
    first = next((t for t in v if t), 0)
    if first <= 0:
        return False
    gcd = 0
    for t in v:
        gcd = math.gcd(gcd, t)
    return gcd == 1


def _order_key(v):
    # coordinates compare in enumeration order 0, 1, -1, 2, -2, ...
    return (max(abs(t) for t in v), tuple((abs(t), t < 0) for t in v))


def find_integer_zero(q, height: int = DEFAULT_HEIGHT, *, sieve: bool = True) -> tuple[int, ...] | None:
    """Smallest primitive integer zero of max-norm <= height, or None.

    Vectors are normalized so the first nonzero coordinate is positive and
    ordered by max-norm, then lexicographically with coordinates compared in
    the order 0, 1, -1, 2, -2, ... With ``sieve`` the search
    first looks for a local obstruction (definiteness, or no primitive zero
    mod p**k for a prime p dividing 2*det); one found means no integer zero
    exists at any height.
    """
    if height < 1:
        raise DomainError("height must be >= 1")
    g = integer_gram(q)
    n = len(g)
    if g[-1][-1] == 0:
        return (0,) * (n - 1) + (1,)
    if n == 1:
        return None
    if sieve and _sieve_excludes(g):
        return None
    h = 1
    while True:
        h = min(h, height)
        if (h + 1) * (2 * h + 1) ** (n - 2) > PREFIX_BUDGET:
            raise BudgetExceeded(f"height {h} in dimension {n} exceeds the scan budget")
        found = _zeros_in_box(g, h)
        if found:
            best = min(found, key=_order_key)
            assert _qval(g, best) == 0
            return best
        if h == height:
            return None
        h *= 2


# ---------------------------------------------------------------------------
# cross-check harness


@dataclass
class LocalCheck:
    p: int
    engine: bool
    search: bool | None  # None when skipped

    @property
    def agrees(self) -> bool:
        return self.search is None or self.search == self.engine


@dataclass
class CrosscheckReport:
    condition_anisotropic: bool | None
    engine_anisotropic: bool
    witness: tuple[int, ...] | None
    search_status: str  # "found", "none", "skipped"
    height: int
    local_checks: list[LocalCheck] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "condition_anisotropic": self.condition_anisotropic,
            "engine_anisotropic": self.engine_anisotropic,
            "zero_search": {
                "height": self.height,
                "status": self.search_status,
                "witness": list(self.witness) if self.witness else None,
            },
            "local_checks": [
                {
                    "p": c.p,
                    "engine_isotropic": c.engine,
                    "search_isotropic": c.search,
                    "status": "skipped" if c.search is None else ("agree" if c.agrees else "DISAGREE"),
                }
                for c in self.local_checks
            ],
            "problems": list(self.problems),
        }


def crosscheck(gram, height: int = DEFAULT_HEIGHT, condition=None) -> CrosscheckReport:
    """Compare case condition, invariant engine and brute force on a K3 Gram matrix.

    ``condition`` may carry a precomputed case-condition report; otherwise the
    case is matched here.
    """
    from k3zariski.classify import check_case_condition, match_case
    from k3zariski.quadform import QuadraticForm, critical_places, is_isotropic_global, is_isotropic_local

    q = QuadraticForm(gram)
    verdict = is_isotropic_global(q, witness_height=0)
    engine_aniso = verdict.anisotropic

    cond = None
    if condition is None:
        m = match_case(gram)
        if m.case_id is not None:
            condition = check_case_condition(m)
    if condition is not None:
        cond = condition.holds

    try:
        witness = find_integer_zero(q, height)
        status = "found" if witness else "none"
    except BudgetExceeded:
        witness, status = None, "skipped"

    report = CrosscheckReport(cond, engine_aniso, witness, status, height)
    if cond is not None and cond != engine_aniso:
        report.problems.append(
            f"case condition says {'anisotropic' if cond else 'isotropic'}, "
            f"invariant engine says {'anisotropic' if engine_aniso else 'isotropic'}"
        )
    if witness is not None:
        if _qval(integer_gram(q), witness) != 0:
            report.problems.append(f"search returned a non-zero {witness}")
        if engine_aniso:
            report.problems.append(f"integer zero {witness} contradicts anisotropy")
    for place in critical_places(q):
        if place.is_infinite:
            continue
        eng = is_isotropic_local(q, place)
        try:
            found = local_solubility_search(q, place.p)
        except BudgetExceeded:
            found = None
        chk = LocalCheck(place.p, eng, found)
        report.local_checks.append(chk)
        if not chk.agrees:
            report.problems.append(
                f"at p={place.p} the invariants say {'isotropic' if eng else 'anisotropic'} "
                f"but the residue search says {'isotropic' if found else 'anisotropic'}"
            )
    return report
