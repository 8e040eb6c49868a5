"""Rational quadratic forms q(x) = x^T G x: diagonalization, signature,
discriminant, local invariants and local/global isotropy with certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from k3zariski import _linalg
from k3zariski.arith import (
    INF,
    Place,
    Rational,
    as_place,
    is_rational_square,
    is_square_in,
    odd_prime_divisors,
    to_rational,
)
from k3zariski.errors import BudgetExceeded, Degenerate, DomainError
from k3zariski.hilbert import hilbert_symbol

MAX_DIM = 16


@dataclass(frozen=True)
class DiagonalForm:
    """``T^T G T = diag(coeffs)``."""

    coeffs: tuple[Fraction, ...]
    transform: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return sum(1 for c in self.coeffs if c != 0)


class QuadraticForm:
    """A symmetric rational Gram matrix."""

    def __init__(self, gram: Sequence[Sequence]):
        rows = [[to_rational(x) for x in row] for row in gram]
        n = len(rows)
        if not 1 <= n <= MAX_DIM:
            raise DomainError(f"dimension {n} outside 1..{MAX_DIM}")
        if not _linalg.is_square(rows):
            raise DomainError("Gram matrix is not square")
        if not _linalg.is_symmetric(rows):
            raise DomainError("Gram matrix is not symmetric")
        self.gram: tuple[tuple[Fraction, ...], ...] = tuple(tuple(r) for r in rows)

    @classmethod
    def diagonal(cls, coeffs: Sequence[Rational]) -> QuadraticForm:
        n = len(coeffs)
        return cls([[coeffs[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def binary(cls, a: Rational, b: Rational, c: Rational) -> QuadraticForm:
        """The form a x^2 + b x y + c y^2."""
        b = to_rational(b)
        return cls([[a, b / 2], [b / 2, c]])

    @property
    def n(self) -> int:
        return len(self.gram)

    def __call__(self, x: Sequence[Rational]) -> Fraction:
        g = self.gram
        return sum(
            (g[i][j] * x[i] * x[j] for i in range(self.n) for j in range(self.n)),
            Fraction(0),
        )

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        rows = [[str(x) for x in r] for r in self.gram]
        return f"QuadraticForm({rows})"

    def transformed(self, t: Sequence[Sequence[Rational]]) -> QuadraticForm:
        """The form x -> q(T x), with Gram matrix T^T G T."""
        n = self.n
        g = self.gram
        gt = [[sum(g[i][k] * t[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return QuadraticForm(
            [[sum(t[k][i] * gt[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        )

    @cached_property
    def det(self) -> Fraction:
        return _linalg.det(self.gram)

    @cached_property
    def diagonalization(self) -> DiagonalForm:
        return diagonalize(self)


def as_form(q) -> QuadraticForm:
    return q if isinstance(q, QuadraticForm) else QuadraticForm(q)


def diagonalize(q: QuadraticForm) -> DiagonalForm:
    """Congruence-diagonalize by symmetric pivoting, exactly over Q."""
    q = as_form(q)
    n = q.n
    a = [list(r) for r in q.gram]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_multiple(dst: int, src: int, f: Fraction) -> None:
        # basis change e_dst <- e_dst + f * e_src
        for i in range(n):
            a[i][dst] += f * a[i][src]
        for j in range(n):
            a[dst][j] += f * a[src][j]
        for i in range(n):
            t[i][dst] += f * t[i][src]

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
            if j is None:
                continue
            if a[j][j] != 0:
                swap(k, j)
            else:
                add_multiple(k, j, Fraction(1))
        for j in range(k + 1, n):
            if a[k][j] != 0:
                add_multiple(j, k, -a[k][j] / a[k][k])

    coeffs = tuple(a[i][i] for i in range(n))
    return DiagonalForm(coeffs, tuple(tuple(r) for r in t))


def signature(q) -> tuple[int, int, int]:
    c = as_form(q).diagonalization.coeffs
    return (sum(x > 0 for x in c), sum(x < 0 for x in c), sum(x == 0 for x in c))


def discriminant(q) -> Fraction:
    d = as_form(q).det
    if d == 0:
        raise Degenerate("form is degenerate")
    return d


@dataclass(frozen=True)
class LocalInvariants:
    place: Place
    d_square: bool
    epsilon: int

    def to_dict(self) -> dict:
        return {"place": str(self.place), "d_square": self.d_square, "epsilon": self.epsilon}


def _nonzero_coeffs(q: QuadraticForm) -> tuple[Fraction, ...]:
    c = q.diagonalization.coeffs
    if any(x == 0 for x in c):
        raise Degenerate("form is degenerate")
    return c


def hasse_epsilon(coeffs: Sequence[Rational], place) -> int:
    eps = 1
    for i in range(len(coeffs)):
        for j in range(i + 1, len(coeffs)):
            eps *= hilbert_symbol(coeffs[i], coeffs[j], place)
    return eps


def local_invariants(q, place) -> LocalInvariants:
    q = as_form(q)
    place = as_place(place)
    c = _nonzero_coeffs(q)
    return LocalInvariants(place, is_square_in(discriminant(q), place), hasse_epsilon(c, place))


def is_isotropic_local(q, place) -> bool:
    """Whether q represents 0 nontrivially over the completion at ``place``."""
    q = as_form(q)
    place = as_place(place)
    c = _nonzero_coeffs(q)
    n = len(c)
    if place.is_infinite:
        return any(x > 0 for x in c) and any(x < 0 for x in c)
    if n == 1:
        return False
    d = discriminant(q)
    if n == 2:
        return is_square_in(-d, place)
    if n >= 5:
        return True
    inv = local_invariants(q, place)
    if n == 3:
        return hilbert_symbol(-1, -d, place) == inv.epsilon
    return not inv.d_square or hilbert_symbol(-1, -1, place) == inv.epsilon


def critical_places(q) -> list[Place]:
    """inf, 2 and the odd primes dividing some diagonal coefficient."""
    primes: set[int] = set()
    for x in _nonzero_coeffs(as_form(q)):
        primes.update(odd_prime_divisors(x))
    return [INF, Place(2)] + [Place(p) for p in sorted(primes)]


def _certificate_key(place: Place):
    # odd primes first, then 2, then the real place
    if place.is_infinite:
        return (2, 0)
    return (1, 0) if place.p == 2 else (0, place.p)


@dataclass
class IsotropyVerdict:
    isotropic: bool
    witness: tuple[int, ...] | None = None
    certificate: Place | None = None
    invariants: LocalInvariants | None = None
    failing_places: tuple[Place, ...] = ()
    checked_places: tuple[Place, ...] = field(default=())

    @property
    def anisotropic(self) -> bool:
        return not self.isotropic

    def to_dict(self) -> dict:
        out: dict = {
            "isotropic": self.isotropic,
            "checked_places": [str(v) for v in self.checked_places],
            "failing_places": [str(v) for v in self.failing_places],
        }
        if self.isotropic:
            out["witness"] = list(self.witness) if self.witness is not None else None
        else:
            out["certificate_place"] = str(self.certificate)
            out["certificate_invariants"] = self.invariants.to_dict() if self.invariants else None
        return out


def is_isotropic_global(q, witness_height: int = 64) -> IsotropyVerdict:
    """Hasse-Minkowski over the critical places.

    The certificate is the smallest failing odd prime, else 2, else the real
    place. An isotropic verdict carries the smallest integer zero of height at
    most ``witness_height`` when the brute-force search finds one.
    """
    q = as_form(q)
    places = critical_places(q)
    failing = tuple(v for v in places if not is_isotropic_local(q, v))
    if failing:
        cert = min(failing, key=_certificate_key)
        inv = local_invariants(q, cert)
        return IsotropyVerdict(False, None, cert, inv, failing, tuple(places))
    witness = None
    if witness_height > 0:
        from k3zariski.oracle import find_integer_zero

        try:
            witness = find_integer_zero(q, witness_height)
        except BudgetExceeded:
            witness = None
    return IsotropyVerdict(True, witness, checked_places=tuple(places))


def binary_isotropic(a: Rational, b: Rational, c: Rational) -> bool:
    """Whether a x^2 + b x y + c y^2 has a nontrivial rational zero."""
    a, b, c = (to_rational(x) for x in (a, b, c))
    if a == b == c == 0:
        raise DomainError("zero form")
    return is_rational_square(b * b - 4 * a * c)
