"""Local Hilbert symbols over Q and the global product formula."""

from __future__ import annotations

from dataclasses import dataclass, field

from k3zariski.arith import (
    INF,
    Place,
    Rational,
    as_place,
    legendre,
    mod2symbol,
    odd_prime_divisors,
    to_rational,
    vp,
)
from k3zariski.errors import DomainError


def _integer_representative(x: Rational) -> int:
    # num/den and num*den differ by the square den**2.
    x = to_rational(x)
    if x == 0:
        raise DomainError("Hilbert symbol arguments must be nonzero")
    return x.numerator * x.denominator


def hilbert_symbol(a: Rational, b: Rational, place) -> int:
    """(a, b)_v: +1 iff a*x^2 + b*y^2 = z^2 has a nontrivial solution at v."""
    a = _integer_representative(a)
    b = _integer_representative(b)
    place = as_place(place)
    if place.is_infinite:
        return -1 if a < 0 and b < 0 else 1
    p = place.p
    alpha, beta = vp(a, p), vp(b, p)
    a1, b1 = a // p**alpha, b // p**beta
    if p == 2:
        sign = -1 if ((a1 - 1) // 2) * ((b1 - 1) // 2) % 2 else 1
        return sign * mod2symbol(a1) ** beta * mod2symbol(b1) ** alpha
    sign = -1 if alpha * beta * (p - 1) // 2 % 2 else 1
    s = sign
    if beta % 2:
        s *= legendre(a1, p)
    if alpha % 2:
        s *= legendre(b1, p)
    return s


def critical_places(*values: Rational) -> list[Place]:
    """{inf, 2} plus every odd prime dividing a numerator or denominator."""
    primes: set[int] = set()
    for v in values:
        primes.update(odd_prime_divisors(v))
    return [INF, Place(2)] + [Place(p) for p in sorted(primes)]


@dataclass
class IdentityReport:
    place: Place
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def first_failure(self) -> str | None:
        return next((k for k, ok in self.checks.items() if not ok), None)


def symbol_identities_check(a: Rational, b: Rational, c: Rational, place) -> IdentityReport:
    """Evaluate the standard symbol identities on (a, b, c) at one place."""
    a, b, c = (to_rational(x) for x in (a, b, c))
    place = as_place(place)

    def h(x, y):
        return hilbert_symbol(x, y, place)

    rep = IdentityReport(place)
    rep.checks["(a,b)=(b,a)"] = h(a, b) == h(b, a)
    rep.checks["(a,c^2)=1"] = h(a, c * c) == 1
    rep.checks["(a,-a)=1"] = h(a, -a) == 1
    if a != 1:
        rep.checks["(a,1-a)=1"] = h(a, 1 - a) == 1
    rep.checks["(b,ac)=(b,a)(b,c)"] = h(b, a * c) == h(b, a) * h(b, c)
    rep.checks["(a,a)=(a,-1)"] = h(a, a) == h(a, -1)
    rep.checks["(a,bc^2)=(a,b)"] = h(a, b * c * c) == h(a, b)
    return rep


@dataclass
class ProductFormulaReport:
    a: Rational
    b: Rational
    table: dict[Place, int]

    @property
    def product(self) -> int:
        out = 1
        for s in self.table.values():
            out *= s
        return out

    @property
    def holds(self) -> bool:
        return self.product == 1


def product_formula_check(a: Rational, b: Rational) -> ProductFormulaReport:
    """Tabulate (a, b)_v over the critical places; all other places give +1."""
    a, b = to_rational(a), to_rational(b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol arguments must be nonzero")
    table = {v: hilbert_symbol(a, b, v) for v in critical_places(a, b)}
    return ProductFormulaReport(a, b, table)
