"""Integer and rational primitives: valuations, residue symbols, factorization,
local square classes and the three-squares exclusion test.

Rationals are :class:`fractions.Fraction`, which normalizes on construction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from k3zariski.errors import DomainError

Rational = Union[int, Fraction]

TRIAL_DIVISION_LIMIT = 10**6
RHO_SEED = 20240917

# Deterministic Miller-Rabin for n < 3.3e24 with these bases.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def to_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"n/d"`` string to a Fraction."""
    if isinstance(x, bool):
        raise DomainError(f"not a rational number: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip().replace("−", "-"))
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse rational {x!r}") from exc
    raise DomainError(f"not a rational number: {x!r}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Place:
    """A place of Q: the real place (``p is None``) or a prime ``p``.

    Places sort with the real place first, then primes ascending.
    """

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def _key(self):
        return (0, 0) if self.p is None else (1, self.p)

    def __lt__(self, other: Place) -> bool:
        return self._key() < other._key()

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)

    @classmethod
    def parse(cls, text: str) -> Place:
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo", "real"):
            return INF
        try:
            return cls(int(t))
        except ValueError as exc:
            raise DomainError(f"cannot parse place {text!r}") from exc


INF = Place()


def as_place(place) -> Place:
    if isinstance(place, Place):
        return place
    if isinstance(place, int) and not isinstance(place, bool):
        return Place(place)
    if isinstance(place, str):
        return Place.parse(place)
    raise DomainError(f"not a place: {place!r}")


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not prime")


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(n: Rational, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    _check_prime(p)
    n = to_rational(n)
    if n == 0:
        raise DomainError("valuation of zero is undefined")
    return _vp_int(n.numerator, p) - _vp_int(n.denominator, p)


def unit_part(n: Rational, p: int) -> Fraction:
    """``n / p**vp(n, p)``."""
    n = to_rational(n)
    return n / Fraction(p) ** vp(n, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p not dividing a, by Euler's criterion."""
    _check_prime(p)
    if p == 2:
        raise DomainError("legendre is for odd primes; use mod2symbol at 2")
    if a % p == 0:
        raise DomainError(f"{p} divides {a}")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def mod2symbol(a: int) -> int:
    """(-1)**((a*a - 1)/8) for odd a: +1 iff a = +-1 mod 8."""
    if a % 2 == 0:
        raise DomainError(f"{a} is even")
    return 1 if a % 8 in (1, 7) else -1


@dataclass(frozen=True)
class Factorization:
    sign: int
    primes: dict[int, int] = field(default_factory=dict)

    def value(self) -> int:
        out = self.sign
        for p, e in self.primes.items():
            out *= p**e
        return out

    def __iter__(self):
        return iter(sorted(self.primes.items()))


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite n."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> Factorization:
    """Complete factorization: trial division, then Pollard-Brent with a fixed seed."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise DomainError(f"not an integer: {n!r}")
    if n == 0:
        raise DomainError("cannot factor zero")
    sign = -1 if n < 0 else 1
    n = abs(n)
    primes: dict[int, int] = {}
    for d in (2, 3):
        while n % d == 0:
            primes[d] = primes.get(d, 0) + 1
            n //= d
    d = 5
    step = 2
    while d <= TRIAL_DIVISION_LIMIT and d * d <= n:
        if n % d == 0:
            while n % d == 0:
                primes[d] = primes.get(d, 0) + 1
                n //= d
            if is_prime(n):
                break
        d += step
        step = 6 - step
    if n > 1:
        rng = random.Random(RHO_SEED)
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                primes[m] = primes.get(m, 0) + 1
                continue
            f = _pollard_brent(m, rng)
            stack.extend((f, m // f))
    return Factorization(sign, dict(sorted(primes.items())))


def prime_divisors(n: Rational) -> list[int]:
    """Primes dividing the numerator or denominator of a nonzero rational."""
    n = to_rational(n)
    if n == 0:
        raise DomainError("zero has no finite prime support")
    ps = set(factorize(n.numerator).primes) | set(factorize(n.denominator).primes)
    return sorted(ps)


def odd_prime_divisors(n: Rational) -> list[int]:
    return [p for p in prime_divisors(n) if p != 2]


def is_rational_square(x: Rational) -> bool:
    x = to_rational(x)
    if x < 0:
        return False
    return all(math.isqrt(v) ** 2 == v for v in (x.numerator, x.denominator))


def is_square_in(x: Rational, place) -> bool:
    """Whether x is a square in the completion of Q at ``place``."""
    x = to_rational(x)
    if x == 0:
        raise DomainError("zero has no square class")
    place = as_place(place)
    if place.is_infinite:
        return x > 0
    p = place.p
    if vp(x, p) % 2:
        return False
    u = unit_part(x, p)
    # u is a p-adic unit; num * den has the same square class.
    w = u.numerator * u.denominator
    if p == 2:
        return w % 8 == 1
    return legendre(w, p) == 1


def three_squares_excluded(n: int) -> bool:
    """True iff n has the shape 4**a * (8k - 1), i.e. is not a sum of three squares."""
    if not isinstance(n, int) or n <= 0:
        raise DomainError(f"expected a positive integer, got {n!r}")
    while n % 4 == 0:
        n //= 4
    return n % 8 == 7


def three_squares_shape(n: int) -> tuple[int, int] | None:
    """The (a, k) with n = 4**a * (8k - 1), or None."""
    if not three_squares_excluded(n):
        return None
    a = 0
    while n % 4 == 0:
        n //= 4
        a += 1
    return a, (n + 1) // 8
