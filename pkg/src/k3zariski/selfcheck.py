"""Regression battery of published reference values plus the product-formula sweep."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from k3zariski.arith import factorize, legendre, three_squares_excluded, three_squares_shape
from k3zariski.hilbert import hilbert_symbol, product_formula_check

SWEEP_SEED = 12345
SWEEP_PAIRS = 10_000
SWEEP_BOUND = 500


@dataclass
class Outcome:
    name: str
    passed: bool
    detail: str


def _case5_quantities(m1, m2, m3, m4, m5):
    from k3zariski.classify import check_case_condition, match_case

    g = [
        [-2, 0, 2 * m1, 2 * m2],
        [0, -2, 2 * m3, 2 * m4],
        [2 * m1, 2 * m3, -2, 2 * m5],
        [2 * m2, 2 * m4, 2 * m5, -2],
    ]
    q = check_case_condition(match_case(g)).quantities
    return q["A"], q["B"], q["C"], q["B^2-AC"]


def _case6_quantities(s12, s13, s14, s23, s24, s34):
    from k3zariski.classify import check_case_condition, match_case

    g = [
        [-2, 2 * s12, 2 * s13, 2 * s14],
        [2 * s12, -2, 2 * s23, 2 * s24],
        [2 * s13, 2 * s23, -2, 2 * s34],
        [2 * s14, 2 * s24, 2 * s34, -2],
    ]
    q = check_case_condition(match_case(g)).quantities
    return q["A"], q["B"], q["D"], q["E"], q["AD-B^2"]


def _battery() -> list[tuple[str, Callable[[], object], object]]:
    return [
        ("(7,-1)_7 = -1", lambda: hilbert_symbol(7, -1, 7), -1),
        ("(-84,-1)_7 = -1", lambda: hilbert_symbol(-84, -1, 7), -1),
        ("(57,3)_19 = -1", lambda: hilbert_symbol(57, 3, 19), -1),
        ("(-1,-1)_2 = -1", lambda: hilbert_symbol(-1, -1, 2), -1),
        ("legendre(-13,7) = +1", lambda: legendre(-13, 7), 1),
        ("-637 = -(7^2 * 13)", lambda: (factorize(-637).sign, factorize(-637).primes), (-1, {7: 2, 13: 1})),
        ("2^2+2^2+4^2-1 = 23 excluded", lambda: three_squares_excluded(2**2 + 2**2 + 4**2 - 1), True),
        ("23 = 4^0 (8*3 - 1)", lambda: three_squares_shape(23), (0, 3)),
        ("case 5 (6,2,7,2,9): A,B,C,B^2-AC", lambda: _case5_quantities(6, 2, 7, 2, 9), (84, 35, 7, 637)),
        (
            "case 6 (2,3,3,3,2,2): A,B,D,E,AD-B^2",
            lambda: _case6_quantities(2, 3, 3, 3, 2, 2),
            (-57, -39, -40, 3, 759),
        ),
    ]


def run_battery() -> list[Outcome]:
    out = []
    for name, fn, expected in _battery():
        try:
            got = fn()
        except Exception as exc:  # reported, never raised
            out.append(Outcome(name, False, f"raised {exc!r}"))
            continue
        out.append(Outcome(name, got == expected, f"got {got!r}, expected {expected!r}"))
    return out


def random_pairs(n: int = SWEEP_PAIRS, bound: int = SWEEP_BOUND, seed: int = SWEEP_SEED):
    rng = random.Random(seed)

    def one():
        return Fraction(rng.choice((-1, 1)) * rng.randint(1, bound), rng.randint(1, bound))

    return [(one(), one()) for _ in range(n)]


def product_formula_sweep(n: int = SWEEP_PAIRS) -> Outcome:
    t = time.perf_counter()
    bad = [(a, b) for a, b in random_pairs(n) if not product_formula_check(a, b).holds]
    dt = time.perf_counter() - t
    return Outcome(
        f"product formula on {n} seeded pairs",
        not bad,
        f"{n - len(bad)}/{n} pass in {dt:.2f}s" + (f"; first failure {bad[0]}" if bad else ""),
    )


def run_all(sweep: bool = True) -> list[Outcome]:
    out = run_battery()
    if sweep:
        out.append(product_formula_sweep())
    return out
