"""Zariski decompositions on a surface whose effective cone is spanned by a
finite list of curves.

The modeled cone: pseudoeffective means a nonnegative combination of the
basis curves, nef means nonnegative against every basis curve. On a K3
surface with Picard number at least 3 this is exact when the basis consists
of all smooth rational curves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from k3zariski import _linalg
from k3zariski.errors import DomainError, InternalInconsistency, NotEffective

MODEL_NOTE = (
    "effective cone modeled as the span of the supplied curves; nef means "
    "nonnegative against each of them"
)


@dataclass(frozen=True)
class SurfaceLattice:
    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in r) for r in self.gram)
        if not _linalg.is_symmetric(g):
            raise DomainError("intersection matrix must be square and symmetric")
        object.__setattr__(self, "gram", g)
        labels = tuple(self.labels) or tuple(f"C{i + 1}" for i in range(len(g)))
        if len(labels) != len(g):
            raise DomainError("one label per curve required")
        object.__setattr__(self, "labels", labels)

    @property
    def rho(self) -> int:
        return len(self.gram)

    def intersect(self, d: Sequence, e: Sequence) -> Fraction:
        return _linalg.dot(_linalg.mat_vec(self.gram, d), e)

    def against_curves(self, d: Sequence) -> list:
        """(D.C_1, ..., D.C_rho)."""
        return _linalg.mat_vec(self.gram, d)

    def has_hodge_signature(self) -> bool:
        from k3zariski.quadform import signature

        return signature(self.gram) == (1, self.rho - 1, 0)


def as_lattice(x) -> SurfaceLattice:
    return x if isinstance(x, SurfaceLattice) else SurfaceLattice(tuple(map(tuple, x)))


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: tuple[Fraction, ...]
    negative: tuple[Fraction, ...]
    support: tuple[int, ...]
    denominator: int
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "P": [str(x) for x in self.positive],
            "N": [str(x) for x in self.negative],
            "support": list(self.support),
            "denominator": self.denominator,
        }


def is_negative_definite(lattice, subset: Sequence[int]) -> bool:
    """Leading principal minors alternate in sign starting negative.

    The empty subset counts as negative definite.
    """
    lat = as_lattice(lattice)
    idx = list(subset)
    if any(not 0 <= i < lat.rho for i in idx):
        raise DomainError(f"subset {idx} out of range")
    minors = _linalg.leading_minors(_linalg.submatrix(lat.gram, idx))
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))


def is_nef(lattice, d: Sequence) -> bool:
    return all(x >= 0 for x in as_lattice(lattice).against_curves(d))


def _lcm_denominators(values) -> int:
    out = 1
    for v in values:
        den = Fraction(v).denominator
        out = out * den // math.gcd(out, den)
    return out


def zariski_decompose(lattice, divisor: Sequence[int]) -> ZariskiDecomposition:
    """Fujita's iteration: grow the negative support until the remainder is nef."""
    lat = as_lattice(lattice)
    d = [Fraction(x) for x in divisor]
    if len(d) != lat.rho:
        raise DomainError(f"divisor has {len(d)} coefficients, lattice rank is {lat.rho}")
    if any(x < 0 for x in d):
        raise NotEffective(f"divisor {list(divisor)} has a negative coefficient")
    dc = lat.against_curves(d)
    support = sorted(i for i in range(lat.rho) if dc[i] < 0)
    n = [Fraction(0)] * lat.rho
    p = d
    iterations = 0
    while support:
        iterations += 1
        if iterations > lat.rho:
            raise InternalInconsistency("support failed to stabilize")
        if not is_negative_definite(lat, support):
            raise InternalInconsistency(
                f"curves {[lat.labels[i] for i in support]} meet D negatively "
                "but are not negative definite"
            )
        sub = _linalg.submatrix(lat.gram, support)
        coeffs = _linalg.solve(sub, [dc[i] for i in support])
        if any(a < 0 for a in coeffs):
            raise InternalInconsistency(f"negative part has a negative coefficient: {coeffs}")
        n = [Fraction(0)] * lat.rho
        for i, a in zip(support, coeffs):
            n[i] = a
        p = [x - y for x, y in zip(d, n)]
        pc = lat.against_curves(p)
        grown = sorted(set(support) | {i for i in range(lat.rho) if pc[i] < 0})
        if grown == support:
            break
        support = grown
    return ZariskiDecomposition(
        tuple(p),
        tuple(n),
        tuple(i for i in support if n[i] != 0),
        _lcm_denominators(itertools.chain(p, n)),
        iterations,
    )


def zariski_denominator(lattice, divisor: Sequence[int]) -> int:
    return zariski_decompose(lattice, divisor).denominator


@dataclass
class NumThmReport:
    cond_a: bool
    cond_b: bool
    violations: list[str] = field(default_factory=list)
    note: str = (
        "conditions checked over the supplied curves only; further curves on "
        "the surface are not seen"
    )

    @property
    def holds(self) -> bool:
        return self.cond_a and self.cond_b

    def to_dict(self) -> dict:
        return {
            "cond_a": self.cond_a,
            "cond_b": self.cond_b,
            "violations": list(self.violations),
            "note": self.note,
        }


def check_numthm(lattice) -> NumThmReport:
    """(a) C^2 | C.D for each negative curve C; (b) negative definite pairs are orthogonal."""
    lat = as_lattice(lattice)
    g = lat.gram
    rep = NumThmReport(True, True)
    for i in range(lat.rho):
        if g[i][i] >= 0:
            continue
        for j in range(lat.rho):
            if g[i][j] % g[i][i]:
                rep.cond_a = False
                rep.violations.append(
                    f"(a) {lat.labels[i]}^2 = {g[i][i]} does not divide "
                    f"{lat.labels[i]}.{lat.labels[j]} = {g[i][j]}"
                )
    for i, j in itertools.combinations(range(lat.rho), 2):
        if g[i][j] != 0 and is_negative_definite(lat, (i, j)):
            rep.cond_b = False
            rep.violations.append(
                f"(b) {lat.labels[i]}, {lat.labels[j]} span a negative definite "
                f"pair with intersection {g[i][j]}"
            )
    return rep


def max_denominator_bounded(lattice, height: int) -> int:
    """Largest Zariski denominator over divisors with coefficients in [0, height]."""
    lat = as_lattice(lattice)
    if height < 0:
        raise DomainError("height must be >= 0")
    best = 1
    for coeffs in itertools.product(range(height + 1), repeat=lat.rho):
        best = max(best, zariski_denominator(lat, coeffs))
    return best


def worst_divisor(lattice, height: int) -> tuple[tuple[int, ...], int]:
    """A divisor attaining :func:`max_denominator_bounded` (first in grid order)."""
    lat = as_lattice(lattice)
    best, arg = 1, (0,) * lat.rho
    for coeffs in itertools.product(range(height + 1), repeat=lat.rho):
        den = zariski_denominator(lat, coeffs)
        if den > best:
            best, arg = den, coeffs
    return arg, best
