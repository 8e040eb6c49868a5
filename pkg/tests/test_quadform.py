import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CASE1, CASE2_22, CASE3_222, CASE5_EX, CASE6_EX
from k3zariski.arith import INF, Place, is_rational_square
from k3zariski.classify import half_form, match_case
from k3zariski.errors import Degenerate, DomainError
from k3zariski.oracle import find_integer_zero
from k3zariski.quadform import (
    QuadraticForm,
    binary_isotropic,
    critical_places,
    diagonalize,
    discriminant,
    is_isotropic_global,
    is_isotropic_local,
    local_invariants,
    signature,
)


def sym_matrices(n_min=2, n_max=5, lo=-9, hi=9):
    @st.composite
    def build(draw):
        n = draw(st.integers(n_min, n_max))
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g[i][j] = g[j][i] = draw(st.integers(lo, hi))
        return g

    return build()


def random_unimodularish(n, rng):
    while True:
        t = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(t).det() != 0:
            return t


def squarefree(v):
    s = -1 if v < 0 else 1
    return s * sympy.prod([p for p, e in sympy.factorint(abs(v)).items() if e % 2])


# diagonalization -------------------------------------------------------------


def test_diagonal_input_unchanged():
    d = diagonalize(QuadraticForm.diagonal([3, -5, 7]))
    assert list(d.coeffs) == [3, -5, 7]
    assert [list(r) for r in d.transform] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_case2_square_classes():
    q = half_form(match_case(CASE2_22))
    classes = sorted(squarefree(int(c.numerator * c.denominator)) for c in diagonalize(q).coeffs)
    assert classes == [-1, -1, 7]


@settings(max_examples=150)
@given(sym_matrices())
def test_diagonalization_invariants(g):
    q = QuadraticForm(g)
    d = diagonalize(q)
    t = sympy.Matrix(d.transform)
    assert t.det() != 0
    assert t.T * sympy.Matrix(g) * t == sympy.diag(*d.coeffs)
    assert d.rank == sympy.Matrix(g).rank()
    det = sympy.Matrix(g).det()
    nz = [c for c in d.coeffs if c != 0]
    if det != 0:
        assert is_rational_square(Fraction(int(det)) / sympy.prod(nz))


def test_zero_pivot_handled():
    d = diagonalize(QuadraticForm([[0, 1], [1, 0]]))
    assert sorted(x > 0 for x in d.coeffs) == [False, True]


def test_nonsymmetric_rejected():
    with pytest.raises(DomainError):
        QuadraticForm([[1, 2], [3, 4]])


# signature / discriminant ------------------------------------------------------


def test_signature_examples():
    assert signature(CASE1) == (1, 1, 0)
    assert signature(half_form(match_case(CASE5_EX))) == (1, 3, 0)
    assert signature(QuadraticForm.diagonal([-1, -1])) == (0, 2, 0)


@settings(max_examples=150)
@given(sym_matrices())
def test_signature_matches_eigenvalues(g):
    ev = np.linalg.eigvalsh(np.array(g, dtype=float))
    tol = 1e-9
    if np.min(np.abs(ev)) < 1e-6 and sympy.Matrix(g).det() != 0:
        return  # numerically ambiguous; exact side has no such issue
    expected = (int((ev > tol).sum()), int((ev < -tol).sum()), int((np.abs(ev) <= tol).sum()))
    assert signature(g) == expected


def test_sylvester_invariance():
    rng = random.Random(7)
    q = QuadraticForm(CASE6_EX)
    base = signature(q)
    for _ in range(20):
        assert signature(q.transformed(random_unimodularish(4, rng))) == base


def test_discriminant_examples():
    assert discriminant(QuadraticForm.diagonal([7, -1, -1])) == 7
    g6 = [[-1 if i == j else x // 2 for j, x in enumerate(r)] for i, r in enumerate(CASE6_EX)]
    assert discriminant(g6) == -253
    d5 = discriminant(half_form(match_case(CASE5_EX)))
    assert squarefree(int(d5)) == -13
    with pytest.raises(Degenerate):
        discriminant([[1, 1], [1, 1]])


# local invariants --------------------------------------------------------------


def test_local_invariant_examples():
    q5 = half_form(match_case(CASE5_EX))
    li = local_invariants(q5, 7)
    assert li.d_square is True and li.epsilon == -1
    for p in (None, 2, 3, 5):
        assert local_invariants(QuadraticForm.diagonal([1, 1]), Place(p)).epsilon == 1
    assert local_invariants(QuadraticForm.diagonal([7, -1, -1]), 7).epsilon == 1


def test_epsilon_well_defined():
    rng = random.Random(11)
    for g in (CASE2_22, CASE3_222, CASE6_EX):
        q = QuadraticForm(g)
        places = critical_places(q)
        base = {v: local_invariants(q, v) for v in places}
        for _ in range(20):
            q2 = q.transformed(random_unimodularish(len(g), rng))
            for v in places:
                li = local_invariants(q2, v)
                assert (li.d_square, li.epsilon) == (base[v].d_square, base[v].epsilon)


def test_local_isotropy_examples():
    assert not is_isotropic_local(QuadraticForm.diagonal([7, -1, -1]), 7)
    assert is_isotropic_local(half_form(match_case(CASE5_EX)), INF)
    rng = random.Random(3)
    for _ in range(30):
        q = QuadraticForm.diagonal([rng.choice([-1, 1]) * rng.randint(1, 50) for _ in range(5)])
        for p in (2, 3, 5, 7, 11):
            assert is_isotropic_local(q, p)


# global isotropy ----------------------------------------------------------------


def test_global_examples():
    v = is_isotropic_global(half_form(match_case(CASE2_22)))
    assert v.anisotropic and v.certificate == Place(7)
    v = is_isotropic_global(QuadraticForm.diagonal([1, -4]))
    assert v.isotropic and v.witness == (2, 1)
    v = is_isotropic_global(half_form(match_case(CASE3_222)))
    assert v.anisotropic and v.certificate == Place(3)


@settings(max_examples=100)
@given(sym_matrices(2, 4, -6, 6))
def test_local_global_consistency(g):
    q = QuadraticForm(g)
    if q.det == 0:
        with pytest.raises(Degenerate):
            is_isotropic_global(q)
        return
    v = is_isotropic_global(q, witness_height=0)
    local = all(is_isotropic_local(q, p) for p in critical_places(q))
    assert v.isotropic == local
    if v.witness is not None:
        assert q(v.witness) == 0 and any(v.witness)
    if v.anisotropic:
        assert not is_isotropic_local(q, v.certificate)


def _diagonal_classes(n):
    vals = [x for x in range(-15, 16) if x]
    seen = set()
    for c in itertools.combinations_with_replacement(vals, n):
        # q and -q have the same zeros
        key = min(c, tuple(sorted(-x for x in c)))
        if key not in seen:
            seen.add(key)
            yield key


def test_oracle_agreement_n2_n3():
    # every diagonal form with entries in [-15,15], up to order and overall sign
    for n in (2, 3):
        for c in _diagonal_classes(n):
            q = QuadraticForm.diagonal(c)
            iso = is_isotropic_global(q, witness_height=0).isotropic
            w = find_integer_zero(q, 500)
            assert iso == (w is not None), c
            if w is not None:
                assert q(w) == 0


def test_anisotropic_square_classes_brute_force():
    # no sieve: raw box scan over indefinite anisotropic square classes
    reps = set()
    for c in _diagonal_classes(3):
        k = tuple(sorted(squarefree(x) for x in c))
        if min(k) < 0 < max(k):
            reps.add(k)
    for c in sorted(reps):
        q = QuadraticForm.diagonal(c)
        if is_isotropic_global(q, witness_height=0).anisotropic:
            assert find_integer_zero(q, 100, sieve=False) is None, c


# binary forms -------------------------------------------------------------------


def test_binary_examples():
    assert not binary_isotropic(-2, 8, -2)
    assert binary_isotropic(-2, 4, -2)
    assert binary_isotropic(1, 0, -1)


def test_binary_sweep():
    rng = random.Random(2024)
    n = 0
    while n < 200:
        a, b, c = (rng.randint(-20, 20) for _ in range(3))
        q = QuadraticForm.binary(a, b, c)
        if q.det == 0:
            continue
        n += 1
        assert binary_isotropic(a, b, c) == is_isotropic_global(q, witness_height=0).isotropic
