import random
from fractions import Fraction
from math import comb, factorial

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hyperaut.binforms import (BinaryForm, MoebiusMap, TransvectionIndexError, _transvect_int,
                               _transvect_int_naive, act, diff, homogenize, transvect,
                               transvect_reference)
from hyperaut.exactnum import QuadExt

X, Z = sp.symbols("X Z")


def to_sympy(f: BinaryForm):
    def conv(c):
        if isinstance(c, QuadExt):
            return sp.Rational(c.a.numerator, c.a.denominator) + \
                sp.Rational(c.b.numerator, c.b.denominator) * sp.sqrt(c.m)
        return sp.Rational(c.numerator, c.denominator)
    return sp.expand(sum(conv(c) * X**i * Z**(f.degree - i) for i, c in enumerate(f.coeffs)))


def sympy_transvectant(f, g, r):
    """Textbook transvectant by symbolic differentiation."""
    m, n = f.degree, g.degree
    F, G = to_sympy(f), to_sympy(g)
    s = 0
    for k in range(r + 1):
        s += (-1)**k * sp.binomial(r, k) * sp.diff(F, X, r - k, Z, k) * sp.diff(G, X, k, Z, r - k)
    return sp.expand(sp.Rational(factorial(m - r) * factorial(n - r), factorial(m) * factorial(n)) * s)


small = st.integers(-6, 6)
rats = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 7))


@st.composite
def forms(draw, min_deg=0, max_deg=8, elems=rats):
    d = draw(st.integers(min_deg, max_deg))
    return BinaryForm(d, draw(st.lists(elems, min_size=d + 1, max_size=d + 1)))


@st.composite
def int_matrices(draw):
    a, b, c, d = (draw(small) for _ in range(4))
    if a * d - b * c == 0:
        # shift away from the singular locus without rejecting the draw
        a, d = (a + 1, d + 1) if a + d != -1 else (a + 1, d)
        if a * d - b * c == 0:
            return MoebiusMap(1, b, 0, 1)
    return MoebiusMap(a, b, c, d)


def test_fixed_values():
    f = BinaryForm(2, [1, 0, 1])
    assert transvect(f, f, 2) == BinaryForm(0, [2])
    g = BinaryForm(6, [1, 0, 0, 0, 0, 0, 1])
    assert transvect(g, g, 6) == BinaryForm(0, [2])


def test_act_examples():
    f = BinaryForm(6, [1, 0, 0, 0, 0, 0, 1])
    assert act(MoebiusMap(2, 0, 0, 1), f).coeffs == tuple(map(Fraction, [1, 0, 0, 0, 0, 0, 64]))
    h = BinaryForm(4, [1, 2, 3, 4, 5])
    assert act(MoebiusMap(0, 1, 1, 0), h).coeffs == tuple(reversed(h.coeffs))
    assert act(MoebiusMap.identity(), h) == h
    with pytest.raises(ValueError):
        MoebiusMap(1, 2, 2, 4)


def test_diff_examples():
    assert diff(BinaryForm(2, [0, 0, 1]), 1, 0) == BinaryForm(1, [0, 2])
    assert diff(BinaryForm(2, [0, 1, 0]), 1, 1) == BinaryForm(0, [1])
    assert diff(BinaryForm(2, [3, 1, 7]), 2, 1).is_zero()


def test_homogenize_examples():
    assert homogenize([0, -1, 0, 0, 0, 1], 6) == BinaryForm(6, [0, -1, 0, 0, 0, 1, 0])
    assert homogenize([1], 2) == BinaryForm(2, [1, 0, 0])
    assert homogenize([1, 0, -5, 0, -5, 0, 1], 6).coeffs == tuple(map(Fraction, [1, 0, -5, 0, -5, 0, 1]))
    with pytest.raises(ValueError):
        homogenize([1, 2, 3], 1)


def test_strict_and_derivative_convention():
    f = BinaryForm(4, [1, 2, 3, 4, 5])
    g = BinaryForm(2, [1, 0, 1])
    with pytest.raises(TransvectionIndexError):
        transvect(f, g, 3)
    z = transvect(f, g, 3, derivative_convention=True)
    assert z.is_zero() and z.degree == 0


@settings(max_examples=60, deadline=None)
@given(forms(max_deg=7), forms(max_deg=7), st.data())
def test_matches_symbolic_oracle(f, g, data):
    r = data.draw(st.integers(0, min(f.degree, g.degree)))
    assert to_sympy(transvect(f, g, r)) == sympy_transvectant(f, g, r)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([-3, 5, -1]).flatmap(lambda m: st.tuples(
    forms(max_deg=6, elems=st.builds(QuadExt, rats, rats, st.just(m))),
    forms(max_deg=6, elems=st.builds(QuadExt, rats, rats, st.just(m))))), st.data())
def test_quadratic_field_transvectant(fg, data):
    f, g = fg
    r = data.draw(st.integers(0, min(f.degree, g.degree)))
    assert transvect(f, g, r) == transvect_reference(f, g, r)
    assert sp.simplify(to_sympy(transvect(f, g, r)) - sympy_transvectant(f, g, r)) == 0


def test_kronecker_matches_naive_large():
    rng = random.Random(7)
    for n, m, r in [(60, 60, 30), (40, 24, 17), (12, 12, 0), (30, 30, 29)]:
        a = [rng.randint(-10**30, 10**30) for _ in range(n + 1)]
        b = [rng.randint(-10**5, 10**5) for _ in range(m + 1)]
        assert _transvect_int(a, n, b, m, r) == _transvect_int_naive(a, n, b, m, r)


@settings(max_examples=100, deadline=None)
@given(forms(), forms())
def test_r0_is_product(f, g):
    assert to_sympy(transvect(f, g, 0)) == sp.expand(to_sympy(f) * to_sympy(g))


@settings(max_examples=100, deadline=None)
@given(forms(min_deg=1), st.data())
def test_odd_antisymmetry(f, data):
    r = data.draw(st.integers(0, (f.degree - 1) // 2)) * 2 + 1
    assert transvect(f, f, r).is_zero()


@settings(max_examples=100, deadline=None)
@given(forms(), forms(), rats, rats, st.data())
def test_bilinearity_and_degree(f1, g, alpha, beta, data):
    f2 = BinaryForm(f1.degree, data.draw(st.lists(rats, min_size=f1.degree + 1, max_size=f1.degree + 1)))
    r = data.draw(st.integers(0, min(f1.degree, g.degree)))
    lhs = transvect(f1.scale(alpha) + f2.scale(beta), g, r)
    rhs = transvect(f1, g, r).scale(alpha) + transvect(f2, g, r).scale(beta)
    assert lhs == rhs
    assert lhs.degree == f1.degree + g.degree - 2 * r


@settings(max_examples=100, deadline=None)
@given(forms(), int_matrices(), int_matrices())
def test_action_composition(f, M, N):
    assert act(M @ N, f) == act(N, act(M, f))


@settings(max_examples=60, deadline=None)
@given(forms(max_deg=6), int_matrices())
def test_action_matches_substitution(f, M):
    sub = sp.expand(to_sympy(f).subs({X: M.a * X + M.b * Z, Z: M.c * X + M.d * Z}, simultaneous=True))
    assert to_sympy(act(M, f)) == sub


@settings(max_examples=100, deadline=None)
@given(forms(), forms(), int_matrices(), st.data())
def test_covariance(f, g, M, data):
    r = data.draw(st.integers(0, min(f.degree, g.degree)))
    lhs = transvect(act(M, f), act(M, g), r)
    rhs = act(M, transvect(f, g, r)).scale(M.det() ** r)
    assert lhs == rhs


def test_covariance_unimodular_quadratic_entries():
    s = QuadExt.sqrt(-3)
    M = MoebiusMap(1 + s, 2, s, 1)
    M = MoebiusMap(M.a / M.det(), M.b / M.det(), M.c, M.d)
    assert M.det() == 1
    f = BinaryForm(6, [1, 2, 0, -3, 1, 0, 5])
    g = BinaryForm(4, [0, 1, s, 7, -1])
    for r in range(5):
        assert transvect(act(M, f), act(M, g), r) == act(M, transvect(f, g, r))


def test_squarefree():
    assert BinaryForm(6, [1, 0, -5, 0, -5, 0, 1]).is_squarefree()
    assert homogenize([0, -1, 0, 0, 0, 1], 6).is_squarefree()         # root at infinity
    assert not homogenize([0, -1, 0, 0, 0, 1], 7).is_squarefree()     # Z^2 | F
    assert not BinaryForm(4, [1, -2, 1, 0, 0]).is_squarefree()
    p = BinaryForm(2, [3, 0, 1])                                      # X^2 + 3 = (X - sqrt(-3))(X + sqrt(-3))
    s = QuadExt.sqrt(-3)
    assert (BinaryForm(1, [-s, 1]) * BinaryForm(1, [s, 1])) == p
    assert not (BinaryForm(1, [-s, 1]) ** 2 * p).is_squarefree()
    assert (BinaryForm(1, [-s, 1]) * BinaryForm(1, [2, 1])).is_squarefree()


def test_json_roundtrip():
    f = BinaryForm(3, [Fraction(1, 2), QuadExt(0, 1, 5), 0, -7])
    assert BinaryForm.from_json(f.to_json()) == f
    assert f.to_json()["coeffs"][0] == "1/2"
