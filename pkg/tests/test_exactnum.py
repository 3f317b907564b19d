from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from hyperaut.exactnum import (ComplexApprox, QuadExt, RadicandMismatch, canonical, newton_refine,
                               parse_scalar, quad_arith, scalar_from_json, scalar_to_json,
                               sqrt_exact, squarefree_part, to_complex)

rats = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10**4)
radicands = st.sampled_from([-3, -1, 2, 5, -7, 13])


@st.composite
def quads(draw, m=None):
    return QuadExt(draw(rats), draw(rats), m if m is not None else draw(radicands))


def test_quad_arith_examples():
    s = QuadExt.sqrt(-3)
    assert quad_arith(1 + s, 1 - s, "*") == 4
    assert quad_arith(s, s, "×") == -3
    x = QuadExt(2, 5, -3)
    assert quad_arith(x, x, "÷") == 1
    with pytest.raises(ZeroDivisionError):
        quad_arith(x, QuadExt(0, 0, -3), "/")


def test_radicand_mismatch():
    with pytest.raises(RadicandMismatch):
        QuadExt.sqrt(2) + QuadExt.sqrt(3)
    # a rational embedded with another radicand is harmless
    assert QuadExt.sqrt(2) + QuadExt(1, 0, 3) == QuadExt(1, 1, 2)


@given(radicands.flatmap(lambda m: st.tuples(quads(m), quads(m), quads(m))))
def test_field_axioms(t):
    x, y, z = t
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    if y:
        assert (x / y) * y == x
    assert x - x == 0


@given(quads())
def test_norm_and_conjugate(x):
    assert x * x.conjugate() == x.norm()


@given(quads())
def test_sqrt_exact_of_square(x):
    r = sqrt_exact(x * x)
    assert r is not None and r * r == x * x


def test_sqrt_exact_rational():
    assert sqrt_exact(Fraction(9, 4)) == Fraction(3, 2)
    assert sqrt_exact(Fraction(-3)) == QuadExt(0, 1, -3)
    assert sqrt_exact(Fraction(12)) == QuadExt(0, 2, 3)
    assert sqrt_exact(Fraction(2), m=3) is None
    assert sqrt_exact(QuadExt(2, 0, 5)) is None
    assert sqrt_exact(QuadExt(20, 0, 5)) == QuadExt(0, 2, 5)


def test_squarefree_part():
    assert squarefree_part(12) == (3, 2)
    assert squarefree_part(-8) == (-2, 2)


def test_canonical_collapses():
    assert isinstance(canonical(QuadExt(3, 0, 5)), Fraction)
    assert isinstance(canonical(3), Fraction)


@given(st.one_of(rats, quads()))
def test_json_roundtrip(x):
    assert scalar_from_json(scalar_to_json(x)) == x


def test_json_formats():
    assert scalar_to_json(Fraction(3)) == "3/1"
    assert scalar_to_json(QuadExt(1, Fraction(-1, 2), -3)) == {"a": "1/1", "b": "-1/2", "m": -3}


def test_parse_scalar():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-2") == -2
    assert parse_scalar("1+2*sqrt(-3)") == QuadExt(1, 2, -3)
    assert parse_scalar("1/2-3/5*sqrt(5)") == QuadExt(Fraction(1, 2), Fraction(-3, 5), 5)
    assert parse_scalar("2*sqrt(5)") == QuadExt(0, 2, 5)
    assert parse_scalar("-sqrt(-1)") == QuadExt(0, -1, -1)
    with pytest.raises(RadicandMismatch):
        parse_scalar("sqrt(5)", radicand=-3)
    with pytest.raises(ValueError):
        parse_scalar("abc")


def test_complex_approx_encloses():
    x = to_complex(QuadExt(1, 1, -3), 128)
    y = to_complex(Fraction(1, 3), 128)
    q = x / y
    with mpmath.workprec(200):
        assert q.contains(mpmath.mpc(3, 3 * mpmath.sqrt(3)))
    assert (x * y - y * x).contains(0)
    with pytest.raises(ValueError):
        ComplexApprox(0, 0, 0, prec=32)


def test_newton_refine():
    # root of x^2 + x + 1 near the primitive cube root of unity
    z = newton_refine([1, 1, 1], complex(-0.5, 0.86), precision=200)
    with mpmath.workprec(220):
        w = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        assert abs(z.value - w) <= z.err
        assert z.err < mpmath.mpf(2) ** -190
