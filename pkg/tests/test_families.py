import random
from fractions import Fraction

import pytest
import sympy as sp

from hyperaut.binforms import BinaryForm
from hyperaut.exactnum import QuadExt
from hyperaut.families import (FamilySpec, HyperellipticCurve, InvalidFamily, bounds_check,
                               canonical_group_name, family_affine, family_polynomial, generate,
                               generation_options, get_row, table1_lookup, table1_rows)

X, Z = sp.symbols("X Z")


def form(name, d, lam=None):
    def conv(c):
        if isinstance(c, QuadExt):
            return sp.Rational(c.a.numerator, c.a.denominator) + sp.Rational(c.b.numerator, c.b.denominator) * sp.sqrt(c.m)
        return sp.Rational(c.numerator, c.denominator)
    p = family_polynomial(name, lam)
    return sp.expand(sum(conv(c) * X**i * Z**(d - i) for i, c in enumerate(p)))


def names_at(g):
    return {(e.row.id, e.name, e.n, e.delta) for e in table1_lookup(g)}


def test_lookup_genus2():
    got = table1_lookup(2)
    assert sorted({e.name for e in got}) == ["D4", "D6", "GL2(3)", "V6", "Z10", "Z2xZ2"]
    gl = [e for e in got if e.name == "GL2(3)"]
    assert len(gl) == 1 and gl[0].delta == 0 and gl[0].row.involution_count() == 13
    assert not [e for e in got if e.row.reduced == "A5"]


def test_lookup_large_genus():
    w3 = [e for e in table1_lookup(8) if e.name == "W3"]
    assert w3 and w3[0].delta == 0 and w3[0].row.involution_count() == 1
    w2 = [e for e in table1_lookup(5) if e.name == "W2"]
    assert w2 and w2[0].delta == 0
    a5 = [e for e in table1_lookup(29) if e.row.id == "A5.1"]
    assert a5 and a5[0].delta == 1


def test_lookup_filters():
    assert all(e.row.reduced == "S4" for e in table1_lookup(14, reduced="S4"))
    assert {e.name for e in table1_lookup(2, group="V6")} == {"V6"}


def test_canonical_names():
    assert canonical_group_name("Z2xZ5") == "Z10"
    assert canonical_group_name("Z2xZ4") == "Z2xZ4"
    assert canonical_group_name("Z2xD3") == "D6"
    assert canonical_group_name("V2") == "D4"
    assert canonical_group_name("H2") == "Z2xZ4"


def test_riemann_hurwitz_for_every_admissible_row():
    """2g - 2 = |G| (-2) + sum (|G| - cycles) over the signature, and #entries = delta + 3."""
    for g in range(2, 41):
        for e in table1_lookup(g):
            sig = e.row.signature_multiset(g, e.n)
            N = e.order
            assert len(sig) == e.delta + 3
            assert all(c * k == N for c, k in sig), (e.row.id, g, e.n, sig)
            assert 2 * g - 2 == -2 * N + sum(N - k for _, k in sig), (e.row.id, g, e.n)


def test_degree_audit():
    rng = random.Random(3)
    for g in range(2, 9):
        for row, n in generation_options(g):
            dl = int(row.delta_at(g, n))
            k = dl if row.recipe["kind"] != "cyclic" else None
            if k is None:
                from hyperaut.families import evaluate
                k = int(evaluate(row.recipe["t"], g=g, n=n)) - 1
            for _ in range(5):
                lams = tuple(Fraction(rng.randint(-40, 40), rng.randint(1, 5)) for _ in range(k))
                try:
                    C = generate(FamilySpec(row.id, g, n, lams))
                except InvalidFamily:
                    continue
                deg = len(family_affine(FamilySpec(row.id, g, n, lams))) - 1
                assert deg in (2 * g + 1, 2 * g + 2), (row.id, g, n)
                assert C.F.degree == 2 * g + 2 and C.F.is_squarefree()
                break
            else:
                pytest.fail(f"no squarefree member for {row.id} g={g} n={n}")


def test_examples():
    assert family_affine(FamilySpec("A4.1", 5, None, (0,))) == \
        [1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1]
    C = generate(FamilySpec("Zn.2", 2, 5, ()))
    assert C.F.coeffs == (1, 0, 0, 0, 0, 1, 0)  # X^5 + 1 with a branch point at infinity


def test_a4_degenerate_parameter_rejected():
    with pytest.raises(InvalidFamily):
        family_affine(FamilySpec("A4.1", 5, None, (QuadExt(0, 6, -3),)))


def test_inadmissible_and_wrong_arity():
    with pytest.raises(InvalidFamily):
        generate(FamilySpec("A5.1", 5, None, (1,)))
    with pytest.raises(InvalidFamily):
        generate(FamilySpec("A4.1", 5, None, ()))
    with pytest.raises(InvalidFamily):
        generate(FamilySpec("Dn.1", 3, 3, (1,)))
    with pytest.raises(InvalidFamily):
        get_row("nope")


def test_coincident_parameters_rejected():
    with pytest.raises(InvalidFamily):
        generate(FamilySpec("Dn.1", 5, 2, (3, 3)))


@pytest.mark.parametrize("lam", [0, 1, 2, Fraction(7, 3)])
def test_icosahedral_pencil(lam):
    lam = Fraction(lam)
    G, S, T = form("A5.G", 60, lam), form("A5.S", 20), form("A5.T", 12)
    assert sp.expand(G - ((sp.Rational(lam.numerator, lam.denominator) - 1) * S**3 - 1728 * T**5)) == 0


def test_icosahedral_edge_form():
    R, S, T = form("A5.R", 30), form("A5.S", 20), form("A5.T", 12)
    assert sp.expand(R**2 - (S**3 + 1728 * T**5)) == 0
    Rv = form("A5.R_verbatim", 30)
    assert sp.expand(Rv**2 - (S**3 + 1728 * T**5)) != 0


@pytest.mark.parametrize("lam", [0, 3, -5])
def test_octahedral_pencil(lam):
    G, S, T = form("S4.G", 24, Fraction(lam)), form("S4.S", 8), form("S4.T", 6)
    assert sp.expand(G - (S**3 + (lam - 42) * T**4)) == 0
    R = form("S4.R", 12)
    assert sp.expand(R**2 - (S**3 - 108 * T**4)) == 0


def test_curve_json_roundtrip():
    C = generate(FamilySpec("A4.1", 5, None, (Fraction(7, 2),)))
    assert HyperellipticCurve.from_json(C.to_json()) == C


def test_curve_validation():
    with pytest.raises(ValueError):
        HyperellipticCurve.from_coeffs([1, 1])
    with pytest.raises(ValueError):
        HyperellipticCurve.from_coeffs([1, 0, 1, 0, 0, 0, 0, 0])  # X^2 + 1 padded: degree 2
    with pytest.raises(ValueError):
        HyperellipticCurve.from_coeffs([2, -4, 2, 1, -2, 1])  # (X - 1)^2 (X^3 + 2)
    with pytest.raises(ValueError):
        HyperellipticCurve.from_coeffs([0, 0, 1, 0, 0, 1])  # X^2 divides F
    with pytest.raises(ValueError):
        HyperellipticCurve.from_coeffs([0, -1, 0, 0, 0, 1], genus=3)
    assert HyperellipticCurve.from_coeffs([0, -1, 0, 0, 0, 1]).genus == 2


def test_bounds_check():
    assert bounds_check(2, 48, 8)
    assert bounds_check(2, 10, 10)
    assert not bounds_check(2, 85, 2)
    assert not bounds_check(2, 10, 11)
    assert bounds_check(3, 168, 14)


def test_registry_rows_are_consistent():
    ids = [r.id for r in table1_rows()]
    assert len(ids) == len(set(ids)) == 31
    for r in table1_rows():
        assert r.reduced in ("Cyclic", "Dihedral", "A4", "S4", "A5")
