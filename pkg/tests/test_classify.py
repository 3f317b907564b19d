import random
from fractions import Fraction

import pytest

from hyperaut.classify import (LARGE_GROUPS, AlgorithmRangeError, RouteDisagreement, adjudicate_reading,
                               algorithm1, algorithm3, classify, is_large)
from hyperaut.families import (FamilySpec, HyperellipticCurve, family_polynomial, generate, generation_options,
                               random_member)
from hyperaut.invariants import InvariantVector
from hyperaut.symmetry import oracle_verdict


def sextic(a1, a2):
    return HyperellipticCurve.from_coeffs([1, 0, a2, 0, a1, 0, 1])


def u_values(report):
    return tuple(Fraction(x) for x in report.dihedral_evidence["levels"][0]["values"])


# -- classical-invariant route --------------------------------------------------------------

def test_algorithm1_recovers_the_parameter():
    C = generate(FamilySpec("A4.1", 5, None, (Fraction(7),)))
    a = algorithm1(C)
    assert a.status == "member" and a.I4 == 0
    cand = [c for c in a.candidates if c["row"] == "A4.1"]
    assert cand and set(cand[0]["lambda"]) == {"7/1", "-7/1"}


def test_algorithm1_generic_curve_is_not_large():
    rng = random.Random(5)
    C = HyperellipticCurve.from_coeffs([rng.randint(-9, 9) or 1 for _ in range(13)])
    a = algorithm1(C)
    assert a.status == "not_large" and a.I4 != 0 and a.large is False


def test_algorithm1_genus_range():
    C = generate(FamilySpec("A5.1", 29, None, (Fraction(2),)))
    with pytest.raises(AlgorithmRangeError):
        algorithm1(C)


def test_algorithm1_undefined_moduli_point():
    C = generate(FamilySpec("S4.3", 2, None, ()))
    a = algorithm1(C)
    assert a.status == "undefined" and not a.decisive and a.reason


def test_early_exit_soundness():
    """I4 != 0 is only reported for curves the oracle finds outside the large groups."""
    rng = random.Random(8)
    pool = []
    for g in range(4, 9):
        small = [(r, n) for r, n in generation_options(g) if r.reduced in ("Cyclic", "Dihedral")]
        for _ in range(40):
            if rng.random() < 0.5:
                pool.append(HyperellipticCurve.from_coeffs([rng.randint(-30, 30) or 1 for _ in range(2 * g + 3)]))
            else:
                row, n = rng.choice(small)
                pool.append(random_member(row, g, n, rng, span=60))
    assert len(pool) == 200
    exits = 0
    for C in pool:
        a = algorithm1(C)
        if a.status == "not_large":
            exits += 1
            assert InvariantVector(C.F).I4 != 0
            assert not is_large(oracle_verdict(C).full_name)
    assert exits >= 150


@pytest.mark.parametrize("g,row", [(5, "A4.1"), (7, "A4.2"), (8, "A4.4"), (9, "S4.6"), (12, "A4.6")])
def test_algorithm1_flags_large_family_members(g, row):
    rng = random.Random(g)
    from hyperaut.families import get_row
    C = random_member(get_row(row), g, None, rng, span=50)
    a = algorithm1(C)
    assert a.status == "member" and any(c["row"] == row for c in a.candidates)
    assert is_large(oracle_verdict(C).full_name)


# -- dihedral route and orchestration ---------------------------------------------------------

@pytest.mark.parametrize("a,name,order,u", [((15, 15), "V6", 24, (6750, 450)),
                                            ((-5, -5), "GL2(3)", 48, (-250, 50)),
                                            ((2, 2), "D4", 8, (16, 8))])
def test_genus2_examples(a, name, order, u):
    rep = classify(sextic(*a))
    assert (rep.verdict.full_name, rep.verdict.order) == (name, order)
    assert u_values(rep) == u
    assert rep.route == "Algorithm3"


def test_odd_degree_shortcut():
    C = HyperellipticCurve.from_coeffs([0, -1] + [0] * 6 + [1])        # X (X^7 - 1)
    v, ev = algorithm3(C)
    assert (v.full_name, v.order) == ("Z14", 14) and ev["step"].startswith("odd degree")


def test_trivial_reduced_group():
    v, ev = algorithm3(HyperellipticCurve.from_coeffs([1, 2, -3, 5, 7, -1, 4]))
    assert (v.full_name, v.order, ev["decomposition"]) == ("Z2", 2, None)


def test_genus3_dihedral_family():
    C = generate(FamilySpec("Dn.1", 3, 4, (Fraction(5, 2),)))
    for mode in ("auto", "cross", "oracle_only"):
        rep = classify(C, mode)
        assert (rep.verdict.full_name, rep.verdict.order) == ("Z2xD4", 16), mode
    assert classify(C, "cross").agreement is True


def test_modes_report_their_routes():
    C = sextic(3, 7)
    assert classify(C, "oracle_only").route == "Oracle"
    rep = classify(C, "cross")
    assert rep.route == "CrossChecked" and set(rep.routes) >= {"Algorithm3", "Oracle"}
    inv = classify(generate(FamilySpec("A4.1", 5, None, (Fraction(7),))), "invariants_only")
    assert inv.route == "Algorithm1" and (inv.verdict.full_name, inv.verdict.order) == ("Z2xA4", 24)
    generic = classify(sextic(3, 7), "invariants_only").verdict
    assert generic.full_name.startswith("undetermined among") and generic.order == 0
    with pytest.raises(ValueError):
        classify(C, "bogus")


def test_route_disagreement_is_raised():
    """X^6 + X^4 + X^2 + 1 has u = (2, 2): the excluded-point rule says Z2xZ2, the oracle D4."""
    C = sextic(1, 1)
    assert oracle_verdict(C).full_name == "D4"
    with pytest.raises(RouteDisagreement) as exc:
        classify(C, "cross")
    rep = exc.value.report
    assert rep.routes == {"Algorithm3": "Z2xZ2", "Oracle": "D4", "Algorithm1": "not_large"}
    assert rep.agreement is False


def test_report_json_shape():
    js = classify(sextic(15, 15), "cross").to_json()
    assert set(js) == {"route", "verdict", "agreement", "routes", "invariant_evidence", "dihedral_evidence", "notes"}
    assert js["verdict"]["full"] == "V6" and js["verdict"]["order"] == 24


def test_large_group_list():
    assert len(LARGE_GROUPS) == 8 and is_large("GL2(3)") and not is_large("V6")


# -- polynomial readings ---------------------------------------------------------------------

def test_adjudication_of_the_icosahedral_edge_polynomial():
    T = family_polynomial("A5.T")
    got = adjudicate_reading([T], 5)
    assert got["passes"] and got["oracle_order"] == 60
    Tv = family_polynomial("A5.T_verbatim")
    bad = adjudicate_reading([Tv], 5)
    assert not bad["squarefree"] and not bad["passes"]
