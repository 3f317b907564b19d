#!/usr/bin/env python3
"""Genus-2 curves Y^2 = X^6 + a1 X^4 + a2 X^2 + 1 classified by their dihedral invariants.

Each curve is run through the dihedral route and the symmetry oracle.  The
last curve sits at u = (2, 2), where the excluded-point rule and the oracle
disagree; cross mode reports that instead of choosing a winner.
"""
from fractions import Fraction

from hyperaut.classify import RouteDisagreement, classify
from hyperaut.families import HyperellipticCurve

LINE = "-" * 72

CURVES = [
    ("order-24 curve", 15, 15),
    ("octahedral curve", -5, -5),
    ("D4 witness u = (16, 8)", 2, 2),
    ("generic member", 3, Fraction(7, 2)),
    ("excluded point u = (2, 2)", 1, 1),
]


def show(label, a1, a2):
    C = HyperellipticCurve.from_coeffs([1, 0, a2, 0, a1, 0, 1])
    print(LINE)
    print(f"{label}: Y^2 = X^6 + ({a1}) X^4 + ({a2}) X^2 + 1")
    agreed = True
    try:
        rep = classify(C, "cross")
    except RouteDisagreement as exc:
        rep, agreed = exc.report, False
    u = rep.dihedral_evidence["levels"][0]["values"]
    print(f"  dihedral invariants u = ({u[0]}, {u[1]})")
    print(f"  routes: {rep.routes}")
    if agreed:
        print(f"  verdict: {rep.verdict.full_name} of order {rep.verdict.order}")
    else:
        print("  no verdict: the routes disagree")


if __name__ == "__main__":
    for args in CURVES:
        show(*args)
    print(LINE)
