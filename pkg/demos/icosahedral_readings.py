#!/usr/bin/env python3
"""Two readings of the icosahedral polynomials T(X) and R(X), tested three ways.

A reading is kept when the product is squarefree, the five invariants that
must vanish for an icosahedral reduced group do vanish, and the symmetry
oracle finds a reduced group of order 60.
"""
from fractions import Fraction

import sympy

from hyperaut.classify import adjudicate_reading
from hyperaut.families import family_polynomial

X = sympy.Symbol("X")


def to_str(p):
    return str(sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * X ** i for i, c in enumerate(p))))


T, Tv = family_polynomial("A5.T"), family_polynomial("A5.T_verbatim")
R, Rv = family_polynomial("A5.R"), family_polynomial("A5.R_verbatim")
G = family_polynomial("A5.G", Fraction(3))

RUNS = [
    ("T", [T], 5), ("T as printed", [Tv], 5), ("T as printed", [Tv], 4),
    ("T * G", [T, G], 35), ("T as printed * G", [Tv, G], 35),
    ("R", [R], 14), ("R as printed", [Rv], 14),
]

if __name__ == "__main__":
    print("T            =", to_str(T))
    print("T as printed =", to_str(Tv))
    print()
    print(f"{'reading':20s} {'g':>3s} {'squarefree':>10s} {'vanishing':>9s} {'oracle':>7s}  verdict")
    for name, polys, g in RUNS:
        r = adjudicate_reading(polys, g)
        print(f"{name:20s} {g:3d} {str(r['squarefree']):>10s} {str(r['vanishing']['passed']):>9s} "
              f"{str(r['oracle_reduced']):>7s}  {'kept' if r['passes'] else 'rejected'}")
