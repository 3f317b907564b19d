#!/usr/bin/env python3
"""Every automorphism-group family at one genus: a random member of each, classified.

Usage: python family_census.py [genus] [seed]
"""
import random
import sys
import time

from hyperaut.classify import algorithm1, algorithm3
from hyperaut.families import canonical_group_name, generation_options, random_member
from hyperaut.symmetry import full_group_name, oracle_group

if __name__ == "__main__":
    g = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    rng = random.Random(int(sys.argv[2]) if len(sys.argv) > 2 else 0)
    print(f"genus {g}: {len(generation_options(g))} families")
    print(f"{'row':6s} {'n':>3s} {'expected':10s} {'oracle':10s} {'dihedral':10s} {'I4 test':10s} {'secs':>5s}")
    for row, n in generation_options(g):
        C = random_member(row, g, n, rng, span=200)
        t = time.perf_counter()
        R = oracle_group(C)
        ov = full_group_name(C, R)
        v3, _ = algorithm3(C, R)
        a1 = algorithm1(C).status if g <= 12 else "-"
        dt = time.perf_counter() - t
        want = canonical_group_name(row.group_name(n))
        print(f"{row.id:6s} {str(n or ''):>3s} {want:10s} {ov.full_name:10s} {v3.full_name:10s} {a1:10s} {dt:5.2f}")
