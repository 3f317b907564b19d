"""Dense univariate polynomials over exact fields and over Z/p.

Polynomials are lists of coefficients in ascending degree order.  The
functions here are shared plumbing for squarefree tests, locus membership and
normal forms; nothing in this module knows about binary forms.
"""
from __future__ import annotations

import random
from functools import lru_cache
from fractions import Fraction

from .exactnum import QuadExt, canonical


def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def degree(p) -> int:
    return len(trim(p)) - 1


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p):
    return [i * p[i] for i in range(1, len(p))]


def add(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p, c):
    return trim([c * x for x in p])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divmod_field(p, q):
    p = trim(p)
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        coef = rem[-1] / lead
        shift = len(rem) - len(q)
        quot[shift] = coef
        for i, c in enumerate(q):
            rem[shift + i] -= coef * c
        rem = trim(rem[:-1]) if not rem[-1] else trim(rem)
    return trim([canonical(c) for c in quot]), trim([canonical(c) for c in rem])


def monic(p):
    p = trim(p)
    if not p:
        return p
    lead = p[-1]
    return [canonical(c / lead) for c in p]


def gcd_field(p, q):
    """Monic gcd over Q or Q(sqrt(m))."""
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_field(a, b)
        a, b = b, r
    return monic(a)


def interpolate(xs, ys):
    """Exact Newton interpolation through the points ``(xs[i], ys[i])``."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        poly = add(mul(poly, [-xs[i], 1]), [coef[i]])
    return trim([canonical(c) for c in poly])


# -- modular arithmetic -----------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def primes_3mod4(count: int, bits: int = 61, seed: int = 20030803) -> tuple:
    """Deterministic pseudo-random primes congruent to 3 mod 4."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.getrandbits(bits) | (1 << (bits - 1)) | 3
        if is_probable_prime(n):
            out.append(n)
    return tuple(out)


def to_mod(x, p: int, sqrt_m: int | None):
    """Reduce an exact scalar mod ``p`` (``sqrt_m`` is a square root of the radicand mod p)."""
    if isinstance(x, QuadExt):
        if x.b == 0:
            return to_mod(x.a, p, sqrt_m)
        if sqrt_m is None:
            raise ValueError("no square root of the radicand mod p")
        return (to_mod(x.a, p, None) + to_mod(x.b, p, None) * sqrt_m) % p
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError("denominator divisible by p")
    return x.numerator * pow(x.denominator, -1, p) % p


def gcd_mod(a, b, p: int):
    a = [x % p for x in a]
    b = [x % p for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            coef = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * c) % p
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    return a


def is_squarefree(p, radicand: int | None = None, trials: int = 8) -> bool:
    """Exact squarefree test for a polynomial over Q or Q(sqrt(radicand)).

    A reduction mod a prime that keeps the degree and is squarefree certifies
    squarefreeness; if every trial prime fails, fall back to the exact gcd.
    """
    p = trim(p)
    if len(p) <= 2:
        return True
    for q in primes_3mod4(trials * 3):
        sqrt_m = None
        if radicand is not None:
            r = radicand % q
            if pow(r, (q - 1) // 2, q) != 1:
                continue
            sqrt_m = pow(r, (q + 1) // 4, q)
        try:
            pm = [to_mod(c, q, sqrt_m) for c in p]
        except ZeroDivisionError:
            continue
        if pm[-1] == 0:
            continue
        g = gcd_mod(pm, deriv(pm), q)
        if len(g) == 1:
            return True
        trials -= 1
        if trials <= 0:
            break
    return degree(gcd_field(p, deriv(p))) == 0
