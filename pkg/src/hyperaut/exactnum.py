"""Exact scalars and error-tracked complex approximations.

Rationals are plain :class:`fractions.Fraction` objects.  A :class:`QuadExt`
is an element ``a + b*sqrt(m)`` of a quadratic field with a fixed squarefree
radicand ``m``; mixing it with rationals is allowed, mixing two radicands is
not.  :class:`ComplexApprox` carries a value together with an error radius and
is only used by the numeric symmetry oracle.
"""
from __future__ import annotations

import math
from functools import lru_cache
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

import mpmath

Rational = Fraction


class RadicandMismatch(ValueError):
    pass


@lru_cache(maxsize=4096)
def _squarefree(m: int) -> bool:
    if m in (0, 1):
        return False
    return squarefree_part(m)[1] == 1


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, k)`` with ``n == s * k**2`` and ``s`` squarefree (sign kept in ``s``)."""
    if n == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if n < 0 else 1
    r = _isqrt_exact(abs(n))
    if r is not None:
        return sign, r
    from sympy import factorint  # only reached for non-square inputs

    s, k = 1, 1
    for p, e in factorint(abs(n)).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return sign * s, k


def rational_sqrt(x) -> Fraction | None:
    """The nonnegative rational square root of ``x``, or ``None``."""
    x = Fraction(x)
    p = _isqrt_exact(x.numerator)
    q = _isqrt_exact(x.denominator)
    return None if p is None or q is None else Fraction(p, q)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class QuadExt:
    """Element ``a + b*sqrt(m)`` of Q(sqrt(m)); immutable and hashable."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b, m: int):
        if not isinstance(m, int) or not _squarefree(m):
            raise ValueError(f"radicand must be a squarefree integer other than 0, 1: {m!r}")
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "m", m)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def sqrt(cls, m: int) -> "QuadExt":
        return cls(0, 1, m)

    # -- coercion -----------------------------------------------------------
    def _pair(self, other):
        """Both operands as QuadExt over one radicand, or ``None`` for foreign types."""
        if isinstance(other, QuadExt):
            if other.m == self.m:
                return self, other
            if other.b == 0:
                return self, QuadExt(other.a, 0, self.m)
            if self.b == 0:
                return QuadExt(self.a, 0, other.m), other
            raise RadicandMismatch(f"radicands differ: {self.m} vs {other.m}")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, QuadExt(other, 0, self.m)
        return None

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        x, y = p
        return QuadExt(x.a + y.a, x.b + y.b, x.m)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.m)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        x, y = p
        return QuadExt(x.a - y.a, x.b - y.b, x.m)

    def __rsub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        x, y = p
        return QuadExt(y.a - x.a, y.b - x.b, x.m)

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        x, y = p
        return QuadExt(x.a * y.a + x.m * x.b * y.b, x.a * y.b + x.b * y.a, x.m)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.m * self.b * self.b

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.m)

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(%d))" % self.m)
        return QuadExt(self.a / n, -self.b / n, self.m)

    def __truediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        x, y = p
        return x * y.inverse()

    def __rtruediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        x, y = p
        return y * x.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(1, 0, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if other.m != self.m:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.m})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sb = f"{self.b}*sqrt({self.m})"
        if self.a == 0:
            return sb
        return f"{self.a}{'+' if self.b > 0 else ''}{sb}"


Scalar = "Fraction | QuadExt"


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QuadExt))


def canonical(x):
    """Canonical exact representative: ints become Fractions, ``b == 0`` collapses to a Fraction."""
    if isinstance(x, QuadExt):
        return x.a if x.b == 0 else x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def radicand_of(values) -> int | None:
    """The common radicand of an iterable of scalars, or ``None`` if all are rational."""
    m = None
    for v in values:
        if isinstance(v, QuadExt) and v.b != 0:
            if m is None:
                m = v.m
            elif m != v.m:
                raise RadicandMismatch(f"radicands differ: {m} vs {v.m}")
    return m


def quad_arith(x, y, op: str):
    """Field arithmetic on two scalars; ``op`` is one of ``+ - * /``."""
    if op == "+":
        r = x + y
    elif op in ("-", "−"):
        r = x - y
    elif op in ("*", "×"):
        r = x * y
    elif op in ("/", "÷"):
        if not y:
            raise ZeroDivisionError("division by zero")
        r = x / y
    else:
        raise ValueError(f"unknown operator {op!r}")
    return r


def sqrt_exact(x, m: int | None = None):
    """Exact square root of ``x`` in Q or in Q(sqrt(m)), or ``None`` if it does not exist there.

    For a rational ``x`` with no rational root the result lies in
    Q(sqrt(squarefree(x))), which is accepted only if that matches ``m`` (or
    ``m`` is ``None``).
    """
    if isinstance(x, QuadExt) and x.b == 0:
        m = x.m if m is None else m
        x = x.a
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x == 0:
            return Fraction(0)
        r = rational_sqrt(x)
        if r is not None:
            return r
        p, q = x.numerator, x.denominator
        if m is not None:
            k = _isqrt_exact(p * q // m) if (p * q) % m == 0 else None
            return None if k is None else QuadExt(0, Fraction(k, q), m)
        s, k = squarefree_part(p * q)
        if s == 1:
            return Fraction(k, q)
        if m is not None and s != m:
            return None
        return QuadExt(0, Fraction(k, q), s)
    if isinstance(x, QuadExt):
        if m is not None and m != x.m:
            raise RadicandMismatch(f"radicands differ: {m} vs {x.m}")
        # (p + q r)^2 = a + b r  =>  p^2 + m q^2 = a, 2 p q = b
        n = x.norm()
        s = rational_sqrt(n)
        if s is None:
            return None
        for cand in ((x.a + s) / 2, (x.a - s) / 2):
            p = rational_sqrt(cand) if cand >= 0 else None
            if p:
                q = x.b / (2 * p)
                r = QuadExt(p, q, x.m)
                if r * r == x:
                    return r
        return None
    raise TypeError(f"not an exact scalar: {x!r}")


# -- serialization ----------------------------------------------------------

def scalar_to_json(x):
    x = canonical(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return {"a": f"{x.a.numerator}/{x.a.denominator}",
            "b": f"{x.b.numerator}/{x.b.denominator}", "m": x.m}


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return canonical(QuadExt(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["m"])))
    if isinstance(obj, (int, str)):
        return Fraction(obj)
    raise ValueError(f"cannot parse scalar from {obj!r}")


_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?P<a>{_RAT})?\s*(?:(?P<sign>[+-])?\s*(?:(?P<b>\d+(?:/\d+)?)\s*\*?\s*)?"
    rf"sqrt\(\s*(?P<m>[+-]?\d+)\s*\))?\s*$")


def parse_scalar(text: str, radicand: int | None = None):
    """Parse ``"p/q"``, ``"a+b*sqrt(m)"`` or ``"b*sqrt(m)"``.

    ``radicand``, if given, must agree with any ``sqrt(m)`` in the text.
    """
    mt = _SCALAR_RE.match(text)
    if mt is None or (mt.group("a") is None and mt.group("m") is None):
        raise ValueError(f"cannot parse scalar {text!r}")
    a = Fraction(mt.group("a")) if mt.group("a") else Fraction(0)
    if mt.group("m") is None:
        return a
    m = int(mt.group("m"))
    if radicand is not None and m != radicand:
        raise RadicandMismatch(f"sqrt({m}) in {text!r} conflicts with radicand {radicand}")
    b = Fraction(mt.group("b")) if mt.group("b") else Fraction(1)
    if mt.group("sign") == "-":
        b = -b
    elif mt.group("sign") is None and mt.group("a") is not None:
        raise ValueError(f"missing sign before sqrt in {text!r}")
    return canonical(QuadExt(a, b, m))


# -- numeric approximation --------------------------------------------------

class ComplexApprox:
    """Complex value with an error radius, at a fixed binary precision.

    Every operation adds the propagated input errors plus a rounding term, so
    ``err`` never shrinks along a computation.
    """

    __slots__ = ("re", "im", "err", "prec")

    def __init__(self, re, im, err, prec: int = 256):
        if prec < 64:
            raise ValueError("precision must be at least 64 bits")
        with mpmath.workprec(prec):
            self.re = mpmath.mpf(re)
            self.im = mpmath.mpf(im)
            # storing re, im at this precision may round them; account for it
            self.err = mpmath.mpf(err) + (abs(self.re) + abs(self.im)) * mpmath.mpf(2) ** (1 - prec)
        if self.err < 0:
            raise ValueError("error radius must be nonnegative")
        self.prec = prec

    @property
    def value(self) -> mpmath.mpc:
        with mpmath.workprec(self.prec):
            return mpmath.mpc(self.re, self.im)

    def __abs__(self):
        with mpmath.workprec(self.prec):
            return abs(self.value)

    def _round(self, v):
        return abs(v) * mpmath.mpf(2) ** (1 - self.prec)

    def _lift(self, other) -> "ComplexApprox":
        if isinstance(other, ComplexApprox):
            return other
        return to_complex(other, self.prec)

    def __add__(self, other):
        o = self._lift(other)
        prec = min(self.prec, o.prec)
        with mpmath.workprec(prec):
            v = self.value + o.value
            return ComplexApprox(v.real, v.imag, self.err + o.err + self._round(v), prec)

    __radd__ = __add__

    def __neg__(self):
        with mpmath.workprec(self.prec):
            return ComplexApprox(-self.re, -self.im, self.err, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        prec = min(self.prec, o.prec)
        with mpmath.workprec(prec):
            v = self.value * o.value
            err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
            return ComplexApprox(v.real, v.imag, err + self._round(v), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        prec = min(self.prec, o.prec)
        with mpmath.workprec(prec):
            den = abs(o.value)
            if den <= o.err:
                raise ZeroDivisionError("divisor interval contains zero")
            v = self.value / o.value
            # |x/y - x'/y'| <= (|x| e_y + |y| e_x) / (|y| (|y| - e_y))
            err = (abs(self.value) * o.err + den * self.err) / (den * (den - o.err))
            return ComplexApprox(v.real, v.imag, err + self._round(v), prec)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def contains(self, z) -> bool:
        with mpmath.workprec(self.prec):
            return abs(self.value - mpmath.mpc(z)) <= self.err

    def overlaps(self, other: "ComplexApprox") -> bool:
        with mpmath.workprec(min(self.prec, other.prec)):
            return abs(self.value - other.value) <= self.err + other.err

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return (f"ComplexApprox({mpmath.nstr(self.re, 20)}, {mpmath.nstr(self.im, 20)}, "
                f"err={mpmath.nstr(self.err, 3)}, prec={self.prec})")


def _mp_exact(x) -> mpmath.mpc:
    """Evaluate an exact scalar at the current mpmath working precision."""
    if isinstance(x, QuadExt):
        a = mpmath.mpf(x.a.numerator) / x.a.denominator
        b = mpmath.mpf(x.b.numerator) / x.b.denominator
        return mpmath.mpc(a) + b * mpmath.sqrt(mpmath.mpc(x.m))
    x = Fraction(x)
    return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)


def to_mp(x, prec: int) -> mpmath.mpc:
    with mpmath.workprec(prec):
        return +_mp_exact(x)


def to_complex(x, precision: int = 256) -> ComplexApprox:
    """Approximate an exact scalar with ``|result - x| <= err <= 2**(4-precision) * |x|``."""
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    if isinstance(x, ComplexApprox):
        return x
    with mpmath.workprec(precision + 24):
        v = _mp_exact(canonical(x))
        err = abs(v) * mpmath.mpf(2) ** (-precision)
    return ComplexApprox(v.real, v.imag, err, precision)


def newton_refine(coeffs, z0, precision: int = 256, max_iter: int = 200) -> ComplexApprox:
    """Refine an approximate simple root of ``sum coeffs[i] z**i`` (exact coefficients).

    The returned radius is ``deg * |p(z)/p'(z)|``, which always encloses a root.
    """
    deg = len(coeffs) - 1
    while deg > 0 and not coeffs[deg]:
        deg -= 1
    if deg < 1:
        raise ValueError("polynomial has no roots")
    wp = precision + 32
    with mpmath.workprec(wp):
        cs = [_mp_exact(canonical(c)) for c in coeffs[:deg + 1]]
        z = mpmath.mpc(z0)
        tiny = mpmath.mpf(2) ** (-precision - 8)
        for _ in range(max_iter):
            p, dp = _horner2(cs, z)
            if dp == 0:
                raise ArithmeticError("derivative vanishes; root is not simple")
            step = p / dp
            z -= step
            if abs(step) <= tiny * max(1, abs(z)):
                break
        p, dp = _horner2(cs, z)
        radius = deg * abs(p / dp) + abs(z) * mpmath.mpf(2) ** (-wp + 2)
    return ComplexApprox(z.real, z.imag, radius, precision)


def _horner2(cs, z):
    p = cs[-1]
    dp = mpmath.mpc(0)
    for c in reversed(cs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def lcm_denominator(values) -> int:
    d = 1
    for v in values:
        if isinstance(v, QuadExt):
            d = math.lcm(d, v.a.denominator, v.b.denominator)
        else:
            d = math.lcm(d, Fraction(v).denominator)
    return d
