"""Dense binary forms: construction, the GL2 action, derivatives and transvectants.

A form of degree d is stored as ``coeffs[i]`` = coefficient of X^i Z^(d-i).
Coefficients are exact scalars (``Fraction`` or ``QuadExt``).  Transvection,
the hot loop of every invariant computation, runs on integer vectors: the
operands are cleared of denominators (and split into rational and irrational
parts over Q(sqrt(m))), and each sum of products is evaluated with a single
Kronecker-packed big-integer multiplication per derivative term.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from . import upoly
from .exactnum import (QuadExt, canonical, lcm_denominator, radicand_of,
                       scalar_from_json, scalar_to_json)


class TransvectionIndexError(ValueError):
    """Raised when a transvection index exceeds an operand degree in strict mode."""


def _ff(n: int, k: int) -> int:
    """Falling factorial n (n-1) ... (n-k+1); zero when k > n >= 0."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass(frozen=True)
class BinaryForm:
    degree: int
    coeffs: tuple

    def __init__(self, degree: int, coeffs):
        coeffs = tuple(canonical(c) for c in coeffs)
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        if len(coeffs) != degree + 1:
            raise ValueError(f"degree {degree} form needs {degree + 1} coefficients, got {len(coeffs)}")
        radicand_of(coeffs)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(degree, [0] * (degree + 1))

    @classmethod
    def from_json(cls, obj) -> "BinaryForm":
        return cls(int(obj["degree"]), [scalar_from_json(c) for c in obj["coeffs"]])

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [scalar_to_json(c) for c in self.coeffs]}

    @property
    def radicand(self) -> int | None:
        return radicand_of(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def binomial_coeffs(self) -> list:
        """The coefficients b_i with F = sum C(d,i) b_i X^i Z^(d-i)."""
        return [c / comb(self.degree, i) for i, c in enumerate(self.coeffs)]

    def affine(self) -> list:
        """Coefficients of F(X, 1), trailing zeros trimmed."""
        return upoly.trim(self.coeffs)

    def __call__(self, x, z=1):
        """Evaluate F(x, z) by homogeneous Horner."""
        acc = 0
        zp = 1
        for i in range(self.degree, -1, -1):
            acc = acc * x + self.coeffs[i] * zp
            zp = zp * z
        return acc

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        return BinaryForm(self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + other.scale(-1)

    def __neg__(self) -> "BinaryForm":
        return self.scale(-1)

    def scale(self, s) -> "BinaryForm":
        return BinaryForm(self.degree, [s * c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            return transvect(self, other, 0)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BinaryForm":
        out = BinaryForm(0, [1])
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def is_squarefree(self) -> bool:
        """True iff F has d distinct roots on P^1 (exact)."""
        if self.is_zero():
            return False
        if self.degree <= 1:
            return True
        aff = self.affine()
        if len(aff) - 1 < self.degree - 1:
            return False  # Z^2 divides F
        return upoly.is_squarefree(aff, self.radicand)

    def __str__(self) -> str:
        terms = []
        d = self.degree
        for i in range(d, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "*".join(p for p in (
                f"X^{i}" if i > 1 else ("X" if i == 1 else ""),
                f"Z^{d - i}" if d - i > 1 else ("Z" if d - i == 1 else "")) if p)
            terms.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class MoebiusMap:
    """The matrix (a b; c d), acting on forms by f -> f(aX+bZ, cX+dZ)."""
    a: object
    b: object
    c: object
    d: object

    def __init__(self, a, b, c, d):
        vals = [canonical(v) for v in (a, b, c, d)]
        radicand_of(vals)
        for name, v in zip("abcd", vals):
            object.__setattr__(self, name, v)
        if not self.det():
            raise ValueError("singular matrix")

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    def det(self):
        return canonical(self.a * self.d - self.b * self.c)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                          self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)  # projective inverse (adjugate)

    def normalized(self) -> "MoebiusMap":
        """Scale so the first nonzero entry (row-major) is 1."""
        lead = next(v for v in self.entries() if v)
        return MoebiusMap(*(v / lead for v in self.entries()))

    def projectively_equal(self, o: "MoebiusMap") -> bool:
        return self.normalized() == o.normalized()

    def apply(self, point):
        """Image of the projective point ``(x : z)`` under v -> M v."""
        x, z = point
        return (self.a * x + self.b * z, self.c * x + self.d * z)

    def to_json(self) -> list:
        return [[scalar_to_json(self.a), scalar_to_json(self.b)],
                [scalar_to_json(self.c), scalar_to_json(self.d)]]


# -- the GL2 action -----------------------------------------------------------

def _lin_mul(poly, l0, l1):
    """Multiply an ascending coefficient list by the linear form l0*Z + l1*X."""
    out = [0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i] += c * l0
        out[i + 1] += c * l1
    return out


def _act_ring(coeffs, a, b, c, d):
    """f(aX+bZ, cX+dZ) over any commutative ring, by homogeneous Horner."""
    n = len(coeffs) - 1
    # powers of L2 = cX + dZ
    l2_pows = [[1]]
    for _ in range(n):
        l2_pows.append(_lin_mul(l2_pows[-1], d, c))
    acc = [coeffs[n]]
    for i in range(n - 1, -1, -1):
        acc = _lin_mul(acc, b, a)
        if coeffs[i]:
            for j, v in enumerate(l2_pows[n - i]):
                acc[j] += coeffs[i] * v
    return acc


def act(M: MoebiusMap, f: BinaryForm) -> BinaryForm:
    """The form f(aX+bZ, cX+dZ); satisfies act(M @ N, f) == act(N, act(M, f))."""
    ents = M.entries()
    if radicand_of(ents) is None and f.radicand is None:
        # clear denominators and stay in Python ints
        dm = lcm_denominator(ents)
        df = lcm_denominator(f.coeffs)
        ia, ib, ic, idd = (int(v * dm) for v in ents)
        ic_f = [int(v * df) for v in f.coeffs]
        out = _act_ring(ic_f, ia, ib, ic, idd)
        den = Fraction(1, df * dm ** f.degree)
        return BinaryForm(f.degree, [v * den for v in out])
    return BinaryForm(f.degree, _act_ring(list(f.coeffs), *ents))


# -- differentiation and homogenization --------------------------------------

def diff(f: BinaryForm, dx: int, dz: int) -> BinaryForm:
    """The partial derivative d^(dx+dz) f / dX^dx dZ^dz."""
    if dx < 0 or dz < 0:
        raise ValueError("derivative orders must be nonnegative")
    n = f.degree
    k = dx + dz
    if k > n:
        return BinaryForm.zero(0)
    out = [f.coeffs[j + dx] * _ff(j + dx, dx) * _ff(n - j - dx, dz) for j in range(n - k + 1)]
    return BinaryForm(n - k, out)


def homogenize(p, d: int) -> BinaryForm:
    """Z^d p(X/Z) for an ascending coefficient list ``p``."""
    p = upoly.trim(p)
    if len(p) - 1 > d:
        raise ValueError(f"polynomial of degree {len(p) - 1} exceeds target degree {d}")
    return BinaryForm(d, list(p) + [0] * (d + 1 - len(p)))


# -- transvection ---------------------------------------------------------------

def _split_int(coeffs, m):
    """Write coeffs = (A + B sqrt(m)) / den with integer vectors A, B."""
    den = lcm_denominator(coeffs)
    A, B = [], []
    for c in coeffs:
        if isinstance(c, QuadExt):
            A.append(int(c.a * den))
            B.append(int(c.b * den))
        else:
            A.append(int(c * den))
            B.append(0)
    return den, A, (B if m is not None else None)


def _pack(vals, w: int) -> int:
    """Kronecker-pack a signed integer vector into base 2^(8w)."""
    pos = b"".join((v if v > 0 else 0).to_bytes(w, "little") for v in vals)
    neg = b"".join((-v if v < 0 else 0).to_bytes(w, "little") for v in vals)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(P: int, length: int, w: int) -> list:
    """Inverse of packing for digits in the open interval (-2^(8w-1), 2^(8w-1))."""
    half = 1 << (8 * w - 1)
    bias = int.from_bytes(half.to_bytes(w, "little") * length, "little")
    raw = (P + bias).to_bytes(w * length, "little")
    return [int.from_bytes(raw[i * w:(i + 1) * w], "little") - half for i in range(length)]


def _deriv_terms(a, n, b, m, r):
    """Integer derivative vectors (A_k, B_k, sign*C(r,k)) of the transvectant sum."""
    terms = []
    for k in range(r + 1):
        Ak = [a[j + r - k] * _ff(j + r - k, r - k) * _ff(n - j - r + k, k) for j in range(n - r + 1)]
        Bk = [b[l + k] * _ff(l + k, k) * _ff(m - l - k, r - k) for l in range(m - r + 1)]
        terms.append((Ak, Bk, (-1) ** k * comb(r, k)))
    return terms


def _transvect_int_naive(a, n, b, m, r) -> list:
    """Schoolbook reference for the integer transvectant kernel."""
    out = [0] * (n + m - 2 * r + 1)
    for Ak, Bk, s in _deriv_terms(a, n, b, m, r):
        for i, x in enumerate(Ak):
            if x:
                for j, y in enumerate(Bk):
                    out[i + j] += s * x * y
    return out


def _transvect_int(a, n, b, m, r) -> list:
    """Sum_k (-1)^k C(r,k) (d^r a / dX^(r-k) dZ^k)(d^r b / dX^k dZ^(r-k)), unscaled, via Kronecker."""
    terms = _deriv_terms(a, n, b, m, r)
    length = n + m - 2 * r + 1
    shortest = min(n, m) - r + 1
    bound = 0
    for Ak, Bk, s in terms:
        ma = max((abs(x) for x in Ak), default=0)
        mb = max((abs(y) for y in Bk), default=0)
        bound += abs(s) * ma * mb * shortest
    if bound == 0:
        return [0] * length
    w = (bound.bit_length() + 2 + 7) // 8
    total = 0
    for Ak, Bk, s in terms:
        total += s * (_pack(Ak, w) * _pack(Bk, w))
    return _unpack(total, length, w)


def transvect(f: BinaryForm, g: BinaryForm, r: int, *, derivative_convention: bool = False,
              kernel=None) -> BinaryForm:
    """The r-th transvectant (f, g)^r.

    With the default strict convention an index beyond either degree raises
    ``TransvectionIndexError``; with ``derivative_convention=True`` the zero
    form of degree max(deg f + deg g - 2r, 0) is returned instead.
    """
    n, m = f.degree, g.degree
    if r < 0:
        raise TransvectionIndexError("negative transvection index")
    if r > min(n, m):
        if derivative_convention:
            return BinaryForm.zero(max(n + m - 2 * r, 0))
        raise TransvectionIndexError(f"transvection index {r} exceeds degrees ({n}, {m})")
    kernel = kernel or _transvect_int
    mf, mg = f.radicand, g.radicand
    if mf is not None and mg is not None and mf != mg:
        radicand_of([QuadExt(0, 1, mf), QuadExt(0, 1, mg)])  # raises RadicandMismatch
    rad = mf if mf is not None else mg
    df, A, B = _split_int(f.coeffs, rad)
    dg, C, D = _split_int(g.coeffs, rad)
    pref = Fraction(factorial(m - r) * factorial(n - r), factorial(m) * factorial(n) * df * dg)
    if rad is None:
        return BinaryForm(n + m - 2 * r, [v * pref for v in kernel(A, n, C, m, r)])
    # (A + B s)(C + D s) = AC + m BD + (AD + BC) s with bilinear kernel
    length = n + m - 2 * r + 1
    zero = [0] * length
    ac = kernel(A, n, C, m, r)
    bd = kernel(B, n, D, m, r) if any(B) and any(D) else zero
    ad = kernel(A, n, D, m, r) if any(D) else zero
    bc = kernel(B, n, C, m, r) if any(B) else zero
    out = [QuadExt((x + rad * y) * pref, (u + v) * pref, rad)
           for x, y, u, v in zip(ac, bd, ad, bc)]
    return BinaryForm(length - 1, out)


def transvect_reference(f: BinaryForm, g: BinaryForm, r: int) -> BinaryForm:
    """Transvectant computed from explicit derivative forms; an independent check on the fast kernel."""
    n, m = f.degree, g.degree
    if r > min(n, m) or r < 0:
        raise TransvectionIndexError(f"transvection index {r} exceeds degrees ({n}, {m})")
    L = n + m - 2 * r
    acc = [0] * (L + 1)
    for k in range(r + 1):
        p = diff(f, r - k, k).coeffs
        q = diff(g, k, r - k).coeffs
        s = (-1) ** k * comb(r, k)
        for i, x in enumerate(p):
            for j, y in enumerate(q):
                acc[i + j] += s * x * y
    pref = Fraction(factorial(m - r) * factorial(n - r), factorial(m) * factorial(n))
    return BinaryForm(L, [v * pref for v in acc])
