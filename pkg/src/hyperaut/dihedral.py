"""Normal decompositions Y^2 = F(X^n) or Y^2 = X F(X^n), dihedral invariants of
their coefficients, the extra-involution relation, and the genus-2
classification by dihedral invariants.

The decomposition is found from the symmetry oracle: pick a rotation of the
reduced group, move its fixed points to 0 and infinity with an exact Moebius
map, and read off the coefficients supported on multiples of n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .binforms import BinaryForm, MoebiusMap, act
from .exactnum import QuadExt, canonical, rational_sqrt, scalar_to_json, sqrt_exact
from .families import HyperellipticCurve
from .symmetry import ReducedGroup, _perm_order, _recognize, oracle_group


class DecompositionError(ValueError):
    """A decomposition exists but cannot be written over the scalar domain."""


@dataclass(frozen=True)
class NormalDecomposition:
    """Y^2 = X^e (b_t X^(nt) + ... + b_1 X^n + b_0) in some coordinate.

    ``raw`` holds b_0..b_t.  The normalised coefficients are
    a_i = b_(t-i) gamma^(n(t-i)) / b_0 with gamma^(nt) = rho = b_0 / b_t.
    """
    kind: str            # "EvenPart" or "OddPart"
    n: int
    t: int
    raw: tuple
    witness_map: MoebiusMap
    genus: int

    @property
    def degree_s(self) -> int:
        return self.n

    @property
    def delta(self) -> int:
        return self.t - 1

    @property
    def rho(self):
        return canonical(self.raw[0] / self.raw[-1])

    def scaled(self, i: int) -> tuple:
        """a_i as (c_i, e_i) meaning c_i * gamma^e_i."""
        return canonical(self.raw[self.t - i] / self.raw[0]), self.n * (self.t - i)

    def gamma(self):
        """An exact gamma with gamma^(nt) = rho, or None if none lies in the scalar domain."""
        return exact_root(self.rho, self.n * self.t)

    @property
    def coeffs(self):
        """(a_1, ..., a_(t-1)) when gamma is exact, else None."""
        gm = self.gamma()
        if gm is None:
            return None
        return tuple(canonical(c * gm ** e) for c, e in (self.scaled(i) for i in range(1, self.t)))

    def to_json(self) -> dict:
        cs = self.coeffs
        return {"kind": self.kind, "n": self.n, "t": self.t, "s": self.degree_s, "genus": self.genus,
                "raw": [scalar_to_json(c) for c in self.raw], "rho": scalar_to_json(self.rho),
                "coeffs": None if cs is None else [scalar_to_json(c) for c in cs],
                "witness_map": self.witness_map.to_json()}


def exact_root(x, k: int):
    """A k-th root of x in the scalar domain (rational, or via square roots), else None."""
    x = canonical(x)
    if k == 1 or x == 0:
        return x
    if x == 1:
        return Fraction(1)
    if k % 2 == 0:
        r = exact_root(x, k // 2)
        if r is None:
            return None
        try:
            return sqrt_exact(r)
        except ValueError:
            return None
    if isinstance(x, Fraction):
        sign = -1 if x < 0 else 1
        num = _int_root(abs(x.numerator), k)
        den = _int_root(x.denominator, k)
        return None if num is None or den is None else sign * Fraction(num, den)
    return None


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n < 2 ** 1000 else int(mpmath.nthroot(n, k))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    return None


# -- decompositions --------------------------------------------------------------------

def decompose_in_coordinates(F: BinaryForm, n: int, witness: MoebiusMap | None = None):
    """Decomposition with respect to X -> zeta X in the given coordinates, or None."""
    d = F.degree
    c = F.coeffs
    e = 0 if c[0] != 0 else 1
    support = [i for i in range(d + 1) if c[i] != 0]
    if any((i - e) % n for i in support):
        return None
    top = max(support)
    if (top - e) // n < 1 or c[e] == 0:
        return None
    t = (top - e) // n
    raw = tuple(canonical(c[e + n * k]) for k in range(t + 1))
    if raw[0] == 0 or raw[-1] == 0:
        return None
    kind = "EvenPart" if e == 0 else "OddPart"
    return NormalDecomposition(kind, n, t, raw, witness or MoebiusMap.identity(), d // 2 - 1)


def exact_matrix(el, F: BinaryForm) -> MoebiusMap | None:
    """Exact form of an oracle symmetry, verified by act(M, F) being proportional to F."""
    if isinstance(el.matrix, MoebiusMap):
        return el.matrix
    entries = []
    m = F.radicand
    with mpmath.workprec(200):
        for z in (x for row in el.matrix for x in row):
            rec = _recognize(mpmath.mpc(z), m)
            if rec is None:
                return None
            val, mm = rec
            if mm is not None:
                if m is not None and mm != m:
                    return None
                m = mm
            entries.append(val)
    try:
        M = MoebiusMap(*entries).normalized()
    except ValueError:
        return None
    G = act(M, F)
    k = next(i for i in range(len(F.coeffs)) if F.coeffs[i] != 0)
    kappa = G.coeffs[k] / F.coeffs[k]
    return M if G == F.scale(kappa) else None


def fixed_points(M: MoebiusMap):
    """The two fixed points of a non-identity elliptic map as homogeneous pairs, or None if irrational."""
    a, b, c, d = M.a, M.b, M.c, M.d
    if c == 0:
        if a == d:
            return None
        return (Fraction(1), Fraction(0)), (canonical(b), canonical(d - a))
    disc = canonical((a - d) ** 2 + 4 * b * c)
    r = sqrt_exact(disc)
    if r is None:
        return None
    try:
        p = ((a - d) + r, 2 * c)
        q = ((a - d) - r, 2 * c)
    except Exception:
        return None
    return tuple((canonical(x), canonical(z)) for x, z in (p, q))


def _conjugated(F: BinaryForm, zero_pt, inf_pt) -> tuple[BinaryForm, MoebiusMap] | None:
    try:
        C = MoebiusMap(inf_pt[0], zero_pt[0], inf_pt[1], zero_pt[1])
    except Exception:
        return None
    try:
        return act(C, F), C
    except Exception:
        return None


def decomposition_degree(R: ReducedGroup) -> int:
    """n = 2 when the reduced group has an involution, else its (odd) order; 1 for trivial."""
    if R.order == 1:
        return 1
    return 2 if R.order % 2 == 0 else R.order


def normal_decomposition(curve, R: ReducedGroup | None = None) -> NormalDecomposition | None:
    """Normal decomposition from the oracle's rotations; None when the reduced group is trivial."""
    F = curve.F if isinstance(curve, HyperellipticCurve) else curve
    if R is None:
        R = oracle_group(curve)
    n = decomposition_degree(R)
    if n == 1:
        return None
    found = []
    direct = decompose_in_coordinates(F, n)
    if direct is not None:
        found.append(direct)
    if direct is None or direct.kind != "EvenPart":
        for el in sorted(R.elements, key=lambda e: e.perm):
            if _perm_order(el.perm) != n:
                continue
            M = exact_matrix(el, F)
            if M is None:
                continue
            fp = fixed_points(M)
            if fp is None:
                continue
            for zero_pt, inf_pt in (fp, fp[::-1]):
                got = _conjugated(F, zero_pt, inf_pt)
                if got is None:
                    continue
                G, C = got
                D = decompose_in_coordinates(G, n, C)
                if D is not None:
                    found.append(D)
            if any(D.kind == "EvenPart" for D in found):
                break
    if not found:
        raise DecompositionError("no rotation with fixed points over the scalar domain")
    even = [D for D in found if D.kind == "EvenPart"]
    return even[0] if even else found[0]


# -- dihedral invariants --------------------------------------------------------------------

@dataclass(frozen=True)
class DihedralTuple:
    level: int
    values: tuple            # scalars, or None where the value depends on gamma irrationally
    full_values: tuple       # u_i^j for 1 <= i <= delta
    scaling_exact: bool      # every gamma exponent was a multiple of nt
    source: NormalDecomposition | None = None

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.full_values)

    def to_json(self) -> dict:
        def js(v):
            return None if v is None else scalar_to_json(v)
        return {"j": self.level, "values": [js(v) for v in self.values],
                "full_values": [js(v) for v in self.full_values], "scaling_exact": self.scaling_exact}


def _term(pairs, rho, nt, gm):
    """Product of (c, e) factors evaluated with gamma^nt = rho; second item flags exactness."""
    c, e = Fraction(1), 0
    for ci, ei in pairs:
        c = c * ci
        e += ei
    if e % nt == 0:
        return canonical(c * rho ** (e // nt)), True
    if gm is None:
        return None, False
    return canonical(c * gm ** e), False


def _powpair(p, k):
    return (canonical(p[0] ** k), p[1] * k)


def level_values(a: dict, delta: int, j: int, rho, nt: int, gm=None) -> tuple[tuple, bool]:
    """u_i^j = a_j^(delta-i+1) a_i + a_(delta-j+1)^(delta-i+1) a_(delta-i+1) for 1 <= i <= delta.

    ``a`` maps index -> (coefficient, gamma exponent).
    """
    out, exact = [], True
    for i in range(1, delta + 1):
        k = delta - i + 1
        t1, x1 = _term([_powpair(a[j], k), a[i]], rho, nt, gm)
        t2, x2 = _term([_powpair(a[delta - j + 1], k), a[delta - i + 1]], rho, nt, gm)
        exact &= x1 and x2
        out.append(None if t1 is None or t2 is None else canonical(t1 + t2))
    return tuple(out), exact


def dihedral_levels(D: NormalDecomposition) -> list[DihedralTuple]:
    """Level-1 tuple and, when it vanishes, the tuple at the first nonzero pair (a_j, a_(delta-j+1))."""
    delta = D.delta
    if delta < 1:
        return []
    nt = D.n * D.t
    a = {i: D.scaled(i) for i in range(1, D.t)}
    gm = D.gamma()
    vals, ex = level_values(a, delta, 1, D.rho, nt, gm)
    levels = [DihedralTuple(1, vals, vals, ex, D)]
    if a[1][0] == 0 and a[delta][0] == 0:
        for j in range(2, (delta + 1) // 2 + 1):
            if a[j][0] != 0 or a[delta - j + 1][0] != 0:
                full, ex = level_values(a, delta, j, D.rho, nt, gm)
                m = max(delta - 2 * j, 0)
                levels.append(DihedralTuple(j, full[:m], full, ex, D))
                break
    return levels


def dihedral_invariants(D: NormalDecomposition) -> DihedralTuple:
    levels = dihedral_levels(D)
    if not levels:
        raise ValueError("no dihedral invariants when delta = t - 1 < 1")
    return levels[-1]


def dihedral_from_coeffs(coeffs, j: int = 1) -> tuple:
    """u^j straight from normalised coefficients (a_1, ..., a_delta)."""
    delta = len(coeffs)
    a = {i: (canonical(coeffs[i - 1]), 0) for i in range(1, delta + 1)}
    return level_values(a, delta, j, Fraction(1), 1)[0]


def extra_involution_relation(u, g: int) -> bool:
    """2^(g-1) u_1^2 = u_g^(g+1)."""
    vals = u.full_values if isinstance(u, DihedralTuple) else tuple(u)
    if len(vals) < g:
        raise ValueError(f"need at least {g} dihedral invariants, got {len(vals)}")
    return canonical(2 ** (g - 1) * vals[0] ** 2 - vals[g - 1] ** (g + 1)) == 0


D6_EXCLUDED = (Fraction(18), QuadExt(140, 60, 5), Fraction(50))
D4_EXCLUDED = (Fraction(2), Fraction(18), Fraction(0), Fraction(50), Fraction(450))


def genus2_classify(u) -> str:
    """Full automorphism group of a genus-2 curve from its dihedral invariants (u_1, u_2)."""
    u1, u2 = (canonical(x) for x in u)
    if (u1, u2) in ((0, 0), (6750, 450)):
        return "V6"
    if (u1, u2) == (-250, 50):
        return "GL2(3)"
    if canonical(u2 ** 2 - 220 * u2 - 16 * u1 + 4500) == 0 and all(u2 != x for x in D6_EXCLUDED):
        return "D6"
    if canonical(2 * u1 ** 2 - u2 ** 3) == 0 and all(u2 != x for x in D4_EXCLUDED):
        return "D4"
    return "Z2xZ2"


def d4_witness(u2) -> tuple:
    """A genus-2 D4 point with the given u_2: u_1 = sqrt(u_2^3 / 2) when rational."""
    u2 = Fraction(u2)
    u1 = rational_sqrt(u2 ** 3 / 2)
    if u1 is None:
        raise ValueError("u_2^3 / 2 is not a rational square")
    return u1, u2
