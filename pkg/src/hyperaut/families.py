"""Parametrized families of curves with prescribed symmetry, and the registry
of automorphism groups (group, reduced group, locus dimension, signature).

The registry lives in ``data/table1.json``; each row carries its dimension
formula delta(g, n), side conditions, signature and a generation recipe.
"""
from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import upoly
from .binforms import BinaryForm, homogenize
from .exactnum import canonical, scalar_from_json, scalar_to_json


class InvalidFamily(ValueError):
    """Inadmissible (row, genus, n, lambda) combination."""


# -- curves -----------------------------------------------------------------------

@dataclass(frozen=True)
class HyperellipticCurve:
    """Y^2 = F(X, Z) with F a squarefree binary form of degree 2g+2."""
    genus: int
    F: BinaryForm

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        if self.F.degree != 2 * self.genus + 2:
            raise ValueError(f"form degree {self.F.degree} != 2g+2 = {2 * self.genus + 2}")
        if not self.F.is_squarefree():
            raise ValueError("F has a repeated root; the curve is singular")

    @classmethod
    def from_coeffs(cls, coeffs, genus: int | None = None) -> "HyperellipticCurve":
        """Curve from affine coefficients of F(X), ascending in X."""
        p = upoly.trim([canonical(c) for c in coeffs])
        deg = len(p) - 1
        if deg < 5:
            raise ValueError(f"degree {deg} too small for genus >= 2")
        g_inf = (deg - 1) // 2  # ceil((deg - 2) / 2)
        if genus is None:
            genus = g_inf
        elif genus != g_inf:
            raise ValueError(f"degree {deg} implies genus {g_inf}, not {genus}")
        return cls(genus, homogenize(p, 2 * genus + 2))

    @classmethod
    def from_json(cls, obj) -> "HyperellipticCurve":
        return cls(int(obj["genus"]), BinaryForm.from_json(obj["form"]))

    def to_json(self) -> dict:
        return {"genus": self.genus, "form": self.F.to_json()}

    def affine(self) -> list:
        return self.F.affine()


# -- safe evaluation of registry formulas ------------------------------------------

_BIN = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_CMP = {ast.Lt: operator.lt, ast.LtE: operator.le, ast.Gt: operator.gt, ast.GtE: operator.ge,
        ast.Eq: operator.eq, ast.NotEq: operator.ne}


def evaluate(expr: str, **env):
    """Evaluate an arithmetic/comparison expression over Fractions."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in env or env[node.id] is None:
                raise KeyError(f"unbound name {node.id!r} in {expr!r}")
            return Fraction(env[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BIN:
            return _BIN[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Compare) and len(node.ops) == 1 and type(node.ops[0]) in _CMP:
            return _CMP[type(node.ops[0])](ev(node.left), ev(node.comparators[0]))
        raise ValueError(f"unsupported expression {expr!r}")
    return ev(ast.parse(expr, mode="eval"))


# -- registry ------------------------------------------------------------------------

@dataclass(frozen=True)
class Table1Row:
    id: str
    group: str            # template, e.g. "Z2xDn" or "GL2(3)"
    reduced: str          # Cyclic, Dihedral, A4, S4, A5
    delta: str
    constraints: tuple
    signature: str
    leading: tuple        # ((cycle_expr, count_expr), ...)
    phi: str
    involutions: object   # int or expression in n
    involutions_blank_in_source: bool
    recipe: dict = field(compare=False, hash=False)

    @property
    def parametric(self) -> bool:
        return self.reduced in ("Cyclic", "Dihedral")

    def reduced_order(self, n=None) -> int:
        return {"Cyclic": n, "Dihedral": 2 * n if n else None, "A4": 12, "S4": 24, "A5": 60}[self.reduced]

    def delta_at(self, g: int, n: int | None = None) -> Fraction:
        return evaluate(self.delta, g=g, n=n)

    def admissible(self, g: int, n: int | None = None) -> bool:
        if self.parametric and (n is None or n < 2):
            return False
        dl = self.delta_at(g, n)
        if dl < 0 or dl.denominator != 1:
            return False
        return all(evaluate(c, g=g, n=n, delta=dl) for c in self.constraints)

    def group_name(self, n: int | None = None) -> str:
        """Concrete group name for this row at parameter n (before isomorphism aliasing)."""
        if not self.parametric:
            return self.group
        return {"Z2xZn": f"Z2xZ{n}", "Z2n": f"Z{2 * n}", "Z2xDn": f"Z2xD{n}", "Vn": f"V{n}",
                "D2n": f"D{2 * n}", "Hn": f"H{n}", "Un": f"U{n}", "Gn": f"G{n}"}[self.group]

    def involution_count(self, n: int | None = None) -> int:
        v = self.involutions
        return int(v) if isinstance(v, int) else int(evaluate(str(v), n=n))

    def leading_entries(self, n: int | None = None) -> list[tuple[int, int]]:
        return [(int(evaluate(a, n=n)), int(evaluate(b, n=n))) for a, b in self.leading]

    def signature_multiset(self, g: int, n: int | None = None) -> list[tuple[int, int]]:
        """Full signature as sorted (cycle length, number of cycles) pairs."""
        dl = int(self.delta_at(g, n))
        lead = self.leading_entries(n)
        tail = [(2, self.reduced_order(n))] * (dl + 3 - len(lead))
        return sorted(lead + tail)


@dataclass(frozen=True)
class Table1Entry:
    """A registry row evaluated at a concrete genus (and n for parametric rows)."""
    row: Table1Row
    genus: int
    n: int | None
    delta: int

    @property
    def name(self) -> str:
        return canonical_group_name(self.row.group_name(self.n))

    @property
    def order(self) -> int:
        return 2 * self.row.reduced_order(self.n)

    def to_json(self) -> dict:
        return {"id": self.row.id, "group": self.row.group_name(self.n), "canonical": self.name,
                "reduced": reduced_label(self.row.reduced, self.n), "n": self.n, "genus": self.genus,
                "delta": self.delta, "order": self.order, "signature": self.row.signature,
                "signature_evaluated": [list(p) for p in self.row.signature_multiset(self.genus, self.n)],
                "phi": self.row.phi, "involutions": self.row.involution_count(self.n),
                "involutions_blank_in_source": self.row.involutions_blank_in_source,
                "constraints": list(self.row.constraints)}


def reduced_label(kind: str, n: int | None = None) -> str:
    if kind == "Cyclic":
        return f"Z{n}"
    if kind == "Dihedral":
        return f"D{n}"
    return kind


def canonical_group_name(name: str) -> str:
    """Collapse isomorphic presentations to one name (e.g. Z2xZ3 -> Z6, V2 -> D4)."""
    import re
    m = re.fullmatch(r"Z2xZ(\d+)", name)
    if m and int(m.group(1)) % 2 == 1:
        return f"Z{2 * int(m.group(1))}"
    m = re.fullmatch(r"Z2xD(\d+)", name)
    if m and int(m.group(1)) % 2 == 1:
        return f"D{2 * int(m.group(1))}"
    return {"V2": "D4", "H2": "Z2xZ4", "U2": "Z2xZ4", "Z2xZ1": "Z2"}.get(name, name)


@lru_cache(maxsize=1)
def _registry() -> dict:
    with resources.files("hyperaut").joinpath("data/table1.json").open() as fh:
        return json.load(fh)


@lru_cache(maxsize=1)
def table1_rows() -> tuple:
    rows = []
    for r in _registry()["rows"]:
        rows.append(Table1Row(r["id"], r["group"], r["reduced"], r["delta"], tuple(r["constraints"]),
                              r["signature"], tuple(tuple(x) for x in r["leading"]), r["phi"],
                              r["involutions"], r["involutions_blank_in_source"], r["recipe"]))
    return tuple(rows)


def get_row(row_id: str) -> Table1Row:
    for r in table1_rows():
        if r.id == row_id:
            return r
    raise InvalidFamily(f"unknown row {row_id!r}")


def registry_json() -> dict:
    return _registry()


def table1_lookup(g: int, group: str | None = None, reduced: str | None = None) -> list[Table1Entry]:
    """All rows admissible at genus g, parametric rows expanded over n = 2 .. 2g+2."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    out = []
    for r in table1_rows():
        if reduced is not None and r.reduced != reduced and reduced_label(r.reduced) != reduced:
            continue
        ns = range(2, 2 * g + 3) if r.parametric else [None]
        for n in ns:
            if not r.admissible(g, n):
                continue
            e = Table1Entry(r, g, n, int(r.delta_at(g, n)))
            if group is not None and group not in (r.group, r.group_name(n), e.name):
                continue
            if reduced is not None and r.parametric and reduced not in (r.reduced, reduced_label(r.reduced, n)):
                continue
            out.append(e)
    return out


# -- polynomials of the registry -------------------------------------------------------

def _sparse_to_list(d: dict, conv) -> list:
    deg = max(int(e) for e in d)
    out = [Fraction(0)] * (deg + 1)
    for e, c in d.items():
        out[int(e)] = conv(c)
    return out


def family_polynomial(name: str, lam=None) -> list:
    """Ascending coefficients of a named registry polynomial (``lam`` for the lambda-linear ones)."""
    spec = _registry()["polynomials"][name]
    if "fixed" in spec:
        return _sparse_to_list(spec["fixed"], scalar_from_json)
    if lam is None:
        raise InvalidFamily(f"{name} needs a lambda value")
    lam = canonical(lam)
    return _sparse_to_list(spec["lambda_linear"], lambda p: Fraction(p[0]) + Fraction(p[1]) * lam)


# -- generation --------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    row: str
    genus: int
    n: int | None = None
    lambdas: tuple = ()


def _xpow(k: int) -> list:
    return [0] * k + [1]


def _dihedral_factor(kind: str, n: int) -> list:
    one = [1]
    xn1 = upoly.add(_xpow(n), [-1])
    x2n1 = upoly.add(_xpow(2 * n), [-1])
    return {"1": one, "X^n-1": xn1, "X": [0, 1], "X^2n-1": x2n1,
            "X(X^n-1)": upoly.mul([0, 1], xn1), "X(X^2n-1)": upoly.mul([0, 1], x2n1)}[kind]


def family_affine(spec: FamilySpec) -> list:
    """Affine polynomial F(X) of a family member (before homogenization)."""
    row = get_row(spec.row)
    g, n = spec.genus, spec.n
    if row.parametric and n is None:
        raise InvalidFamily(f"row {row.id} needs n")
    if not row.admissible(g, n):
        raise InvalidFamily(f"row {row.id} is not admissible at g={g}, n={n}")
    dl = int(row.delta_at(g, n))
    lams = [canonical(x) for x in spec.lambdas]
    rec = row.recipe
    if rec["kind"] == "cyclic":
        t = evaluate(rec["t"], g=g, n=n)
        if t.denominator != 1:
            raise InvalidFamily("t is not an integer")
        t = int(t)
        if len(lams) != t - 1:
            raise InvalidFamily(f"row {row.id} at g={g}, n={n} takes {t - 1} parameters, got {len(lams)}")
        p = [Fraction(0)] * (n * t + 1)
        p[n * t] = Fraction(1)
        p[0] = Fraction(1)
        for i, a in enumerate(lams, start=1):
            p[n * (t - i)] += a
        return upoly.mul([0, 1], p) if rec["x_factor"] else p
    if len(lams) != dl:
        raise InvalidFamily(f"row {row.id} at g={g} takes {dl} parameters, got {len(lams)}")
    if rec["kind"] == "dihedral":
        if n % 2:
            raise InvalidFamily("dihedral rows are generated for even n only")
        p = _dihedral_factor(rec["factor"], n)
        for lam in lams:
            p = upoly.mul(p, upoly.add(upoly.add(_xpow(2 * n), upoly.scale(_xpow(n), lam)), [1]))
        return p
    if rec["kind"] == "lambda_product":
        p = [Fraction(1)]
        for name in rec["fixed"]:
            p = upoly.mul(p, family_polynomial(name))
        for lam in lams:
            if rec["G"] == "A4.G" and lam * lam + 108 == 0:
                raise InvalidFamily("lambda^2 + 108 = 0 is excluded")
            p = upoly.mul(p, family_polynomial(rec["G"], lam))
        return p
    raise InvalidFamily(f"unknown recipe {rec['kind']!r}")


def generate(spec: FamilySpec) -> HyperellipticCurve:
    p = family_affine(spec)
    d = 2 * spec.genus + 2
    if len(upoly.trim(p)) - 1 > d:
        raise InvalidFamily("family polynomial exceeds degree 2g+2")
    F = homogenize(p, d)
    if not F.is_squarefree():
        raise InvalidFamily(f"parameters {spec.lambdas} give coincident branch points")
    return HyperellipticCurve(spec.genus, F)


def generation_options(g: int) -> list[tuple[Table1Row, int | None]]:
    """(row, n) pairs that ``generate`` accepts at genus g."""
    out = []
    for e in table1_lookup(g):
        if e.row.recipe["kind"] == "dihedral" and e.n % 2:
            continue
        out.append((e.row, e.n))
    return out


def parameter_count(row: Table1Row, g: int, n: int | None = None) -> int:
    """Number of free parameters ``generate`` expects for (row, g, n)."""
    if row.recipe["kind"] == "cyclic":
        return int(evaluate(row.recipe["t"], g=g, n=n)) - 1
    return int(row.delta_at(g, n))


def random_member(row: Table1Row, g: int, n: int | None, rng, span: int = 1000, tries: int = 50):
    """A family member with random rational parameters, redrawn on coincident branch points."""
    k = parameter_count(row, g, n)
    for _ in range(tries):
        lams = tuple(Fraction(rng.randint(-span, span), rng.randint(1, 97)) for _ in range(k))
        try:
            return generate(FamilySpec(row.id, g, n, lams))
        except InvalidFamily:
            continue
    raise InvalidFamily(f"no squarefree member of {row.id} at g={g}, n={n}")


def bounds_check(curve_or_genus, claimed_order: int, max_element_order: int) -> bool:
    """Hurwitz bound on the group order and Wiman bound on element orders."""
    g = getattr(curve_or_genus, "genus", curve_or_genus)
    return claimed_order <= 84 * (g - 1) and max_element_order <= 2 * (2 * g + 1)


def curve_to_json(curve: HyperellipticCurve) -> dict:
    return curve.to_json()


__all__ = ["HyperellipticCurve", "Table1Row", "Table1Entry", "FamilySpec", "InvalidFamily", "table1_rows",
           "table1_lookup", "get_row", "generate", "family_affine", "family_polynomial", "bounds_check",
           "canonical_group_name", "reduced_label", "evaluate", "registry_json", "generation_options", "parameter_count", "random_member",
           "scalar_to_json"]
