"""Classical invariants of binary forms of even degree d = 2g+2, their absolute
ratios, the moduli point used for locus membership, and the vanishing checks
that single out the large reduced groups A4, S4 and A5.

Every invariant is a chain of transvectants.  An entry whose chain needs a
transvection index larger than an operand degree is *undefined*; undefined is
a value (:class:`Undefined`) that carries its reason and is never zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .binforms import BinaryForm, TransvectionIndexError, transvect
from .exactnum import canonical, scalar_to_json


@dataclass(frozen=True)
class Undefined:
    reason: str

    def __bool__(self):
        raise TypeError(f"undefined invariant has no truth value ({self.reason})")

    def __str__(self):
        return f"undefined ({self.reason})"


def is_defined(x) -> bool:
    return not isinstance(x, Undefined)


def is_zero(x) -> bool:
    """True only for a defined value equal to zero."""
    return is_defined(x) and x == 0


class ModuliPointUndefined(ValueError):
    """No branch of the moduli-point definition yields a defined value."""


INVARIANT_NAMES = ("I2", "I3", "I4", "I4p", "I6", "I6p", "I6pp", "I12")
INVARIANT_DEGREE = {"I2": 2, "I3": 3, "I4": 4, "I4p": 4, "I6": 6, "I6p": 6, "I6pp": 6, "I12": 12}


class InvariantVector:
    """Lazily evaluated invariants of one form; covariants are cached and shared."""

    def __init__(self, F: BinaryForm):
        d = F.degree
        if d % 2 or d < 6:
            raise ValueError(f"need an even degree d >= 6, got {d}")
        self.F = F
        self.d = d
        self.genus = d // 2 - 1
        self.covariants: dict[str, BinaryForm | Undefined] = {}
        self._values: dict[str, object] = {}

    # -- covariants -----------------------------------------------------------
    def _tv(self, key, f, g, r):
        if key in self.covariants:
            return self.covariants[key]
        if isinstance(f, Undefined):
            out = f
        elif isinstance(g, Undefined):
            out = g
        else:
            try:
                out = transvect(f, g, r)
            except TransvectionIndexError:
                out = Undefined(f"{key}: index {r} exceeds operand degrees ({f.degree}, {g.degree})")
        self.covariants[key] = out
        return out

    def J(self, k: int):
        """J_k = (F, F)^(d - k/2), the covariant of degree k (k a multiple of 4, or k = d)."""
        return self._tv(f"J{k}", self.F, self.F, self.d - k // 2)

    def _FJ(self, k: int):
        return self._tv(f"(F,J{k})^{k}", self.F, self.J(k), k)

    def M(self):
        return self._tv("M", self._FJ(4), self._FJ(8), self.d - 10)

    # -- invariants -----------------------------------------------------------
    def _compute(self, name):
        d = self.d
        if name == "I2":
            c = self._tv("I2", self.F, self.F, d)
        elif name == "I3":
            c = self._tv("I3", self.F, self.J(d), d)
        elif name == "I4":
            c = self._tv("I4", self.J(4), self.J(4), 4)
        elif name == "I4p":
            c = self._tv("I4p", self.J(8), self.J(8), 8)
        elif name == "I6":
            c = self._tv("I6", self._FJ(4), self._FJ(4), d - 4)
        elif name == "I6p":
            c = self._tv("I6p", self._FJ(8), self._FJ(8), d - 8)
        elif name == "I6pp":
            c = self._tv("I6pp", self._FJ(12), self._FJ(12), d - 12)
        elif name == "I12":
            c = self._tv("I12", self.M(), self.M(), 8)
        else:
            raise KeyError(name)
        return c if isinstance(c, Undefined) else canonical(c.coeffs[0])

    def get(self, name: str):
        if name not in self._values:
            self._values[name] = self._compute(name)
        return self._values[name]

    def __getattr__(self, name):
        if name in INVARIANT_NAMES:
            return self.get(name)
        raise AttributeError(name)

    def as_dict(self) -> dict:
        return {n: self.get(n) for n in INVARIANT_NAMES}

    def to_json(self) -> dict:
        return _values_json(self.as_dict())


def _values_json(values: dict) -> dict:
    out = {}
    for k, v in values.items():
        if isinstance(v, Undefined):
            out[k] = None
            out[f"{k}_reason"] = v.reason
        else:
            out[k] = scalar_to_json(v)
    return out


def classical_invariants(F: BinaryForm, names=INVARIANT_NAMES) -> InvariantVector:
    """Invariant vector of F with the requested entries evaluated."""
    iv = InvariantVector(F)
    for n in names:
        iv.get(n)
    return iv


# -- absolute invariants ------------------------------------------------------

# name -> ((numerator invariant, power), (denominator invariant, power))
ABSOLUTE_DEFS = {
    "i1": (("I4p", 1), ("I2", 2)),
    "i2": (("I3", 2), ("I2", 3)),
    "i3": (("I6pp", 1), ("I2", 3)),
    "j1": (("I6p", 1), ("I3", 2)),
    "j2": (("I6", 1), ("I3", 2)),
    "s1": (("I6", 2), ("I12", 1)),
    "s2": (("I6p", 2), ("I12", 1)),
    "v1": (("I6", 1), ("I6pp", 1)),
    "v2": (("I4p", 3), ("I3", 4)),
    "v3": (("I6", 1), ("I6p", 1)),
    "v4": (("I6pp", 2), ("I3", 4)),
    "v5": (("I6pp", 1), ("I6p", 1)),
}


def absolute_ratio(iv: InvariantVector, name: str):
    (num, pn), (den, pd) = ABSOLUTE_DEFS[name]
    a, b = iv.get(num), iv.get(den)
    if isinstance(a, Undefined):
        return Undefined(f"{name}: numerator {a.reason}")
    if isinstance(b, Undefined):
        return Undefined(f"{name}: denominator {b.reason}")
    if b == 0:
        return Undefined(f"{name}: denominator {den} vanishes")
    return canonical(a ** pn / b ** pd)


def ratio_parts(iv: InvariantVector, name: str):
    """(numerator, denominator) of an absolute invariant, or ``None`` if either is undefined."""
    (num, pn), (den, pd) = ABSOLUTE_DEFS[name]
    a, b = iv.get(num), iv.get(den)
    if isinstance(a, Undefined) or isinstance(b, Undefined):
        return None
    return canonical(a ** pn), canonical(b ** pd)


class AbsoluteInvariants:
    def __init__(self, iv: InvariantVector):
        self.invariants = iv
        self._values = {}

    def get(self, name):
        if name not in self._values:
            self._values[name] = absolute_ratio(self.invariants, name)
        return self._values[name]

    def __getattr__(self, name):
        if name in ABSOLUTE_DEFS:
            return self.get(name)
        raise AttributeError(name)

    def as_dict(self) -> dict:
        return {n: self.get(n) for n in ABSOLUTE_DEFS}

    def to_json(self) -> dict:
        return _values_json(self.as_dict())


def absolute_invariants(F) -> AbsoluteInvariants:
    iv = F if isinstance(F, InvariantVector) else InvariantVector(F)
    return AbsoluteInvariants(iv)


# -- moduli point ---------------------------------------------------------------

@dataclass(frozen=True)
class ModuliPoint:
    components: tuple
    branch_taken: str

    def to_json(self) -> dict:
        return {"components": [scalar_to_json(c) for c in self.components], "branch": self.branch_taken}


MODULI_GENERA = (4, 5, 7, 8, 9, 10, 12)


def moduli_branch(g: int, iv: InvariantVector) -> tuple[str, ...]:
    """Names of the absolute invariants selected for genus g by the vanishing pattern."""
    def nz(name):
        v = iv.get(name)
        return is_defined(v) and v != 0

    if g == 4:
        return ("v1",)
    if g in (5, 9):
        return ("i1", "i2") if nz("I2") else ("v2",)
    if g == 7:
        return ("j1", "j2") if nz("I3") else ("v3",)
    if g in (8, 12):
        return ("i1", "i3") if nz("I2") else ("v4",)
    if g == 10:
        return ("s2", "s1") if nz("I12") else ("v5",)
    raise ValueError(f"genus {g} not covered by the moduli point (covered: {MODULI_GENERA})")


def moduli_point(curve_or_form) -> ModuliPoint:
    F = getattr(curve_or_form, "F", curve_or_form)
    iv = F if isinstance(F, InvariantVector) else InvariantVector(F)
    names = moduli_branch(iv.genus, iv)
    vals = tuple(absolute_ratio(iv, n) for n in names)
    bad = [v for v in vals if isinstance(v, Undefined)]
    if bad:
        raise ModuliPointUndefined("moduli point undefined; defer to oracle: " + "; ".join(b.reason for b in bad))
    return ModuliPoint(vals, "(" + ", ".join(names) + ")" if len(names) > 1 else names[0])


# -- vanishing checks for the large reduced groups ------------------------------

def lemma_requirements(g: int, target: str) -> tuple[str, ...]:
    """Invariants that must vanish when the reduced group is ``target``."""
    if target == "A4":
        extra = {4: ("I2", "I4", "I4p", "I6p"), 5: ("I4", "I6"), 9: ("I4", "I6"), 12: ("I4", "I6"),
                 7: ("I2", "I4", "I4p", "I6pp"), 10: ("I2", "I4", "I4p", "I6pp"), 8: ("I4",)}
        return extra.get(g, ("I4",))
    if target == "S4":
        return ("I4",)
    if target == "A5":
        return ("I4", "I4p", "I6", "I6p", "I12")
    raise ValueError(f"unknown target {target!r}")


@dataclass
class VanishingReport:
    target: str
    genus: int
    entries: dict  # name -> True (vanishes), False (nonzero) or Undefined

    @property
    def passed(self) -> bool:
        return all(v is True for v in self.entries.values())

    def to_json(self) -> dict:
        return {"target": self.target, "genus": self.genus, "passed": self.passed,
                "entries": {k: (v if isinstance(v, bool) else None) for k, v in self.entries.items()}}


def lemma_vanishing_check(curve_or_form, target: str) -> VanishingReport:
    F = getattr(curve_or_form, "F", curve_or_form)
    iv = F if isinstance(F, InvariantVector) else InvariantVector(F)
    entries = {}
    for name in lemma_requirements(iv.genus, target):
        v = iv.get(name)
        entries[name] = v if isinstance(v, Undefined) else (v == 0)
    return VanishingReport(target, iv.genus, entries)
