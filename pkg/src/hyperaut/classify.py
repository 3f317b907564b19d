"""Automorphism-group verdicts from three routes: classical invariants
(I4 test plus locus membership through the moduli point), dihedral invariants
of the normal decomposition, and the Moebius-symmetry oracle.  When two routes
run they must agree; a disagreement is raised, never resolved silently.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import upoly
from .binforms import homogenize
from .dihedral import DecompositionError, dihedral_levels, genus2_classify, normal_decomposition
from .exactnum import canonical, scalar_to_json, to_mp
from .families import (FamilySpec, HyperellipticCurve, InvalidFamily, bounds_check, canonical_group_name,
                       family_affine, table1_lookup)
from .invariants import (ABSOLUTE_DEFS, INVARIANT_DEGREE, InvariantVector, ModuliPointUndefined, Undefined,
                         moduli_branch, moduli_point)
from .symmetry import GroupVerdict, full_group_name, lift_orders, oracle_group

LARGE_GROUPS = ("Z2xA4", "SL2(3)", "Z2xS4", "GL2(3)", "W2", "W3", "Z2xA5", "SL2(5)")
ALGORITHM1_MAX_GENUS = 12

GENUS2_GROUPS = {"V6": ("D6", 24), "GL2(3)": ("S4", 48), "D6": ("D3", 12), "D4": ("D2", 8),
                 "Z2xZ2": ("Z2", 4)}


class AlgorithmRangeError(ValueError):
    """The curve lies outside the genus range of the invariant-theoretic route."""


class RouteDisagreement(RuntimeError):
    """Two routes produced different verdicts; carries the full report."""

    def __init__(self, message: str, report: "ClassificationReport"):
        super().__init__(message)
        self.report = report


def is_large(name: str) -> bool:
    return canonical_group_name(name) in LARGE_GROUPS


# -- classical invariants route -----------------------------------------------------------

@dataclass
class Algorithm1Result:
    status: str                 # not_large, member, no_locus, inconclusive, undefined
    I4: object
    moduli_point: object = None
    candidates: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    reason: str = ""

    @property
    def decisive(self) -> bool:
        return self.status in ("not_large", "member", "no_locus")

    @property
    def large(self) -> bool | None:
        if not self.decisive:
            return None
        return self.status == "member"

    def to_json(self) -> dict:
        return {"status": self.status, "I4": None if isinstance(self.I4, Undefined) or self.I4 is None
                else scalar_to_json(self.I4),
                "moduli_point": None if self.moduli_point is None else self.moduli_point.to_json(),
                "candidates": self.candidates, "skipped": self.skipped, "reason": self.reason}


def _family_form(row_id: str, g: int, lams: tuple):
    p = family_affine(FamilySpec(row_id, g, None, lams))
    return homogenize(p, 2 * g + 2)


def _invariant_polys(row_id: str, g: int, names: set) -> dict:
    """Each invariant of the one-parameter family as an exact polynomial in lambda."""
    need = max(INVARIANT_DEGREE[n] for n in names)
    xs, vals = [], {n: [] for n in names}
    lam = 0
    while len(xs) < need + 1:
        try:
            F = _family_form(row_id, g, (Fraction(lam),))
        except InvalidFamily:
            lam += 1
            continue
        iv = InvariantVector(F)
        for n in names:
            v = iv.get(n)
            if isinstance(v, Undefined):
                raise ModuliPointUndefined(v.reason)
            vals[n].append(v)
        xs.append(Fraction(lam))
        lam += 1
    return {n: upoly.interpolate(xs, vals[n]) for n in names}


def _ppow(p, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = upoly.mul(out, p)
    return out


def _strip_common(G, D):
    """Remove from G every factor it shares with D."""
    while upoly.degree(G) > 0 and D:
        h = upoly.gcd_field(G, D)
        if upoly.degree(h) <= 0:
            break
        G, _ = upoly.divmod_field(G, h)
    return G


def _roots_json(G) -> list:
    """Exact rational roots where they exist, numerical approximations otherwise."""
    G = upoly.monic(G)
    out, rest = [], G
    if all(isinstance(c, Fraction) for c in G):
        import sympy
        x = sympy.Symbol("x")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(G)], x)
        rest = [Fraction(1)]
        for fac, mult in poly.factor_list()[1]:
            cs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
            if len(cs) == 2:
                out.append(scalar_to_json(canonical(-cs[0] / cs[1])))
            else:
                rest = upoly.mul(rest, cs)
    if upoly.degree(rest) > 0:
        with mpmath.workprec(120):
            rts = mpmath.polyroots([to_mp(c, 120) for c in reversed(rest)], maxsteps=200, extraprec=200)
        out += [[mpmath.nstr(mpmath.re(r), 20), mpmath.nstr(mpmath.im(r), 20)] for r in rts]
    return out


def _locus_test(row_id: str, g: int, names: tuple, iv_c: InvariantVector):
    """(member, lambda info) for the one-parameter locus of ``row_id``."""
    needed = set()
    for nm in names:
        (a, _), (b, _) = ABSOLUTE_DEFS[nm]
        needed.update((a, b))
    polys = _invariant_polys(row_id, g, needed)
    G, dens = None, [Fraction(1)]
    all_zero = True
    for nm in names:
        (a, pa), (b, pb) = ABSOLUTE_DEFS[nm]
        Nc, Dc = iv_c.get(a) ** pa, iv_c.get(b) ** pb
        Nl, Dl = _ppow(polys[a], pa), _ppow(polys[b], pb)
        E = upoly.add(upoly.scale(Nl, Dc), upoly.scale(Dl, -Nc))
        dens = upoly.mul(dens, Dl)
        if not E:
            continue
        all_zero = False
        G = E if G is None else upoly.gcd_field(G, E)
    if all_zero:
        return True, {"lambda": "any", "polynomial": None}
    G = _strip_common(G, dens)
    if upoly.degree(G) < 1:
        return False, None
    return True, {"lambda": _roots_json(G), "polynomial": [scalar_to_json(c) for c in upoly.monic(G)]}


def algorithm1(curve) -> Algorithm1Result:
    """I4 test, then membership of the moduli point in each large-group locus."""
    g = curve.genus
    if g > ALGORITHM1_MAX_GENUS:
        raise AlgorithmRangeError(f"genus {g} is out of Algorithm 1 range (g <= {ALGORITHM1_MAX_GENUS})")
    iv = InvariantVector(curve.F)
    I4 = iv.get("I4")
    if I4 != 0:
        return Algorithm1Result("not_large", I4, reason="I4 != 0")
    try:
        mp = moduli_point(iv)
        names = moduli_branch(g, iv)
    except (ModuliPointUndefined, ValueError) as exc:
        return Algorithm1Result("undefined", I4, reason=str(exc))
    res = Algorithm1Result("no_locus", I4, mp)
    for e in table1_lookup(g):
        if e.row.reduced not in ("A4", "S4", "A5"):
            continue
        info = {"row": e.row.id, "group": e.name, "delta": e.delta}
        try:
            if e.delta == 0:
                F = _family_form(e.row.id, g, ())
                ivf = InvariantVector(F)
                if moduli_branch(g, ivf) != names:
                    continue
                if moduli_point(ivf).components == mp.components:
                    res.candidates.append(info)
            elif e.delta == 1:
                ok, lam = _locus_test(e.row.id, g, names, iv)
                if ok:
                    info.update(lam)
                    res.candidates.append(info)
            else:
                res.skipped.append({**info, "reason": "locus of dimension > 1 not tested"})
        except (ModuliPointUndefined, InvalidFamily) as exc:
            res.skipped.append({**info, "reason": str(exc)})
    if res.candidates:
        res.status = "member"
    elif res.skipped:
        res.status = "inconclusive"
    return res


# -- dihedral invariants route ----------------------------------------------------------

def _verdict_bounds(g: int, order: int, max_el: int) -> bool:
    return bounds_check(g, order, max_el)


def algorithm3(curve, R=None) -> tuple[GroupVerdict, dict]:
    """Normal decomposition, odd-degree short cut, dihedral invariants, locus."""
    g = curve.genus
    if R is None:
        R = oracle_group(curve)
    lifts = lift_orders(R, curve.F)
    max_el = max(lifts)
    evidence = {"decomposition": None, "levels": [], "step": None, "max_element_order": max_el}
    D = normal_decomposition(curve, R)
    if D is None:
        evidence["step"] = "no decomposition: Aut = Z2"
        return GroupVerdict("Z1", "Z2", 2, {**evidence, "bounds_ok": _verdict_bounds(g, 2, max_el)}, g), evidence
    evidence["decomposition"] = D.to_json()
    s = D.degree_s
    if s % 2:
        evidence["step"] = f"odd degree s = {s}: Aut = Z{2 * s}"
        v = GroupVerdict(f"Z{s}", f"Z{2 * s}", 2 * s,
                         {**evidence, "bounds_ok": _verdict_bounds(g, 2 * s, max_el)}, g)
        return v, evidence
    levels = dihedral_levels(D)
    evidence["levels"] = [t.to_json() for t in levels]
    if g == 2 and D.kind == "EvenPart" and D.t == 3:
        name = genus2_classify(levels[0].values)
        reduced, order = GENUS2_GROUPS[name]
        evidence["step"] = "genus-2 loci in dihedral invariants"
        v = GroupVerdict(reduced, name, order, {**evidence, "bounds_ok": _verdict_bounds(g, order, max_el)}, g)
        return v, evidence
    ov = full_group_name(curve, R)
    evidence["step"] = "locus identified by signature matching of the symmetry group"
    evidence["matched_rows"] = ov.evidence.get("matched_rows")
    v = GroupVerdict(ov.reduced, ov.full_name, ov.order, {**evidence, "bounds_ok": ov.evidence["bounds_ok"]}, g)
    return v, evidence


# -- orchestration -------------------------------------------------------------------------

@dataclass
class ClassificationReport:
    verdict: GroupVerdict
    route: str
    invariant_evidence: dict | None = None
    dihedral_evidence: dict | None = None
    agreement: bool | None = None
    routes: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"route": self.route, "verdict": self.verdict.to_json() if self.verdict else None,
                "agreement": self.agreement, "routes": self.routes,
                "invariant_evidence": self.invariant_evidence, "dihedral_evidence": self.dihedral_evidence,
                "notes": self.notes}


def _invariant_evidence(curve, a1: Algorithm1Result | None) -> dict:
    out = {"algorithm1": a1.to_json() if a1 else None}
    if a1 is not None and a1.moduli_point is not None:
        out["moduli_point"] = a1.moduli_point.to_json()
    return out


def _run_algorithm1(curve, notes):
    try:
        return algorithm1(curve)
    except AlgorithmRangeError as exc:
        notes.append(str(exc))
        return None


def classify(curve: HyperellipticCurve, mode: str = "auto", precision: int = 256,
             tol_bits: int = 128) -> ClassificationReport:
    if mode not in ("auto", "invariants_only", "oracle_only", "cross"):
        raise ValueError(f"unknown mode {mode!r}")
    notes: list = []
    if mode == "oracle_only":
        R = oracle_group(curve, precision, tol_bits)
        v = full_group_name(curve, R)
        return ClassificationReport(v, "Oracle", routes={"Oracle": v.full_name})
    if mode == "invariants_only":
        a1 = algorithm1(curve)
        if a1.status == "member":
            names = sorted({c["group"] for c in a1.candidates})
            full = names[0] if len(names) == 1 else "undetermined among {" + ", ".join(names) + "}"
        elif a1.status in ("not_large", "no_locus"):
            full = "undetermined among {groups outside " + ", ".join(LARGE_GROUPS) + "}"
        else:
            full = "undetermined among {all groups}"
        order = 0
        if a1.status == "member" and len({c["group"] for c in a1.candidates}) == 1:
            order = next(e.order for e in table1_lookup(curve.genus) if e.name == full)
        v = GroupVerdict("?", full, order, {"algorithm1": a1.to_json()}, curve.genus)
        return ClassificationReport(v, "Algorithm1", _invariant_evidence(curve, a1),
                                    routes={"Algorithm1": a1.status})

    R = oracle_group(curve, precision, tol_bits)
    try:
        v3, dih = algorithm3(curve, R)
    except DecompositionError as exc:
        notes.append(f"Algorithm 3 unavailable: {exc}")
        v3, dih = None, None
    a1 = _run_algorithm1(curve, notes)
    routes = {}
    if v3 is not None:
        routes["Algorithm3"] = v3.full_name
    if a1 is not None:
        routes["Algorithm1"] = a1.status
    agreement = None
    problems = []
    ov = None
    if mode == "cross" or v3 is None:
        ov = full_group_name(curve, R)
        routes["Oracle"] = ov.full_name
    final = v3 if v3 is not None else ov
    if ov is not None and v3 is not None:
        agreement = ov.full_name == v3.full_name
        if not agreement:
            problems.append(f"Algorithm 3 says {v3.full_name}, oracle says {ov.full_name}")
    if a1 is not None and a1.decisive:
        ok = a1.large == is_large(final.full_name)
        agreement = ok if agreement is None else (agreement and ok)
        if not ok:
            problems.append(f"Algorithm 1 status {a1.status} contradicts verdict {final.full_name}")
    route = "CrossChecked" if mode == "cross" else ("Algorithm3" if v3 is not None else "Oracle")
    rep = ClassificationReport(final, route, _invariant_evidence(curve, a1), dih, agreement, routes, notes)
    if problems:
        raise RouteDisagreement("; ".join(problems), rep)
    return rep


# -- polynomial readings ---------------------------------------------------------------

def adjudicate_reading(polys, genus: int, target: str = "A5") -> dict:
    """Check a product of registry polynomials as a genus-g curve: squarefree, vanishing set, oracle group."""
    from .invariants import lemma_vanishing_check
    p = [Fraction(1)]
    for q in polys:
        p = upoly.mul(p, q)
    out = {"genus": genus, "degree": upoly.degree(p), "squarefree": False, "vanishing": None,
           "oracle_reduced": None, "oracle_order": None}
    F = homogenize(p, 2 * genus + 2)
    out["squarefree"] = F.is_squarefree()
    out["vanishing"] = lemma_vanishing_check(F, target).to_json()
    if out["squarefree"]:
        R = oracle_group(HyperellipticCurve(genus, F))
        out["oracle_reduced"], out["oracle_order"] = R.label, R.order
    want = {"A4": 12, "S4": 24, "A5": 60}[target]
    out["passes"] = bool(out["squarefree"] and out["vanishing"]["passed"] and out["oracle_order"] == want)
    return out
