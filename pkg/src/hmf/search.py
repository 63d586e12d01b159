"""Classification of eigenform product identities g = f*h.

Candidates come in two kinds: a product of two Eisenstein series (EisEis) and an
Eisenstein series times a cusp eigenform (EisCusp).  Cusp*cusp products have c(O) = 0
and are never eigenforms, so they are not enumerated.

Every rule is a necessary condition for an identity, written as lhs <= rhs ("le") or
lhs == rhs ("eq").  A certificate records a violated condition; numeric rules only
exclude when the violation survives a relative slack of 2^-(prec-32).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DomainError, InconclusiveError, UnsupportedDimensionError
from .forms import CUSP_DIMENSIONS_D5, GENERATOR_WEIGHTS_D5, Expansion, _monomial_exponents, decompositions, eisenstein, product, scale
from .hecke import EigenformRecord, eigenforms, is_normalized_eigenform
from .numbers import CoeffNumber, rational_str
from .quadfield import (
    UNIT_IDEAL,
    FieldContext,
    IdealHNF,
    divisor_power_sum,
    factor_ideal,
    ideal_from_element,
    kronecker,
    make_field,
)
from .specialvalues import l_bounds, precision_bits, zeta_special

EIS_EIS = "EisEis"
EIS_CUSP = "EisCusp"

# rule identifiers
R_CONSTANT = "eisenstein-constant-term"
R_INERT = "inert-two-relation"
R_UNEQUAL = "unequal-weight-bound"
R_EQ_INERT = "equal-weight-inert-bound"
R_TWO_TRIVIAL = "two-relation-trivial-characters"
R_K1_SIZE = "cusp-k1-size"
R_K1_INT = "cusp-k1-integrality"
R_K2_GROWTH = "cusp-k2-growth"
R_K2_UNIFORM = "cusp-k2-growth-uniform"
R_RAMIFIED_CUSP = "ramified-cusp-bound"
R_SPLIT_CUSP = "split-cusp-relation"
R_HECKE = "hecke-relation"

NUMERIC_RULES = {R_UNEQUAL, R_EQ_INERT, R_K1_SIZE, R_K2_GROWTH, R_K2_UNIFORM, R_RAMIFIED_CUSP, R_SPLIT_CUSP}


@dataclass(frozen=True, order=True)
class CandidateTriple:
    D: int
    kind: str
    k1: int
    k2: int
    h: str = ""


@dataclass
class ExclusionCertificate:
    triple: CandidateTriple
    rule: str
    relation: str
    lhs: object
    rhs: object
    witness: tuple | None = None

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def exact(self) -> bool:
        return self.rule not in NUMERIC_RULES

    def demonstrates_violation(self) -> bool:
        if self.relation == "le":
            return self.margin < 0
        return self.margin != 0

    @classmethod
    def from_obj(cls, obj: dict) -> "ExclusionCertificate":
        t = CandidateTriple(int(obj["D"]), obj["kind"], int(obj["k1"]), int(obj["k2"]), obj.get("h", ""))
        m = int(obj.get("coeff_disc", 1))
        numeric = obj["rule"] in NUMERIC_RULES
        w = tuple(obj["witness"]) if "witness" in obj else None
        return cls(t, obj["rule"], obj["relation"], _parse(obj["lhs"], m, numeric), _parse(obj["rhs"], m, numeric), w)

    def to_obj(self) -> dict:
        t = self.triple
        obj = {"D": t.D, "kind": t.kind, "k1": t.k1, "k2": t.k2, "rule": self.rule, "relation": self.relation,
               "lhs": render(self.lhs), "rhs": render(self.rhs), "margin": render(self.margin)}
        if t.h:
            obj["h"] = t.h
        if self.witness is not None:
            obj["witness"] = list(self.witness)
        m = max(_disc(self.lhs), _disc(self.rhs))
        if m > 1:
            obj["coeff_disc"] = m
        return obj


def _disc(v) -> int:
    return v.m if isinstance(v, CoeffNumber) else 1


def render(v):
    """Exact values as "p/q" strings or pair arrays; reals as 50-digit decimal strings."""
    if isinstance(v, CoeffNumber):
        if v.is_rational:
            return rational_str(v.u)
        return v.to_pairs()
    if isinstance(v, (int, Fraction)):
        return rational_str(v)
    return mpmath.nstr(v, 50, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def _parse(v, m: int, numeric: bool):
    if isinstance(v, list):
        return CoeffNumber.from_pairs(v, m)
    if numeric:
        return mpmath.mpf(v)
    return Fraction(v)


@dataclass
class Identity:
    g: str
    scalar: CoeffNumber
    f: str
    h: str
    bound: int

    def to_obj(self) -> dict:
        return {"g": self.g, "scalar": render(self.scalar), "f": self.f, "h": self.h, "bound": self.bound}


@dataclass
class IdentityReport:
    D: int
    identities: list = field(default_factory=list)
    exclusions: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)
    prefilter: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "D": self.D,
            "identities": [i.to_obj() for i in self.identities],
            "exclusions": [c.to_obj() for c in sorted(self.exclusions, key=lambda c: c.triple)],
            "unresolved": [{"D": t.D, "kind": t.kind, "k1": t.k1, "k2": t.k2, "h": t.h, "reason": r}
                           for t, r in sorted(self.unresolved)],
            "prefilter": self.prefilter,
        }


@dataclass
class CheckResult:
    ok: bool
    lhs: object
    rhs: object


# ------------------------------------------------------------ helpers


def two_splitting(D: int) -> str:
    return {-1: "inert", 0: "ramified", 1: "split"}[kronecker(D, 2)]


def field_of_discriminant(D: int) -> FieldContext:
    return make_field(D if D % 4 == 1 else D // 4)


def is_fundamental_discriminant(D: int) -> bool:
    from sympy import factorint

    def sqfree(n):
        return n > 1 and all(e == 1 for e in factorint(n).values())

    if D % 4 == 1:
        return sqfree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and sqfree(m)
    return False


@lru_cache(maxsize=None)
def _bounds(D: int, k: int, prec: int):
    b = l_bounds(D, k, uniform=True, prec=prec)
    return b.lower, b.upper


def _excluded(lhs, rhs, prec: int) -> bool:
    """lhs > rhs with a relative slack, so rounding never produces an exclusion."""
    slack = mpmath.mpf(2) ** (32 - prec)
    return lhs > rhs + slack * (abs(rhs) + abs(lhs))


# ------------------------------------------------------ Eisenstein pairs


def eis_pair_exact_check(ctx: FieldContext, k1: int, k2: int) -> CheckResult:
    """1/zeta_F(1-k1) + 1/zeta_F(1-k2) == 1/zeta_F(1-k1-k2)."""
    lhs = 1 / zeta_special(ctx, k1) + 1 / zeta_special(ctx, k2)
    rhs = 1 / zeta_special(ctx, k1 + k2)
    return CheckResult(lhs == rhs, lhs, rhs)


def eis_pair_inert_check(ctx: FieldContext, k1: int) -> CheckResult:
    """(4^(2k-1) - 4^(k-1)) / zeta_F(1-2k) == 4 / zeta_F(1-k)^2, for (2) inert."""
    if two_splitting(ctx.D) != "inert":
        raise DomainError(f"(2) is not inert in the field of discriminant {ctx.D}")
    lhs = Fraction(4 ** (2 * k1 - 1) - 4 ** (k1 - 1)) / zeta_special(ctx, 2 * k1)
    rhs = Fraction(4) / zeta_special(ctx, k1) ** 2
    return CheckResult(lhs == rhs, lhs, rhs)


def unequal_weight_value(D: int, k1: int, k2: int, prec: int | None = None):
    """Lower bound for |L(1-k1-k2)| * |1/L(1-k1) + 1/L(1-k2)|, which must equal 1; None if no bound."""
    prec = prec or precision_bits()
    lo1, hi1 = _bounds(D, k1, prec)
    lo2, hi2 = _bounds(D, k2, prec)
    lo12, _ = _bounds(D, k1 + k2, prec)
    with mpmath.workprec(prec):
        if lo1 > hi2:
            return lo12 * (1 / hi2 - 1 / lo1)
        if lo2 > hi1:
            return lo12 * (1 / hi1 - 1 / lo2)
    return None


def eis_unequal_weight_bound(D: int, k1: int, k2: int, prec: int | None = None):
    """A certificate (as (lhs, rhs)) when the unequal-weight bound exceeds 1, else None."""
    if k1 == k2:
        raise DomainError("equal weights go through the equal-weight rules")
    prec = prec or precision_bits()
    v = unequal_weight_value(D, max(k1, k2), min(k1, k2), prec)
    if v is not None and _excluded(v, 1, prec):
        return v, mpmath.mpf(1)
    return None


def equal_weight_inert_value(D: int, k1: int, prec: int | None = None):
    """(lhs, rhs) with lhs a lower bound for 4 L(1-2k)/L(1-k)^2 and rhs = 4^(2k-1) - 4^(k-1)."""
    prec = prec or precision_bits()
    lo2, _ = _bounds(D, 2 * k1, prec)
    _, hi1 = _bounds(D, k1, prec)
    with mpmath.workprec(prec):
        return 4 * lo2 / hi1 ** 2, mpmath.mpf(4 ** (2 * k1 - 1) - 4 ** (k1 - 1))


# ------------------------------------------------------------ cusp case


def _k1_verdict(ctx: FieldContext, k1: int, prec: int):
    """None when k1 is admissible, else (rule, relation, lhs, rhs)."""
    lo, _ = _bounds(ctx.D, k1, prec)
    if _excluded(lo, 4, prec):
        return R_K1_SIZE, "le", lo, mpmath.mpf(4)
    q = 4 / zeta_special(ctx, k1)
    if q.denominator != 1:
        return R_K1_INT, "eq", q, Fraction(round(q))
    return None


def cusp_case_k1_filter(ctx: FieldContext, max_weight: int = 20, prec: int | None = None) -> list[int]:
    """Even k1 for which 4/zeta_F(1-k1) can be an algebraic integer."""
    ctx.require_certified()
    prec = prec or precision_bits()
    return [k1 for k1 in range(2, max_weight + 1, 2) if _k1_verdict(ctx, k1, prec) is None]


@dataclass(frozen=True)
class _GrowthData:
    """Terms of the (4)-coefficient relation for a fixed Eisenstein factor."""

    U: object              # 1/c_1(0,f) or an upper bound for its size
    h_terms: tuple         # (coefficient size, ideal) for coefficients c(J, h), J != O
    const: object          # exact contribution of terms with c(O, h) = 1


def _growth_data(ctx: FieldContext, k1: int, exact: bool, prec: int) -> _GrowthData:
    four = ctx.elem(4)
    two = ideal_from_element(ctx, ctx.elem(2))
    if exact:
        U = 4 / zeta_special(ctx, k1)
    else:
        U = 4 / _bounds(ctx.D, k1, prec)[0]
    coef: dict[IdealHNF, object] = {two: 2}
    const = 0
    for m1, m2 in decompositions(ctx, four):
        I1, I2 = ideal_from_element(ctx, m1), ideal_from_element(ctx, m2)
        cf = divisor_power_sum(ctx, I1, k1 - 1)
        if I2 == UNIT_IDEAL:
            const = const - cf if exact else const + cf
        elif exact:
            coef[I2] = coef.get(I2, 0) - cf
        else:
            coef[I2] = coef.get(I2, 0) + cf
    terms = tuple(sorted(((abs(v), I) for I, v in coef.items() if v != 0), key=lambda t: t[1].key))
    return _GrowthData(U, terms, const)


def _cusp_coeff_bound(ctx: FieldContext, J: IdealHNF, k2: int):
    """|c(J, h)| <= tau(J) N(J)^((k2-1)/2 + 7/64) for a normalized cusp eigenform h."""
    tau = 1
    for _, e in factor_ideal(ctx, J):
        tau *= e + 1
    return tau * mpmath.mpf(J.norm) ** (mpmath.mpf(k2 - 1) / 2 + mpmath.mpf(7) / 64)


def growth_inequality(ctx: FieldContext, k1: int, k2: int, exact: bool = True, prec: int | None = None):
    """(lhs, rhs): 4^(k2-1)(4^k1 - 1) must not exceed rhs, an upper bound for the other side."""
    prec = prec or precision_bits()
    data = _growth_data(ctx, k1, exact, prec)
    with mpmath.workprec(prec):
        U = mpmath.mpf(data.U.numerator) / data.U.denominator if isinstance(data.U, Fraction) else data.U
        s = sum((a * _cusp_coeff_bound(ctx, J, k2) for a, J in data.h_terms), mpmath.mpf(0))
        rhs = U * U + U * (s + data.const)
        lhs = mpmath.mpf(4) ** (k2 - 1) * (4 ** k1 - 1)
    return lhs, rhs


def _growth_positive_ratio(ctx, k1, k2, exact, prec):
    """Upper bound for rhs/lhs with negative constants dropped; nonincreasing in k2."""
    data = _growth_data(ctx, k1, exact, prec)
    with mpmath.workprec(prec):
        U = mpmath.mpf(data.U.numerator) / data.U.denominator if isinstance(data.U, Fraction) else data.U
        s = sum((a * _cusp_coeff_bound(ctx, J, k2) for a, J in data.h_terms), mpmath.mpf(0))
        pos = U * U + U * (s + max(data.const, 0))
        return pos / (mpmath.mpf(4) ** (k2 - 1) * (4 ** k1 - 1))


def cusp_case_k2_bound(ctx: FieldContext, k1: int, prec: int | None = None, exact: bool = True) -> int:
    """Largest even k2 for which the (4)-coefficient relation can hold ((2) inert).

    Every h-coefficient in the bound sits at an ideal of norm < 16, so the positive part of
    rhs/lhs is nonincreasing in k2; the scan stops once that part drops below 1.
    """
    if two_splitting(ctx.D) != "inert":
        raise DomainError("the (4)-coefficient growth bound needs (2) inert")
    prec = prec or precision_bits()
    data = _growth_data(ctx, k1, exact, prec)
    assert all(J.norm < 16 for _, J in data.h_terms)
    best = 0
    k2 = 2
    while True:
        lhs, rhs = growth_inequality(ctx, k1, k2, exact, prec)
        if not _excluded(lhs, rhs, prec):
            best = k2
        elif _growth_positive_ratio(ctx, k1, k2, exact, prec) < 1:
            return best
        k2 += 2


def cusp_dimension_d5(k: int) -> int:
    if k % 2 or k < 2:
        return 0
    if k in CUSP_DIMENSIONS_D5:
        return CUSP_DIMENSIONS_D5[k]
    return len(_monomial_exponents(k, GENERATOR_WEIGHTS_D5)) - 1


# ------------------------------------------------------------ verification


def _as_expansion(x) -> tuple[Expansion, str]:
    if isinstance(x, EigenformRecord):
        return x.expansion, x.label
    return x, x.label


def verify_identity(k: int, f, h, B: int, eigenbasis: list | None = None):
    """Decide whether f*h is a multiple of a normalized eigenform, exactly through bound B.

    Returns (Identity, None) on success or (None, EigenCheck) on failure.
    """
    fe, fl = _as_expansion(f)
    he, hl = _as_expansion(h)
    if fe.weight + he.weight != k:
        raise DomainError(f"weights {fe.weight} + {he.weight} do not add up to {k}")
    p = product(fe, he, B)
    check = is_normalized_eigenform(p, k, B)
    if not check.ok:
        return None, check
    if check.checked == 0:
        raise InconclusiveError(f"bound {B} contains no Hecke relation to test")
    c0 = p.coeffs[UNIT_IDEAL]
    g = scale(1 / c0, p)
    if eigenbasis is None:
        eigenbasis = [eisenstein(fe.ctx, k, B)]
        try:
            eigenbasis += [r.expansion for r in eigenforms(fe.ctx, k, B)]
        except UnsupportedDimensionError:
            pass
    for cand in eigenbasis:
        ce = cand.truncate(B) if cand.bound > B else cand
        if ce.bound == B and ce == g:
            return Identity(cand.label, c0, fl, hl, B), check
    raise InconclusiveError(f"f*h passes the Hecke checks but matches no known eigenform of weight {k}")


# ------------------------------------------------------------ classification


def classify(ctx: FieldContext, max_weight: int = 20, B: int = 200, prec: int | None = None) -> IdentityReport:
    """All identities E_k1*E_k2 and E_k1*h (h a cusp eigenform) with total weight <= max_weight."""
    ctx.require_certified()
    prec = prec or precision_bits()
    D = ctx.D
    rep = IdentityReport(D)
    split = two_splitting(D)
    eis_cache: dict[int, Expansion] = {}

    def E(k):
        if k not in eis_cache:
            eis_cache[k] = eisenstein(ctx, k, B)
        return eis_cache[k]

    def record_hecke(t, check):
        rep.exclusions.append(ExclusionCertificate(t, R_HECKE, "eq", check.lhs, check.rhs, check.witness.key))

    survivors = []
    for k2 in range(2, max_weight + 1, 2):
        for k1 in range(k2, max_weight - k2 + 1, 2):
            t = CandidateTriple(D, EIS_EIS, k1, k2)
            if k1 != k2:
                cert = eis_unequal_weight_bound(D, k1, k2, prec)
                if cert:
                    rep.exclusions.append(ExclusionCertificate(t, R_UNEQUAL, "le", *cert))
                    continue
                survivors.append((k1, k2))
            elif split == "inert":
                lhs, rhs = equal_weight_inert_value(D, k1, prec)
                if _excluded(lhs, rhs, prec):
                    rep.exclusions.append(ExclusionCertificate(t, R_EQ_INERT, "le", lhs, rhs))
                    continue
            else:
                rhs = 2 ** (2 * k1 - 1) - 2 ** (k1 - 1)
                rep.exclusions.append(ExclusionCertificate(t, R_TWO_TRIVIAL, "eq", Fraction(0), Fraction(rhs)))
                continue
            r = eis_pair_exact_check(ctx, k1, k2)
            if not r.ok:
                rep.exclusions.append(ExclusionCertificate(t, R_CONSTANT, "eq", r.lhs, r.rhs))
                continue
            if k1 == k2:
                r = eis_pair_inert_check(ctx, k1)
                if not r.ok:
                    rep.exclusions.append(ExclusionCertificate(t, R_INERT, "eq", r.lhs, r.rhs))
                    continue
            ident, check = verify_identity(k1 + k2, E(k1), E(k2), B)
            if ident:
                rep.identities.append(ident)
            else:
                record_hecke(t, check)
    rep.prefilter["unequal_survivors"] = sorted(survivors)

    k1_ok = []
    cutoffs = {}
    for k1 in range(2, max_weight - 1, 2):
        k2s = [k2 for k2 in range(2, max_weight - k1 + 1, 2)
               if (cusp_dimension_d5(k2) if D == 5 else 1) > 0]
        if not k2s:
            continue
        verdict = _k1_verdict(ctx, k1, prec)
        if verdict is None:
            k1_ok.append(k1)
        for k2 in k2s:
            t = CandidateTriple(D, EIS_CUSP, k1, k2)
            if verdict is not None:
                rep.exclusions.append(ExclusionCertificate(t, *verdict))
                continue
            if split == "split":
                lo = 4 / _bounds(D, k1, prec)[1]
                rep.exclusions.append(ExclusionCertificate(t, R_SPLIT_CUSP, "le", lo, mpmath.mpf(0)))
                continue
            if split == "ramified":
                lhs = Fraction(2 ** (k2 - 1) * (2 ** k1 - 1))
                rhs = abs(4 / zeta_special(ctx, k1))
                if lhs != rhs:
                    rep.exclusions.append(ExclusionCertificate(t, R_TWO_TRIVIAL, "eq", lhs, rhs))
                    continue
            else:
                if k1 not in cutoffs:
                    cutoffs[k1] = cusp_case_k2_bound(ctx, k1, prec)
                if k2 > cutoffs[k1]:
                    lhs, rhs = growth_inequality(ctx, k1, k2, True, prec)
                    rep.exclusions.append(ExclusionCertificate(t, R_K2_GROWTH, "le", lhs, rhs))
                    continue
            if D != 5:
                rep.unresolved.append((t, "cusp eigenforms are only constructed for D=5"))
                continue
            for rec in eigenforms(ctx, k2, B):
                th = CandidateTriple(D, EIS_CUSP, k1, k2, rec.label)
                ident, check = verify_identity(k1 + k2, E(k1), rec, B)
                if ident:
                    rep.identities.append(ident)
                else:
                    record_hecke(th, check)
    rep.prefilter["cusp_k1"] = k1_ok
    rep.prefilter["cusp_k2_cutoff"] = {str(k): v for k, v in sorted(cutoffs.items())}
    rep.identities.sort(key=lambda i: (int(i.g.lstrip("Eh").rstrip("'")), i.f, i.h))
    rep.exclusions.sort(key=lambda c: c.triple)
    return rep


# ------------------------------------------------------------ bound-only scan


def bound_scan(dmin: int, dmax: int, max_weight: int, prec: int | None = None):
    """Character-uniform bounds over all fundamental discriminants in [dmin, dmax].

    Returns (certificates, unresolved).  Weights run over all integers >= 2 with
    k1 + k2 <= max_weight; nothing here uses exact L-values.
    """
    prec = prec or precision_bits()
    certs: list[ExclusionCertificate] = []
    unresolved: list[tuple[CandidateTriple, str]] = []
    for D in range(max(dmin, 5), dmax + 1):
        if not is_fundamental_discriminant(D):
            continue
        split = two_splitting(D)
        ctx = None
        for k2 in range(2, max_weight - 1):
            for k1 in range(k2, max_weight - k2 + 1):
                t = CandidateTriple(D, EIS_EIS, k1, k2)
                if k1 != k2:
                    cert = eis_unequal_weight_bound(D, k1, k2, prec)
                    if cert:
                        certs.append(ExclusionCertificate(t, R_UNEQUAL, "le", *cert))
                    else:
                        unresolved.append((t, "unequal-weight bound does not exceed 1"))
                elif split == "inert":
                    lhs, rhs = equal_weight_inert_value(D, k1, prec)
                    if _excluded(lhs, rhs, prec):
                        certs.append(ExclusionCertificate(t, R_EQ_INERT, "le", lhs, rhs))
                    else:
                        unresolved.append((t, "equal-weight inert bound not violated"))
                else:
                    unresolved.append((t, f"(2) {split}: needs the narrow class group"))
        for k1 in range(2, max_weight - 1):
            lo, hi = _bounds(D, k1, prec)
            for k2 in range(2, max_weight - k1 + 1):
                t = CandidateTriple(D, EIS_CUSP, k1, k2)
                if _excluded(lo, 4, prec):
                    certs.append(ExclusionCertificate(t, R_K1_SIZE, "le", lo, mpmath.mpf(4)))
                elif split == "split":
                    certs.append(ExclusionCertificate(t, R_SPLIT_CUSP, "le", 4 / hi, mpmath.mpf(0)))
                elif split == "ramified":
                    with mpmath.workprec(prec):
                        lhs = mpmath.mpf(2) ** (k2 - 1) * (2 ** k1 - 1)
                        rhs = 4 / lo
                    if _excluded(lhs, rhs, prec):
                        certs.append(ExclusionCertificate(t, R_RAMIFIED_CUSP, "le", lhs, rhs))
                    else:
                        unresolved.append((t, "ramified cusp bound not violated"))
                else:
                    ctx = ctx or field_of_discriminant(D)
                    lhs, rhs = growth_inequality(ctx, k1, k2, exact=False, prec=prec)
                    if _excluded(lhs, rhs, prec):
                        certs.append(ExclusionCertificate(t, R_K2_UNIFORM, "le", lhs, rhs))
                    else:
                        unresolved.append((t, "(4)-coefficient growth bound not violated"))
    return certs, unresolved
