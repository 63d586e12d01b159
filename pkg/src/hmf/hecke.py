"""Hecke operators, eigenform extraction and eigenform checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import BasisFailureError, BoundError, InternalError, UnsupportedDimensionError
from .forms import Expansion, coefficient_matrix, cusp_subspace, linear_combination, monomial_basis, scale
from .linalg import rank, solve
from .numbers import CoeffNumber, quadratic_root
from .quadfield import (
    UNIT_IDEAL,
    FieldContext,
    IdealHNF,
    PrimeIdeal,
    factor_ideal,
    ideal_div_prime,
    ideal_divides,
    ideal_mul,
    ideal_power,
    primes_above,
)

RANK_CHECK_NORM = 50


@dataclass(frozen=True)
class EigenformRecord:
    expansion: Expansion
    weight: int
    coeff_disc: int
    label: str


def hecke_operator(f: Expansion, P: PrimeIdeal, B: int | None = None) -> Expansion:
    """T_P f through bound B: c(m) -> c(mP) + N(P)^(k-1) c(m/P)."""
    Bmax = f.bound // P.norm
    B = Bmax if B is None else B
    if B > Bmax:
        raise BoundError(f"T_P needs bound {B * P.norm}, expansion has {f.bound}")
    ctx = f.ctx
    w = P.norm ** (f.weight - 1)
    coeffs = {}
    for I in sorted(f.coeffs, key=lambda J: J.key):
        if I.norm > B:
            continue
        v = f.coeffs[ideal_mul(ctx, I, P.ideal)]
        if ideal_divides(P.ideal, I):
            v = v + w * f.coeffs[ideal_div_prime(ctx, I, P)]
        coeffs[I] = v
    return Expansion(ctx, f.weight, f.constant_term * (1 + w), coeffs, B)


def _coordinates(basis: list[Expansion], f: Expansion) -> list:
    """Coordinates of f in basis, using the constant term and ideals up to f's bound."""
    B = f.bound
    A = coefficient_matrix([b.truncate(B) for b in basis])
    rhs = coefficient_matrix([f])
    return solve(A, [r[0] for r in rhs])


def hecke_matrix(basis: list[Expansion], P: PrimeIdeal) -> list[list[Fraction]]:
    """M with T_P b_j = sum_i M[i][j] b_i, using ideals up to RANK_CHECK_NORM."""
    B = min(RANK_CHECK_NORM, basis[0].bound // P.norm)
    A = coefficient_matrix([b.truncate(B) for b in basis])
    if rank(A) < len(basis):
        raise BasisFailureError(f"basis is not separated by coefficients up to norm {B}")
    cols = [_coordinates(basis, hecke_operator(b, P, B)) for b in basis]
    return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]


def _eigen_2x2(M) -> list[tuple[CoeffNumber, list[CoeffNumber]]]:
    (a, b), (c, d) = M
    tr, det = a + d, a * d - b * c
    disc = tr * tr - 4 * det
    if disc == 0:
        raise UnsupportedDimensionError("repeated Hecke eigenvalue: T_P does not split the space")
    if disc < 0:
        raise InternalError("complex Hecke eigenvalues for a self-adjoint operator")
    r, m = quadratic_root(disc)
    out = []
    for s in (1, -1):
        lam = CoeffNumber(tr / 2, s * r / 2, m)
        if b != 0:
            v = [CoeffNumber(b), lam - a]
        else:
            v = [lam - d, CoeffNumber(c)]
        out.append((lam, v))
    return out


def eigenforms(ctx: FieldContext, k: int, B: int) -> list[EigenformRecord]:
    """Normalized cuspidal eigenforms of weight k, split by T_(2)."""
    cusp = cusp_subspace(monomial_basis(ctx, k, B))
    if not cusp:
        return []
    if len(cusp) > 2:
        raise UnsupportedDimensionError(f"cusp space of weight {k} has dimension {len(cusp)} > 2")
    P = _smallest_prime(ctx)
    if len(cusp) == 1:
        vecs = [[CoeffNumber(1)]]
    else:
        vecs = [v for _, v in _eigen_2x2(hecke_matrix(cusp, P))]
    out = []
    for v in vecs:
        f = linear_combination(list(zip(v, cusp)))
        c1 = f.coeffs[UNIT_IDEAL]
        if c1.is_zero():
            raise InternalError("eigenform with vanishing first coefficient")
        out.append(scale(1 / c1, f))
    out.sort(key=lambda g: -float(g.coeffs[P.ideal]) if P.ideal in g.coeffs else 0)
    recs = []
    for i, g in enumerate(out):
        label = f"h{k}" + "'" * i
        recs.append(EigenformRecord(Expansion(g.ctx, g.weight, g.constant_term, g.coeffs, g.bound, label=label),
                                    k, g.coeff_disc, label))
    return recs


def _smallest_prime(ctx: FieldContext) -> PrimeIdeal:
    return min((P for p in (2, 3, 5, 7) for P in primes_above(ctx, p)), key=lambda P: P.norm)


@dataclass
class EigenCheck:
    ok: bool
    witness: IdealHNF | None = None
    reason: str = ""
    lhs: CoeffNumber | None = None
    rhs: CoeffNumber | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.ok


def is_normalized_eigenform(f: Expansion, k: int | None = None, B: int | None = None) -> EigenCheck:
    """Multiplicativity and the prime-power recursion, after scaling c(O) to 1."""
    k = f.weight if k is None else k
    B = f.bound if B is None else min(B, f.bound)
    c0 = f.coeffs[UNIT_IDEAL]
    if c0.is_zero():
        return EigenCheck(False, UNIT_IDEAL, "c(O) = 0", c0, CoeffNumber(1))
    g = f if c0 == 1 else scale(1 / c0, f)
    c = g.coeffs
    ctx = f.ctx
    checked = 0
    for I in sorted(c, key=lambda J: J.key):
        if I.norm > B or I == UNIT_IDEAL:
            continue
        fac = factor_ideal(ctx, I)
        if len(fac) > 1 or fac[0][1] >= 2:
            checked += 1
        if len(fac) > 1:
            want = CoeffNumber(1)
            for P, e in fac:
                want = want * c[ideal_power(ctx, P.ideal, e)]
            if c[I] != want:
                return EigenCheck(False, I, "multiplicativity over coprime factors fails", c[I], want)
        else:
            (P, e), = fac
            if e >= 2:
                prev = c[ideal_power(ctx, P.ideal, e - 1)]
                prev2 = c[ideal_power(ctx, P.ideal, e - 2)]
                want = c[P.ideal] * prev - P.norm ** (k - 1) * prev2
                if c[I] != want:
                    return EigenCheck(False, I, "prime-power recursion fails", c[I], want)
    return EigenCheck(True, checked=checked)


@dataclass
class RamanujanReport:
    ok: bool
    max_ratio: float
    violations: list = field(default_factory=list)
    reason: str = ""


def ramanujan_check(f, cuspidal: bool = True, max_norm: int | None = None, prec: int = 100) -> RamanujanReport:
    """|c(P)| <= 2 N(P)^((k-1)/2 + 7/64) at every prime within the bound, both embeddings."""
    exp = f.expansion if isinstance(f, EigenformRecord) else f
    k = exp.weight
    B = exp.bound if max_norm is None else min(max_norm, exp.bound)
    worst = 0.0
    bad = []
    with mpmath.workprec(prec):
        for I, v in exp.coeffs.items():
            if I.norm > B or I == UNIT_IDEAL:
                continue
            fac = factor_ideal(exp.ctx, I)
            if len(fac) != 1 or fac[0][1] != 1:
                continue
            bound = 2 * mpmath.mpf(I.norm) ** (mpmath.mpf(k - 1) / 2 + mpmath.mpf(7) / 64)
            for e in v.embeddings(prec):
                ratio = abs(e) / bound
                worst = max(worst, float(ratio))
                if ratio > 1:
                    bad.append(I)
    reason = ""
    if cuspidal and not exp.constant_term.is_zero():
        reason = "constant term is nonzero: not a cusp form"
    ok = not bad and not reason
    return RamanujanReport(ok, worst, sorted(set(bad), key=lambda J: J.key), reason)
