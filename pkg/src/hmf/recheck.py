"""Independent re-evaluation of exclusion certificates.

Numeric rules are recomputed from scratch in log space at 400 bits (the L-value bounds
are assembled from loggamma rather than gamma); exact rules are recomputed exactly.
Only the sign of the margin is compared with the certificate.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath

from . import search as S
from .forms import decompositions, eisenstein, product, scale
from .hecke import eigenforms
from .numbers import CoeffNumber
from .quadfield import UNIT_IDEAL, divisor_power_sum, factor_ideal, ideal_from_element, ideal_from_key, ideal_power
from .specialvalues import zeta_special

RECHECK_BITS = 400


def _log_bounds(D: int, k: int):
    """(log lower, log upper) for |L(1-k, psi)| with the uniform constants."""
    pi = mpmath.pi
    logG = mpmath.log(2) - mpmath.log(pi) + (k - mpmath.mpf(1) / 2) * (mpmath.log(D) - mpmath.log(4 * pi * pi)) \
        + 2 * mpmath.loggamma(k)
    c = mpmath.log(36) - 4 * mpmath.log(pi)
    return logG + c, logG - c


def _lo(D, k):
    return mpmath.exp(_log_bounds(D, k)[0])


def _hi(D, k):
    return mpmath.exp(_log_bounds(D, k)[1])


def _numeric(cert: S.ExclusionCertificate):
    t = cert.triple
    D, k1, k2 = t.D, t.k1, t.k2
    rule = cert.rule
    if rule == S.R_UNEQUAL:
        a, b = max(k1, k2), min(k1, k2)
        lo_a, hi_b = _lo(D, a), _hi(D, b)
        lo_b, hi_a = _lo(D, b), _hi(D, a)
        if lo_a > hi_b:
            v = _lo(D, a + b) * (1 / hi_b - 1 / lo_a)
        elif lo_b > hi_a:
            v = _lo(D, a + b) * (1 / hi_a - 1 / lo_b)
        else:
            return None
        return v, mpmath.mpf(1)
    if rule == S.R_EQ_INERT:
        log_lhs = mpmath.log(4) + _log_bounds(D, 2 * k1)[0] - 2 * _log_bounds(D, k1)[1]
        return mpmath.exp(log_lhs), mpmath.mpf(4) ** (2 * k1 - 1) - mpmath.mpf(4) ** (k1 - 1)
    if rule == S.R_K1_SIZE:
        return _lo(D, k1), mpmath.mpf(4)
    if rule == S.R_SPLIT_CUSP:
        return 4 / _hi(D, k1), mpmath.mpf(0)
    if rule == S.R_RAMIFIED_CUSP:
        return mpmath.mpf(2) ** (k2 - 1) * (2 ** k1 - 1), 4 / _lo(D, k1)
    if rule in (S.R_K2_GROWTH, S.R_K2_UNIFORM):
        return _growth(D, k1, k2, rule == S.R_K2_GROWTH)
    raise ValueError(f"unknown numeric rule {rule!r}")


def _growth(D, k1, k2, exact):
    ctx = S.field_of_discriminant(D)
    if exact:
        q = 4 / zeta_special(ctx, k1)
        U = mpmath.mpf(q.numerator) / q.denominator
    else:
        U = 4 / _lo(D, k1)
    two = ideal_from_element(ctx, ctx.elem(2))
    total = {two: mpmath.mpf(2)}
    const = mpmath.mpf(0)
    for m1, m2 in decompositions(ctx, ctx.elem(4)):
        I1, I2 = ideal_from_element(ctx, m1), ideal_from_element(ctx, m2)
        cf = mpmath.mpf(divisor_power_sum(ctx, I1, k1 - 1))
        sign = -1 if exact else 1
        if I2 == UNIT_IDEAL:
            const += sign * cf
        else:
            total[I2] = total.get(I2, 0) + sign * cf
    s = mpmath.mpf(0)
    e = mpmath.mpf(k2 - 1) / 2 + mpmath.mpf(7) / 64
    for J, a in total.items():
        ndiv = 1
        for _, m in factor_ideal(ctx, J):
            ndiv *= m + 1
        s += abs(a) * ndiv * mpmath.exp(e * mpmath.log(J.norm))
    rhs = U * U + U * (s + const)
    lhs = mpmath.exp((k2 - 1) * mpmath.log(4)) * (4 ** k1 - 1)
    return lhs, rhs


def _exact(cert: S.ExclusionCertificate, bound: int):
    t = cert.triple
    rule = cert.rule
    if rule == S.R_HECKE:
        return _hecke(cert, bound)
    ctx = S.field_of_discriminant(t.D)
    z = lambda k: zeta_special(ctx, k)  # noqa: E731
    if rule == S.R_CONSTANT:
        return 1 / z(t.k1) + 1 / z(t.k2), 1 / z(t.k1 + t.k2)
    if rule == S.R_INERT:
        return Fraction(4 ** (2 * t.k1 - 1) - 4 ** (t.k1 - 1)) / z(2 * t.k1), 4 / z(t.k1) ** 2
    if rule == S.R_K1_INT:
        q = 4 / z(t.k1)
        return q, Fraction(round(q))
    if rule == S.R_TWO_TRIVIAL:
        if t.kind == S.EIS_EIS:
            return Fraction(0), Fraction(2 ** (2 * t.k1 - 1) - 2 ** (t.k1 - 1))
        return Fraction(2 ** (t.k2 - 1) * (2 ** t.k1 - 1)), abs(4 / z(t.k1))
    raise ValueError(f"unknown exact rule {rule!r}")


def _hecke(cert, bound):
    """Recompute the normalized product coefficient at the witness and the relation's prediction."""
    t = cert.triple
    ctx = S.field_of_discriminant(t.D)
    W = ideal_from_key(cert.witness)
    B = max(bound, W.norm)
    f = eisenstein(ctx, t.k1, B)
    if t.kind == S.EIS_EIS:
        h = eisenstein(ctx, t.k2, B)
    else:
        h = next(r.expansion for r in eigenforms(ctx, t.k2, B) if r.label == t.h)
    p = product(f, h, B)
    g = scale(1 / p.coeffs[UNIT_IDEAL], p)
    k = t.k1 + t.k2
    fac = factor_ideal(ctx, W)
    if len(fac) > 1:
        want = CoeffNumber(1)
        for P, e in fac:
            want = want * g.coeffs[ideal_power(ctx, P.ideal, e)]
    else:
        (P, e), = fac
        if e < 2:
            # a prime carries no relation, so it cannot witness a violation
            return g.coeffs[W], g.coeffs[W]
        want = g.coeffs[P.ideal] * g.coeffs[ideal_power(ctx, P.ideal, e - 1)] \
            - P.norm ** (k - 1) * g.coeffs[ideal_power(ctx, P.ideal, e - 2)]
    return g.coeffs[W], want


def recheck(cert: S.ExclusionCertificate, bound: int = 100) -> bool:
    """True when an independent evaluation confirms the certificate's margin sign."""
    if cert.exact:
        lhs, rhs = _exact(cert, bound)
        if cert.relation == "le":
            return rhs - lhs < 0
        return rhs - lhs != 0
    with mpmath.workprec(RECHECK_BITS):
        out = _numeric(cert)
        if out is None:
            return False
        lhs, rhs = out
        return rhs - lhs < 0 and cert.margin < 0
