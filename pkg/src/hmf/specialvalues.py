"""Special values zeta_F(1-k): exact via diagonal restriction, numeric via the functional equation.

The exact route pulls the weight-k Eisenstein series back along z -> (z, z) after moving
it to SL_2(O) with diag(1, delta), delta a totally positive generator of the different.
The pullback is a level-one elliptic form of weight 2k whose q^n coefficient is

    sum over beta in O with beta > 0 > beta' and omega-coordinate n of sigma_{k-1}((beta)),

and its constant term is zeta_F(1-k)/4.  Matching the q^1..q^N coefficients against a
basis of M_2k(SL_2(Z)) pins that constant term exactly.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

import mpmath

from .errors import DomainError, InternalError
from .linalg import rank, solve
from .quadfield import FieldContext, divisor_power_sum, ideal_from_element, kronecker


def precision_bits() -> int:
    return int(os.environ.get("HMF_PRECISION_BITS", "200"))


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa; produces B_1 = +1/2, flipped below
    out = []
    a = []
    for m in range(n + 1):
        a.append(Fraction(1, m + 1))
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    if n < 0:
        raise DomainError("bernoulli index must be >= 0")
    b = _bernoulli_table(n)[n]
    return -b if n == 1 else b


@dataclass(frozen=True)
class EllipticQExpansion:
    weight: int
    coeffs: tuple[Fraction, ...]

    def __mul__(self, other: "EllipticQExpansion") -> "EllipticQExpansion":
        n = min(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        c = [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n)]
        return EllipticQExpansion(self.weight + other.weight, tuple(c))


def _sigma(n: int, e: int) -> int:
    return sum(d ** e for d in range(1, n + 1) if n % d == 0)


def elliptic_eisenstein(w: int, N: int) -> EllipticQExpansion:
    """Level-one Eisenstein series of weight w >= 4, constant term 1, through q^N."""
    c = Fraction(-2 * w) / bernoulli(w)
    return EllipticQExpansion(w, tuple([Fraction(1)] + [c * _sigma(n, w - 1) for n in range(1, N + 1)]))


def _one(N: int) -> EllipticQExpansion:
    return EllipticQExpansion(0, tuple([Fraction(1)] + [Fraction(0)] * N))


def level_one_basis(w: int, N: int) -> list[EllipticQExpansion]:
    """Monomials E4^a E6^b spanning M_w(SL_2(Z)), through q^N."""
    E4, E6 = elliptic_eisenstein(4, N), elliptic_eisenstein(6, N)
    out = []
    for b in range(w // 6 + 1):
        rest = w - 6 * b
        if rest % 4:
            continue
        f = _one(N)
        for _ in range(rest // 4):
            f = f * E4
        for _ in range(b):
            f = f * E6
        out.append(EllipticQExpansion(w, f.coeffs))
    return out


def level_one_dimension(w: int) -> int:
    if w < 0 or w % 2 or w == 2:
        return 0
    return w // 12 + (0 if w % 12 == 2 else 1)


def restriction_coefficient(ctx: FieldContext, k: int, n: int) -> int:
    """q^n coefficient (n >= 1) of the diagonal restriction of the weight-k Eisenstein series."""
    tau, D = ctx.tau, ctx.D
    total = 0
    tmax = isqrt(n * n * D)
    for t in range(-tmax, tmax + 1):
        if t * t >= n * n * D or (t - tau * n) % 2:
            continue
        beta = ctx.elem((t - tau * n) // 2, n)
        total += divisor_power_sum(ctx, ideal_from_element(ctx, beta), k - 1)
    return total


def diagonal_restriction(ctx: FieldContext, k: int, N: int | None = None) -> EllipticQExpansion:
    """The restricted weight-2k elliptic form through q^N, constant term included."""
    ctx.require_certified()
    if k < 2 or k % 2:
        raise DomainError(f"weight k={k} must be even and >= 2")
    w = 2 * k
    dim = level_one_dimension(w)
    N = N or dim + 4
    s = [Fraction(restriction_coefficient(ctx, k, n)) for n in range(1, N + 1)]
    basis = level_one_basis(w, N)
    if len(basis) != dim:
        raise InternalError(f"level-one basis in weight {w} has {len(basis)} elements, expected {dim}")
    A = [[f.coeffs[n] for f in basis] for n in range(1, N + 1)]
    if rank(A) < dim:
        return diagonal_restriction(ctx, k, 2 * N)
    x = solve(A, s)
    a0 = sum(xi * f.coeffs[0] for xi, f in zip(x, basis))
    return EllipticQExpansion(w, tuple([a0] + s))


@lru_cache(maxsize=None)
def zeta_special(ctx: FieldContext, k: int) -> Fraction:
    """Exact zeta_F(1-k) for even k >= 2."""
    return 4 * diagonal_restriction(ctx, k).coeffs[0]


def dirichlet_l_numeric(D: int, s, prec: int | None = None):
    """L(s, chi_D) as a finite combination of Hurwitz zeta values."""
    prec = prec or precision_bits()
    with mpmath.workprec(prec):
        total = mpmath.mpf(0)
        for a in range(1, D + 1):
            chi = kronecker(D, a)
            if chi:
                total += chi * mpmath.zeta(s, mpmath.mpf(a) / D)
        return total / mpmath.mpf(D) ** s


def dedekind_zeta_numeric(D: int, s, prec: int | None = None):
    """zeta_F(s) = zeta(s) L(s, chi_D) for Re(s) > 1."""
    prec = prec or precision_bits()
    with mpmath.workprec(prec):
        return mpmath.zeta(s) * dirichlet_l_numeric(D, s, prec)


def _fe_factor(D: int, k: int):
    return 2 / mpmath.pi * (mpmath.mpf(D) / (4 * mpmath.pi ** 2)) ** (k - mpmath.mpf(1) / 2) * mpmath.gamma(k) ** 2


def zeta_special_numeric(ctx_or_D, k: int, prec: int | None = None):
    """zeta_F(1-k) from zeta_F(k) through the functional equation (trivial character)."""
    D = ctx_or_D.D if isinstance(ctx_or_D, FieldContext) else int(ctx_or_D)
    if k < 2:
        raise DomainError("k must be >= 2")
    prec = prec or precision_bits()
    if k % 2:
        return mpmath.mpf(0)
    with mpmath.workprec(prec + 20):
        val = _fe_factor(D, k) * dedekind_zeta_numeric(D, k, prec + 20)
    with mpmath.workprec(prec):
        return +val


@dataclass(frozen=True)
class LBoundPair:
    k: int
    D: int
    lower: mpmath.mpf
    upper: mpmath.mpf


def l_bounds(D: int, k: int, *, uniform: bool = False, prec: int | None = None) -> LBoundPair:
    """Character-independent bounds on |L(1-k, psi)|.

    With uniform=True the zeta(4k)/zeta(k)^2 and zeta(k)^2 factors are replaced by
    their k-independent extremes 36/pi^4 and pi^4/36.
    """
    if k < 2:
        raise DomainError("k must be >= 2")
    prec = prec or precision_bits()
    with mpmath.workprec(prec):
        G = _fe_factor(D, k)
        if uniform:
            lo, hi = G * 36 / mpmath.pi ** 4, G * mpmath.pi ** 4 / 36
        else:
            z = mpmath.zeta(k)
            lo, hi = G * mpmath.zeta(4 * k) / z ** 2, G * z ** 2
        return LBoundPair(k, D, +lo, +hi)


def bernoulli_recurrence_holds(n: int) -> bool:
    return sum(comb(n + 1, j) * bernoulli(j) for j in range(n + 1)) == 0
