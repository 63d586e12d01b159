"""Exact arithmetic in a real quadratic field F = Q(sqrt d) and its ring of integers.

Elements are written x + y*omega with omega = (1 + sqrt d)/2 when d = 1 mod 4 and
omega = sqrt d otherwise.  The fixed real embedding sends sqrt d to the positive
root.  Nothing in this module touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import gcd, isqrt
from typing import Iterator, Union

from sympy import factorint, isprime, primerange

from .errors import DomainError, InternalError, InvalidFieldError, NotNarrowClassOneError, ZeroIdealError

Rational = Union[int, Fraction]


def _omega_data(d: int) -> tuple[int, int]:
    """(trace, norm) of omega; omega satisfies X^2 - trace*X + norm."""
    if d % 4 == 1:
        return 1, (1 - d) // 4
    return 0, -d


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class QuadElem:
    """x + y*omega in Q(sqrt d)."""

    x: Rational
    y: Rational
    d: int

    @property
    def tau(self) -> int:
        return _omega_data(self.d)[0]

    @property
    def disc(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise DomainError(f"elements of different fields: d={self.d}, d={other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.x, -self.y, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.x - o.x, self.y - o.y, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        tau, nw = _omega_data(self.d)
        x1, y1, x2, y2 = self.x, self.y, o.x, o.y
        return QuadElem(x1 * x2 - nw * y1 * y2, x1 * y2 + x2 * y1 + tau * y1 * y2, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        num = self * o.conj()
        return QuadElem(Fraction(num.x) / n, Fraction(num.y) / n, self.d)

    def __pow__(self, e: int):
        if e < 0:
            return QuadElem(1, 0, self.d) / (self ** -e)
        out = QuadElem(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "QuadElem":
        return QuadElem(self.x + self.tau * self.y, -self.y, self.d)

    def norm(self) -> Rational:
        tau, nw = _omega_data(self.d)
        return self.x * self.x + tau * self.x * self.y + nw * self.y * self.y

    def trace(self) -> Rational:
        return 2 * self.x + self.tau * self.y

    def sign(self) -> int:
        # value = (t + y*sqrt(D)) / 2 with t the trace
        return _sign_sqrt(self.trace(), self.y, self.disc)

    def is_totally_positive(self) -> bool:
        t = self.trace()
        return t > 0 and t * t > self.y * self.y * self.disc

    def is_integral(self) -> bool:
        return Fraction(self.x).denominator == 1 and Fraction(self.y).denominator == 1

    def to_float(self) -> float:
        return (float(self.trace()) + float(self.y) * self.disc ** 0.5) / 2

    def __repr__(self) -> str:
        return f"QuadElem({self.x}, {self.y}; d={self.d})"


def _sign_sqrt(s: Rational, t: Rational, m: int) -> int:
    """Sign of s + t*sqrt(m) for m > 0 not a square."""
    if s >= 0 and t >= 0:
        return 0 if (s == 0 and t == 0) else 1
    if s <= 0 and t <= 0:
        return -1
    lhs, rhs = s * s, t * t * m
    if s > 0:
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


def norm(e: QuadElem) -> Rational:
    return e.norm()


def trace(e: QuadElem) -> Rational:
    return e.trace()


def conj(e: QuadElem) -> QuadElem:
    return e.conj()


def is_totally_positive(e: QuadElem) -> bool:
    return e.is_totally_positive()


@dataclass(frozen=True)
class FieldContext:
    d: int
    D: int
    omega_kind: str
    fundamental_unit: QuadElem
    unit_norm: int
    narrow_class_one: bool = False

    @property
    def tau(self) -> int:
        return _omega_data(self.d)[0]

    @property
    def omega_norm(self) -> int:
        return _omega_data(self.d)[1]

    def elem(self, x: Rational, y: Rational = 0) -> QuadElem:
        return QuadElem(x, y, self.d)

    @property
    def one(self) -> QuadElem:
        return QuadElem(1, 0, self.d)

    @property
    def sqrt_disc(self) -> QuadElem:
        return QuadElem(-self.tau, 2, self.d)

    @property
    def tp_unit(self) -> QuadElem:
        """Generator of the totally positive units modulo torsion."""
        e = self.fundamental_unit
        return e * e if self.unit_norm == -1 else e

    @property
    def different_generator(self) -> QuadElem:
        """A totally positive generator of the different (needs a unit of norm -1)."""
        if self.unit_norm != -1:
            raise NotNarrowClassOneError("different has no totally positive generator without a norm -1 unit")
        return self.fundamental_unit * self.sqrt_disc

    def require_certified(self) -> None:
        if not self.narrow_class_one:
            raise NotNarrowClassOneError(
                f"d={self.d}: field not certified narrow-class-one with norm -1 unit"
            )


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def _fundamental_unit(d: int) -> QuadElem:
    """Smallest unit > 1, read off the continued fraction of omega."""
    tau, nw = _omega_data(d)
    s = isqrt(d)
    P, Q = (1, 2) if d % 4 == 1 else (0, 1)
    p2, p1 = 0, 1
    q2, q1 = 1, 0
    for _ in range(100000):
        if Q <= 0:
            raise InternalError(f"continued fraction for d={d} left the reduced range")
        a = (P + s) // Q
        p2, p1 = p1, a * p1 + p2
        q2, q1 = q1, a * q1 + q2
        n = p1 * p1 - tau * p1 * q1 + nw * q1 * q1
        if n in (1, -1):
            return QuadElem(p1 - tau * q1, q1, d)
        P = a * Q - P
        Q = (d - P * P) // Q
    raise InternalError(f"no unit found for d={d}")


def make_field(d: int) -> FieldContext:
    """Build the context for Q(sqrt d), certifying narrow class number one when possible.

    Certification is unconditional: the unit has norm -1 and every prime ideal of norm
    below the Minkowski bound sqrt(D)/2 is shown to be principal.
    """
    if not isinstance(d, int) or d <= 1 or not _is_squarefree(d):
        raise InvalidFieldError(f"d={d} must be a squarefree integer > 1")
    D = discriminant(d)
    eps = _fundamental_unit(d)
    ctx = FieldContext(
        d=d,
        D=D,
        omega_kind="half" if d % 4 == 1 else "sqrt",
        fundamental_unit=eps,
        unit_norm=int(eps.norm()),
    )
    if ctx.unit_norm != -1:
        return ctx
    # primes with norm <= sqrt(D)/2, i.e. 4*norm^2 <= D
    for p in primerange(2, isqrt(D // 4) + 2):
        for P in primes_above(ctx, p):
            if 4 * P.norm * P.norm > D:
                continue
            if _find_generator(ctx, P.ideal) is None:
                return ctx
    return replace(ctx, narrow_class_one=True)


# ---------------------------------------------------------------- ideals


@dataclass(frozen=True, order=False)
class IdealHNF:
    """The Z-module a*Z + (b + c*omega)*Z with c | a, c | b, 0 <= b < a."""

    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.a * self.c, self.a, self.b, self.c)

    def __lt__(self, other: "IdealHNF") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"IdealHNF(a={self.a}, b={self.b}, c={self.c})"


UNIT_IDEAL = IdealHNF(1, 0, 1)


def ideal_from_key(key) -> IdealHNF:
    n, a, b, c = key
    if a * c != n:
        raise DomainError(f"inconsistent ideal key {list(key)}")
    return IdealHNF(a, b, c)


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: IdealHNF
    p: int
    residue_degree: int
    ramified: bool

    @property
    def norm(self) -> int:
        return self.p ** self.residue_degree


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _hnf(vectors) -> IdealHNF:
    """HNF of the full-rank Z-lattice spanned by integer vectors (x, y) ~ x + y*omega."""
    c, xc = 0, 0
    for x, y in vectors:
        g, s, t = _xgcd(c, y)
        xc, c = s * xc + t * x, g
    det = 0
    vs = list(vectors)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            det = gcd(det, vs[i][0] * vs[j][1] - vs[j][0] * vs[i][1])
    if c == 0 or det == 0:
        raise ZeroIdealError("lattice is not of full rank")
    a = det // c
    return IdealHNF(a, xc % a, c)


def _mul_xy(ctx: FieldContext, x1, y1, x2, y2) -> tuple[int, int]:
    tau, nw = ctx.tau, ctx.omega_norm
    return x1 * x2 - nw * y1 * y2, x1 * y2 + x2 * y1 + tau * y1 * y2


def ideal_from_element(ctx: FieldContext, g: QuadElem) -> IdealHNF:
    if g.x == 0 and g.y == 0:
        raise ZeroIdealError("the zero element generates the zero ideal")
    if not g.is_integral():
        raise DomainError(f"{g!r} is not an algebraic integer")
    return _principal_hnf(ctx, int(g.x), int(g.y))


@lru_cache(maxsize=None)
def _principal_hnf(ctx: FieldContext, x: int, y: int) -> IdealHNF:
    return _hnf([(x, y), _mul_xy(ctx, x, y, 0, 1)])


def element_key(ctx: FieldContext, x: int, y: int) -> tuple[int, int, int, int]:
    """Ideal key of the principal ideal (x + y*omega); cached for the product engine."""
    return _principal_hnf(ctx, x, y).key


def ideal_contains(ideal: IdealHNF, x: int, y: int) -> bool:
    if y % ideal.c:
        return False
    return (x - ideal.b * (y // ideal.c)) % ideal.a == 0


def ideal_mul(ctx: FieldContext, m: IdealHNF, n: IdealHNF) -> IdealHNF:
    return _ideal_mul(ctx, m, n)


@lru_cache(maxsize=None)
def _ideal_mul(ctx: FieldContext, m: IdealHNF, n: IdealHNF) -> IdealHNF:
    gm = [(m.a, 0), (m.b, m.c)]
    gn = [(n.a, 0), (n.b, n.c)]
    return _hnf([_mul_xy(ctx, x1, y1, x2, y2) for (x1, y1), (x2, y2) in iproduct(gm, gn)])


def ideal_conj(ctx: FieldContext, m: IdealHNF) -> IdealHNF:
    return _hnf([(m.a, 0), (m.b + ctx.tau * m.c, -m.c)])


def ideal_divides(m: IdealHNF, n: IdealHNF) -> bool:
    """True when m | n, i.e. n is contained in m."""
    return ideal_contains(m, n.a, 0) and ideal_contains(m, n.b, n.c)


def ideal_div_prime(ctx: FieldContext, m: IdealHNF, P: PrimeIdeal) -> IdealHNF:
    """m * P^-1 for a prime P dividing m."""
    if not ideal_divides(P.ideal, m):
        raise DomainError(f"{P.ideal!r} does not divide {m!r}")
    if P.residue_degree == 2:
        q = m
    else:
        q = ideal_mul(ctx, m, ideal_conj(ctx, P.ideal))
    p = P.p
    if q.a % p or q.b % p or q.c % p:
        raise InternalError("ideal division by a prime left a non-integral ideal")
    return IdealHNF(q.a // p, q.b // p, q.c // p)


@lru_cache(maxsize=None)
def primes_above(ctx: FieldContext, p: int) -> tuple[PrimeIdeal, ...]:
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    tau, nw = ctx.tau, ctx.omega_norm
    roots = [r for r in range(p) if (r * r - tau * r + nw) % p == 0]
    if ctx.D % p == 0:
        return (PrimeIdeal(IdealHNF(p, (-roots[0]) % p, 1), p, 1, True),)
    if not roots:
        return (PrimeIdeal(IdealHNF(p, 0, p), p, 2, False),)
    primes = [PrimeIdeal(IdealHNF(p, (-r) % p, 1), p, 1, False) for r in roots]
    return tuple(sorted(primes, key=lambda P: P.ideal.key))


def factor_ideal(ctx: FieldContext, m: IdealHNF) -> list[tuple[PrimeIdeal, int]]:
    return list(_factor_ideal(ctx, m))


@lru_cache(maxsize=None)
def _factor_ideal(ctx: FieldContext, m: IdealHNF) -> tuple[tuple[PrimeIdeal, int], ...]:
    out = []
    for p in sorted(factorint(m.norm)):
        for P in primes_above(ctx, p):
            e, cur = 0, m
            while ideal_divides(P.ideal, cur):
                cur = ideal_div_prime(ctx, cur, P)
                e += 1
            if e:
                out.append((P, e))
    return tuple(out)


def ideal_power(ctx: FieldContext, m: IdealHNF, e: int) -> IdealHNF:
    out = UNIT_IDEAL
    for _ in range(e):
        out = ideal_mul(ctx, out, m)
    return out


def divisors(ctx: FieldContext, m: IdealHNF) -> list[IdealHNF]:
    ideals = [UNIT_IDEAL]
    for P, e in factor_ideal(ctx, m):
        powers = [ideal_power(ctx, P.ideal, j) for j in range(e + 1)]
        ideals = [ideal_mul(ctx, I, Q) for I in ideals for Q in powers]
    return sorted(set(ideals), key=lambda I: I.key)


def ideals_up_to_norm(ctx: FieldContext, B: int) -> list[IdealHNF]:
    return list(_ideals_up_to_norm(ctx, B))


@lru_cache(maxsize=64)
def _ideals_up_to_norm(ctx: FieldContext, B: int) -> tuple[IdealHNF, ...]:
    if B < 1:
        raise DomainError("norm bound must be >= 1")
    found = [UNIT_IDEAL]
    for p in primerange(2, B + 1):
        for P in primes_above(ctx, p):
            if P.norm > B:
                continue
            grown = []
            for I in found:
                J, n = I, I.norm * P.norm
                while n <= B:
                    J = ideal_mul(ctx, J, P.ideal)
                    grown.append(J)
                    n *= P.norm
            found.extend(grown)
    return tuple(sorted(found, key=lambda I: I.key))


# ------------------------------------------------- generators and orbits


def _find_generator(ctx: FieldContext, m: IdealHNF):
    """A totally positive generator of m, or None.

    Any generator can be balanced by powers of the fundamental unit so that both
    embeddings are at most sqrt(N(m) * eps); the search scans y and solves the norm
    equation 4*N = t^2 - y^2*D for the trace t.
    """
    n = m.norm
    eps = ctx.fundamental_unit
    E = abs(int(eps.trace())) + 1
    R = isqrt(n * E) + 1
    ymax = isqrt(4 * R * R // ctx.D) + 1
    tau = ctx.tau
    for y in sorted(range(-ymax, ymax + 1), key=lambda v: (abs(v), v < 0)):
        for sgn in (1, -1):
            t2 = 4 * sgn * n + y * y * ctx.D
            if not _is_square(t2):
                continue
            r = isqrt(t2)
            for t in ((r, -r) if r else (0,)):
                if (t - tau * y) % 2:
                    continue
                x = (t - tau * y) // 2
                if not ideal_contains(m, x, y):
                    continue
                g = QuadElem(x, y, ctx.d)
                if sgn == -1:
                    if ctx.unit_norm != -1:
                        continue
                    g = g * eps
                if g.sign() < 0:
                    g = -g
                if g.is_totally_positive():
                    return g
    return None


def tp_generator(ctx: FieldContext, m: IdealHNF) -> QuadElem:
    return _tp_generator(ctx, m)


@lru_cache(maxsize=None)
def _tp_generator(ctx: FieldContext, m: IdealHNF) -> QuadElem:
    g = _find_generator(ctx, m)
    if g is None:
        raise NotNarrowClassOneError(f"{m!r} has no totally positive generator over d={ctx.d}")
    return canonical_rep(ctx, g)


def canonical_rep(ctx: FieldContext, g: QuadElem) -> QuadElem:
    """The unit-orbit representative with 1 <= g/g' < u^2 (u the totally positive unit)."""
    if not g.is_totally_positive():
        raise DomainError(f"{g!r} is not totally positive")
    u = ctx.tp_unit
    ub = u.conj()
    # g/g' >= 1 iff y >= 0;  g/g' < u^2 iff (g/u)/(g/u)' < 1
    while g.y < 0:
        g = g * u
    while (g * ub).y >= 0:
        g = g * ub
    return g


def tp_elements_of_trace(ctx: FieldContext, t: int) -> Iterator[tuple[int, int]]:
    """All totally positive x + y*omega in O with trace t, as (x, y)."""
    if t <= 0:
        return
    tau, D = ctx.tau, ctx.D
    ymax = isqrt((t * t - 1) // D)
    for y in range(-ymax, ymax + 1):
        if (t - tau * y) % 2 == 0:
            yield (t - tau * y) // 2, y


def kronecker(D: int, n: int) -> int:
    """The quadratic character of discriminant D at n (Kronecker symbol)."""
    from sympy.functions.combinatorial.numbers import kronecker_symbol

    return int(kronecker_symbol(D, n))


def divisor_power_sum(ctx: FieldContext, m: IdealHNF, e: int) -> int:
    """sum over ideals r | m of N(r)^e."""
    return _divisor_power_sum(ctx, m, e)


@lru_cache(maxsize=None)
def _divisor_power_sum(ctx: FieldContext, m: IdealHNF, e: int) -> int:
    out = 1
    for P, a in factor_ideal(ctx, m):
        q = P.norm ** e
        out *= sum(q ** j for j in range(a + 1))
    return out
