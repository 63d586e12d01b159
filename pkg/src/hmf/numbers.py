"""Exact values u + v*sqrt(m) in Q or a real quadratic extension Q(sqrt m)."""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath

from .errors import DomainError


def _frac(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q)
    raise TypeError(f"cannot make an exact rational from {q!r}")


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n > 0 as r^2 * m with m squarefree; returns (r, m)."""
    from sympy import factorint

    r, m = 1, 1
    for p, e in factorint(n).items():
        r *= p ** (e // 2)
        if e % 2:
            m *= p
    return r, m


class CoeffNumber:
    """u + v*sqrt(m); m == 1 means a plain rational (v is then 0)."""

    __slots__ = ("u", "v", "m")

    def __init__(self, u=0, v=0, m: int = 1):
        u, v = _frac(u), _frac(v)
        if m < 1:
            raise DomainError("coefficient field must be real: m >= 1")
        if v == 0:
            m = 1
        else:
            r = isqrt(m)
            if r * r == m:
                u, v, m = u + v * r, Fraction(0), 1
        self.u, self.v, self.m = u, v, m

    @classmethod
    def coerce(cls, x) -> "CoeffNumber":
        if isinstance(x, CoeffNumber):
            return x
        return cls(x)

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def _field(self, other: "CoeffNumber") -> int:
        if self.m == 1:
            return other.m
        if other.m == 1 or other.m == self.m:
            return self.m
        raise DomainError(f"cannot mix Q(sqrt {self.m}) and Q(sqrt {other.m})")

    def __add__(self, other):
        o = CoeffNumber.coerce(other)
        return CoeffNumber(self.u + o.u, self.v + o.v, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return CoeffNumber(-self.u, -self.v, self.m)

    def __sub__(self, other):
        o = CoeffNumber.coerce(other)
        return CoeffNumber(self.u - o.u, self.v - o.v, self._field(o))

    def __rsub__(self, other):
        return CoeffNumber.coerce(other) - self

    def __mul__(self, other):
        o = CoeffNumber.coerce(other)
        m = self._field(o)
        if self.v == 0:
            return CoeffNumber(self.u * o.u, self.u * o.v, m)
        if o.v == 0:
            return CoeffNumber(self.u * o.u, self.v * o.u, m)
        return CoeffNumber(self.u * o.u + m * self.v * o.v, self.u * o.v + self.v * o.u, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = CoeffNumber.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero coefficient")
        n = o.norm_down()
        return self * o.conj() * CoeffNumber(1 / n)

    def __rtruediv__(self, other):
        return CoeffNumber.coerce(other) / self

    def __pow__(self, e: int):
        out = CoeffNumber(1)
        for _ in range(e):
            out = out * self
        return out

    def conj(self) -> "CoeffNumber":
        return CoeffNumber(self.u, -self.v, self.m)

    def norm_down(self) -> Fraction:
        return self.u * self.u - self.m * self.v * self.v

    def trace_down(self) -> Fraction:
        return 2 * self.u

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if not isinstance(other, CoeffNumber):
            return NotImplemented
        if self.v == 0 and other.v == 0:
            return self.u == other.u
        return self.u == other.u and self.v == other.v and self.m == other.m

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.m))

    def embeddings(self, prec: int = 200) -> tuple:
        """Both real embeddings (sqrt m -> +sqrt m, -sqrt m) as mpf values."""
        with mpmath.workprec(prec):
            r = mpmath.sqrt(self.m) if self.m > 1 else mpmath.mpf(0)
            u = mpmath.mpf(self.u.numerator) / self.u.denominator
            v = mpmath.mpf(self.v.numerator) / self.v.denominator
            return u + v * r, u - v * r

    def sign(self) -> int:
        """Sign under the embedding sqrt m > 0."""
        s, t = self.u, self.v
        if s >= 0 and t >= 0:
            return 0 if (s == 0 and t == 0) else 1
        if s <= 0 and t <= 0:
            return -1
        lhs, rhs = s * s, t * t * self.m
        if s > 0:
            return 1 if lhs > rhs else -1
        return 1 if rhs > lhs else -1

    def __float__(self) -> float:
        return float(self.embeddings(60)[0])

    def to_pairs(self) -> list[list[str]]:
        return [[str(self.u.numerator), str(self.u.denominator)],
                [str(self.v.numerator), str(self.v.denominator)]]

    @classmethod
    def from_pairs(cls, pairs, m: int) -> "CoeffNumber":
        (p, q), (r, s) = pairs
        return cls(Fraction(int(p), int(q)), Fraction(int(r), int(s)), m if int(r) else 1)

    def __str__(self) -> str:
        if self.v == 0:
            return _qstr(self.u)
        sign = "+" if self.v > 0 else "-"
        return f"{_qstr(self.u)}{sign}{_qstr(abs(self.v))}*sqrt({self.m})"

    def __repr__(self) -> str:
        return f"CoeffNumber({self})"


def _qstr(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def rational_str(q) -> str:
    """Render a rational as "p/q" in lowest terms (integers as "p")."""
    return _qstr(_frac(q))


def quadratic_root(disc: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(disc) = r*sqrt(m) with r rational and m squarefree (disc > 0)."""
    disc = _frac(disc)
    if disc <= 0:
        raise DomainError("expected a positive discriminant")
    num = disc.numerator * disc.denominator
    r, m = squarefree_part(num)
    return Fraction(r, disc.denominator), m
