"""Truncated Fourier expansions of parallel-weight Hilbert modular forms of full level.

With narrow class number one every coefficient is indexed by an integral ideal; an
Expansion stores c(m, f) for every ideal of norm <= bound plus the constant term.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import BasisFailureError, BoundError, DomainError, EmptySpaceError
from .linalg import nullspace, rank
from .numbers import CoeffNumber
from .quadfield import (
    UNIT_IDEAL,
    FieldContext,
    IdealHNF,
    QuadElem,
    divisor_power_sum,
    element_key,
    ideal_from_key,
    ideals_up_to_norm,
    make_field,
    tp_elements_of_trace,
    tp_generator,
)
from .specialvalues import zeta_special

ZERO = CoeffNumber(0)


@dataclass(frozen=True, eq=False)
class Expansion:
    ctx: FieldContext
    weight: int
    constant_term: CoeffNumber
    coeffs: Mapping[IdealHNF, CoeffNumber]
    bound: int
    coeff_disc: int = 1
    label: str = field(default="", compare=False)

    def __post_init__(self):
        m = self.constant_term.m
        for v in self.coeffs.values():
            if v.m != 1:
                if m not in (1, v.m):
                    raise DomainError("coefficients from two different quadratic fields")
                m = v.m
        object.__setattr__(self, "coeff_disc", m if m > 1 else self.coeff_disc)

    def c(self, m: IdealHNF) -> CoeffNumber:
        if m.norm > self.bound:
            raise BoundError(f"ideal of norm {m.norm} beyond expansion bound {self.bound}")
        return self.coeffs[m]

    def __getitem__(self, m: IdealHNF) -> CoeffNumber:
        return self.c(m)

    def ideals(self) -> list[IdealHNF]:
        return sorted(self.coeffs, key=lambda I: I.key)

    def truncate(self, B: int) -> "Expansion":
        if B > self.bound:
            raise BoundError(f"cannot extend an expansion from bound {self.bound} to {B}")
        return Expansion(self.ctx, self.weight, self.constant_term,
                         {I: v for I, v in self.coeffs.items() if I.norm <= B}, B, self.coeff_disc, self.label)

    def conj(self) -> "Expansion":
        """Apply sqrt(m) -> -sqrt(m) to every coefficient."""
        return Expansion(self.ctx, self.weight, self.constant_term.conj(),
                         {I: v.conj() for I, v in self.coeffs.items()}, self.bound, self.coeff_disc)

    def is_zero(self) -> bool:
        return self.constant_term.is_zero() and all(v.is_zero() for v in self.coeffs.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Expansion):
            return NotImplemented
        return (self.ctx.d == other.ctx.d and self.weight == other.weight and self.bound == other.bound
                and self.constant_term == other.constant_term and dict(self.coeffs) == dict(other.coeffs))

    __hash__ = None

    def __add__(self, other: "Expansion") -> "Expansion":
        return add(self, other)

    def __sub__(self, other: "Expansion") -> "Expansion":
        return add(self, scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, Expansion):
            return product(self, other)
        return scale(other, self)

    __rmul__ = __mul__


def _check_same_field(f: Expansion, h: Expansion) -> None:
    if f.ctx.d != h.ctx.d:
        raise DomainError(f"expansions over different fields d={f.ctx.d} and d={h.ctx.d}")


def eisenstein(ctx: FieldContext, k: int, B: int) -> Expansion:
    """E_k: c(m) = sum over r | m of N(r)^(k-1), constant term zeta_F(1-k)/4."""
    ctx.require_certified()
    if k < 2:
        raise DomainError(f"weight k={k} must be >= 2")
    if k % 2:
        raise EmptySpaceError(f"odd weight {k}: the space of full-level forms is zero")
    coeffs = {I: CoeffNumber(divisor_power_sum(ctx, I, k - 1)) for I in ideals_up_to_norm(ctx, B)}
    return Expansion(ctx, k, CoeffNumber(zeta_special(ctx, k) / 4), coeffs, B, label=f"E{k}")


def zero(ctx: FieldContext, k: int, B: int) -> Expansion:
    return Expansion(ctx, k, ZERO, {I: ZERO for I in ideals_up_to_norm(ctx, B)}, B)


def scale(c, f: Expansion) -> Expansion:
    c = CoeffNumber.coerce(c)
    return Expansion(f.ctx, f.weight, c * f.constant_term, {I: c * v for I, v in f.coeffs.items()}, f.bound)


def add(f: Expansion, h: Expansion) -> Expansion:
    _check_same_field(f, h)
    if f.weight != h.weight:
        raise DomainError(f"cannot add weight {f.weight} and weight {h.weight}")
    B = min(f.bound, h.bound)
    coeffs = {I: v + h.coeffs[I] for I, v in f.coeffs.items() if I.norm <= B}
    return Expansion(f.ctx, f.weight, f.constant_term + h.constant_term, coeffs, B)


def linear_combination(terms: Iterable[tuple[object, Expansion]]) -> Expansion:
    terms = list(terms)
    if not terms:
        raise DomainError("empty linear combination")
    out = scale(*terms[0])
    for c, f in terms[1:]:
        out = add(out, scale(c, f))
    return out


# ------------------------------------------------------------ products


def _minimal_trace_generator(ctx: FieldContext, m: IdealHNF) -> QuadElem:
    g = tp_generator(ctx, m)
    alt = g * ctx.tp_unit.conj()
    return alt if alt.trace() < g.trace() else g


def decompositions(ctx: FieldContext, mu: QuadElem) -> list[tuple[QuadElem, QuadElem]]:
    """All (mu1, mu2) with mu1 + mu2 = mu and both totally positive integers."""
    if not mu.is_totally_positive() or not mu.is_integral():
        raise DomainError(f"{mu!r} is not a totally positive integer")
    out = []
    for t in range(1, int(mu.trace())):
        for x, y in tp_elements_of_trace(ctx, t):
            m1 = ctx.elem(x, y)
            m2 = mu - m1
            if m2.is_totally_positive():
                # Koecher: both parts must be positive at both places
                assert m1.is_totally_positive()
                out.append((m1, m2))
    return out


@lru_cache(maxsize=None)
def _decomposition_keys(ctx: FieldContext, m: IdealHNF) -> tuple[tuple[IdealHNF, IdealHNF], ...]:
    mu = _minimal_trace_generator(ctx, m)
    out = []
    for m1, m2 in decompositions(ctx, mu):
        k1 = element_key(ctx, int(m1.x), int(m1.y))
        k2 = element_key(ctx, int(m2.x), int(m2.y))
        out.append((ideal_from_key(k1), ideal_from_key(k2)))
    return tuple(out)


def product(f: Expansion, h: Expansion, B: int | None = None) -> Expansion:
    """f*h through bound B, summing over every splitting of a generator into two positive parts."""
    _check_same_field(f, h)
    Bmax = min(f.bound, h.bound)
    B = Bmax if B is None else B
    if B > Bmax:
        raise BoundError(f"product bound {B} exceeds factor bounds {Bmax}")
    ctx = f.ctx
    cf, ch = f.constant_term, h.constant_term
    fc, hc = f.coeffs, h.coeffs
    coeffs = {}
    for I in ideals_up_to_norm(ctx, B):
        total = cf * hc[I] + fc[I] * ch
        for I1, I2 in _decomposition_keys(ctx, I):
            a, b = fc[I1], hc[I2]
            if not (a.is_zero() or b.is_zero()):
                total = total + a * b
        coeffs[I] = total
    return Expansion(ctx, f.weight + h.weight, cf * ch, coeffs, B)


# ------------------------------------------------------ bases at D = 5

# dim S_k for the full Hilbert modular group of Q(sqrt 5), even k
CUSP_DIMENSIONS_D5 = {2: 0, 4: 0, 6: 1, 8: 1, 10: 2, 12: 3}
GENERATOR_WEIGHTS_D5 = (2, 6, 10)


def _monomial_exponents(k: int, gens: tuple[int, ...]) -> list[tuple[int, ...]]:
    if not gens:
        return [()] if k == 0 else []
    out = []
    g, rest = gens[-1], gens[:-1]
    for e in range(k // g, -1, -1):
        for tail in _monomial_exponents(k - e * g, rest):
            out.append(tail + (e,))
    return out


def _power(f: Expansion, e: int, cache: dict) -> Expansion | None:
    if e == 0:
        return None
    key = (f.weight, e)
    if key not in cache:
        cache[key] = f if e == 1 else product(_power(f, e - 1, cache), f)
    return cache[key]


def monomial_basis(ctx: FieldContext, k: int, B: int) -> list[Expansion]:
    """Monomials in E2, E6, E10 of weight k (D = 5, k < 20), checked to be independent."""
    if ctx.D != 5:
        raise DomainError("generators of the graded ring are only tabulated for D=5")
    if k % 2:
        raise EmptySpaceError(f"odd weight {k}: the space of full-level forms is zero")
    if not 2 <= k < 20:
        raise DomainError(f"weight {k} outside the monomial range 2 <= k < 20")
    gens = {w: eisenstein(ctx, w, B) for w in GENERATOR_WEIGHTS_D5 if w <= k}
    cache: dict = {}
    out = []
    for exps in _monomial_exponents(k, GENERATOR_WEIGHTS_D5):
        f = None
        names = []
        for w, e in zip(GENERATOR_WEIGHTS_D5, exps):
            p = _power(gens[w], e, cache) if e else None
            if p is not None:
                f = p if f is None else product(f, p)
                names.append(f"E{w}" + (f"^{e}" if e > 1 else ""))
        out.append(Expansion(f.ctx, f.weight, f.constant_term, f.coeffs, f.bound, label="*".join(names)))
    if k in CUSP_DIMENSIONS_D5 and len(out) != 1 + CUSP_DIMENSIONS_D5[k]:
        raise BasisFailureError(f"weight {k}: {len(out)} monomials, expected {1 + CUSP_DIMENSIONS_D5[k]}")
    if rank(coefficient_matrix(out)) < len(out):
        raise BasisFailureError(f"weight {k} monomials are dependent up to bound {B}; raise the bound")
    return out


def coefficient_matrix(forms: list[Expansion], max_norm: int | None = None) -> list[list]:
    """Rows indexed by (constant term, ideals by key), columns by forms."""
    ideals = forms[0].ideals()
    if max_norm is not None:
        ideals = [I for I in ideals if I.norm <= max_norm]
    rows = [[f.constant_term for f in forms]]
    rows += [[f.coeffs[I] for f in forms] for I in ideals]
    return [[_as_frac(v) for v in row] for row in rows]


def _as_frac(v):
    if isinstance(v, CoeffNumber) and v.is_rational:
        return v.u
    return v


def cusp_subspace(basis: list[Expansion]) -> list[Expansion]:
    """Echelon basis of the forms in span(basis) with zero constant term."""
    if not basis:
        return []
    row = [_as_frac(f.constant_term) for f in basis]
    kernel = nullspace([row])
    return [linear_combination([(c, f) for c, f in zip(v, basis) if c != 0]) for v in kernel]


# ------------------------------------------------------------ file format


def _pairs(v: CoeffNumber) -> list:
    return [[v.u.numerator, v.u.denominator], [v.v.numerator, v.v.denominator]]


def _from_pairs(p, m: int) -> CoeffNumber:
    (a, b), (c, d) = p
    return CoeffNumber(Fraction(int(a), int(b)), Fraction(int(c), int(d)), m if int(c) else 1)


def to_json(f: Expansion) -> str:
    obj = {
        "d": f.ctx.d,
        "weight": f.weight,
        "coeff_disc": f.coeff_disc,
        "bound": f.bound,
        "constant_term": _pairs(f.constant_term),
        "coeffs": [{"ideal": list(I.key), "value": _pairs(f.coeffs[I])} for I in f.ideals()],
    }
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> Expansion:
    obj = json.loads(text)
    ctx = make_field(int(obj["d"]))
    m = int(obj["coeff_disc"])
    B = int(obj["bound"])
    coeffs = {ideal_from_key(e["ideal"]): _from_pairs(e["value"], m) for e in obj["coeffs"]}
    expected = set(ideals_up_to_norm(ctx, B))
    if set(coeffs) != expected:
        raise DomainError("expansion file is not a dense truncation: ideal set does not match its bound")
    return Expansion(ctx, int(obj["weight"]), _from_pairs(obj["constant_term"], m), coeffs, B, m)


def save(f: Expansion, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json(f))


def load(path) -> Expansion:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())


def ideal_of(ctx: FieldContext, x, y=0) -> IdealHNF:
    """Principal ideal (x + y*omega); small convenience for tests and tables."""
    return ideal_from_key(element_key(ctx, int(x), int(y)))


__all__ = [
    "Expansion", "eisenstein", "zero", "scale", "add", "linear_combination", "decompositions",
    "product", "monomial_basis", "cusp_subspace", "coefficient_matrix", "to_json", "from_json",
    "save", "load", "ideal_of", "UNIT_IDEAL", "CUSP_DIMENSIONS_D5",
]
