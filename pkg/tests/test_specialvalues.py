from fractions import Fraction

import mpmath
import pytest

from hmf.errors import DomainError
from hmf.quadfield import make_field
from hmf.specialvalues import (
    bernoulli,
    bernoulli_recurrence_holds,
    diagonal_restriction,
    elliptic_eisenstein,
    l_bounds,
    level_one_basis,
    level_one_dimension,
    restriction_coefficient,
    zeta_special,
    zeta_special_numeric,
)
from hmf.linalg import solve


def test_bernoulli_values():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(7) == 0


@pytest.mark.parametrize("n", range(1, 40))
def test_bernoulli_recurrence(n):
    assert bernoulli_recurrence_holds(n)


def test_level_one_dimensions():
    assert [level_one_dimension(w) for w in range(4, 28, 2)] == [1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3, 2]
    assert len(level_one_basis(24, 5)) == 3


def test_elliptic_e4():
    E4 = elliptic_eisenstein(4, 4)
    assert list(E4.coeffs) == [1, 240, 2160, 6720, 17520]


ZETA_D5 = {2: Fraction(1, 30), 4: Fraction(1, 60), 6: Fraction(67, 630),
           8: Fraction(361, 120), 10: Fraction(412751, 1650)}


@pytest.mark.parametrize("k,value", sorted(ZETA_D5.items()))
def test_zeta_d5(k, value):
    assert zeta_special(make_field(5), k) == value


def test_zeta_other_fields():
    assert zeta_special(make_field(13), 2) == Fraction(1, 6)
    assert zeta_special(make_field(17), 2) == Fraction(1, 3)
    assert zeta_special(make_field(29), 2) == Fraction(1, 2)
    # Q(sqrt 2): zeta(-1) = 1/12, a classical value
    assert zeta_special(make_field(2), 2) == Fraction(1, 12)


def test_odd_weight_vanishes():
    assert zeta_special_numeric(5, 3) == 0
    with pytest.raises(DomainError):
        zeta_special(make_field(5), 3)


@pytest.mark.parametrize("D", [5, 8, 13, 17, 29, 41])
@pytest.mark.parametrize("k", [2, 4, 6])
def test_exact_matches_numeric(D, k):
    d = D if D % 4 == 1 else D // 4
    exact = zeta_special(make_field(d), k)
    with mpmath.workprec(200):
        num = zeta_special_numeric(D, k, 200)
        assert abs(num - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf(10) ** -50


def test_restriction_first_coefficient():
    # The weight-4 restriction of E_2 over Q(sqrt 5) is 1/120 E_4: constant 1/120, q-coefficient 2.
    F = make_field(5)
    assert restriction_coefficient(F, 2, 1) == 2
    f = diagonal_restriction(F, 2)
    assert f.coeffs[0] == Fraction(1, 120)
    assert f.coeffs[1] == 2


@pytest.mark.parametrize("d", [5, 13, 2])
@pytest.mark.parametrize("k", [2, 4, 6])
def test_restriction_is_modular(d, k):
    # thirty raw restriction coefficients plus the exact constant term lie in M_2k(SL2(Z))
    F = make_field(d)
    N = 30
    vec = [zeta_special(F, k) / 4] + [Fraction(restriction_coefficient(F, k, n)) for n in range(1, N + 1)]
    basis = level_one_basis(2 * k, N)
    x = solve([[b.coeffs[n] for b in basis] for n in range(N + 1)], vec)
    assert len(x) == len(basis)


@pytest.mark.parametrize("k", [2, 3, 4, 6, 10])
def test_l_bounds_bracket(k):
    for d in (5, 2, 13, 17, 101):
        F = make_field(d)
        b = l_bounds(F.D, k)
        u = l_bounds(F.D, k, uniform=True)
        assert u.lower <= b.lower <= b.upper <= u.upper
        if k % 2 == 0:
            # trivial character: the bounded L-value is zeta_F(1-k) itself
            L = abs(zeta_special(F, k))
            assert b.lower <= mpmath.mpf(L.numerator) / L.denominator <= b.upper


def test_l_bounds_monotone_in_discriminant():
    prev = None
    for D in (5, 8, 12, 13, 17, 21, 24, 28, 29):
        b = l_bounds(D, 4, uniform=True)
        if prev:
            assert b.lower > prev.lower and b.upper > prev.upper
        prev = b


def test_uniform_lower_constant():
    # at D=5, k=1/2 the lower factor reduces to 72/pi^5
    with mpmath.workprec(200):
        G = 2 / mpmath.pi * 36 / mpmath.pi ** 4
        assert abs(G - 72 / mpmath.pi ** 5) < mpmath.mpf(10) ** -50
    with pytest.raises(DomainError):
        l_bounds(5, 1)
