from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hmf.errors import DomainError
from hmf.numbers import CoeffNumber, quadratic_root, squarefree_part

q = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)
vals = st.builds(lambda u, v: CoeffNumber(u, v, 809), q, q)


@given(vals, vals, vals)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if not b.is_zero():
        assert (a / b) * b == a


@given(vals)
def test_norm_and_conj(a):
    assert (a * a.conj()).is_rational
    assert (a * a.conj()).u == a.norm_down()
    e1, e2 = a.embeddings(80)
    assert abs(float(e1 * e2) - float(a.norm_down())) <= 1e-9 * (1 + abs(float(a.norm_down())))


def test_mixing_fields_is_an_error():
    with pytest.raises(DomainError):
        CoeffNumber(1, 1, 2) + CoeffNumber(1, 1, 3)


def test_normalization():
    assert CoeffNumber(1, 2, 9) == 7
    assert CoeffNumber(3, 0, 809).m == 1
    assert str(CoeffNumber(170, 30, 809)) == "170+30*sqrt(809)"
    assert str(CoeffNumber(Fraction(1, 60))) == "1/60"


@given(vals)
def test_pairs_round_trip(a):
    assert CoeffNumber.from_pairs(a.to_pairs(), 809) == a


def test_roots():
    assert squarefree_part(72) == (6, 2)
    assert quadratic_root(Fraction(809 * 900)) == (30, 809)
    assert quadratic_root(Fraction(9, 4)) == (Fraction(3, 2), 1)


def test_sign():
    assert CoeffNumber(170, -30, 809).sign() == -1
    assert CoeffNumber(-170, 30, 809).sign() == 1
