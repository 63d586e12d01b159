from fractions import Fraction

import pytest

from hmf.forms import linear_combination, product, scale
from hmf.hecke import hecke_operator, is_normalized_eigenform, ramanujan_check
from hmf.numbers import CoeffNumber
from hmf.quadfield import UNIT_IDEAL, factor_ideal, ideal_power, primes_above


def P(F, p):
    return primes_above(F, p)[0]


def test_eisenstein_eigenvalue(F5, eis5):
    E2 = eis5(2)
    T = hecke_operator(E2, P(F5, 2))
    assert T == scale(5, E2.truncate(T.bound))
    E4 = eis5(4)
    T = hecke_operator(E4, P(F5, 3))
    assert T == scale(1 + 9 ** 3, E4.truncate(T.bound))


def test_cusp_eigenvalue(F5, eigen5):
    h6 = eigen5(6)[0].expansion
    T = hecke_operator(h6, P(F5, 2))
    assert T == scale(20, h6.truncate(T.bound))


def test_hecke_operators_commute(F5, eis5):
    f = linear_combination([(Fraction(3, 7), eis5(4)), (Fraction(-2), product(eis5(2), eis5(2)))])
    P2, P5 = P(F5, 2), P(F5, 5)
    a = hecke_operator(hecke_operator(f, P2), P5)
    b = hecke_operator(hecke_operator(f, P5), P2)
    assert a == b.truncate(a.bound) or b == a.truncate(b.bound)


TABLE = {
    "h6": [20, 90, -90, -624],
    "h8": [140, 3330, 150, 3216],
    "h10": [CoeffNumber(170, 30, 809), CoeffNumber(22590, -540, 809),
            CoeffNumber(570, -60, 809), CoeffNumber(494856, 10200, 809)],
    "h10'": [CoeffNumber(170, -30, 809), CoeffNumber(22590, 540, 809),
             CoeffNumber(570, 60, 809), CoeffNumber(494856, -10200, 809)],
}


@pytest.mark.parametrize("k", [6, 8, 10])
def test_eigenform_table(k, eigen5, ideals5):
    for rec in eigen5(k):
        f = rec.expansion
        assert [f[ideals5[n]] for n in ("two", "three", "diff", "four")] == TABLE[rec.label]
        assert f.constant_term == 0 and f[UNIT_IDEAL] == 1


def test_weight_ten_pair_is_conjugate(eigen5):
    a, b = eigen5(10)
    assert a.coeff_disc == 809
    assert a.expansion.conj() == b.expansion


@pytest.mark.parametrize("k", [6, 8, 10, 12])
def test_hecke_relations_for_all_eigenforms(k, F5, eigen5, eis5):
    forms = [eis5(k)] + ([r.expansion for r in eigen5(k)] if k <= 10 else [])
    for f in forms:
        res = is_normalized_eigenform(f, k)
        assert res.ok, res
        assert res.checked > 0


def test_eigenform_relations_by_hand(F5, eigen5):
    f = eigen5(8)[0].expansion
    for I in f.ideals():
        fac = factor_ideal(F5, I)
        if len(fac) == 2:
            (A, a), (B, b) = fac
            assert f[I] == f[ideal_power(F5, A.ideal, a)] * f[ideal_power(F5, B.ideal, b)]


def test_non_eigenform_witness(F5, eis5, eigen5, ideals5):
    g = scale(120, product(eis5(2), eigen5(8)[0].expansion))
    res = is_normalized_eigenform(g)
    assert not res.ok
    assert res.witness == ideals5["four"]
    assert res.lhs == 525456 and res.rhs == 260 * 260 - 4 ** 9


def test_zero_first_coefficient(eis5):
    res = is_normalized_eigenform(scale(0, eis5(2, 20)))
    assert not res.ok and res.witness == UNIT_IDEAL


@pytest.mark.parametrize("k", [6, 8, 10])
def test_ramanujan(k, eigen5):
    for rec in eigen5(k):
        rep = ramanujan_check(rec, max_norm=100)
        assert rep.ok and 0 < rep.max_ratio <= 1


def test_ramanujan_rejects_eisenstein(eis5):
    rep = ramanujan_check(eis5(6))
    assert not rep.ok
    assert "constant term" in rep.reason
    assert rep.violations
