from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hmf.errors import DomainError, InconclusiveError, NotNarrowClassOneError
from hmf.quadfield import make_field
from hmf.recheck import recheck
from hmf.search import (
    EIS_CUSP,
    EIS_EIS,
    R_HECKE,
    CandidateTriple,
    ExclusionCertificate,
    bound_scan,
    classify,
    cusp_case_k1_filter,
    cusp_case_k2_bound,
    eis_pair_exact_check,
    eis_pair_inert_check,
    eis_unequal_weight_bound,
    growth_inequality,
    is_fundamental_discriminant,
    two_splitting,
    unequal_weight_value,
    verify_identity,
)

F5 = make_field(5)


def test_discriminants():
    fund = [D for D in range(1, 45) if is_fundamental_discriminant(D)]
    assert fund == [5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44]
    assert [two_splitting(D) for D in (5, 8, 17, 13, 12)] == ["inert", "ramified", "split", "inert", "ramified"]


def test_exact_checks_d5():
    r = eis_pair_exact_check(F5, 2, 2)
    assert r.ok and r.lhs == 60
    assert not eis_pair_exact_check(F5, 4, 2).ok
    assert eis_pair_inert_check(F5, 2).ok
    assert not eis_pair_inert_check(F5, 4).ok
    with pytest.raises(DomainError):
        eis_pair_inert_check(make_field(17), 2)


def test_unequal_weight_survivors():
    survivors = [(k1, k2) for k2 in range(2, 21, 2) for k1 in range(k2 + 2, 21 - k2, 2)
                 if eis_unequal_weight_bound(5, k1, k2) is None]
    assert survivors == [(4, 2), (6, 2), (6, 4)]
    with pytest.raises(DomainError):
        eis_unequal_weight_bound(5, 4, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(1, 8), st.sampled_from([5, 8, 13, 17, 21, 24, 29]))
def test_unequal_bound_grows_with_discriminant(k2, gap, D):
    k1 = k2 + gap
    v1, v2 = unequal_weight_value(D, k1, k2), unequal_weight_value(4 * D, k1, k2)
    if v1 is not None:
        assert v2 is not None and v2 > v1


def test_cusp_filters_d5():
    assert cusp_case_k1_filter(F5, 20) == [2, 4]
    assert cusp_case_k2_bound(F5, 2) == 10
    assert cusp_case_k2_bound(F5, 4) == 8


def test_growth_inequality_boundaries():
    lhs, rhs = growth_inequality(F5, 2, 10)
    assert lhs <= rhs
    lhs, rhs = growth_inequality(F5, 2, 12)
    assert lhs > rhs
    lhs, rhs = growth_inequality(F5, 4, 8)
    assert lhs <= rhs
    lhs, rhs = growth_inequality(F5, 4, 10)
    assert lhs > rhs
    with pytest.raises(DomainError):
        cusp_case_k2_bound(make_field(17), 2)


def test_verify_identities(eis5, eigen5):
    ident, check = verify_identity(4, eis5(2), eis5(2), 200)
    assert ident.g == "E4" and ident.scalar == Fraction(1, 60)
    h6, h8 = eigen5(6)[0], eigen5(8)[0]
    ident, _ = verify_identity(8, eis5(2), h6, 200)
    assert ident.g == "h8" and ident.scalar == Fraction(1, 120)
    ident, check = verify_identity(10, eis5(2), h8, 200)
    assert ident is None and not check.ok


def test_verify_identity_needs_a_relation(eis5):
    with pytest.raises(InconclusiveError):
        verify_identity(4, eis5(2, 10), eis5(2, 10), 10)
    with pytest.raises(DomainError):
        verify_identity(6, eis5(2), eis5(2), 50)


@pytest.fixture(scope="module")
def report():
    return classify(F5, 20, 200)


def test_classify_d5(report):
    assert [(i.g, i.f, i.h) for i in report.identities] == [("E4", "E2", "E2"), ("h8", "E2", "h6")]
    assert report.unresolved == []
    assert report.prefilter["unequal_survivors"] == [(4, 2), (6, 2), (6, 4)]
    assert report.prefilter["cusp_k1"] == [2, 4]
    assert report.prefilter["cusp_k2_cutoff"] == {"2": 10, "4": 8}
    assert all(c.demonstrates_violation() for c in report.exclusions)


def test_classify_covers_every_candidate(report):
    excluded = {(c.triple.kind, c.triple.k1, c.triple.k2, c.triple.h) for c in report.exclusions}
    assert (EIS_CUSP, 2, 12, "") in excluded
    assert (EIS_CUSP, 2, 10, "h10") in excluded and (EIS_CUSP, 2, 10, "h10'") in excluded
    for k2 in range(2, 21, 2):
        for k1 in range(k2, 21 - k2, 2):
            if (k1, k2) != (2, 2):
                assert (EIS_EIS, k1, k2, "") in excluded


def test_certificates_round_trip_and_recheck(report):
    for c in report.exclusions:
        c2 = ExclusionCertificate.from_obj(c.to_obj())
        assert c2.triple == c.triple and c2.rule == c.rule
        assert recheck(c2, 100)


def test_recheck_rejects_false_certificate():
    t = CandidateTriple(5, EIS_EIS, 2, 2)
    bogus = ExclusionCertificate(t, "eisenstein-constant-term", "eq", Fraction(60), Fraction(60))
    assert not bogus.demonstrates_violation()
    assert not recheck(bogus)
    t = CandidateTriple(5, EIS_CUSP, 2, 6, "h6")
    bogus = ExclusionCertificate(t, R_HECKE, "eq", Fraction(0), Fraction(1), (4, 2, 0, 2))
    assert not recheck(bogus)


def test_uncertified_field():
    with pytest.raises(NotNarrowClassOneError):
        classify(make_field(10), 8, 20)


def test_bound_scan_small():
    certs, unresolved = bound_scan(5, 30, 16)
    assert certs and all(c.demonstrates_violation() for c in certs)
    assert all(recheck(c) for c in certs[::7])
    # every candidate is either certified or reported
    assert {c.triple.D for c in certs} | {t.D for t, _ in unresolved} == \
        {D for D in range(5, 31) if is_fundamental_discriminant(D)}
    assert all(isinstance(c.lhs, mpmath.mpf) for c in certs)
