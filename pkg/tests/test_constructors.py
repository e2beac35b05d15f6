from fractions import Fraction as F

import pytest

from symbern import (
    IntraclassSpec,
    InfeasibleTarget,
    agreement_probability,
    build_matrix,
    check_marginals,
    classify,
    construct_for_p,
    covariance_matrix,
    f_max,
    f_min,
    m_n,
    p_good_threshold,
    p_min_binary,
)
from symbern.combinatorics import binom

Z = F(0)


def test_m_n():
    assert (m_n(4), m_n(5), m_n(2)) == (2, 3, 1)
    with pytest.raises(ValueError):
        m_n(1)


def test_p_min_binary_examples():
    assert p_min_binary(4) == F(1, 3)
    assert p_min_binary(5) == F(2, 5)
    assert p_min_binary(2) == 0


def test_p_min_binary_parity_forms():
    for n in range(2, 65):
        expected = F(n - 2, 2 * (n - 1)) if n % 2 == 0 else F(n - 1, 2 * n)
        assert p_min_binary(n) == expected


def test_f_min_examples():
    assert f_min(4).f == (Z, Z, F(1, 6), Z, Z)
    assert f_min(5).f == (Z, Z, F(1, 20), F(1, 20), Z, Z)
    assert f_min(2).f == (Z, F(1, 2), Z)


def test_f_max_examples():
    assert f_max(3).f == (F(1, 2), Z, Z, F(1, 2))
    assert f_max(2).f == (F(1, 2), Z, F(1, 2))


def test_extremes_for_many_n():
    for n in range(2, 65):
        lo, hi = f_min(n), f_max(n)
        assert check_marginals(lo) and check_marginals(hi)
        assert agreement_probability(lo) == p_min_binary(n)
        assert agreement_probability(hi) == 1
        # layer masses of f_min sit on sizes m_n and n - m_n
        assert set(lo.support()) == {m_n(n), n - m_n(n)}
        assert sum(binom(n, k) * lo.f[k] for k in lo.support()) == 1


def test_construct_examples():
    assert construct_for_p(4, F(1, 2)).f == (F(1, 8), Z, F(1, 8), Z, F(1, 8))
    assert construct_for_p(5, F(7, 10)).f == (F(1, 4), Z, F(1, 40), F(1, 40), Z, F(1, 4))
    for n in range(2, 12):
        assert construct_for_p(n, p_min_binary(n)) == f_min(n)
        assert construct_for_p(n, 1) == f_max(n)


def test_construct_infeasible():
    with pytest.raises(InfeasibleTarget) as err:
        construct_for_p(5, F(39, 100))
    assert err.value.report.good and not err.value.report.symmetric_binary_good
    with pytest.raises(ValueError):
        construct_for_p(5, F(11, 10))


@pytest.mark.parametrize("n", range(2, 21))
def test_mixture_exact_on_grid(n):
    lo = p_min_binary(n)
    for i in range(41):
        p = lo + (1 - lo) * F(i, 40)
        pmf = construct_for_p(n, p)
        assert agreement_probability(pmf) == p
        a, b = covariance_matrix(pmf).intraclass_parts()
        assert b / a == 2 * p - 1
        assert covariance_matrix(pmf) == build_matrix(IntraclassSpec(n, F(1, 4), (2 * p - 1) / 4))


def test_classify_examples():
    r = classify(5, F(3, 8))
    assert r.good and not r.symmetric_binary_good
    r = classify(4, F(1, 3))
    assert r.good and r.symmetric_binary_good
    r = classify(5, F(-1, 5), "rho")
    assert r.p == F(2, 5) and r.good and r.symmetric_binary_good
    with pytest.raises(ValueError):
        classify(5, F(2), "p")
    with pytest.raises(ValueError):
        classify(5, F(1, 2), "q")


def test_classify_json():
    assert classify(5, "0.39").to_json() == {
        "n": 5, "p": "39/100", "rho": "-11/50", "good": True,
        "symmetric_binary_good": False, "p_psd_threshold": "3/8", "p_min_binary": "2/5",
    }


def test_gap_by_parity():
    for n in range(2, 65):
        gap = p_min_binary(n) - p_good_threshold(n)
        if n % 2:
            assert gap == F(1, 2 * n * (n - 1)) and gap > 0
        else:
            assert gap == 0


def test_report_invariants():
    for n in range(2, 16):
        for i in range(0, 101):
            r = classify(n, F(i, 100))
            assert not r.symmetric_binary_good or r.good
            if n % 2 == 0:
                assert r.good == r.symmetric_binary_good
