from fractions import Fraction

import pytest

from ramsey_moments.bounds import (bonferroni_sum, bonferroni_threshold, chebyshev_ratio,
                                   erdos_asymptotic_check, ramsey_upper_bound, var_mean_ratio)
from ramsey_moments.errors import DomainError
from ramsey_moments.exact import binomial
from ramsey_moments.oracle import exact_distribution


def test_partial_sums():
    assert bonferroni_sum(4, 9, 0) == 1
    assert bonferroni_sum(3, 3, 1) == Fraction(3, 4)
    assert bonferroni_sum(3, 6, 1) == -4


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_bracketing_and_alternation(n):
    for k in range(2, n + 1):
        p0 = exact_distribution(n, k).probability(0)
        sums = [bonferroni_sum(k, n, m) for m in range(6)]
        for m, s in enumerate(sums):
            assert (s <= p0) if m % 2 else (s >= p0)


def test_first_moment_thresholds():
    r = bonferroni_threshold(5, 1)
    assert r.threshold_n == 11 and r.implied_bound == "R(5,5) >= 12"
    assert binomial(11, 5) < 512 <= binomial(12, 5)
    assert bonferroni_threshold(3, 1).threshold_n == 3
    for k in (3, 4, 5, 6):
        r = bonferroni_threshold(k, 1)
        n = r.threshold_n
        assert r.certificate[n] > 0 >= r.certificate[n + 1]
        assert all(isinstance(v, Fraction) for v in r.certificate.values())
    with pytest.raises(DomainError):
        bonferroni_threshold(5, 2)


def test_higher_truncations_do_not_improve():
    for k in (5, 6, 7):
        base = bonferroni_threshold(k, 1).threshold_n
        for m in (3, 5):
            r = bonferroni_threshold(k, m)
            assert r.improves_on_first_moment is False
            assert r.threshold_n <= base
            assert r.certificate[r.threshold_n] > 0 >= r.certificate[r.threshold_n + 1]


def test_erdos_reference():
    n, ref = erdos_asymptotic_check(3)
    assert abs(ref - 6 / 2.718281828459045) < 1e-12
    assert erdos_asymptotic_check(10)[0] == bonferroni_threshold(10, 1).threshold_n
    ratios = []
    for k in (10, 15, 20, 25):
        n, ref = erdos_asymptotic_check(k)
        ratios.append(n / ref)
    assert 0.8 <= ratios[0] <= 1.3
    assert ratios == sorted(ratios, reverse=True)


def test_upper_bound():
    assert ramsey_upper_bound(3) == 20
    assert ramsey_upper_bound(4) == 70
    assert ramsey_upper_bound(1) == 2


@pytest.mark.parametrize("n,k", [(5, 3), (6, 3), (6, 4)])
def test_chebyshev_bounds_p_zero(n, k):
    assert exact_distribution(n, k).probability(0) <= chebyshev_ratio(k, n).exact


def test_chebyshev_scaling():
    a, b = chebyshev_ratio(4, 1000), chebyshev_ratio(4, 2000)
    assert 7.5 < a.exact / b.exact < 8.5
    r = chebyshev_ratio(4, 10**4)
    # k^6 overstates the leading constant by k^6 / ((k)_3)^2
    assert abs(r.exact_over_reference_falling - 1) < 0.25
    assert abs(r.exact_over_reference - 576 / 4096) < 0.01


def test_var_mean_ratio():
    big = var_mean_ratio(4, 1000)
    assert big.exact > 10
    assert abs(big.exact_over_reference - 1) < 0.01
    assert abs(var_mean_ratio(4, 10**4).exact_over_reference - 1) < abs(big.exact_over_reference - 1)
    small = [float(var_mean_ratio(3, n).exact) for n in (10, 100, 1000)]
    assert max(small) < 3
