from fractions import Fraction

import pytest

from ramsey_moments.errors import ResourceLimitError
from ramsey_moments.moments import raw_moment
from ramsey_moments.oracle import exact_distribution, oracle_moment, oracle_p_zero

# regression constants from exhaustive enumeration
P0_5_3 = Fraction(3, 256)
COUNTS_5_3 = {0: 12, 1: 260, 2: 270, 3: 300, 4: 100, 5: 60, 7: 20, 10: 2}


def test_k3_n3():
    d = exact_distribution(3, 3)
    assert d.counts == {0: 6, 1: 2} and d.denominator == 8
    assert oracle_p_zero(d) == Fraction(3, 4)


def test_n5_n6():
    d5 = exact_distribution(5, 3)
    assert d5.counts == COUNTS_5_3
    assert oracle_p_zero(d5) == P0_5_3
    d6 = exact_distribution(6, 3)
    assert oracle_p_zero(d6) == 0
    assert oracle_moment(d6, 0) == 1
    assert oracle_moment(d6, 1) == 5
    assert oracle_moment(d6, 2) == Fraction(115, 4)


@pytest.mark.parametrize("n,k", [(5, 3), (6, 3), (6, 4), (7, 3), (7, 4)])
def test_engine_equivalence(n, k):
    d = exact_distribution(n, k)
    for r in range(1, 6):
        assert oracle_moment(d, r) == raw_moment(k, r)(n)


def test_symmetry_and_workers():
    a = exact_distribution(6, 3, use_symmetry=False)
    b = exact_distribution(6, 3, use_symmetry=True, workers=3)
    assert a.counts == b.counts


def test_trivial_cases():
    assert exact_distribution(3, 5).counts == {0: 8}


def test_cap():
    with pytest.raises(ResourceLimitError, match=r"2\^36"):
        exact_distribution(9, 3)


def test_json():
    js = exact_distribution(5, 3).as_json(2)
    assert js["counts"]["10"] == "2"
    assert js["moments"][0] == {"r": 0, "numerator": "1", "denominator": "1"}
