import itertools
import math
from fractions import Fraction

import pytest

from ramsey_moments._profile_kernel import profile_weights
from ramsey_moments.errors import ResourceLimitError
from ramsey_moments.exact import Basis, RationalPolynomial, binomial
from ramsey_moments.profiles import (OverlapProfile, count_profiles, enumerate_profiles,
                                     profile_stats, tuple_probability)


def pair_profile(k, i):
    return OverlapProfile(2, k, (k - i, k - i, i))


def test_profile_counts():
    assert len(list(enumerate_profiles(1, 5))) == 1
    assert len(list(enumerate_profiles(2, 3))) == 4
    assert len(list(enumerate_profiles(2, 4))) == 5
    for r, k in [(3, 3), (3, 4), (4, 3)]:
        assert len(list(enumerate_profiles(r, k))) == count_profiles(r, k)


def test_profile_stats_pairs():
    st = profile_stats(pair_profile(3, 2))
    assert (st.v, st.edge_count, st.component_count, st.symmetry_denominator) == (4, 5, 1, 2)
    st = profile_stats(pair_profile(3, 1))
    assert (st.v, st.edge_count, st.component_count) == (5, 6, 2)
    st = profile_stats(pair_profile(3, 3))
    assert (st.v, st.edge_count, st.component_count) == (3, 3, 1)


def test_tuple_probability():
    for k in (3, 4, 5):
        assert tuple_probability(OverlapProfile(1, k, (k,))) == Fraction(2, 2 ** binomial(k, 2))
        assert tuple_probability(pair_profile(k, 1)) == Fraction(2, 2 ** binomial(k, 2)) ** 2
    assert tuple_probability(pair_profile(3, 2)) == Fraction(1, 16)


def test_invalid_profiles():
    with pytest.raises(ValueError):
        OverlapProfile(2, 3, (1, 1, 1))
    with pytest.raises(ValueError):
        OverlapProfile(2, 3, (3, 3))


def test_completeness():
    # with probability 1 the profile sum counts all ordered r-tuples
    for r, k in [(2, 3), (3, 3), (3, 4)]:
        ff = {}
        for p in enumerate_profiles(r, k):
            st = profile_stats(p)
            ff[st.v] = ff.get(st.v, 0) + Fraction(1, st.symmetry_denominator)
        total = RationalPolynomial(ff, Basis.FALLING)
        for n in range(0, 12):
            assert total(n) == binomial(n, k) ** r


def test_index_order_gives_same_set():
    base = set(enumerate_profiles(3, 3))
    for perm in itertools.permutations(range(3)):
        assert set(enumerate_profiles(3, 3, index_order=perm)) == base


def test_relabel_preserves_stats():
    for p in enumerate_profiles(3, 3):
        q = p.relabel((2, 0, 1))
        assert profile_stats(p) == profile_stats(q)


def test_node_cap():
    with pytest.raises(ResourceLimitError):
        list(enumerate_profiles(4, 4, max_nodes=100))
    with pytest.raises(ResourceLimitError):
        profile_weights(4, 4, max_work=100)


@pytest.mark.parametrize("r,k", [(2, 3), (3, 3), (3, 4), (4, 3), (4, 4), (5, 3)])
def test_kernel_matches_enumeration(r, k):
    ref = {}
    scale = math.factorial(k) ** r
    for p in enumerate_profiles(r, k):
        st = profile_stats(p)
        key = (st.v, st.edge_count, st.component_count)
        w, c = ref.get(key, (0, 0))
        ref[key] = (w + scale // st.symmetry_denominator, c + 1)
    for sym in (True, False):
        got, _ = profile_weights(r, k, symmetric=sym)
        assert got == ref


def test_kernel_orbit_reduction_and_workers_agree():
    plain, _ = profile_weights(5, 5, symmetric=False)
    orbit, _ = profile_weights(5, 5, symmetric=True)
    threaded, _ = profile_weights(5, 5, symmetric=True, workers=3)
    assert plain == orbit == threaded
