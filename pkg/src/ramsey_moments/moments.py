"""Exact moments of the monochromatic clique count as polynomials in n.

X counts the k-subsets of {1..n} whose induced edges all share a colour in a
uniform random red/blue colouring of K_n.  Its r-th raw moment is a sum over
ordered r-tuples of k-subsets, which collapses to a sum over overlap profiles:

    E[X^r] = sum_profiles  2**comps / 2**edges * (n)_v / prod_T a_T!

Everything here is exact; floating point only appears in
:func:`standardized_moment`.
"""
from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ._profile_kernel import profile_weights
from .errors import DomainError, UnsupportedOrderError
from .exact import (Basis, RationalPolynomial, binomial, falling_factorial_poly,
                    stirling_first_signed)
from .profiles import enumerate_profiles, profile_stats, tuple_probability

DEFAULT_MAX_NODES = 10**9

_cache: dict[tuple[int, int], "_RawMoment"] = {}
_cache_lock = threading.Lock()


@dataclass(frozen=True)
class _RawMoment:
    poly: RationalPolynomial
    profile_count: int
    nodes: int
    elapsed_ms: float


def _check_k(k: int) -> None:
    if k < 2:
        raise DomainError(f"clique size must be at least 2, got {k}")


def single_probability(k: int) -> Fraction:
    """P(a fixed k-subset is monochromatic) = 2 / 2**C(k, 2)."""
    return Fraction(2, 2 ** binomial(k, 2))


def _raw_moment_data(k: int, r: int, workers: int = 1,
                     max_nodes: int = DEFAULT_MAX_NODES) -> _RawMoment:
    _check_k(k)
    if r < 1:
        raise DomainError(f"moment order must be at least 1, got {r}")
    key = (k, r)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    t0 = time.perf_counter()
    weights, nodes = profile_weights(r, k, workers=workers, max_work=max_nodes)
    scale = math.factorial(k) ** r
    ff: dict[int, Fraction] = {}
    count = 0
    for (v, e, c), (w, nprof) in weights.items():
        ff[v] = ff.get(v, 0) + Fraction(w * 2 ** c, scale * 2 ** e)
        count += nprof
    poly = RationalPolynomial(ff, Basis.FALLING).monomial()
    data = _RawMoment(poly, count, nodes, (time.perf_counter() - t0) * 1e3)
    with _cache_lock:
        _cache.setdefault(key, data)
    return data


def raw_moment(k: int, r: int, *, workers: int = 1,
               max_nodes: int = DEFAULT_MAX_NODES) -> RationalPolynomial:
    """E[X^r] as an exact polynomial in n (monomial basis).

    Results are cached per (k, r).  ``max_nodes`` caps the search; exceeding
    it raises :class:`~ramsey_moments.errors.ResourceLimitError`.
    """
    return _raw_moment_data(k, r, workers, max_nodes).poly


def raw_moment_info(k: int, r: int, **kw) -> dict:
    """Metadata for the computation of E[X^r]: profile count and timing."""
    d = _raw_moment_data(k, r, **kw)
    return {"k": k, "r": r, "profile_count": d.profile_count, "nodes": d.nodes,
            "elapsed_ms": d.elapsed_ms}


def raw_moment_reference(k: int, r: int, *, distinct: bool = False,
                         max_nodes: int = 10**8) -> RationalPolynomial:
    """E[X^r] straight from :func:`enumerate_profiles`, profile by profile.

    With ``distinct`` only tuples of pairwise distinct subsets are summed,
    which gives the factorial moment E[(X)_r] directly.  Slow; meant for
    cross-checking small cases.
    """
    _check_k(k)
    ff: dict[int, Fraction] = {}
    for p in enumerate_profiles(r, k, max_nodes=max_nodes):
        if distinct and not p.has_distinct_subsets():
            continue
        st = profile_stats(p)
        ff[st.v] = ff.get(st.v, 0) + tuple_probability(p) / st.symmetry_denominator
    return RationalPolynomial(ff, Basis.FALLING).monomial()


def mean(k: int) -> RationalPolynomial:
    """E[X] = 2 / 2**C(k,2) * C(n, k)."""
    _check_k(k)
    return falling_factorial_poly(k) * (single_probability(k) / math.factorial(k))


def second_moment_reference(k: int) -> RationalPolynomial:
    """E[X^2] from the closed sum over the overlap size i = |S_1 ∩ S_2|."""
    _check_k(k)
    ck = binomial(k, 2)
    p = single_probability(k)
    ff = {
        2 * k: p * p / (math.factorial(k) ** 2),
        2 * k - 1: p * p / (math.factorial(k - 1) ** 2),
    }
    for i in range(2, k + 1):
        ff[2 * k - i] = Fraction(2, 2 ** (2 * ck - binomial(i, 2))) / (
            math.factorial(i) * math.factorial(k - i) ** 2)
    return RationalPolynomial(ff, Basis.FALLING).monomial()


def factorial_moment(k: int, r: int, **kw) -> RationalPolynomial:
    """E[(X)_r] = sum_j s(r, j) E[X^j]."""
    if r < 0:
        raise DomainError("order must be non-negative")
    if r == 0:
        return RationalPolynomial.constant(1)
    out = RationalPolynomial.zero()
    for j in range(1, r + 1):
        s = stirling_first_signed(r, j)
        if s:
            out = out + raw_moment(k, j, **kw) * s
    return out


def binomial_moment(k: int, s: int, **kw) -> RationalPolynomial:
    """E[C(X, s)] = E[(X)_s] / s!."""
    if s < 0:
        raise DomainError("order must be non-negative")
    if s == 0:
        return RationalPolynomial.constant(1)
    return factorial_moment(k, s, **kw) / math.factorial(s)


def central_moment(k: int, m: int, **kw) -> RationalPolynomial:
    """E[(X - mu)^m], expanded exactly from the raw moments."""
    if m < 1:
        raise DomainError("order must be at least 1")
    mu = mean(k)
    out = RationalPolynomial.zero()
    mu_pow = RationalPolynomial.constant(1)
    # term j uses raw_j * mu^(m-j); walk j downward so mu powers build up
    for j in range(m, -1, -1):
        raw_j = RationalPolynomial.constant(1) if j == 0 else raw_moment(k, j, **kw)
        sign = -1 if (m - j) % 2 else 1
        out = out + raw_j * mu_pow * (sign * binomial(m, j))
        mu_pow = mu_pow * mu
    return out


_LEADING = {2: (Fraction(1, 2), 2, 3), 3: (Fraction(1), 3, 5),
            4: (Fraction(3, 4), 4, 6), 5: (Fraction(5), 5, 8)}


def leading_central_reference(k: int, m: int) -> tuple[int, Fraction]:
    """Closed-form leading term (degree, coefficient) of E[(X - mu)^m], m = 2..5.

    coefficient = c_m / (k-3)!**m / 2**(m*C(k,2) - m), with c_m = 1/2, 1, 3/4, 5
    and degrees 2k-3, 3k-5, 4k-6, 5k-8.
    """
    if m not in _LEADING:
        raise UnsupportedOrderError(f"leading term known only for m in 2..5, got {m}")
    if k < 3:
        raise DomainError("leading-term formula needs k >= 3")
    c, a, b = _LEADING[m]
    ck = binomial(k, 2)
    coeff = c / (math.factorial(k - 3) ** m) / Fraction(2) ** (m * ck - m)
    return a * k - b, coeff


def standardized_moment(k: int, m: int, n: int, *, prec: int = 256, **kw) -> mpmath.mpf:
    """c_m = E[(X-mu)^m] / Var^(m/2) at a given n, in ``prec``-bit floating point."""
    var = central_moment(k, 2, **kw)(n)
    if var <= 0:
        raise DomainError(f"variance is {var} at n={n}, k={k}")
    cm = central_moment(k, m, **kw)(n)
    with mpmath.workprec(prec):
        out = mpmath.mpf(cm.numerator) / cm.denominator
        v = mpmath.mpf(var.numerator) / var.denominator
        return +(out / v ** (mpmath.mpf(m) / 2))


@dataclass
class MomentTable:
    k: int
    max_order: int
    mean: RationalPolynomial
    raw: dict[int, RationalPolynomial] = field(default_factory=dict)
    factorial: dict[int, RationalPolynomial] = field(default_factory=dict)
    binomial: dict[int, RationalPolynomial] = field(default_factory=dict)
    central: dict[int, RationalPolynomial] = field(default_factory=dict)


def moment_table(k: int, max_order: int, **kw) -> MomentTable:
    tab = MomentTable(k, max_order, mean(k))
    for r in range(1, max_order + 1):
        tab.raw[r] = raw_moment(k, r, **kw)
        tab.factorial[r] = factorial_moment(k, r, **kw)
        tab.binomial[r] = binomial_moment(k, r, **kw)
        tab.central[r] = central_moment(k, r, **kw)
    return tab
