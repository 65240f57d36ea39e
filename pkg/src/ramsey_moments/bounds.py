"""Diagonal Ramsey lower bounds from truncated inclusion-exclusion.

If some colouring of K_n has no monochromatic K_k then R(k, k) > n.  Since

    P(X = 0) = sum_s (-1)^s E[C(X, s)],

truncating after an odd number of terms ``m`` gives a lower bound, and any n
where that partial sum is strictly positive certifies R(k, k) >= n + 1.
With m = 1 this is the classical rule E[X] < 1.

All partial sums are exact rationals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .exact import RationalPolynomial, binomial, falling_factorial, taylor_shift
from .moments import binomial_moment, central_moment, mean

STRICT_NOTE = ("a bound needs 1 - E[X] > 0 (strictly); E[X] = 1 still allows "
               "P(X=0) = 0, so equality is not accepted")


class Method(str, enum.Enum):
    FIRST_MOMENT = "FirstMoment"
    BONFERRONI = "Bonferroni"
    CHEBYSHEV = "Chebyshev"
    BINOMIAL_UPPER = "BinomialUpper"


@dataclass
class BoundReport:
    k: int
    method: Method
    m: int | None
    threshold_n: int | None
    implied_bound: str
    certificate: dict[int, Fraction] = field(default_factory=dict)
    sign_changes: list[int] = field(default_factory=list)
    improves_on_first_moment: bool | None = None
    first_moment_threshold: int | None = None
    note: str = ""

    def as_json(self) -> dict:
        return {
            "k": self.k,
            "method": self.method.value if self.method is not Method.BONFERRONI
            else f"{self.method.value}({self.m})",
            "m": self.m,
            "threshold_n": self.threshold_n,
            "implied_bound": self.implied_bound,
            "certificate": [
                {"n": n, "numerator": str(v.numerator), "denominator": str(v.denominator)}
                for n, v in sorted(self.certificate.items())
            ],
            "sign_changes": self.sign_changes,
            "improves_on_first_moment": self.improves_on_first_moment,
            "first_moment_threshold": self.first_moment_threshold,
            "note": self.note,
        }


def bonferroni_polynomial(k: int, m: int, **kw) -> RationalPolynomial:
    """sum_{s<=m} (-1)^s E[C(X, s)] as a polynomial in n."""
    if m < 0:
        raise DomainError("truncation order must be non-negative")
    out = RationalPolynomial.constant(1)
    for s in range(1, m + 1):
        term = binomial_moment(k, s, **kw)
        out = out - term if s % 2 else out + term
    return out


def bonferroni_sum(k: int, n: int, m: int, **kw) -> Fraction:
    """Partial inclusion-exclusion sum for P(X = 0), exact."""
    return bonferroni_polynomial(k, m, **kw)(n)


def _nonpositive_beyond(p: RationalPolynomial, n0: int) -> bool:
    """True when every coefficient of t -> p(n0 + t) is <= 0, so p <= 0 on [n0, inf)."""
    return all(c <= 0 for c in taylor_shift(p, n0).dense())


def bonferroni_threshold(k: int, m: int, *, max_n: int | None = None, **kw) -> BoundReport:
    """Largest n with a strictly positive m-term partial sum, by upward scan from n = k.

    Partial sums need not be monotone in n, so the scan records every sign
    change.  It stops once the polynomial shifted to the current n has only
    non-positive coefficients, which proves it stays non-positive from there on.
    """
    if m < 1 or m % 2 == 0:
        raise DomainError(f"lower bounds need odd m >= 1, got {m}")
    if k < 2:
        raise DomainError("k must be at least 2")
    poly = bonferroni_polynomial(k, m, **kw)
    n = k
    last_pos = k - 1  # below k, X = 0 and every partial sum is 1
    prev_pos = True
    changes: list[int] = []
    while True:
        val = poly(n)
        pos = val > 0
        if pos != prev_pos:
            changes.append(n)
        if pos:
            last_pos = n
        elif _nonpositive_beyond(poly, n):
            break
        if max_n is not None and n >= max_n:
            break
        prev_pos = pos
        n += 1
    cert = {last_pos: poly(last_pos), last_pos + 1: poly(last_pos + 1)}
    rep = BoundReport(
        k=k,
        method=Method.FIRST_MOMENT if m == 1 else Method.BONFERRONI,
        m=m,
        threshold_n=last_pos,
        implied_bound=f"R({k},{k}) >= {last_pos + 1}",
        certificate=cert,
        sign_changes=changes,
        note=STRICT_NOTE,
    )
    if m > 1:
        base = bonferroni_threshold(k, 1).threshold_n
        rep.first_moment_threshold = base
        rep.improves_on_first_moment = last_pos > base
    return rep


def erdos_asymptotic_check(k: int) -> tuple[int, float]:
    """(first-moment threshold, k 2^(k/2) / (sqrt(2) e))."""
    if k < 3:
        raise DomainError("k must be at least 3")
    ck = binomial(k, 2)
    # E[X] < 1  <=>  C(n, k) < 2^(C(k,2) - 1); scan is cheap in integers
    limit = 1 << (ck - 1)
    n = k
    while binomial(n + 1, k) < limit:
        n += 1
    if binomial(k, k) >= limit:
        n = k - 1
    ref = k * 2 ** (k / 2) / (math.sqrt(2) * math.e)
    return n, ref


def ramsey_upper_bound(k: int) -> int:
    """C(2k, k), which is at least R(k+1, k+1) and hence at least R(k, k)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    return binomial(2 * k, k)


def _check_nk(n: int, k: int) -> None:
    if k < 3:
        raise DomainError("k must be at least 3")
    if n < k:
        raise DomainError(f"need n >= k, got n={n}, k={k}")


@dataclass(frozen=True)
class RatioReport:
    k: int
    n: int
    exact: Fraction
    reference: float
    reference_falling: float

    @property
    def exact_over_reference(self) -> float:
        return float(self.exact) / self.reference

    @property
    def exact_over_reference_falling(self) -> float:
        return float(self.exact) / self.reference_falling


def chebyshev_ratio(k: int, n: int, **kw) -> RatioReport:
    """Var(X) / E[X]^2, an upper bound on P(X = 0).

    ``reference`` is k^6 / (2 n^3).  ``reference_falling`` replaces k^6 by
    ((k)_3)^2, which is the actual leading behaviour for fixed k.
    """
    _check_nk(n, k)
    mu = mean(k)(n)
    var = central_moment(k, 2, **kw)(n)
    exact = var / (mu * mu)
    return RatioReport(k, n, exact, k ** 6 / (2 * n ** 3),
                       falling_factorial(k, 3) ** 2 / (2 * n ** 3))


def var_mean_ratio(k: int, n: int, **kw) -> RatioReport:
    """Var(X) / E[X]; exceeds 1 when X is over-dispersed relative to Poisson.

    ``reference`` is k(k-1)(k-2)/(k-3)! * n^(k-3) / 2^C(k,2).  For this ratio the
    two references coincide.
    """
    _check_nk(n, k)
    mu = mean(k)(n)
    var = central_moment(k, 2, **kw)(n)
    ref = falling_factorial(k, 3) / math.factorial(k - 3) * n ** (k - 3) / 2 ** binomial(k, 2)
    return RatioReport(k, n, var / mu, ref, ref)

