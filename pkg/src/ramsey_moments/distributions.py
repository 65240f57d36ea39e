r"""Poisson, negative binomial and Delaporte laws in high-precision floating point.

The Delaporte law is the sum of independent Poisson(lambda) and negative
binomial(alpha, beta) variables, the latter with success probability
beta / (1 + beta) and mean alpha * beta.  Its moment generating function is

    M(t) = exp(lambda (e^t - 1)) / (1 - beta (e^t - 1))^alpha.

All numerics run on :mod:`mpmath` at ``PREC`` bits unless a caller passes
``prec``; values are returned as ``mpmath.mpf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpf
from scipy.optimize import minimize_scalar

from .errors import DomainError, RegimeError, UnsupportedOrderError
from .exact import binomial, stirling_second

PREC = 256
PMF_EPS = mpf(10) ** -15


def _mp(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


@dataclass(frozen=True)
class DelaporteParams:
    lam: mpf
    alpha: mpf
    beta: mpf

    def __post_init__(self):
        with mpmath.workprec(PREC):
            for name in ("lam", "alpha", "beta"):
                object.__setattr__(self, name, _mp(getattr(self, name)))
        if not self.lam >= 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam}")
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")

    @property
    def mean(self) -> mpf:
        with mpmath.workprec(PREC):
            return self.lam + self.alpha * self.beta

    @property
    def variance(self) -> mpf:
        with mpmath.workprec(PREC):
            return self.lam + self.alpha * self.beta * (1 + self.beta)

    def as_dict(self) -> dict:
        return {"lambda": float(self.lam), "alpha": float(self.alpha), "beta": float(self.beta)}


@dataclass(frozen=True)
class PmfVector:
    probabilities: list
    truncation_bound: int
    tail_mass_bound: mpf

    def total(self) -> mpf:
        with mpmath.workprec(PREC):
            return mpmath.fsum(self.probabilities)


# Poisson


def _check_lam(lam) -> mpf:
    lam = _mp(lam)
    if lam < 0:
        raise DomainError(f"Poisson rate must be non-negative, got {lam}")
    return lam


def poisson_pmf(lam, j: int) -> mpf:
    with mpmath.workprec(PREC):
        lam = _check_lam(lam)
        if j < 0:
            return mpf(0)
        if lam == 0:
            return mpf(1) if j == 0 else mpf(0)
        return mpmath.exp(j * mpmath.log(lam) - lam - mpmath.loggamma(j + 1))


def poisson_mgf(lam, t) -> mpf:
    with mpmath.workprec(PREC):
        lam = _check_lam(lam)
        return mpmath.exp(lam * mpmath.expm1(_mp(t)))


def poisson_factorial_moment(lam, m: int) -> mpf:
    """E[(X)_m] = lambda^m."""
    with mpmath.workprec(PREC):
        return _check_lam(lam) ** m


def poisson_raw_moment(lam, m: int) -> mpf:
    """E[X^m] = sum_j S(m, j) lambda^j."""
    with mpmath.workprec(PREC):
        lam = _check_lam(lam)
        return mpmath.fsum(stirling_second(m, j) * lam ** j for j in range(m + 1))


def poisson_alternating_sum(lam, terms: int) -> mpf:
    """sum_{s < terms} (-1)^s lambda^s / s!, the truncated inclusion-exclusion for P(X=0)."""
    with mpmath.workprec(PREC):
        lam = _check_lam(lam)
        acc = mpf(0)
        term = mpf(1)
        for s in range(terms):
            acc += term
            term = -term * lam / (s + 1)
        return acc


# negative binomial


def negbin_pmf(alpha, beta, i: int) -> mpf:
    """Gamma(alpha+i) / (Gamma(alpha) i!) * (beta/(1+beta))^i * (1+beta)^-alpha."""
    with mpmath.workprec(PREC):
        alpha, beta = _mp(alpha), _mp(beta)
        if not (alpha > 0 and beta > 0):
            raise DomainError(f"negative binomial needs alpha, beta > 0, got {alpha}, {beta}")
        if i < 0:
            return mpf(0)
        log_p = (mpmath.loggamma(alpha + i) - mpmath.loggamma(alpha) - mpmath.loggamma(i + 1)
                 + i * (mpmath.log(beta) - mpmath.log1p(beta)) - alpha * mpmath.log1p(beta))
        return mpmath.exp(log_p)


def negbin_mgf(alpha, beta, t) -> mpf:
    with mpmath.workprec(PREC):
        alpha, beta, t = _mp(alpha), _mp(beta), _mp(t)
        base = 1 - beta * mpmath.expm1(t)
        if base <= 0:
            raise DomainError(f"mgf diverges for t >= log(1 + 1/beta) = {mpmath.log1p(1 / beta)}")
        return base ** (-alpha)


# Delaporte


def delaporte_pmf(p: DelaporteParams, j: int) -> mpf:
    """P(D = j) as the convolution sum of negative binomial and Poisson terms."""
    with mpmath.workprec(PREC):
        if j < 0:
            return mpf(0)
        return mpmath.fsum(negbin_pmf(p.alpha, p.beta, i) * poisson_pmf(p.lam, j - i)
                           for i in range(j + 1))


def delaporte_p_zero(p: DelaporteParams) -> mpf:
    """P(D = 0) = e^-lambda / (1+beta)^alpha."""
    with mpmath.workprec(PREC):
        return mpmath.exp(-p.lam) / (1 + p.beta) ** p.alpha


def delaporte_mgf(p: DelaporteParams, t) -> mpf:
    with mpmath.workprec(PREC):
        t = _mp(t)
        radius = mpmath.log1p(1 / p.beta)
        if t >= radius:
            raise DomainError(f"Delaporte mgf is finite only for t < log(1 + 1/beta) = {radius}")
        return mpmath.exp(p.lam * mpmath.expm1(t)) / (1 - p.beta * mpmath.expm1(t)) ** p.alpha


def delaporte_chernoff_tail(p: DelaporteParams, j: int) -> mpf:
    """Upper bound on P(D >= j) from min over t of M(t) e^{-t j}."""
    if j <= p.mean:
        return mpf(1)
    radius = float(mpmath.log1p(1 / p.beta))
    lam, alpha, beta = float(p.lam), float(p.alpha), float(p.beta)

    def log_bound(t):
        em1 = math.expm1(t)
        return lam * em1 - alpha * math.log1p(-beta * em1) - t * j

    res = minimize_scalar(log_bound, bounds=(radius * 1e-12, radius * (1 - 1e-12)),
                          method="bounded", options={"xatol": radius * 1e-10})
    with mpmath.workprec(PREC):
        t = mpf(res.x)
        # any t in range gives a valid bound; evaluate it exactly
        val = mpmath.exp(p.lam * mpmath.expm1(t) - t * j) / (1 - p.beta * mpmath.expm1(t)) ** p.alpha
        return min(val, mpf(1))


def delaporte_pmf_vector(p: DelaporteParams, *, eps=PMF_EPS, max_j: int | None = None) -> PmfVector:
    """P(D = 0..J) with J chosen so that P(D > J) <= eps.

    J starts at mean + 20 standard deviations and grows until a Chernoff
    bound certifies the tail.  The probabilities come from the recurrence

        (1+b)(j+1) p_{j+1} = (b j + l (1+b) + a b) p_j - l b p_{j-1}

    which follows from differentiating the probability generating function.
    """
    with mpmath.workprec(PREC):
        if max_j is None:
            J = int(mpmath.ceil(p.mean + 20 * mpmath.sqrt(p.variance)))
            while delaporte_chernoff_tail(p, J + 1) > eps:
                J = int(J * 1.25) + 10
        else:
            J = max_j
        tail = delaporte_chernoff_tail(p, J + 1)
        lam, a, b = p.lam, p.alpha, p.beta
        probs = [delaporte_p_zero(p)]
        prev = mpf(0)
        for j in range(J):
            cur = probs[-1]
            nxt = ((b * j + lam * (1 + b) + a * b) * cur - lam * b * prev) / ((1 + b) * (j + 1))
            probs.append(nxt)
            prev = cur
        return PmfVector(probs, J, tail)


def delaporte_central_moment(p: DelaporteParams, m: int) -> mpf:
    """Closed-form central moments of order 2, 3, 4."""
    with mpmath.workprec(PREC):
        lam, a, b = p.lam, p.alpha, p.beta
        if m == 2:
            return lam + a * b * (1 + b)
        if m == 3:
            return lam + a * b * (1 + 3 * b + 2 * b ** 2)
        if m == 4:
            return (3 * lam ** 2 + lam
                    + a * b * (1 + b) * (3 * a * b ** 2 + 3 * a * b + 6 * b ** 2 + 6 * b + 6 * lam + 1))
    raise UnsupportedOrderError(f"closed form only for m in 2..4, got {m}; use the series")


def delaporte_cumulant(p: DelaporteParams, m: int) -> mpf:
    """kappa_m = lambda + alpha * sum_j (j-1)! S(m, j) beta^j  (m >= 1)."""
    if m < 1:
        raise DomainError("cumulant order must be at least 1")
    with mpmath.workprec(PREC):
        nb = mpmath.fsum(math.factorial(j - 1) * stirling_second(m, j) * p.beta ** j
                         for j in range(1, m + 1))
        return p.lam + p.alpha * nb


def delaporte_central_moment_cumulants(p: DelaporteParams, m: int) -> mpf:
    """Central moment of any order from the cumulants.

    mu_n = sum_{j=2}^{n} C(n-1, j-1) kappa_j mu_{n-j}, mu_0 = 1, mu_1 = 0.
    """
    with mpmath.workprec(PREC):
        kap = [None] + [delaporte_cumulant(p, j) for j in range(1, m + 1)]
        mu = [mpf(1), mpf(0)]
        for nn in range(2, m + 1):
            mu.append(mpmath.fsum(binomial(nn - 1, j - 1) * kap[j] * mu[nn - j]
                                  for j in range(2, nn + 1)))
        return mu[m]


def pmf_central_moment(pmf: PmfVector, m: int, center=None) -> mpf:
    """sum_j (j - center)^m P(j) over a truncated pmf; center defaults to its mean."""
    with mpmath.workprec(PREC):
        probs = pmf.probabilities
        if center is None:
            center = mpmath.fsum(j * q for j, q in enumerate(probs)) / mpmath.fsum(probs)
        return mpmath.fsum((j - center) ** m * q for j, q in enumerate(probs))


def delaporte_central_moment_series(p: DelaporteParams, m: int) -> mpf:
    """Central moment by summing the truncated pmf around the exact mean."""
    with mpmath.workprec(PREC):
        return pmf_central_moment(delaporte_pmf_vector(p), m, center=p.mean)


def delaporte_factorial_moment(p: DelaporteParams, s: int) -> mpf:
    """E[(D)_s] = sum_t C(s,t) beta^t alpha(alpha+1)...(alpha+t-1) lambda^(s-t)."""
    if s < 0:
        raise DomainError("order must be non-negative")
    with mpmath.workprec(PREC):
        return mpmath.fsum(binomial(s, t) * p.beta ** t * mpmath.rf(p.alpha, t) * p.lam ** (s - t)
                           for t in range(s + 1))


def delaporte_alternating_sum(p: DelaporteParams, terms: int) -> mpf:
    """sum_{s < terms} (-1)^s E[(D)_s] / s!, which tends to P(D = 0)."""
    with mpmath.workprec(PREC):
        return mpmath.fsum((-1) ** s * delaporte_factorial_moment(p, s) / mpmath.factorial(s)
                           for s in range(terms))


_LADDER = {2: (1, 1), 3: (2, 1), 4: (3, 2), 5: (20, 2), 6: (15, 3), 7: (210, 3),
           8: (105, 4), 9: (2520, 4), 10: (945, 5)}


def delaporte_leading_central(alpha, beta, m: int) -> mpf:
    """Leading monomial c * alpha^a * beta^m of the m-th central moment when alpha >> beta >> lambda."""
    if m not in _LADDER:
        raise UnsupportedOrderError(f"leading monomial tabulated for m in 2..10, got {m}")
    c, a = _LADDER[m]
    with mpmath.workprec(PREC):
        return c * _mp(alpha) ** a * _mp(beta) ** m


def delaporte_poisson_gap(p: DelaporteParams) -> mpf:
    """alpha * beta^2: how far the variance exceeds that of a Poisson with the same mean."""
    with mpmath.workprec(PREC):
        return p.alpha * p.beta ** 2


# fitting to the clique count


def bign_regime_boundary(k: int, constant=None) -> mpf:
    """constant * k * 2^(k/2); the default constant is 2/e."""
    with mpmath.workprec(PREC):
        c = 2 / mpmath.e if constant is None else _mp(constant)
        return c * k * mpmath.power(2, mpf(k) / 2)


def fit_bign(n, k: int, *, min_n=None, exact_mean: bool = False) -> DelaporteParams:
    """Delaporte parameters matched to the leading terms of the clique-count moments.

    alpha = n/2, beta = n^(k-2) / (2^(C(k,2)-1) (k-3)!),
    lambda = n^k / (k! 2^(C(k,2)-1)) * (1 - k(k-1)(k-2) / (2n)).

    ``min_n`` (for instance :func:`bign_regime_boundary`) optionally rejects n
    below the regime boundary.  With ``exact_mean`` lambda is E[X] - alpha*beta
    using the exact E[X] = C(n,k) / 2^(C(k,2)-1) instead of its leading terms.
    """
    if k < 3:
        raise DomainError("fit needs k >= 3")
    with mpmath.workprec(PREC):
        n = _mp(n)
        if min_n is not None and n < _mp(min_n):
            raise RegimeError(f"n={n} lies below the big-n boundary {min_n}")
        ck = binomial(k, 2)
        alpha = n / 2
        beta = n ** (k - 2) / (mpf(2) ** (ck - 1) * math.factorial(k - 3))
        if exact_mean:
            if n != int(n):
                raise DomainError("exact_mean needs integer n")
            lam = _mp(poisson_rate_smalln(int(n), k)) - alpha * beta
        else:
            lam = n ** k / (math.factorial(k) * mpf(2) ** (ck - 1)) * (1 - mpf(k * (k - 1) * (k - 2)) / (2 * n))
        if lam < 0:
            raise RegimeError(
                f"lambda = {mpmath.nstr(lam, 6)} < 0: n={n} is too small for the big-n fit "
                f"(need n >= k(k-1)(k-2)/2 = {k * (k - 1) * (k - 2) // 2})"
            )
        return DelaporteParams(lam, alpha, beta)


def poisson_rate_smalln(n: int, k: int) -> Fraction:
    """C(n, k) / 2^(C(k,2) - 1), which is exactly E[X]."""
    if n < k:
        raise DomainError(f"need n >= k, got n={n}, k={k}")
    return Fraction(binomial(n, k), 2 ** (binomial(k, 2) - 1))


def delaporte_from_moments(mean, var, mu3) -> tuple[DelaporteParams | None, tuple[mpf, mpf, mpf]]:
    """Method-of-moments Delaporte parameters from mean, variance and third central moment.

    Solves var - mean = alpha beta^2 and mu3 - mean - 3(var - mean) = 2 alpha beta^3.
    Returns (params or None, raw (lambda, alpha, beta)); params is None when
    the solution leaves the parameter domain.
    """
    with mpmath.workprec(PREC):
        mean, var, mu3 = _mp(mean), _mp(var), _mp(mu3)
        g = var - mean
        h = mu3 - mean - 3 * g
        if g == 0:
            return None, (mean, mpf(0), mpf(0))
        beta = h / (2 * g)
        alpha = g / beta ** 2 if beta != 0 else mpf("inf")
        lam = mean - alpha * beta
        raw = (lam, alpha, beta)
        if g > 0 and h > 0 and lam >= 0:
            return DelaporteParams(lam, alpha, beta), raw
        return None, raw


def normal_central_reference(m: int) -> int:
    """Standard normal moments: 0 for odd m, (m-1)!! for even m."""
    if m < 1:
        raise DomainError("order must be at least 1")
    if m % 2:
        return 0
    out = 1
    for i in range(m - 1, 0, -2):
        out *= i
    return out
