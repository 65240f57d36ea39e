"""End-to-end identity suite behind the ``verify`` command."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath

from .bounds import bonferroni_sum, bonferroni_threshold
from .distributions import (DelaporteParams, delaporte_p_zero, delaporte_pmf,
                            delaporte_pmf_vector, negbin_pmf, poisson_alternating_sum,
                            poisson_pmf)
from .exact import Basis, RationalPolynomial
from .moments import leading_central_reference, central_moment, raw_moment
from .oracle import exact_distribution, oracle_moment

SOFT_BUDGET_S = 300.0

F = Fraction
# E[X^2] for k = 3 and k = 4, term by term in the falling-factorial basis
SECOND_MOMENT_TERMS = {
    3: {6: F(2, 8) * F(2, 8) / 36, 5: F(2, 8) * F(2, 8) / 4, 4: F(2, 32) / 2, 3: F(2, 8) / 6},
    4: {8: F(2, 64) * F(2, 64) / 576, 7: F(2, 64) * F(2, 64) / 36, 6: F(2, 2048) / 8,
        5: F(2, 512) / 6, 4: F(2, 64) / 24},
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    expected: str = ""
    actual: str = ""
    elapsed_s: float = 0.0

    def as_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "expected": self.expected, "actual": self.actual, "elapsed_s": self.elapsed_s}


def _engine_oracle():
    for n, k in [(5, 3), (6, 3), (6, 4)]:
        d = exact_distribution(n, k)
        for r in range(1, 6):
            want, got = oracle_moment(d, r), raw_moment(k, r)(n)
            if want != got:
                return False, f"E[X^{r}] at n={n}, k={k}", str(want), str(got)
    return True, "E[X^r], r<=5, at (5,3), (6,3), (6,4)", "", ""


def _second_moment():
    for k, terms in SECOND_MOMENT_TERMS.items():
        want = RationalPolynomial(terms, Basis.FALLING)
        got = raw_moment(k, 2)
        if want != got:
            return False, f"E[X^2] for k={k}", str(want.monomial()), str(got)
    return True, "E[X^2] for k=3, 4", "", ""


def _leading_terms():
    for k in (4, 5):
        for m in (2, 3, 4, 5):
            want = leading_central_reference(k, m)
            got = central_moment(k, m).leading_term()
            if want != got:
                return False, f"m={m}, k={k}", str(want), str(got)
    return True, "central moments m=2..5, k=4, 5", "", ""


def _delaporte():
    with mpmath.workprec(256):
        for lam, a, b in [(1, 2, 0.5), (0.5, 10, 0.1), (5, 0.5, 2)]:
            p = DelaporteParams(lam, a, b)
            for j in range(0, 30, 3):
                conv = mpmath.fsum(negbin_pmf(a, b, i) * poisson_pmf(lam, j - i) for i in range(j + 1))
                if abs(delaporte_pmf(p, j) - conv) > mpmath.mpf(10) ** -60:
                    return False, f"convolution at j={j}", str(conv), str(delaporte_pmf(p, j))
            v = delaporte_pmf_vector(p)
            p0 = delaporte_p_zero(p)
            if abs(v.probabilities[0] / p0 - 1) > 1e-12 or abs(v.total() - 1) > 1e-12:
                return False, f"P(D=0) or normalisation at {(lam, a, b)}", str(p0), str(v.probabilities[0])
    return True, "convolution, P(D=0), normalisation on 3 parameter points", "", ""


def _poisson():
    for lam in (0.5, 2, 10):
        approx = poisson_alternating_sum(lam, 80)
        exact = mpmath.exp(-lam)
        if abs(approx - exact) > 1e-10:
            return False, f"lambda={lam}", str(exact), str(approx)
    return True, "alternating series for e^-lambda, lambda in {0.5, 2, 10}", "", ""


def _bracketing():
    for n in range(3, 7):
        for k in range(3, n + 1):
            p0 = exact_distribution(n, k).probability(0)
            for m in range(6):
                s = bonferroni_sum(k, n, m)
                if (m % 2 and s > p0) or (m % 2 == 0 and s < p0):
                    return False, f"m={m}, n={n}, k={k}", str(p0), str(s)
    return True, "partial sums m<=5 bracket P(X=0) for n<=6", "", ""


def _no_improvement():
    thresholds = {}
    for k in range(5, 9):
        t = [bonferroni_threshold(k, m).threshold_n for m in (1, 3, 5)]
        thresholds[k] = t
        if max(t[1:]) > t[0]:
            return False, f"k={k}", f"<= {t[0]}", str(t)
    return True, "m=3, 5 thresholds do not exceed m=1 for k=5..8: " + \
        ", ".join(f"k={k}: {t}" for k, t in thresholds.items()), "", ""


CHECKS: dict[str, Callable] = {
    "engine-oracle": _engine_oracle,
    "second-moment": _second_moment,
    "leading-terms": _leading_terms,
    "delaporte": _delaporte,
    "poisson": _poisson,
    "bonferroni-bracketing": _bracketing,
    "bonferroni-no-improvement": _no_improvement,
}


def run_suite(only: list[str] | None = None) -> list[CheckResult]:
    names = list(CHECKS) if not only else only
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s) {unknown}; choose from {list(CHECKS)}")
    out = []
    for name in names:
        t0 = time.perf_counter()
        passed, detail, expected, actual = CHECKS[name]()
        out.append(CheckResult(name, passed, detail, expected, actual,
                               time.perf_counter() - t0))
    return out


def over_budget(results: list[CheckResult]) -> bool:
    return math.fsum(r.elapsed_s for r in results) > SOFT_BUDGET_S
