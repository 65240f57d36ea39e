"""Acceptance criteria, one check per criterion.

Run under pytest, or directly with ``python tests/test_acceptance.py`` for a
plain pass/fail table.  Criteria are checked exactly as stated, including the
ones the mathematics does not allow to pass (4 and 7).
"""
import itertools
import math
import time
from fractions import Fraction

import mpmath
import pytest

from ramsey_moments import distributions as dist
from ramsey_moments.bounds import bonferroni_sum, bonferroni_threshold
from ramsey_moments.exact import Basis, RationalPolynomial, binomial, poly_eval
from ramsey_moments.moments import (central_moment, leading_central_reference, raw_moment,
                                    standardized_moment)
from ramsey_moments.oracle import exact_distribution, oracle_moment
from ramsey_moments.simulator import run
from ramsey_moments.verify import SECOND_MOMENT_TERMS


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def c01_second_moment():
    def body():
        fails = []
        for k in (3, 4):
            want = RationalPolynomial(SECOND_MOMENT_TERMS[k], Basis.FALLING).monomial()
            got = raw_moment(k, 2)
            if got.coefficients != want.coefficients:
                fails.append(k)
        return fails
    fails, secs = _timed(body)
    return not fails and secs < 1, f"k=3,4 coefficient match, mismatches={fails}, {secs:.2f}s"


def c02_oracle():
    def body():
        bad = []
        for n, k in [(5, 3), (6, 3), (6, 4), (7, 3)]:
            d = exact_distribution(n, k)
            for r in range(1, (4 if (n, k) == (7, 3) else 5) + 1):
                if poly_eval(raw_moment(k, r), n) != oracle_moment(d, r):
                    bad.append((n, k, r))
        return bad
    bad, secs = _timed(body)
    return not bad and secs < 60, f"mismatches={bad}, {secs:.1f}s"


def c03_leading_terms():
    def body():
        bad = []
        for m in (2, 3, 4, 5):
            for k in ((4, 5) if m == 5 else (4, 5, 6)):
                deg, coeff = central_moment(k, m).leading_term()
                want_deg = {2: 2 * k - 3, 3: 3 * k - 5, 4: 4 * k - 6, 5: 5 * k - 8}[m]
                c = {2: Fraction(1, 2), 3: Fraction(1), 4: Fraction(3, 4), 5: Fraction(5)}[m]
                want = c / math.factorial(k - 3) ** m * Fraction(2 ** m, 2 ** (m * binomial(k, 2)))
                if (deg, coeff) != (want_deg, want) or (deg, coeff) != leading_central_reference(k, m):
                    bad.append((k, m))
        return bad
    bad, secs = _timed(body)
    return not bad and secs < 300, f"mismatches={bad}, {secs:.1f}s"


def c04_normality_trend():
    ns = (10**2, 10**3, 10**4)
    with mpmath.workprec(256):
        r3 = [float(standardized_moment(4, 3, n) * mpmath.sqrt(n) / (2 * mpmath.sqrt(2))) for n in ns]
        d4 = [float(abs(standardized_moment(4, 4, n) - 3)) for n in ns]
    ok3 = all(abs(r - 1) <= 0.1 for r in r3)
    ok4 = d4[0] > d4[1] > d4[2]
    detail = ("c3*sqrt(n)/(2sqrt2) = " + ", ".join(f"{r:.4f}" for r in r3)
              + "; |c4-3| = " + ", ".join(f"{x:.4f}" for x in d4))
    return ok3 and ok4, detail


GRID = list(itertools.product([0.5, 2, 5], [0.5, 2, 10], [0.1, 0.5, 2]))


def c05_delaporte():
    def body():
        worst = [0.0, 0.0, 0.0]
        with mpmath.workprec(dist.PREC):
            for lam, a, b in GRID:
                p = dist.DelaporteParams(lam, a, b)
                v = dist.delaporte_pmf_vector(p)
                worst[0] = max(worst[0], float(abs(v.total() - 1)))
                p0 = mpmath.exp(-p.lam) / (1 + p.beta) ** p.alpha
                worst[1] = max(worst[1], float(abs(v.probabilities[0] / p0 - 1)))
                for m in (2, 3, 4):
                    cf = dist.delaporte_central_moment(p, m)
                    se = dist.pmf_central_moment(v, m, center=p.mean)
                    worst[2] = max(worst[2], float(abs(se / cf - 1)))
        return worst
    w, secs = _timed(body)
    ok = w[0] <= 1e-12 and w[1] <= 1e-12 and w[2] <= 1e-9 and secs < 10
    return ok, f"27 points: |sum-1|={w[0]:.1e}, P0 rel={w[1]:.1e}, moments rel={w[2]:.1e}, {secs:.1f}s"


def c06_bracketing():
    bad = []
    for n in range(2, 7):
        for k in range(2, n + 1):
            p0 = exact_distribution(n, k).probability(0)
            for m in range(6):
                s = bonferroni_sum(k, n, m)
                if (m % 2 and not s <= p0) or (m % 2 == 0 and not s >= p0):
                    bad.append((n, k, m))
    return not bad, f"n<=6, m<=5, violations={bad}"


def c07_no_improvement():
    def body():
        return {k: [bonferroni_threshold(k, m).threshold_n for m in (1, 3, 5)] for k in range(5, 9)}
    th, secs = _timed(body)
    equal = all(t[0] == t[1] == t[2] for t in th.values())
    never_better = all(max(t[1:]) <= t[0] for t in th.values())
    detail = (f"thresholds (m=1,3,5): {th}; equal={equal}; "
              f"none exceeds m=1: {never_better}; {secs:.1f}s")
    return equal and secs < 600, detail


def c08_erdos():
    r = bonferroni_threshold(5, 1)
    ok = r.threshold_n == 11 and binomial(11, 5) == 462 and binomial(12, 5) == 792
    return ok, f"threshold n={r.threshold_n}, {r.implied_bound}"


def c09_poisson():
    with mpmath.workprec(dist.PREC):
        err = max(abs(dist.poisson_alternating_sum(lam, 120) - mpmath.exp(-lam)) for lam in (0.5, 2, 10))
        worst = 0
        for lam in (0.5, 2, 10):
            for m in range(1, 8):
                series = mpmath.fsum(j ** m * dist.poisson_pmf(lam, j) for j in range(300))
                worst = max(worst, abs(dist.poisson_raw_moment(lam, m) / series - 1))
    return err <= 1e-10 and worst <= 1e-9, f"alternating err={float(err):.1e}, Stirling rel={float(worst):.1e}"


def c10_simulation():
    samples = 10**6
    t0 = time.perf_counter()
    rep = run(6, 3, samples, 20240601, workers=1)
    rep4 = run(6, 3, samples, 20240601, workers=4)
    secs = time.perf_counter() - t0
    ok_mean = abs(float(rep.mean) - 5) <= 4 * math.sqrt(3.75 / samples)
    d = exact_distribution(6, 3)
    support = sorted(set(d.counts) | set(rep.histogram))
    passes = 0
    for x in support:
        p = float(d.probability(x))
        emp = rep.histogram.get(x, 0) / samples
        passes += abs(emp - p) <= 4 * math.sqrt(p / samples)
    rate = passes / len(support)
    identical = rep.histogram == rep4.histogram and rep.power_sums == rep4.power_sums
    ok = ok_mean and rate >= 0.99 and identical and secs < 120
    return ok, (f"mean={float(rep.mean):.5f}, per-bin pass {passes}/{len(support)}, "
                f"workers 1 vs 4 identical={identical}, {secs:.1f}s")


CRITERIA = [
    ("01-second-moment-formulas", c01_second_moment),
    ("02-oracle-equivalence", c02_oracle),
    ("03-leading-terms", c03_leading_terms),
    ("04-normality-trend", c04_normality_trend),
    ("05-delaporte-identities", c05_delaporte),
    ("06-bonferroni-bracketing", c06_bracketing),
    ("07-no-improvement-equal-thresholds", c07_no_improvement),
    ("08-erdos-threshold", c08_erdos),
    ("09-poisson-paradigm", c09_poisson),
    ("10-simulation-consistency", c10_simulation),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    for name, check in CRITERIA:
        ok, detail = check()
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}", flush=True)
