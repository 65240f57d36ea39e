"""Delaporte laws: pmf, closed forms, and the fitted parameters for X."""
import mpmath

from ramsey_moments import distributions as d

p = d.DelaporteParams(1, 2, 0.5)
v = d.delaporte_pmf_vector(p)
print("terms kept:", v.truncation_bound + 1, " tail bound:", mpmath.nstr(v.tail_mass_bound, 3))
print("P(D=0):", mpmath.nstr(v.probabilities[0], 15), "closed form:", mpmath.nstr(d.delaporte_p_zero(p), 15))

# closed-form central moments against the truncated series
for m in (2, 3, 4):
    print(m, mpmath.nstr(d.delaporte_central_moment(p, m), 20),
          mpmath.nstr(d.pmf_central_moment(v, m, center=p.mean), 20))

# shrinking beta with alpha*beta fixed pushes the law onto a Poisson
for b in ("0.1", "0.01", "0.001"):
    q = d.DelaporteParams(1, 2 / mpmath.mpf(b), b)
    gap = max(abs(d.delaporte_pmf(q, j) - d.poisson_pmf(3, j)) for j in range(30))
    print(f"beta={b}: sup |D - Poisson(3)| = {mpmath.nstr(gap, 3)}")

# parameters matched to X at the edge of the big-n regime
for k in (20, 30):
    q = d.fit_bign(d.bign_regime_boundary(k), k)
    print(f"k={k}: lambda={mpmath.nstr(q.lam, 4)} alpha={mpmath.nstr(q.alpha, 4)} beta={mpmath.nstr(q.beta, 4)}")
# lambda is the largest of the three here

n = 30 * mpmath.power(2, 15) / mpmath.e
gap = d.delaporte_poisson_gap(d.fit_bign(n, 30))
print("gap at k=30:", mpmath.nstr(gap, 6), "bound:", mpmath.nstr(mpmath.e ** 3 / mpmath.pi * 900 / 2 ** 15, 6))
