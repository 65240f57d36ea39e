"""Exact small-n distributions, inclusion-exclusion bounds and their limits."""
from ramsey_moments import bonferroni_sum, bonferroni_threshold, exact_distribution
from ramsey_moments.bounds import chebyshev_ratio, erdos_asymptotic_check, var_mean_ratio

# every colouring of K_5 and K_6
for n in (5, 6):
    d = exact_distribution(n, 3)
    print(f"n={n}: P(X=0) = {d.probability(0)}", dict(sorted(d.counts.items())))
# n=6 has no triangle-free colouring: R(3,3) = 6

# partial sums alternate around the true P(X=0)
d = exact_distribution(6, 4)
print("P(X=0), n=6, k=4:", d.probability(0))
for m in range(6):
    print(f"  m={m}: {float(bonferroni_sum(4, 6, m)):+.6f}")

# first moment against three and five terms
for k in (5, 6, 7):
    row = [bonferroni_threshold(k, m) for m in (1, 3, 5)]
    print(f"k={k}: thresholds", [r.threshold_n for r in row], "->", row[0].implied_bound)
# the extra terms move the threshold down, never up

for k in (10, 15, 20, 25):
    n, ref = erdos_asymptotic_check(k)
    print(f"k={k}: first-moment n={n}, k 2^(k/2)/(sqrt2 e)={ref:.1f}, ratio {n / ref:.3f}")

# Var/E^2 bounds P(X=0); its constant is ((k)_3)^2/2, not k^6/2
for n in (100, 1000, 10000):
    r = chebyshev_ratio(4, n)
    print(f"n={n}: Var/E^2={float(r.exact):.3e}  /k^6 ref {r.exact_over_reference:.4f}"
          f"  /(k)_3^2 ref {r.exact_over_reference_falling:.4f}"
          f"  Var/E={float(var_mean_ratio(4, n).exact):.1f}")
