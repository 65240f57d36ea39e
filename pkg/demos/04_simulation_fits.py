"""Monte Carlo histograms of X and model fits."""
from ramsey_moments import fit_and_compare, run

# small n: compare with the exact law (mean 5, variance 15/4)
rep = run(6, 3, 200_000, seed=1, workers=4)
print("n=6 k=3 mean", float(rep.mean), "var", float(rep.central_moment(2)))
for f in fit_and_compare(rep):
    print(" ", f.model, f.params or f.note, "" if f.chi_square is None else f"chi2={f.chi_square:.1f}/{f.dof}")
# the moment equations for a Delaporte have no valid solution here

# bigger n, k=4: the fitted big-n parameters against moment fits
rep = run(100, 4, 5_000, seed=2, workers=4)
print("n=100 k=4 mean", float(rep.mean))
models = ["delaporte", "delaporte-bign", "delaporte-bign-exact", "poisson", "normal"]
for f in fit_and_compare(rep, models):
    print(f"  {f.model:<22} loglik={f.log_likelihood:12.1f} chi2={f.chi_square:10.1f} dof={f.dof}")
# using n^k/k! for C(n,k) shifts the big-n mean by ~6% at n=100, which costs a lot
