"""Exact moments of the monochromatic clique count X, as polynomials in n."""
from ramsey_moments import central_moment, raw_moment, standardized_moment
from ramsey_moments.moments import leading_central_reference, raw_moment_info

# second moment for triangles, then its value at n = 6
p = raw_moment(3, 2)
print("E[X^2], k=3:", p)
print("at n=6:", p(6))  # 115/4

# the falling-factorial form is how the profile sum comes out
print("falling basis:", p.falling())

# fifth moment of the K_5 count; the enumeration is the expensive part
p5 = raw_moment(5, 5)
info = raw_moment_info(5, 5)
print("E[X^5], k=5: degree", p5.degree(), "from", info["profile_count"], "profiles in",
      round(info["elapsed_ms"]), "ms")

# central moments cancel heavily; only the leading term survives asymptotically
for m in (2, 3, 4, 5):
    c = central_moment(4, m)
    print(f"m={m}: leading {c.leading_term()}  reference {leading_central_reference(4, m)}")

# standardized moments drift toward the normal values 2*sqrt(2)/sqrt(n) and 3
for n in (10**2, 10**3, 10**4, 10**5):
    c3 = standardized_moment(4, 3, n)
    c4 = standardized_moment(4, 4, n)
    print(f"n={n:>6}  c3*sqrt(n)/(2 sqrt 2) = {float(c3 * n ** 0.5 / 8 ** 0.5):.5f}   c4 = {float(c4):.5f}")
