"""f = y + sum i! x^-i t^i has no polynomial multiple: every greedy attempt
from a seed y^E is blocked at order E + 1, and the projections of the
saturations J_N onto k[x, y][t]/(t^2) keep shrinking."""

from formalis.closures import (counterexample_ring, counterexample_series, factorial_rule,
                               saturation_profile, search_polynomial_multiple)
from formalis.exactpoly import parse_poly
from formalis.groebner import buchberger

f = counterexample_series(factorial_rule, 6)
print("f mod t^6 =", f.poly)

for E in range(4):
    cert = search_polynomial_multiple(f, parse_poly(f"y^{E}", counterexample_ring()), 6)
    print(f"seed y^{E}: blocked at order {cert.order}, E profile {cert.profile.E[1:]}")

chain = saturation_profile(f, 6, 2)
for N, J in chain.projections[2]:
    print(f"pi_2(J_{N}) =", [str(g) for g in buchberger(J).basis])
print("strictly decreasing:", chain.projection_strict(2))
