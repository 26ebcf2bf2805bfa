"""The chain (x*y^n) in k[x, y]: every level is nilpotent over (x*y), yet no
level sits inside (x*y)^2, so (x*y) is not an ideal of definition."""

from formalis.exactpoly import VarSpec, parse_poly
from formalis.groebner import Ideal
from formalis.towers import NONADIC_CAVEAT, Tower, adic_witness_test

R = VarSpec(("x", "y"))
tower = Tower(R, [Ideal(R, [parse_poly(f"x*y^{n}", R)]) for n in range(1, 5)])
report = adic_witness_test(tower, Ideal(R, [parse_poly("x*y", R)]), 2)

print("forward witnesses:", report.forward_witness)
print("first failing power:", report.to_json()["failure_m"])
print("caveat:", NONADIC_CAVEAT)
