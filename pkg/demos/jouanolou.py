"""The Jouanolou form of degree 3 is integrable, has no algebraic solutions
of low degree, and its separatrix jets along a line through the origin
acquire poles of growing order in the line parameter."""

import time

from formalis.foliations import algebraic_solution_search, check_integrability, jouanolou_form, \
    separatrix_family

w = jouanolou_form(3)
print("integrable:", check_integrability(w)[0])
for n in (1, 2, 3):
    start = time.perf_counter()
    found = algebraic_solution_search(w, n)
    print(f"degree {n}: {len(found)} solutions ({time.perf_counter() - start:.1f}s)")

fam = separatrix_family(w, (1, 2, 3), 4)
print("graph axis:", fam.axis)
print("pole profile:", fam.pole_profile)
