"""A walk through the figure-eight knot: Alexander polynomial, the reducible
metabelian representation, twisted cohomology and a deformation to an
irreducible SL(3) representation.

Run with ``python demos/figure_eight_tour.py``.
"""

from __future__ import annotations

from knotrep import (alexander_polynomial, load_table, parse_knot_input, parse_lambda, reducible_metabelian,
                     resolve_lambda, symmetric_power, verify_main_theorem, wirtinger_presentation)
from knotrep.cohomology import cochain_dims
from knotrep.deform import default_direction, newton_deform, tangent_cocycles
from knotrep.reps import irreducibility_test, module_action

p = wirtinger_presentation(parse_knot_input("4_1", "name", load_table()))
delta = alexander_polynomial(p)
print("presentation:", p)
print("Alexander polynomial:", delta.to_string())

# lambda^2 is a root of Delta; pick the golden ratio
be, lam = resolve_lambda(parse_lambda("root(x^2-x-1, 1.618)"), delta)
rho = reducible_metabelian(p, lam, be)
print("scalars:", be)
for name, m in zip(p.generators, rho.images):
    print(f"  rho({name}) =", [[be.format(x) for x in row] for row in m.tolist()])

print("\ntwisted cohomology with sl_n coefficients")
for n in range(2, 7):
    s = cochain_dims(p, module_action(rho, "sl", n))
    print(f"  n={n}: h0={s.h0} z1={s.z1} h1={s.h1} (expected z1 = {n * n + n - 2})")

report = verify_main_theorem(p, lam, 4, be, delta, rho)
print("\nverification at n=4:", report.status)

print("\ndeforming r_3 o rho into irreducible representations")
nb, lam_n = resolve_lambda(parse_lambda("root(x^2-x-1, 1.618)"), delta, "numeric", 256)
r3 = symmetric_power(reducible_metabelian(p, lam_n, nb), 3)
td = tangent_cocycles(p, r3)
print(f"  tangent space: z1={td.dim_z1} b1={td.dim_b1} complement={td.dim_complement}")
print("  r_3 o rho irreducible:", irreducibility_test(r3).irreducible)
for t in (1e-3, 1e-2, 5e-2):
    res = newton_deform(p, r3, default_direction(p, r3), t)
    print(f"  t={t:g}: residual={float(res.residual):.2e} span={res.irreducibility.span_dimension}"
          f" irreducible={res.irreducible}")
