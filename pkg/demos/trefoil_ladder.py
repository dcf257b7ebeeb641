"""The trefoil at lambda = exp(i pi/6): where the dimension ladder holds and
where it breaks because lambda^2 is a primitive 6th root of unity.

Run with ``python demos/trefoil_ladder.py``.
"""

from __future__ import annotations

from knotrep import (alexander_polynomial, check_hypotheses, load_table, parse_knot_input, parse_lambda,
                     reducible_metabelian, resolve_lambda, verify_ladder, wirtinger_presentation)
from knotrep.cohomology import cochain_dims
from knotrep.reps import module_action

p = wirtinger_presentation(parse_knot_input("3_1", "name", load_table()))
delta = alexander_polynomial(p)
be, lam = resolve_lambda(parse_lambda("root(x^4-x^2+1, 0.866+0.5i)"), delta)
rho = reducible_metabelian(p, lam, be)
print("Alexander polynomial:", delta.to_string())

print("\nh1 with coefficients in R_m = Sym^m")
for m in range(2, 12, 2):
    s = cochain_dims(p, module_action(rho, "R", m))
    print(f"  m={m:2d}: h1={s.h1}")

print("\nhypotheses and ladder by n")
for n in range(2, 8):
    hyp = check_hypotheses(delta, lam, n, be)
    ladder = verify_ladder(p, lam, n, be, delta, rho)
    sl = ladder.dimensions[f"sl:{n}"]
    print(f"  n={n}: hypotheses={'ok' if hyp.verdict else 'fail at k=' + str(list(hyp.failing_k))}"
          f" h1(sl_n)={sl.h1} z1={sl.z1} (regular value {n * n + n - 2}) ladder={ladder.status}")
