"""Fundamental solutions on one edge and how fast they approach their large-lambda form.

Take a step potential with total integral 1. Near lam = (2k+1)^2 pi^2 + d the
end values of c and s are predicted by simple closed forms in d and the
integral of q. The residuals, scaled by sqrt(lam), shrink as k grows.
"""

import math

from qgraph import EdgePotential, asymptotic_predictions, propagate
from qgraph.propagator import scaled_quantities

q = EdgePotential((0.0, 0.25, 0.75, 1.0), (2.0, 0.0, 2.0))
print(f"potential pieces {q.pieces}, integral {q.integral()}")

lam = 50.0
td = propagate(q, lam)
print(f"\nat lam = {lam}: c(1), c'(1), s(1), s'(1) = {td.as_floats()}")
print(f"Wronskian - 1 = {float(td.wronskian() - 1):.2e}")

print("\nk      scaled residuals (c'/sqrt(lam), s', c, sqrt(lam) s)")
for k in (5, 10, 50, 200):
    pred = asymptotic_predictions(q, k, 0.3)
    got = scaled_quantities(propagate(q, pred.lam), pred.lam)
    want = (pred.cp_over_root, pred.sp, pred.c, pred.root_s)
    res = [math.sqrt(pred.lam) * abs(a - b) for a, b in zip(got, want)]
    print(f"{k:<6d} " + "  ".join(f"{r:.2e}" for r in res))
