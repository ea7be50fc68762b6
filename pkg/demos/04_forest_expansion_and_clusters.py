"""Forest expansion of the determinant and the eigenvalue clusters of a bouquet.

For a bouquet made of a loop and a triangle, the determinant near
(2k+1)^2 pi^2 + d is approximated by a sum over odd saturated forests; the
scaled error decays with k. Each cluster holds r - 1 = 1 eigenvalue whose
shift tends to the root of p(d) = (3d - Q_2) + (d - Q_1).
"""

import math

from qgraph import (
    EdgePotential,
    build_bouquet,
    cluster_scan,
    determinant,
    assemble_scaled,
    enumerate_saturated_forests,
    forest_expansion,
    shift_polynomial,
)

graph = build_bouquet((1, 3))
pots = {"e1_1": EdgePotential.constant(1.0)}
pots.update({eid: EdgePotential.constant(-2.0) for eid in ("e2_1", "e2_2", "e2_3")})
forests = enumerate_saturated_forests(graph, odd_only=True)
print(f"{len(forests)} odd saturated forests")

print("\nk     scaled expansion error at d = 1")
for k in (1, 10, 100, 1000):
    lam = (2 * k + 1) ** 2 * math.pi**2 + 1.0
    err = abs(determinant(assemble_scaled(graph, pots, lam)) - forest_expansion(graph, pots, lam, forests))
    print(f"{k:<5d} {err * lam ** ((graph.excess + 1) / 2):.3e}")

poly = shift_polynomial((1, 3), pots)
print(f"\np(d) coefficients (ascending): {[str(a) for a in poly.coefficients]}, root {poly.real_roots()}")
for k in (2, 10, 40):
    rec = cluster_scan(graph, pots, k)
    print(f"k={k:<3d} multiplicity {rec.total_multiplicity}, shifts {[round(d, 6) for d in rec.shifts]}")
