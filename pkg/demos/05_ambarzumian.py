"""Which spectral facts pin down q = 0 on a figure-eight?

Putting +1 on one loop and -1 on the other keeps every cluster shift
tending to 0, exactly as for q = 0. The ground state gives it away: it drops
below zero. Only the two facts together characterise the zero potential.
"""

from qgraph import EdgePotential, build_bouquet, cluster_scan, monomial_analysis, shift_polynomial, smallest_eigenvalue

graph = build_bouquet((1, 1))
cases = {
    "q = 0": {},
    "q = +1 / -1": {"e1_1": EdgePotential.constant(1.0), "e2_1": EdgePotential.constant(-1.0)},
    "q = +1 / 0": {"e1_1": EdgePotential.constant(1.0)},
}
for name, pots in cases.items():
    mono = monomial_analysis(shift_polynomial((1, 1), pots)).is_monomial
    shifts = cluster_scan(graph, pots, 50).shifts
    lam_min = smallest_eigenvalue(graph, pots)
    print(f"{name:<12} p monomial: {mono!s:<5}  d_50 = {shifts[0]:+.2e}  lambda_min = {lam_min:+.5f}")
