"""Eigenvalues of the figure-eight graph (two loops at one vertex).

With q = 0 the spectrum starts 0, pi^2, 4pi^2 (the last one triple). The
detector looks for zeros of the smallest singular value of the regular
matrix, so even-multiplicity zeros are not lost.
"""

import math

from qgraph import fixture_path, load_graph_spec, scan_spectrum

graph, pots = load_graph_spec(fixture_path("fig8"))
report = scan_spectrum(graph, pots, -1.0, 50.0)
print("q = 0:")
for e in report.eigenvalues:
    print(f"  lambda = {e.value:12.8f}  (= {e.value / math.pi**2:.6f} pi^2)  multiplicity {e.multiplicity}")

graph, pots = load_graph_spec(fixture_path("fig8_pm1"))
report = scan_spectrum(graph, pots, -2.0, 50.0)
print("\nq = +1 on one loop, -1 on the other:")
for e in report.eigenvalues:
    print(f"  lambda = {e.value:12.8f}  multiplicity {e.multiplicity}")
