"""Saturated forests of a small graph and the signed incidence determinants.

An odd saturated forest with kappa components has incidence determinant
+-2^kappa. If any cycle is even the determinant vanishes.
"""

from qgraph import build_graph, enumerate_saturated_forests, exact_incidence_determinant

graph = build_graph({
    "vertices": ["a", "b", "c", "d"],
    "edges": [
        {"id": "ab", "from": "a", "to": "b"},
        {"id": "bc", "from": "b", "to": "c"},
        {"id": "ca", "from": "c", "to": "a"},
        {"id": "cd", "from": "c", "to": "d"},
        {"id": "dd", "from": "d", "to": "d"},
        {"id": "bd", "from": "b", "to": "d"},
    ],
})

for f in enumerate_saturated_forests(graph):
    det = exact_incidence_determinant(graph, f)
    print(f"{' '.join(f.edges):<16} kappa={f.kappa} cycles={','.join(f.parities):<9} det={det:+d}")
