"""Saturated forests and the forest expansion of the spectral determinant.

A saturated forest is a spanning subgraph with ``|V|`` edges in which every
component has exactly one cycle; it is odd when none of those cycles is even
(a loop counts as an odd cycle). Near ``lam = (2k+1)^2 pi^2`` the spectral
determinant is dominated by a sum over odd saturated forests, and for a
bouquet of odd cycles that sum collapses to a polynomial ``p(d)`` in the
shift ``d = lam - (2k+1)^2 pi^2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .charmatrix import edge_transfers
from .graph import BouquetShape, MetricGraph, build_bouquet, incidence_matrix, subgraph_components

ENUMERATION_CAP = 10**6


class EnumerationLimitError(RuntimeError):
    """The number of candidate edge subsets exceeds :data:`ENUMERATION_CAP`."""


@dataclass(frozen=True)
class SaturatedForest:
    edges: tuple            # edge ids, in graph order
    indices: tuple[int, ...]
    kappa: int
    parities: tuple[str, ...]

    @property
    def is_odd(self) -> bool:
        return all(p == "odd" for p in self.parities)


def enumerate_saturated_forests(graph: MetricGraph, odd_only: bool = False) -> list[SaturatedForest]:
    """All saturated forests, ordered lexicographically by edge index.

    Candidates are generated as complements of size ``|E| - |V|``, which is
    small for the graphs of interest.
    """
    nv, ne = graph.n_vertices, graph.n_edges
    if ne < nv:
        return []
    if math.comb(ne, nv) > ENUMERATION_CAP:
        raise EnumerationLimitError(
            f"C({ne}, {nv}) = {math.comb(ne, nv)} edge subsets exceeds cap {ENUMERATION_CAP}")
    found = []
    everything = frozenset(range(ne))
    for removed in itertools.combinations(range(ne), ne - nv):
        kept = tuple(sorted(everything.difference(removed)))
        summary = subgraph_components(graph, [graph.edges[j].id for j in kept])
        if not summary.is_saturated:
            continue
        parities = tuple(c.parities[0] for c in summary.components)
        forest = SaturatedForest(
            edges=tuple(graph.edges[j].id for j in kept),
            indices=kept,
            kappa=summary.count,
            parities=parities,
        )
        if odd_only and not forest.is_odd:
            continue
        found.append(forest)
    found.sort(key=lambda f: f.indices)
    return found


def bareiss_determinant(matrix) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in row] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def exact_incidence_determinant(graph: MetricGraph, forest: SaturatedForest | Sequence) -> int:
    """Exact determinant of the ``|V| x |V|`` incidence submatrix on the forest's edges."""
    ids = forest.edges if isinstance(forest, SaturatedForest) else tuple(forest)
    cols = [graph.edge_index(eid) for eid in ids]
    if len(cols) != graph.n_vertices:
        raise ValueError("forest must have exactly |V| edges")
    R = incidence_matrix(graph)[:, cols]
    return bareiss_determinant(R.tolist())


def _root_s_values(graph: MetricGraph, potentials: Mapping | None, lam: float) -> list[float]:
    root = math.sqrt(lam)
    return [root * td.as_floats()[2] for td in edge_transfers(graph, potentials, lam)]


def forest_expansion(graph: MetricGraph, potentials: Mapping | None, lam: float,
                     forests: list[SaturatedForest] | None = None) -> float:
    """Main term ``(-1)^|V| sum_tau 4^kappa prod_{j not in tau} sqrt(lam) s_j(1)``."""
    if not lam > 0:
        raise ValueError("positive lambda required")
    if forests is None:
        forests = enumerate_saturated_forests(graph, odd_only=True)
    forests = [f for f in forests if f.is_odd]
    rs = _root_s_values(graph, potentials, lam)
    total = 0.0
    for f in forests:
        inside = set(f.indices)
        total += 4**f.kappa * math.prod(rs[j] for j in range(graph.n_edges) if j not in inside)
    return (-1) ** graph.n_vertices * total


def bouquet_expansion(shape: BouquetShape, potentials: Mapping | None, lam: float) -> float:
    """``-4 sum_i prod_{j != i} sum_l sqrt(lam) s_{jl}(1)`` for a bouquet of odd cycles.

    ``potentials`` is keyed by the edge ids of :func:`build_bouquet`.
    """
    if not isinstance(shape, BouquetShape):
        shape = BouquetShape(tuple(shape))
    if not shape.all_odd:
        raise ValueError("bouquet expansion needs odd cycle lengths")
    if not lam > 0:
        raise ValueError("positive lambda required")
    graph = build_bouquet(shape)
    rs = dict(zip(graph.edge_ids, _root_s_values(graph, potentials, lam)))
    sums = [sum(rs[eid] for eid in cycle) for cycle in shape.cycle_edge_ids()]
    return -4.0 * sum(math.prod(sums[:i] + sums[i + 1:]) for i in range(shape.r))


@dataclass(frozen=True)
class ShiftPolynomial:
    """``p(d) = sum_i prod_{j != i} (n_j d - Q_j)`` with exact rational coefficients.

    ``coefficients[m]`` multiplies ``d**m``.
    """

    coefficients: tuple[Fraction, ...]
    cycle_lengths: tuple[int, ...]
    cycle_integrals: tuple[Fraction, ...]

    @classmethod
    def from_cycles(cls, cycle_lengths: Sequence[int], cycle_integrals: Sequence) -> ShiftPolynomial:
        n = [int(x) for x in cycle_lengths]
        Q = [Fraction(x) for x in cycle_integrals]
        if len(n) != len(Q) or not n:
            raise ValueError("need one integral per cycle")
        total = [Fraction(0)] * len(n)
        for i in range(len(n)):
            poly = [Fraction(1)]
            for j in range(len(n)):
                if j == i:
                    continue
                # multiply by (n_j d - Q_j)
                nxt = [Fraction(0)] * (len(poly) + 1)
                for m, a in enumerate(poly):
                    nxt[m] -= a * Q[j]
                    nxt[m + 1] += a * n[j]
                poly = nxt
            for m, a in enumerate(poly):
                total[m] += a
        return cls(tuple(total), tuple(n), tuple(Q))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def __call__(self, d):
        return sum(float(a) * d**m for m, a in enumerate(self.coefficients))

    def roots(self) -> np.ndarray:
        """Roots of p, sorted by real part."""
        if self.degree == 0:
            return np.array([])
        r = np.roots([float(a) for a in reversed(self.coefficients)])
        return r[np.argsort(r.real, kind="stable")]

    def real_roots(self, tol: float = 1e-9) -> np.ndarray:
        r = self.roots()
        return np.sort(r[np.abs(r.imag) <= tol * max(1.0, float(np.max(np.abs(r), initial=0.0)))].real)


def cycle_integrals(shape: BouquetShape, potentials: Mapping | None) -> list[Fraction]:
    """Q_j: total integral of the potential over the edges of cycle j."""
    potentials = potentials or {}
    out = []
    for cycle in shape.cycle_edge_ids():
        out.append(sum((potentials[eid].exact_integral() for eid in cycle if eid in potentials),
                       Fraction(0)))
    return out


def shift_polynomial(shape: BouquetShape, potentials: Mapping | None) -> ShiftPolynomial:
    if not isinstance(shape, BouquetShape):
        shape = BouquetShape(tuple(shape))
    return ShiftPolynomial.from_cycles(shape.cycle_lengths, cycle_integrals(shape, potentials))


@dataclass(frozen=True)
class MonomialAnalysis:
    h: tuple[float, ...]            # Q_j / n_j, sorted descending
    is_monomial: bool
    implied_total_integral: float   # sum_j Q_j = sum_j n_j h_j


def monomial_analysis(poly: ShiftPolynomial, tol: float = 1e-9) -> MonomialAnalysis:
    """Decide whether ``p(d)`` is ``c d^(r-1)`` up to ``tol`` times the leading coefficient."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    lead = abs(float(poly.leading))
    lower = poly.coefficients[:-1]
    is_mono = all(abs(float(a)) <= tol * lead for a in lower)
    h = sorted((float(Q / n) for Q, n in zip(poly.cycle_integrals, poly.cycle_lengths)), reverse=True)
    total = float(sum(poly.cycle_integrals, Fraction(0)))
    return MonomialAnalysis(tuple(h), is_mono, total)
