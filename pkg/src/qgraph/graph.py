"""Equilateral metric graphs: construction, incidence matrices and subgraph structure.

Every edge has unit length and a coordinate ``x in [0, 1]`` running from its
tail to its head. Loops and parallel edges are allowed. The vertex and edge
orders given at construction fix the row/column order of every matrix built
from the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple

import numpy as np


class GraphError(ValueError):
    """Raised for malformed graph descriptions."""


class Edge(NamedTuple):
    id: Hashable
    tail: Hashable
    head: Hashable

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple
    edges: tuple[Edge, ...]

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(Edge(*e) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex id")
        if len({e.id for e in edges}) != len(edges):
            raise GraphError("duplicate edge id")
        known = set(vertices)
        for e in edges:
            if e.tail not in known or e.head not in known:
                raise GraphError(f"dangling endpoint on edge {e.id!r}")
        if not vertices:
            raise GraphError("graph has no vertices")
        if _count_components(vertices, edges) != 1:
            raise GraphError("disconnected graph")

        object.__setattr__(self, "_vindex", {v: i for i, v in enumerate(vertices)})
        object.__setattr__(self, "_eindex", {e.id: i for i, e in enumerate(edges)})

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def excess(self) -> int:
        """|E| - |V|, the expected cluster multiplicity."""
        return self.n_edges - self.n_vertices

    @property
    def edge_ids(self) -> tuple:
        return tuple(e.id for e in self.edges)

    def vertex_index(self, v) -> int:
        return self._vindex[v]

    def edge_index(self, edge_id) -> int:
        try:
            return self._eindex[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge id {edge_id!r}") from None

    def edge(self, edge_id) -> Edge:
        return self.edges[self.edge_index(edge_id)]

    def degree(self, v) -> int:
        """Number of edge ends at ``v``; a loop counts twice."""
        return sum((e.tail == v) + (e.head == v) for e in self.edges)


@dataclass(frozen=True)
class BouquetShape:
    """Cycle lengths n_1..n_r of cycles glued at one common vertex."""

    cycle_lengths: tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(int(n) for n in self.cycle_lengths)
        if not lengths:
            raise GraphError("empty cycle list")
        if any(n < 1 for n in lengths):
            raise GraphError("cycle lengths must be positive")
        object.__setattr__(self, "cycle_lengths", lengths)

    @property
    def r(self) -> int:
        return len(self.cycle_lengths)

    @property
    def all_odd(self) -> bool:
        return all(n % 2 == 1 for n in self.cycle_lengths)

    def cycle_edge_ids(self) -> list[list[str]]:
        """Edge ids of each cycle, in the order used by :func:`build_bouquet`."""
        return [[f"e{j}_{l}" for l in range(1, n + 1)]
                for j, n in enumerate(self.cycle_lengths, start=1)]


def build_graph(spec: Mapping) -> MetricGraph:
    """Build a graph from a GraphSpec mapping.

    ``spec`` has ``"vertices"`` (list of ids) and ``"edges"`` (list of
    mappings with ``"id"``, ``"from"``, ``"to"``). Edge potentials, if present,
    are ignored here; see :func:`qgraph.io.potentials_from_spec`.
    """
    try:
        vertices = list(spec["vertices"])
        raw_edges = list(spec["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph spec: {exc}") from None
    edges = []
    for item in raw_edges:
        try:
            edges.append(Edge(item["id"], item["from"], item["to"]))
        except (KeyError, TypeError):
            raise GraphError(f"malformed edge entry {item!r}") from None
    return MetricGraph(tuple(vertices), tuple(edges))


def build_bouquet(shape: BouquetShape | Iterable[int]) -> MetricGraph:
    """Glue cycles of the given lengths at a common vertex ``v0``.

    Cycle ``j`` adds vertices ``v{j}_1 .. v{j}_{n_j-1}`` and edges
    ``e{j}_1 .. e{j}_{n_j}``, oriented along the cycle.
    """
    if not isinstance(shape, BouquetShape):
        shape = BouquetShape(tuple(shape))
    vertices = ["v0"]
    edges = []
    for j, n in enumerate(shape.cycle_lengths, start=1):
        ring = ["v0"] + [f"v{j}_{k}" for k in range(1, n)] + ["v0"]
        vertices.extend(ring[1:-1])
        for l in range(1, n + 1):
            edges.append(Edge(f"e{j}_{l}", ring[l - 1], ring[l]))
    return MetricGraph(tuple(vertices), tuple(edges))


def recognize_bouquet(graph: MetricGraph) -> tuple[BouquetShape, list[list]] | None:
    """Detect whether ``graph`` is a bouquet of cycles.

    Returns the shape and the edge ids of each cycle (walk order), or
    ``None`` when the graph is not cycles glued at a single vertex.
    """
    if graph.n_vertices == 1:
        return BouquetShape((1,) * graph.n_edges), [[e.id] for e in graph.edges]

    center = max(graph.vertices, key=graph.degree)
    for v in graph.vertices:
        if v != center and graph.degree(v) != 2:
            return None

    incident: dict = {v: [] for v in graph.vertices}
    for e in graph.edges:
        incident[e.tail].append(e)
        if not e.is_loop:
            incident[e.head].append(e)

    used: set = set()
    cycles = []
    for start in incident[center]:
        if start.id in used:
            continue
        cycle = [start.id]
        used.add(start.id)
        if not start.is_loop:
            here = start.head if start.tail == center else start.tail
            while here != center:
                nxt = [e for e in incident[here] if e.id not in used]
                if len(nxt) != 1 or nxt[0].is_loop:
                    return None
                e = nxt[0]
                used.add(e.id)
                cycle.append(e.id)
                here = e.head if e.tail == here else e.tail
        cycles.append(cycle)
    if len(used) != graph.n_edges:
        return None
    return BouquetShape(tuple(len(c) for c in cycles)), cycles


def incidence_matrix(graph: MetricGraph) -> np.ndarray:
    """Unoriented vertex-by-edge incidence matrix; a loop gets the entry 2."""
    R = np.zeros((graph.n_vertices, graph.n_edges), dtype=np.int64)
    for j, e in enumerate(graph.edges):
        R[graph.vertex_index(e.tail), j] += 1
        R[graph.vertex_index(e.head), j] += 1
    return R


@dataclass(frozen=True)
class Component:
    vertices: tuple
    edges: tuple
    cycle_count: int
    # one parity per fundamental cycle of a BFS spanning tree; for a
    # unicyclic component this is the parity of its unique cycle
    parities: tuple[str, ...]

    @property
    def is_unicyclic(self) -> bool:
        return self.cycle_count == 1

    @property
    def has_even_cycle(self) -> bool:
        return "even" in self.parities


@dataclass(frozen=True)
class ComponentSummary:
    components: tuple[Component, ...]

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def total_cycles(self) -> int:
        return sum(c.cycle_count for c in self.components)

    @property
    def is_saturated(self) -> bool:
        return all(c.cycle_count == 1 for c in self.components)

    @property
    def is_odd_saturated(self) -> bool:
        return self.is_saturated and all(c.parities == ("odd",) for c in self.components)


def subgraph_components(graph: MetricGraph, edge_subset: Iterable) -> ComponentSummary:
    """Split the spanning subgraph (all vertices, chosen edges) into components.

    Cycle parity comes from BFS depths: a non-tree edge ``u-v`` closes a
    cycle of parity ``depth(u) + depth(v) + 1``. A loop is therefore odd and a
    parallel pair even, which is what the incidence determinant depends on.
    """
    chosen = {graph.edge_index(eid) for eid in edge_subset}
    adjacency: dict = {v: [] for v in graph.vertices}
    for j in sorted(chosen):
        e = graph.edges[j]
        adjacency[e.tail].append((j, e.head))
        if not e.is_loop:
            adjacency[e.head].append((j, e.tail))

    depth: dict = {}
    components = []
    for root in graph.vertices:
        if root in depth:
            continue
        depth[root] = 0
        comp_vertices = [root]
        tree_edges: set = set()
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for j, w in adjacency[u]:
                if w not in depth:
                    depth[w] = depth[u] + 1
                    tree_edges.add(j)
                    comp_vertices.append(w)
                    queue.append(w)
        members = set(comp_vertices)
        comp_edges = sorted(j for j in chosen if graph.edges[j].tail in members)
        parities = []
        for j in comp_edges:
            if j in tree_edges:
                continue
            e = graph.edges[j]
            odd = (depth[e.tail] + depth[e.head] + 1) % 2 == 1
            parities.append("odd" if odd else "even")
        components.append(Component(
            vertices=tuple(v for v in graph.vertices if v in members),
            edges=tuple(graph.edges[j].id for j in comp_edges),
            cycle_count=len(comp_edges) - len(members) + 1,
            parities=tuple(parities),
        ))
    return ComponentSummary(tuple(components))


def _count_components(vertices, edges) -> int:
    seen: set = set()
    adjacency: dict = {v: [] for v in vertices}
    for e in edges:
        adjacency[e.tail].append(e.head)
        adjacency[e.head].append(e.tail)
    count = 0
    for v in vertices:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count
