"""Reading and writing GraphSpec documents (JSON)."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Mapping

from .graph import GraphError, MetricGraph, build_graph
from .propagator import EdgePotential


def potentials_from_spec(spec: Mapping) -> dict:
    """Edge id -> EdgePotential for every edge that declares a potential."""
    out = {}
    for item in spec.get("edges", []):
        pot = item.get("potential")
        if pot is None:
            continue
        try:
            out[item["id"]] = EdgePotential(tuple(pot["breakpoints"]), tuple(pot["values"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"bad potential on edge {item.get('id')!r}: {exc}") from None
    return out


def load_graph_spec(source) -> tuple[MetricGraph, dict]:
    """Load a GraphSpec from a path, JSON string or already-parsed mapping."""
    if isinstance(source, Mapping):
        spec = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else source
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"malformed graph file: {exc}") from None
    if not isinstance(spec, Mapping):
        raise GraphError("graph spec must be a JSON object")
    return build_graph(spec), potentials_from_spec(spec)


def graph_spec(graph: MetricGraph, potentials: Mapping | None = None) -> dict:
    """Inverse of :func:`load_graph_spec`; zero potentials are omitted."""
    potentials = potentials or {}
    edges = []
    for e in graph.edges:
        item = {"id": e.id, "from": e.tail, "to": e.head}
        q = potentials.get(e.id)
        if q is not None and any(v != 0.0 for v in q.values):
            item["potential"] = {"breakpoints": list(q.breakpoints), "values": list(q.values)}
        edges.append(item)
    return {"vertices": list(graph.vertices), "edges": edges}


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture graph, e.g. ``fixture_path("fig8")``."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("qgraph") / "data" / name))
