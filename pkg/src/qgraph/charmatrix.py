"""Assembly of the vertex/edge coefficient system and its spectral determinant.

Unknowns are one value ``A_v`` per vertex and one coefficient per edge, so
that on an edge ``j`` leaving ``v`` the solution reads
``y_j = A_v c_j + sqrt(lam) B_j s_j``. Rows are the ``|V|`` Kirchhoff
conditions followed by the ``|E|`` continuity conditions at edge heads.

Two forms are built:

* the scaled matrix ``M`` with blocks exactly as in the classical
  presentation (entries ``c'/sqrt(lam)`` and ``sqrt(lam) s``), defined for
  ``lam > 0`` only;
* the regular matrix ``M_hat`` in the unknowns ``(A_v, sqrt(lam) B_j)`` with
  Kirchhoff rows multiplied by ``sqrt(lam)``. Its entries are ``c, c', s,
  s'`` and constants, so it is real and entire in ``lam`` and
  ``det M = lam^((|E|-|V|)/2) det M_hat``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graph import MetricGraph
from .propagator import TransferData, transfer_table

NULLSPACE_TOL = 1e-7


@dataclass(frozen=True)
class CharacteristicMatrix:
    matrix: np.ndarray
    scaled: bool
    lam: float
    n_vertices: int
    n_edges: int

    @property
    def A(self) -> np.ndarray:
        return self.matrix[: self.n_vertices, : self.n_vertices]

    @property
    def B(self) -> np.ndarray:
        return self.matrix[: self.n_vertices, self.n_vertices:]

    @property
    def C(self) -> np.ndarray:
        return self.matrix[self.n_vertices:, : self.n_vertices]

    @property
    def D(self) -> np.ndarray:
        return self.matrix[self.n_vertices:, self.n_vertices:]


@dataclass(frozen=True)
class CoefficientVector:
    """Vertex values A_v and edge coefficients (B_j, or sqrt(lam) B_j for M_hat)."""

    vertex: np.ndarray
    edge: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.vertex, self.edge])


def edge_transfers(graph: MetricGraph, potentials: Mapping | None, lam: float) -> list[TransferData]:
    potentials = potentials or {}
    return transfer_table([potentials.get(e.id) for e in graph.edges], lam)


def _assemble(graph: MetricGraph, transfers, cp_scale: float, s_scale: float) -> np.ndarray:
    nv, ne = graph.n_vertices, graph.n_edges
    M = np.zeros((nv + ne, nv + ne))
    for j, (e, td) in enumerate(zip(graph.edges, transfers)):
        c, cp, s, sp = td.as_floats()
        u, v = graph.vertex_index(e.tail), graph.vertex_index(e.head)
        col, row = nv + j, nv + j
        # Kirchhoff row at the head collects y'(1); the tail row subtracts y'(0).
        M[v, u] += cp * cp_scale
        M[v, col] += sp
        M[u, col] -= 1.0
        # continuity at the head: A_u c(1) + (edge coeff) s(1) - A_v = 0
        M[row, u] += c
        M[row, v] -= 1.0
        M[row, col] = s * s_scale
    return M


def assemble_regular(graph: MetricGraph, potentials: Mapping | None, lam: float) -> CharacteristicMatrix:
    """The regular matrix M_hat, valid for every real ``lam``."""
    transfers = edge_transfers(graph, potentials, lam)
    M = _assemble(graph, transfers, 1.0, 1.0)
    return CharacteristicMatrix(M, False, float(lam), graph.n_vertices, graph.n_edges)


def assemble_scaled(graph: MetricGraph, potentials: Mapping | None, lam: float) -> CharacteristicMatrix:
    """The scaled matrix M; requires ``lam > 0``."""
    if not lam > 0:
        raise ValueError("positive lambda required; use assemble_regular for lambda <= 0")
    root = math.sqrt(lam)
    transfers = edge_transfers(graph, potentials, lam)
    M = _assemble(graph, transfers, 1.0 / root, root)
    return CharacteristicMatrix(M, True, float(lam), graph.n_vertices, graph.n_edges)


def determinant(m: CharacteristicMatrix | np.ndarray) -> float:
    matrix = m.matrix if isinstance(m, CharacteristicMatrix) else np.asarray(m)
    return float(np.linalg.det(matrix))


def singular_values(m: CharacteristicMatrix) -> np.ndarray:
    return np.linalg.svd(m.matrix, compute_uv=False)


def nullspace(m: CharacteristicMatrix, tol: float = NULLSPACE_TOL) -> tuple[int, list[CoefficientVector]]:
    """Numerical nullspace from the SVD.

    A singular value counts as zero when it is below ``tol * max(1, s_max)``.
    The floor of 1 matters at points where the whole matrix vanishes (the
    flower graph at ``lam = (2 pi m)^2``); otherwise the relative threshold
    would be measured against rounding noise. Basis vectors have unit norm
    and their first nonzero component positive.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _, sv, vt = np.linalg.svd(m.matrix)
    cutoff = tol * max(1.0, sv[0] if sv.size else 0.0)
    dim = int(np.sum(sv < cutoff))
    basis = []
    for vec in vt[len(sv) - dim:]:
        vec = vec.copy()
        nz = np.flatnonzero(np.abs(vec) > 1e-12)
        if nz.size and vec[nz[0]] < 0:
            vec = -vec
        basis.append(CoefficientVector(vec[: m.n_vertices], vec[m.n_vertices:]))
    return dim, basis


def flower_determinant(transfers: list[TransferData], lam: float) -> float:
    """Closed form of det M for a single vertex carrying r loops."""
    r = len(transfers)
    vals = [td.as_floats() for td in transfers]
    s = [v[2] for v in vals]
    first = sum(v[1] for v in vals) * math.prod(s)
    second = sum((sp - 1.0) * (c - 1.0) * math.prod(s[:k] + s[k + 1:])
                 for k, (c, _, _, sp) in enumerate(vals))
    return lam ** ((r - 1) / 2) * (first - second)
