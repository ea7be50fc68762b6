"""Real eigenvalues of the graph operator, their multiplicities and clusters.

Eigenvalues are the zeros of ``det M_hat(lam)``. Zeros of even multiplicity
do not change the sign of the determinant, so the detector works with the
smallest singular value of ``M_hat`` instead: candidates are local minima of
``sigma_min`` on a grid uniform in ``sign(lam) sqrt|lam|``, refined by
golden-section search and accepted when ``sigma_min`` drops below the
nullspace threshold. A second branch of a singular value can dip to zero
inside a window narrower than the grid, hiding behind a smoother
``sigma_min``; sign changes of the determinant between grid points are
therefore bracketed and solved as well. The multiplicity is the nullspace
dimension at each accepted point.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Mapping, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .charmatrix import NULLSPACE_TOL, assemble_regular, nullspace
from .graph import MetricGraph
from .propagator import cluster_lambda

THREADS_ENV = "QGRAPH_THREADS"

_INV_PHI = (math.sqrt(5) - 1) / 2


class NoEigenvalueError(ValueError):
    """Raised by :func:`refine_eigenvalue` when a bracket holds no eigenvalue."""


class Eigenvalue(NamedTuple):
    value: float
    multiplicity: int


@dataclass(frozen=True)
class ScanOptions:
    step: float = 0.05          # grid spacing in sign(lam) sqrt|lam|
    refine_tol: float = 1e-10   # relative to max(1, |lam|)
    tol_sv: float = NULLSPACE_TOL
    threads: int | None = None  # None: read QGRAPH_THREADS, default 1

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if not self.refine_tol > 0 or not self.tol_sv > 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[Eigenvalue, ...]
    lambda_lo: float
    lambda_hi: float
    options: ScanOptions
    graph: MetricGraph = field(repr=False, compare=False)

    @property
    def values(self) -> list[float]:
        return [e.value for e in self.eigenvalues]

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.eigenvalues)


@dataclass(frozen=True)
class ClusterRecord:
    k: int
    members: tuple[Eigenvalue, ...]
    total_multiplicity: int
    shifts: tuple[float, ...]   # lam - (2k+1)^2 pi^2 per member
    half_width: float


def _thread_count(opts: ScanOptions) -> int:
    if opts.threads is not None:
        return max(1, int(opts.threads))
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _signed_root(lam: float) -> float:
    return math.copysign(math.sqrt(abs(lam)), lam)


def singular_range(graph: MetricGraph, potentials: Mapping | None, lam: float) -> tuple[float, float]:
    """(sigma_min, sigma_max) of the regular matrix at ``lam``."""
    sv = np.linalg.svd(assemble_regular(graph, potentials, lam).matrix, compute_uv=False)
    return float(sv[-1]), float(sv[0])


def sigma_min(graph: MetricGraph, potentials: Mapping | None, lam: float) -> float:
    return singular_range(graph, potentials, lam)[0]


def golden_section(f, a: float, b: float, tol: float) -> tuple[float, float]:
    """Minimise ``f`` on [a, b] down to an interval of width ``tol``.

    Returns ``(x, f(x))`` for the best point seen.
    """
    a, b = min(a, b), max(a, b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    t_lo, t_hi = _signed_root(lo), _signed_root(hi)
    n = max(3, int(math.ceil((t_hi - t_lo) / step)) + 1)
    t = np.linspace(t_lo, t_hi, n)
    lams = t * np.abs(t)
    lams[0], lams[-1] = lo, hi
    return lams


def _sv_and_det(graph, potentials, lam: float) -> tuple[float, float]:
    m = assemble_regular(graph, potentials, lam).matrix
    return float(np.linalg.svd(m, compute_uv=False)[-1]), float(np.linalg.det(m))


def _evaluate(graph, potentials, lams, opts) -> tuple[np.ndarray, np.ndarray]:
    """(sigma_min, det M_hat) on every grid point."""
    fn = lambda lam: _sv_and_det(graph, potentials, float(lam))
    threads = _thread_count(opts)
    if threads == 1:
        pairs = [fn(x) for x in lams]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pairs = list(pool.map(fn, lams))
    arr = np.array(pairs).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def _det_root(graph, potentials, a: float, b: float, opts) -> float:
    f = lambda lam: float(np.linalg.det(assemble_regular(graph, potentials, lam).matrix))
    tol = opts.refine_tol * max(1.0, abs(a), abs(b))
    return brentq(f, a, b, xtol=tol)


def _accept(graph, potentials, lam, opts) -> int:
    """Multiplicity at ``lam``, or 0 when ``lam`` is not an eigenvalue."""
    dim, _ = nullspace(assemble_regular(graph, potentials, lam), opts.tol_sv)
    return dim


def _refine(graph, potentials, a, b, opts) -> tuple[float, float]:
    f = lambda lam: sigma_min(graph, potentials, lam)
    tol = opts.refine_tol * max(1.0, abs(a), abs(b))
    return golden_section(f, a, b, tol)


MAX_RESCAN_DEPTH = 3
_RESCAN_FACTOR = 8


def _merge(graph, potentials, found: list[float], opts) -> list[Eigenvalue]:
    found = sorted(found)
    merged: list[Eigenvalue] = []
    i = 0
    while i < len(found):
        group = [found[i]]
        while (i + 1 < len(found)
               and found[i + 1] - group[-1] <= 10 * opts.refine_tol * max(1.0, abs(found[i + 1]))):
            i += 1
            group.append(found[i])
        lam = group[0] if len(group) == 1 else 0.5 * (group[0] + group[-1])
        mult = _accept(graph, potentials, lam, opts)
        if mult == 0 and len(group) > 1:
            lam = group[0]
            mult = _accept(graph, potentials, lam, opts)
        if mult:
            merged.append(Eigenvalue(float(lam), mult))
        i += 1
    return merged


def _scan(graph, potentials, lo, hi, opts, depth) -> list[Eigenvalue]:
    lams = _grid(lo, hi, opts.step)
    vals, dets = _evaluate(graph, potentials, lams, opts)

    n = len(lams)
    found: list[float] = []
    for i in range(n):
        left = vals[i - 1] if i > 0 else math.inf
        right = vals[i + 1] if i < n - 1 else math.inf
        if vals[i] <= left and vals[i] < right or vals[i] < left and vals[i] <= right:
            lam, _ = _refine(graph, potentials, lams[max(i - 1, 0)], lams[min(i + 1, n - 1)], opts)
            if _accept(graph, potentials, lam, opts):
                found.append(lam)
    flips = dets[:-1] * dets[1:] < 0
    for i in np.flatnonzero(flips):
        lam = _det_root(graph, potentials, float(lams[i]), float(lams[i + 1]), opts)
        if _accept(graph, potentials, lam, opts):
            found.append(lam)
    merged = _merge(graph, potentials, found, opts)
    if depth >= MAX_RESCAN_DEPTH:
        return merged

    # In each grid cell the multiplicity found must have the parity of the
    # determinant's sign change; otherwise zeros were missed, so look closer.
    values = np.array([e.value for e in merged])
    mults = np.array([e.multiplicity for e in merged], dtype=int)
    finer = replace(opts, step=opts.step / _RESCAN_FACTOR)
    extra: list[Eigenvalue] = []
    for i in range(n - 1):
        if dets[i] == 0.0 or dets[i + 1] == 0.0:
            continue
        inside = (values >= lams[i]) & (values < lams[i + 1])
        if int(mults[inside].sum()) % 2 != int(flips[i]):
            sub = _scan(graph, potentials, float(lams[i]), float(lams[i + 1]), finer, depth + 1)
            extra.extend(sub)
    if not extra:
        return merged
    return _merge(graph, potentials, [e.value for e in merged] + [e.value for e in extra], opts)


def scan_spectrum(graph: MetricGraph, potentials: Mapping | None, lambda_lo: float,
                  lambda_hi: float, opts: ScanOptions | None = None) -> SpectrumReport:
    """All eigenvalues in ``[lambda_lo, lambda_hi]`` with multiplicities.

    Grid cells whose determinant sign disagrees with the parity of what was
    found are rescanned with a finer step, up to :data:`MAX_RESCAN_DEPTH` times.
    Pairs of eigenvalues closer than the final step can still be missed.
    """
    opts = opts or ScanOptions()
    if not lambda_lo < lambda_hi:
        raise ValueError("lambda_lo must be below lambda_hi")
    merged = _scan(graph, potentials, float(lambda_lo), float(lambda_hi), opts, 0)
    return SpectrumReport(tuple(merged), float(lambda_lo), float(lambda_hi), opts, graph)


def refine_eigenvalue(graph: MetricGraph, potentials: Mapping | None, bracket: tuple[float, float],
                      opts: ScanOptions | None = None) -> tuple[float, int]:
    """Locate the eigenvalue inside ``bracket``; returns ``(lam, multiplicity)``."""
    opts = opts or ScanOptions()
    a, b = sorted(map(float, bracket))
    lams = np.linspace(a, b, 33)
    vals, _ = _evaluate(graph, potentials, lams, opts)
    i = int(np.argmin(vals))
    lam, _ = _refine(graph, potentials, lams[max(i - 1, 0)], lams[min(i + 1, len(lams) - 1)], opts)
    mult = _accept(graph, potentials, lam, opts)
    interior = a < lam < b
    if not mult or not interior:
        raise NoEigenvalueError(f"no eigenvalue in bracket ({a}, {b})")
    return float(lam), mult


def potential_bounds(graph: MetricGraph, potentials: Mapping | None) -> tuple[float, float]:
    """(smallest piece value, mean of q over the graph); missing edges count as q = 0."""
    potentials = potentials or {}
    pots = [potentials.get(e.id) for e in graph.edges]
    low = min(q.minimum() if q is not None else 0.0 for q in pots)
    mean = sum(q.integral() if q is not None else 0.0 for q in pots) / graph.n_edges
    return low, mean


def smallest_eigenvalue(graph: MetricGraph, potentials: Mapping | None,
                        opts: ScanOptions | None = None) -> float:
    """Ground state, searched between ``min q - 1`` and the constant-function Rayleigh quotient."""
    low, mean = potential_bounds(graph, potentials)
    report = scan_spectrum(graph, potentials, low - 1.0, mean + 1.0, opts)
    if not report.eigenvalues:
        raise RuntimeError("no eigenvalue below the Rayleigh bound; scan step too coarse")
    return report.eigenvalues[0].value


@lru_cache(maxsize=64)
def cluster_half_width(graph: MetricGraph) -> float:
    """Half the gap, in sqrt(lam), from (2k+1) pi to the nearest other q = 0 eigenvalue family.

    At zero potential the eigenvalues are 2 pi periodic in sqrt(lam), so one
    period decides the gap. For flowers the nearest families sit at even
    multiples of pi and the result is pi/2; cycles of length n > 1 bring
    families closer to (2k+1) pi.
    """
    report = scan_spectrum(graph, None, -0.5, (2 * math.pi + 0.2) ** 2)
    gaps = [abs(math.sqrt(max(lam, 0.0)) - math.pi) for lam in report.values]
    gaps = [g for g in gaps if g > 1e-6]
    return min([math.pi] + gaps) / 2


def cluster_analysis(report: SpectrumReport, k_lo: int, k_hi: int,
                     half_width: float | None = None) -> list[ClusterRecord]:
    """Group eigenvalues by ``|sqrt(lam) - (2k+1) pi| <= half_width``."""
    if k_lo < 0 or k_hi < k_lo:
        raise ValueError("need 0 <= k_lo <= k_hi")
    need_lo = (2 * k_lo) ** 2 * math.pi**2
    need_hi = (2 * k_hi + 2) ** 2 * math.pi**2
    slack = 1e-9 * need_hi
    if report.lambda_lo > need_lo + slack or report.lambda_hi < need_hi - slack:
        raise ValueError("report range insufficient for the requested clusters")
    if half_width is None:
        half_width = cluster_half_width(report.graph)
    out = []
    for k in range(k_lo, k_hi + 1):
        center = (2 * k + 1) * math.pi
        members = tuple(e for e in report.eigenvalues
                        if e.value > 0 and abs(math.sqrt(e.value) - center) <= half_width)
        out.append(ClusterRecord(
            k=k,
            members=members,
            total_multiplicity=sum(e.multiplicity for e in members),
            shifts=tuple(e.value - cluster_lambda(k) for e in members),
            half_width=half_width,
        ))
    return out


def cluster_scan(graph: MetricGraph, potentials: Mapping | None, k: int,
                 opts: ScanOptions | None = None, half_width: float | None = None) -> ClusterRecord:
    """Scan only the range needed for cluster ``k`` and analyse it."""
    lo = (2 * k) ** 2 * math.pi**2
    hi = (2 * k + 2) ** 2 * math.pi**2
    report = scan_spectrum(graph, potentials, lo, hi, opts)
    return cluster_analysis(report, k, k, half_width)[0]
