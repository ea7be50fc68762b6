"""Fundamental solutions of -y'' + q y = lambda y on one unit edge.

Potentials are piecewise constant, so each piece is propagated exactly by
its constant-coefficient 2x2 transfer matrix. The arithmetic runs in
``mpmath`` at :data:`WORKING_DPS` digits: in the hyperbolic regime the
endpoint values grow like ``exp(sqrt(q - lambda))`` and double precision
cannot keep the Wronskian within 1e-12 of 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

WORKING_DPS = 30

# below this |omega^2 h^2| the trigonometric/hyperbolic forms switch to series
SERIES_THRESHOLD = 1e-8

_ctx = mpmath.MPContext()
_ctx.dps = WORKING_DPS


@dataclass(frozen=True)
class EdgePotential:
    """Piecewise-constant potential on [0, 1].

    ``values[i]`` is the potential on ``[breakpoints[i], breakpoints[i+1]]``.
    """

    breakpoints: tuple[float, ...] = (0.0, 1.0)
    values: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(bp) < 2 or bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(vals) != len(bp) - 1:
            raise ValueError("need exactly one value per piece")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("potential values must be finite")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls) -> EdgePotential:
        return cls()

    @classmethod
    def constant(cls, value: float) -> EdgePotential:
        return cls((0.0, 1.0), (value,))

    @property
    def pieces(self) -> list[tuple[float, float]]:
        """(length, value) for each piece."""
        bp = self.breakpoints
        return [(b - a, v) for a, b, v in zip(bp, bp[1:], self.values)]

    def integral(self) -> float:
        return float(self.exact_integral())

    def exact_integral(self) -> Fraction:
        bp = [Fraction(x) for x in self.breakpoints]
        return sum((Fraction(v) * (b - a) for a, b, v in zip(bp, bp[1:], self.values)),
                   Fraction(0))

    def shifted(self, c: float) -> EdgePotential:
        return EdgePotential(self.breakpoints, tuple(v + c for v in self.values))

    def minimum(self) -> float:
        return min(self.values)

    def __call__(self, x: float) -> float:
        for b, v in zip(self.breakpoints[1:], self.values):
            if x <= b:
                return v
        raise ValueError("x outside [0, 1]")


ZERO = EdgePotential()


@dataclass(frozen=True)
class TransferData:
    """c(1), c'(1), s(1), s'(1) for one edge, as mpmath reals."""

    c1: mpmath.mpf
    c1p: mpmath.mpf
    s1: mpmath.mpf
    s1p: mpmath.mpf

    def wronskian(self):
        return self.c1 * self.s1p - self.c1p * self.s1

    def as_floats(self) -> tuple[float, float, float, float]:
        return float(self.c1), float(self.c1p), float(self.s1), float(self.s1p)


@dataclass(frozen=True)
class TransferPrediction:
    """Leading-order large-lambda values at lambda = (2k+1)^2 pi^2 + d."""

    k: int
    d: float
    lam: float
    cp_over_root: float   # c'(1)/sqrt(lambda)
    sp: float             # s'(1)
    c: float              # c(1)
    root_s: float         # sqrt(lambda) s(1)


def _piece_matrix(omega2, h):
    """Transfer matrix [[a, b], [c, d]] of one constant piece of length h."""
    x = omega2 * h * h
    if abs(x) < SERIES_THRESHOLD:
        # cos(w h) and sin(w h)/w as series in x = w^2 h^2
        cs = 1 - x / 2 + x**2 / 24 - x**3 / 720
        sn_over = h * (1 - x / 6 + x**2 / 120 - x**3 / 5040)
    elif omega2 > 0:
        w = _ctx.sqrt(omega2)
        cs = _ctx.cos(w * h)
        sn_over = _ctx.sin(w * h) / w
    else:
        w = _ctx.sqrt(-omega2)
        cs = _ctx.cosh(w * h)
        sn_over = _ctx.sinh(w * h) / w
    return cs, sn_over, -omega2 * sn_over, cs


def propagate(q: EdgePotential | None, lam: float) -> TransferData:
    """Endpoint values of the fundamental solutions c and s at x = 1.

    ``c(0) = 1, c'(0) = 0`` and ``s(0) = 0, s'(0) = 1``; the state
    ``(y, y')`` is carried across each piece by
    ``[[cos wh, sin(wh)/w], [-w sin wh, cos wh]]`` with ``w^2 = lam - q``.
    """
    if q is None:
        q = ZERO
    lam = _ctx.mpf(lam)
    # fundamental matrix [[c, s], [c', s']]
    f00, f01, f10, f11 = _ctx.one, _ctx.zero, _ctx.zero, _ctx.one
    for h, v in q.pieces:
        a, b, c, d = _piece_matrix(lam - _ctx.mpf(v), _ctx.mpf(h))
        f00, f01, f10, f11 = (a * f00 + b * f10, a * f01 + b * f11,
                              c * f00 + d * f10, c * f01 + d * f11)
    return TransferData(f00, f10, f01, f11)


def transfer_zero_oracle(lam: float) -> TransferData:
    """Closed-form c, s for q = 0, evaluated directly in double precision."""
    if lam > 0:
        w = math.sqrt(lam)
        vals = (math.cos(w), -w * math.sin(w), math.sin(w) / w, math.cos(w))
    elif lam < 0:
        w = math.sqrt(-lam)
        vals = (math.cosh(w), w * math.sinh(w), math.sinh(w) / w, math.cosh(w))
    else:
        vals = (1.0, 0.0, 1.0, 1.0)
    return TransferData(*(mpmath.mpf(v) for v in vals))


def cluster_lambda(k: int, d: float = 0.0) -> float:
    """(2k+1)^2 pi^2 + d."""
    return (2 * k + 1) ** 2 * math.pi**2 + d


def asymptotic_predictions(q: EdgePotential | None, k: int, d: float) -> TransferPrediction:
    if k < 0:
        raise ValueError("k must be non-negative")
    if q is None:
        q = ZERO
    lam = cluster_lambda(k, d)
    root = math.sqrt(lam)
    mean = q.integral()
    return TransferPrediction(
        k=k, d=d, lam=lam,
        cp_over_root=(d - mean) / (2 * root),
        sp=-1.0,
        c=-1.0,
        root_s=(mean - d) / (2 * root),
    )


def scaled_quantities(td: TransferData, lam: float) -> tuple[float, float, float, float]:
    """The four quantities compared against :func:`asymptotic_predictions`."""
    root = _ctx.sqrt(_ctx.mpf(lam))
    return (float(td.c1p / root), float(td.s1p), float(td.c1), float(root * td.s1))


def transfer_table(potentials: Sequence[EdgePotential | None], lam: float) -> list[TransferData]:
    """Propagate every edge potential, reusing results for identical potentials."""
    cache: dict = {}
    out = []
    for q in potentials:
        key = q if q is not None else ZERO
        if key not in cache:
            cache[key] = propagate(key, lam)
        out.append(cache[key])
    return out
