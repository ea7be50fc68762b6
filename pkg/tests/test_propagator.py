import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from qgraph.propagator import (
    SERIES_THRESHOLD,
    EdgePotential,
    asymptotic_predictions,
    propagate,
    scaled_quantities,
    transfer_zero_oracle,
)

PI = math.pi


def random_potential(rng, max_pieces=4, scale=20.0):
    m = rng.randint(1, max_pieces)
    inner = sorted(rng.uniform(0.05, 0.95) for _ in range(m - 1))
    bp = [0.0] + inner + [1.0]
    if any(b - a < 1e-3 for a, b in zip(bp, bp[1:])):
        bp = [i / m for i in range(m + 1)]
    return EdgePotential(tuple(bp), tuple(rng.uniform(-scale, scale) for _ in range(m)))


def ode_oracle(q, lam):
    """Integrate -y'' + q y = lam y piece by piece with a high-order RK scheme."""
    y = np.array([[1.0, 0.0], [0.0, 1.0]])  # columns: (c, c'), (s, s')
    for (a, b), v in zip(zip(q.breakpoints, q.breakpoints[1:]), q.values):
        rhs = lambda x, u, v=v: [u[1], (v - lam) * u[0], u[3], (v - lam) * u[2]]
        sol = solve_ivp(rhs, (a, b), [y[0, 0], y[1, 0], y[0, 1], y[1, 1]],
                        method="DOP853", rtol=1e-12, atol=1e-13)
        u = sol.y[:, -1]
        y = np.array([[u[0], u[2]], [u[1], u[3]]])
    return y[0, 0], y[1, 0], y[0, 1], y[1, 1]


class TestPropagate:
    @pytest.mark.parametrize("q, lam, expected", [
        (EdgePotential.zero(), PI**2, (-1, 0, 0, -1)),
        (EdgePotential.zero(), 0.0, (1, 0, 1, 1)),
        (EdgePotential.constant(5.0), 5.0, (1, 0, 1, 1)),
        (EdgePotential.zero(), -PI**2, (math.cosh(PI), PI * math.sinh(PI), math.sinh(PI) / PI, math.cosh(PI))),
    ])
    def test_closed_forms(self, q, lam, expected):
        np.testing.assert_allclose(propagate(q, lam).as_floats(), expected, atol=1e-14, rtol=1e-14)

    def test_none_means_zero(self):
        assert propagate(None, 3.0) == propagate(EdgePotential.zero(), 3.0)

    def test_against_ode_integrator(self):
        rng = random.Random(11)
        for _ in range(15):
            q = random_potential(rng, scale=10.0)
            lam = rng.uniform(-30, 300)
            got = np.array(propagate(q, lam).as_floats())
            want = np.array(ode_oracle(q, lam))
            assert np.max(np.abs(got - want)) <= 1e-8 * max(1.0, np.max(np.abs(want)))

    def test_split_piece_is_identity(self):
        # splitting a constant piece must not change the result
        q1 = EdgePotential.constant(2.5)
        q2 = EdgePotential((0.0, 0.375, 1.0), (2.5, 2.5))
        for lam in (-40.0, 0.0, 2.5, 17.0, 900.0):
            np.testing.assert_allclose(propagate(q1, lam).as_floats(), propagate(q2, lam).as_floats(),
                                       rtol=1e-14, atol=1e-14)

    def test_series_branch_matches_closed_form(self):
        q = EdgePotential.constant(3.0)
        edge = math.sqrt(SERIES_THRESHOLD)
        for offset in (0.5 * edge, 0.999 * edge, 1.001 * edge, -0.999 * edge, -1.001 * edge):
            lam = 3.0 + offset
            with mpmath.workdps(50):
                w2 = mpmath.mpf(lam) - 3
                w = mpmath.sqrt(w2) if w2 > 0 else mpmath.sqrt(-w2)
                if w2 > 0:
                    ref = (mpmath.cos(w), -w * mpmath.sin(w), mpmath.sin(w) / w, mpmath.cos(w))
                else:
                    ref = (mpmath.cosh(w), w * mpmath.sinh(w), mpmath.sinh(w) / w, mpmath.cosh(w))
                td = propagate(q, lam)
                err = max(abs(a - b) for a, b in zip((td.c1, td.c1p, td.s1, td.s1p), ref))
            assert err < 1e-25

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(-100, 2000))
    def test_wronskian(self, seed, lam):
        q = random_potential(random.Random(seed))
        assert abs(propagate(q, lam).wronskian() - 1) <= 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(-100, 2000), st.integers(-50, 50))
    def test_constant_shift_identity(self, seed, lam, c):
        rng = random.Random(seed)
        m = rng.randint(1, 3)
        q = EdgePotential(tuple(i / m for i in range(m + 1)), tuple(float(rng.randint(-20, 20)) for _ in range(m)))
        assert propagate(q.shifted(c), lam + c) == propagate(q, lam)

    def test_real_values(self):
        td = propagate(EdgePotential((0.0, 0.5, 1.0), (1.0, -1.0)), -7.0)
        assert all(isinstance(v, float) for v in td.as_floats())


class TestZeroOracle:
    @pytest.mark.parametrize("lam, expected", [
        (4 * PI**2, (1, 0, 0, 1)),
        (PI**2 / 4, (0, -PI / 2, 2 / PI, 0)),
        (0.0, (1, 0, 1, 1)),
    ])
    def test_examples(self, lam, expected):
        np.testing.assert_allclose(transfer_zero_oracle(lam).as_floats(), expected, atol=1e-14)

    def test_matches_propagate(self):
        for lam in np.linspace(-100, 2000, 301):
            a = np.array(propagate(None, lam).as_floats())
            b = np.array(transfer_zero_oracle(lam).as_floats())
            assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(b)))


class TestAsymptotics:
    def test_zero_potential_predictions(self):
        p = asymptotic_predictions(EdgePotential.zero(), 3, 0.0)
        assert (p.cp_over_root, p.sp, p.c, p.root_s) == (0.0, -1.0, -1.0, 0.0)

    def test_cancellation(self):
        p = asymptotic_predictions(EdgePotential.constant(2.0), 10, 2.0)
        assert p.cp_over_root == 0.0 and p.root_s == 0.0

    def test_k1_d1(self):
        p = asymptotic_predictions(EdgePotential.zero(), 1, 1.0)
        # 1 / (2 sqrt(9 pi^2 + 1)), frozen from the closed form
        assert p.cp_over_root == pytest.approx(0.05275552037676151, rel=1e-14)
        assert p.root_s == pytest.approx(-0.05275552037676151, rel=1e-14)
        assert p.cp_over_root == pytest.approx(1 / (6 * PI), rel=1e-2)

    def test_negative_k(self):
        with pytest.raises(ValueError):
            asymptotic_predictions(None, -1, 0.0)

    def test_residuals_shrink(self):
        q = EdgePotential((0.0, 0.3, 0.6, 1.0), (4.0, -2.0, 1.0))
        d = -0.7
        res = {}
        for k in (10, 200):
            pred = asymptotic_predictions(q, k, d)
            got = scaled_quantities(propagate(q, pred.lam), pred.lam)
            want = (pred.cp_over_root, pred.sp, pred.c, pred.root_s)
            res[k] = [math.sqrt(pred.lam) * abs(a - b) for a, b in zip(got, want)]
        for r10, r200 in zip(res[10], res[200]):
            assert r200 < r10 and r200 < 1e-2


class TestPotential:
    def test_validation(self):
        with pytest.raises(ValueError):
            EdgePotential((0.0, 0.5), (1.0,))
        with pytest.raises(ValueError):
            EdgePotential((0.0, 0.5, 0.5, 1.0), (1.0, 2.0, 3.0))
        with pytest.raises(ValueError):
            EdgePotential((0.0, 1.0), (1.0, 2.0))

    def test_integral_is_exact(self):
        q = EdgePotential((0.0, 0.25, 0.75, 1.0), (2.0, 0.0, 2.0))
        assert q.integral() == 1.0
        assert EdgePotential.zero().integral() == 0.0

    def test_evaluate(self):
        q = EdgePotential((0.0, 0.25, 1.0), (3.0, -1.0))
        assert (q(0.1), q(0.5), q(1.0)) == (3.0, -1.0, -1.0)
