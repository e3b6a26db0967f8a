import math

import numpy as np
import pytest

from mhd_idp.brent import BrentConfig, BrentResult, minimize

from .oracles import golden_section_min


def test_quadratic_exact():
    calls = [0]

    def f(x):
        calls[0] += 1
        return (x - 2.0) ** 2

    res = minimize(f, 0.0, 5.0)
    assert res.converged
    assert res.x_min == pytest.approx(2.0, abs=1e-12)
    assert res.n_evals == calls[0]


def test_convex_nonsmooth():
    res = minimize(lambda x: abs(x - 1.0), 0.0, 3.0)
    ref = golden_section_min(lambda x: abs(x - 1.0), 0.0, 3.0, tol=1e-12)
    assert res.x_min == pytest.approx(1.0, abs=1e-10)
    assert abs(res.x_min - ref) < 1e-9


def test_eval_budget():
    cfg = BrentConfig()
    res = minimize(lambda x: math.cos(x), 0.0, 6.0, cfg)
    assert res.n_evals <= cfg.max_iters + 3


def test_result_within_bracket(rng):
    for _ in range(200):
        a = rng.uniform(-10, 5)
        b = a + rng.uniform(1e-8, 10)
        c = rng.uniform(a, b)
        res = minimize(lambda x: (x - c) ** 4 + 0.1 * abs(x - c), a, b)
        assert a <= res.x_min <= b


def test_convex_grid_optimality(rng):
    """f(x_min) beats a dense grid up to the argument tolerance."""
    for _ in range(30):
        c1 = rng.uniform(-3, 3)
        c2 = rng.uniform(0.1, 5)
        f = lambda x: c2 * (x - c1) ** 2 + abs(x - c1)
        a, b = c1 - rng.uniform(1, 5), c1 + rng.uniform(1, 5)
        res = minimize(f, a, b)
        grid = np.linspace(a, b, 10_000)
        fgrid = c2 * (grid - c1) ** 2 + np.abs(grid - c1)
        k = np.argmin(fgrid)
        assert res.converged
        assert abs(res.x_min - grid[k]) <= 2 * ((b - a) / 10_000) + 1e-10


def test_nonconvergence_reported():
    cfg = BrentConfig(max_iters=3)
    res = minimize(lambda x: (x - 0.3) ** 2, -50.0, 80.0, cfg)
    assert not res.converged
    assert -50.0 <= res.x_min <= 80.0


def test_degenerate_interval():
    res = minimize(lambda x: x * x, 1.5, 1.5)
    assert res.x_min == 1.5
    assert res.n_evals == 1


def test_invalid_inputs():
    with pytest.raises(ValueError):
        minimize(lambda x: x, 1.0, 0.0)
    with pytest.raises(ValueError):
        BrentConfig(abs_tol=0.0)
