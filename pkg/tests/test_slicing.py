import math

import numpy as np
import pytest

from mhd_idp import GasParams, is_admissible
from mhd_idp.brent import BrentConfig
from mhd_idp.slicing import (eval_d2, project_admissible,
                             project_admissible_row, search_interval)

from .conftest import random_infeasible_points
from .oracles import grid_min_d2, mhd_kkt_residual, slice_dist2_profile

# out-of-bound points from the validation study
MANUFACTURED = (1.0, np.array([1.25, 2.0, 0.0]), 2.0, np.array([5.0, 1.7, 0.0]))
ASTRO = (1.41, np.array([1124.0, -0.31, 0.0]), 4.51e5, np.array([44.9, -0.026, 0.0]))


def test_manufactured_point_interval_and_minimizer():
    u, v, w, z = MANUFACTURED
    res = project_admissible(u, v, w, z, 1e-13)
    lo, hi = res.interval
    assert lo == pytest.approx(0.121, abs=0.01)
    assert hi == pytest.approx(27.89, abs=1e-12)
    assert res.beta_star == pytest.approx(5.44, abs=0.01)
    assert lo <= res.beta_star <= hi
    assert res.converged


def test_astro_point_interval():
    # the printed digits round to an admissible state, so drive the
    # slicing machinery directly through the interval + objective API
    u, v, w, z = ASTRO
    lo, hi, f0 = search_interval(u, v, w, z, 1e-6)
    assert lo == pytest.approx(1.98e-3, rel=0.01)
    assert hi == pytest.approx(2017.5, rel=0.01)
    from mhd_idp.brent import minimize
    res = minimize(lambda b: eval_d2(u, v, w, z, 1e-6, b), lo, hi)
    assert abs(res.x_min - hi) <= 1e-3 * hi


def test_admissible_input_identity():
    res = project_admissible(1.0, [0, 0, 0], 1.0, [0.1, 0, 0], 1e-13)
    assert res.dist2 == 0.0
    assert res.n_slice_calls == 0
    assert res.state.rho == 1.0


def test_zero_z_branch():
    res = project_admissible(1.0, [0, 0, 0], -1.0, [0.0, 0.0, 0.0], 1e-6)
    assert np.all(res.state.B == 0.0)
    assert res.beta_star == 0.0
    assert res.state.E == pytest.approx(1e-6, abs=0)
    assert res.n_slice_calls == 1


def test_output_magnetic_direction():
    u, v, w, z = MANUFACTURED
    res = project_admissible(u, v, w, z, 1e-13)
    zdir = z / np.linalg.norm(z)
    assert np.allclose(res.state.B, math.sqrt(res.beta_star) * zdir, rtol=1e-13)


def test_eval_d2_h_vanishes_at_znorm2():
    u, v, w, z = MANUFACTURED
    znorm2 = float(z @ z)
    d2 = eval_d2(u, v, w, z, 1e-13, znorm2)
    from mhd_idp.euler_projection import project_slice
    assert d2 == pytest.approx(project_slice(u, v, w, 1e-13, znorm2).dist2, rel=1e-14)


def test_eval_d2_convex_on_grid():
    u, v, w, z = MANUFACTURED
    lo, hi, _ = search_interval(u, v, w, z, 1e-13)
    betas = np.linspace(lo, hi, 1000)
    vals = np.array([eval_d2(u, v, w, z, 1e-13, b) for b in betas])
    mids = 0.5 * (vals[:-2] + vals[2:])
    assert np.all(vals[1:-1] <= mids + 1e-9 * (1 + np.abs(mids)))
    # f increasing, h strictly convex (validation-figure shape)
    h = (np.sqrt(betas) - np.linalg.norm(z)) ** 2
    f = vals - h
    assert np.all(np.diff(f) >= -1e-9)


def test_projection_results_admissible(rng):
    pts = random_infeasible_points(rng, 300)
    for row, eps in pts:
        res = project_admissible_row(row, eps)
        par = GasParams(2.0, eps * (1 - 1e-9))
        assert is_admissible(res.state, par)
        assert res.interval[0] <= res.beta_star <= res.interval[1] + 1e-12


def test_projection_against_grid_oracle(rng):
    pts = random_infeasible_points(rng, 150)
    for row, eps in pts:
        res = project_admissible_row(row, eps)
        ref, beta_ref = grid_min_d2(row[0], row[1:4], row[4], row[5:8], eps)
        assert res.dist2 <= ref + 1e-8 * (1 + ref), (row, eps, res.dist2, ref)
        # search interval contains the oracle argmin
        assert res.interval[0] - 1e-12 <= beta_ref <= res.interval[1] + 1e-12


def test_projection_kkt(rng):
    pts = random_infeasible_points(rng, 250)
    for row, eps in pts:
        res = project_admissible_row(row, eps)
        r = mhd_kkt_residual(row[0], row[1:4], row[4], row[5:8], eps, res.state)
        assert r <= 1e-8, (row, eps, r)


def test_idempotence(rng):
    pts = random_infeasible_points(rng, 150)
    for row, eps in pts:
        res = project_admissible_row(row, eps)
        again = project_admissible_row(res.state.to_row(), eps)
        assert again.dist2 == 0.0
        assert again.n_slice_calls == 0


def test_nonexpansive(rng):
    """||P(x) - y|| <= ||x - y|| for admissible y (projection property)."""
    pts = random_infeasible_points(rng, 100)
    for row, eps in pts:
        res = project_admissible_row(row, eps)
        for _ in range(5):
            rho = rng.uniform(eps, 8)
            m = rng.normal(0, 2, 3)
            B = rng.normal(0, 2, 3)
            E = eps + rng.uniform(0, 8) + 0.5 * float(m @ m) / rho + 0.5 * float(B @ B)
            y = np.concatenate(([rho], m, [E], B))
            px = res.state.to_row()
            assert np.linalg.norm(px - y) <= np.linalg.norm(row - y) + 1e-9


def test_slice_call_counting():
    u, v, w, z = MANUFACTURED
    res = project_admissible(u, v, w, z, 1e-13)
    # f(0), the Brent evaluations, and the final assembly call
    assert res.n_slice_calls >= 10
    assert res.n_slice_calls <= 60


def test_profile_matches_scalar_path(rng):
    """Vectorized beta-profile oracle agrees with project_slice."""
    from mhd_idp.euler_projection import project_slice

    pts = random_infeasible_points(rng, 40)
    for row, eps in pts:
        u, v, w = row[0], row[1:4], row[4]
        betas = rng.uniform(0, float(row[5:8] @ row[5:8]) + 5.0, 12)
        prof = slice_dist2_profile(u, v, w, eps, betas)
        for b, pv in zip(betas, prof):
            sv = project_slice(u, v, w, eps, b).dist2
            assert pv == pytest.approx(sv, rel=1e-10, abs=1e-12)
