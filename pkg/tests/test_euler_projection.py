import math

import numpy as np
import pytest

from mhd_idp.euler_projection import cubic_real_roots, project_slice

from .oracles import cubic_roots_bisection, slice_dist2_profile, slice_kkt_residual


def cubic_residual_ok(p, q, r):
    return abs(r ** 3 + p * r + q) <= 1e-10 * max(1.0, abs(r) ** 3, abs(p * r), abs(q))


def test_cubic_factorable():
    roots = sorted(cubic_real_roots(-1.0, 0.0))
    assert roots == pytest.approx([-1.0, 0.0, 1.0], abs=1e-15)


def test_cubic_single_root():
    (r,) = cubic_real_roots(0.0, -8.0)
    assert r == pytest.approx(2.0, abs=1e-14)


def test_cubic_random_vs_bisection(rng):
    for _ in range(500):
        p, q = rng.uniform(-50, 50, 2)
        mine = sorted(cubic_real_roots(p, q))
        ref = cubic_roots_bisection(p, q)
        assert len(mine) >= len(ref)
        for r in mine:
            assert cubic_residual_ok(p, q, r), (p, q, r)
        for rr in ref:
            assert min(abs(rr - r) for r in mine) < 1e-7 * (1 + abs(rr))


def test_cubic_tiny_root_precision():
    # dominant-balance case with a root near -q/p; the naive Cardano
    # difference cancels catastrophically here
    p, q = 2.43e-12, -2.04e-26
    (r,) = cubic_real_roots(p, q)
    assert r == pytest.approx(-q / p, rel=1e-9)


def test_feasible_input_identity():
    out = project_slice(1.0, [0.0, 0.0, 0.0], 1.0, 1e-13, 0.0)
    assert out.dist2 == 0.0
    assert (out.rho, out.E) == (1.0, 1.0)
    assert np.all(out.m == 0.0)


def test_energy_clamp_case():
    out = project_slice(1.0, [0.0, 0.0, 0.0], -1.0, 1e-6, 0.0)
    assert out.rho == 1.0
    assert np.all(out.m == 0.0)
    assert out.E == pytest.approx(1e-6, abs=0)
    assert out.dist2 == pytest.approx((1.0 + 1e-6) ** 2, rel=1e-12)


def test_momentum_parallel_to_input(rng):
    for _ in range(50):
        v = rng.normal(0, 3, 3)
        out = project_slice(rng.uniform(-2, 2), v, rng.uniform(-3, 3), 1e-6, rng.uniform(0, 4))
        cross = np.linalg.norm(np.cross(out.m, v))
        assert cross <= 1e-10 * (1 + np.linalg.norm(v) ** 2)


def _random_cases(rng, count):
    cases = []
    while len(cases) < count:
        u, w = rng.uniform(-10, 10, 2)
        s = abs(rng.uniform(-10, 10)) if rng.random() > 0.15 else 0.0
        vdir = rng.normal(0, 1, 3)
        vdir /= max(np.linalg.norm(vdir), 1e-300)
        eps = float(rng.choice([1e-13, 1e-6]))
        beta = float(rng.uniform(0, 10))
        if u >= eps and w - s * s / (2 * u) >= eps + beta / 2:
            continue
        cases.append((u, s * vdir, w, eps, beta))
    return cases


def test_projection_feasibility_and_kkt(rng):
    for u, v, w, eps, beta in _random_cases(rng, 800):
        out = project_slice(u, v, w, eps, beta)
        assert out.rho >= eps - 1e-12
        assert out.E - float(out.m @ out.m) / (2 * out.rho) >= eps + beta / 2 - 1e-12
        res = slice_kkt_residual(u, v, w, eps, beta, out.rho, out.m, out.E)
        assert res <= 1e-8, (u, v, w, eps, beta, res)


def test_projection_matches_profile_oracle(rng):
    """The scalar path and the vectorized candidate profile agree."""
    for u, v, w, eps, beta in _random_cases(rng, 400):
        out = project_slice(u, v, w, eps, beta)
        ref = float(slice_dist2_profile(u, v, w, eps, np.array([beta]))[0])
        assert out.dist2 <= ref + 1e-10 * (1 + ref)
        assert ref <= out.dist2 + 1e-10 * (1 + out.dist2)


def test_idempotence(rng):
    for u, v, w, eps, beta in _random_cases(rng, 300):
        out = project_slice(u, v, w, eps, beta)
        again = project_slice(out.rho, out.m, out.E, eps, beta)
        assert again.dist2 <= 1e-14 * (1 + out.dist2)
        assert again.rho == pytest.approx(out.rho, rel=1e-14, abs=1e-14)
        assert again.E == pytest.approx(out.E, rel=1e-14, abs=1e-14)


def test_dist_monotone_in_beta(rng):
    """f(beta) is nondecreasing along the slice parameter."""
    for u, v, w, eps, _ in _random_cases(rng, 60):
        betas = np.sort(rng.uniform(0, 12, 24))
        vals = [project_slice(u, v, w, eps, b).dist2 for b in betas]
        for a, b in zip(vals, vals[1:]):
            assert b >= a - 1e-10 * (1 + a)


def test_sqrt_dist_lipschitz_in_beta(rng):
    """|sqrt(f(b1)) - sqrt(f(b2))| <= |b1 - b2| / 2."""
    for u, v, w, eps, _ in _random_cases(rng, 60):
        betas = rng.uniform(0, 12, 12)
        vals = {b: math.sqrt(project_slice(u, v, w, eps, b).dist2) for b in betas}
        for b1 in betas:
            for b2 in betas:
                assert abs(vals[b1] - vals[b2]) <= 0.5 * abs(b1 - b2) + 1e-10


def test_validation_errors():
    with pytest.raises(ValueError):
        project_slice(1.0, [0, 0, 0], 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        project_slice(1.0, [0, 0, 0], 1.0, 1e-13, -1.0)
