"""Independent oracles used to verify the library's optimizers.

Everything here avoids the code paths under test: the slice-distance
profile is a separate vectorized implementation of the candidate
enumeration, scalar minimization uses plain golden-section or grid
refinement instead of Brent, and the constrained-limiter oracle runs
Dykstra's alternating projections with grid-based row projections.
"""

import math

import numpy as np

from mhd_idp.euler_projection import project_slice

GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))


# ---------------------------------------------------------------- scalar min

def golden_section_min(f, a, b, tol=1e-12, max_iters=500):
    """Plain golden-section minimization (no parabolic steps)."""
    x1 = a + GOLDEN * (b - a)
    x2 = b - GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iters):
        if b - a < tol * (1.0 + abs(a) + abs(b)):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = a + GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = b - GOLDEN * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


# ------------------------------------------------------------- cubic bisect

def cubic_roots_bisection(p, q, lo=-1e4, hi=1e4, refine=200):
    """Real roots of m^3 + p m + q by sign-change bisection on a fine grid."""
    f = lambda m: m ** 3 + p * m + q
    xs = np.linspace(lo, hi, 20001)
    ys = xs ** 3 + p * xs + q
    roots = []
    for i in np.flatnonzero(np.sign(ys[:-1]) * np.sign(ys[1:]) <= 0):
        a, b = xs[i], xs[i + 1]
        fa = f(a)
        if fa == 0.0:
            roots.append(a)
            continue
        for _ in range(refine):
            m = 0.5 * (a + b)
            fm = f(m)
            if fm == 0.0:
                a = b = m
                break
            if np.sign(fm) == np.sign(fa):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    # dedupe near-identical roots from grid-edge hits
    out = []
    for r in sorted(roots):
        if not out or abs(r - out[-1]) > 1e-8 * (1 + abs(r)):
            out.append(r)
    return out


# ------------------------------------------- vectorized slice-distance in beta

def slice_dist2_profile(u, v, w, eps, betas):
    """Squared distance from (u, v, w) to the slice set, per beta.

    Vectorized reimplementation of the KKT candidate enumeration, used as
    the f(beta) evaluator for exhaustive beta grids.
    """
    betas = np.asarray(betas, dtype=float)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    s = float(np.sqrt(v @ v))
    e0 = eps + 0.5 * betas
    dists = []

    def admit(rho, m, E):
        d = (rho - u) ** 2 + (m - s) ** 2 + (E - w) ** 2
        return np.where(np.isfinite(d), d, np.inf)

    # feasible for this beta: distance 0
    if u >= eps:
        feas = w - (s * s) / (2.0 * u) >= e0
        dists.append(np.where(feas, 0.0, np.inf))
    # density clamp only
    if u < eps:
        ok = w - (s * s) / (2.0 * eps) >= e0
        dists.append(np.where(ok, (eps - u) ** 2, np.inf))
    # clamp point (covers the s = 0 cases)
    dists.append((max(u, eps) - u) ** 2 + s * s + np.maximum(e0 - w, 0.0) ** 2)

    if s > 0.0:
        # cubic candidates: m^3 + p m + q = 0, vectorized over beta
        p = 4.0 * eps * eps + eps * betas - 2.0 * eps * w
        q = -2.0 * eps * eps * s
        for mr in _cubic_roots_vec(p, q):
            ok = np.isfinite(mr) & (mr > 0.0) & (mr <= s * (1.0 + 1e-9))
            E = mr ** 2 / (2.0 * eps) + e0
            dists.append(np.where(ok, admit(eps, mr, E), np.inf))
        # quadratic-rho candidates
        c = e0 + u - w
        den = 2.0 * s * s + c * c
        num = u * u * den - 2.0 * u * s * s * (w - e0) + s ** 4
        with np.errstate(invalid="ignore", divide="ignore"):
            rad = 0.5 * np.sqrt(np.where(num >= 0.0, num, np.nan)) / np.sqrt(den)
            prod = (2.0 * u * s * s * (w - e0) - s ** 4) / (4.0 * den)
            big = np.where(u >= 0.0, 0.5 * u + rad, 0.5 * u - rad)
            small = np.where(np.abs(big) > 0.0, prod / big, np.nan)
            for rho in (big, small):
                mrad2 = s * s - 8.0 * rho * (rho - u)
                mrad = 0.5 * np.sqrt(np.where(mrad2 >= 0.0, mrad2, np.nan))
                for sign in (-1.0, 1.0):
                    m = 0.5 * s + sign * mrad
                    E = e0 + m * m / (2.0 * rho)
                    ok = np.isfinite(m) & (rho >= eps)
                    dists.append(np.where(ok, admit(rho, m, E), np.inf))
    return np.min(np.stack(dists), axis=0)


def _cubic_roots_vec(p, q):
    """Up to three real-root arrays of m^3 + p m + q (NaN where absent)."""
    p = np.asarray(p, dtype=float)
    q = np.broadcast_to(np.asarray(q, dtype=float), p.shape)
    roots = [np.full(p.shape, np.nan) for _ in range(3)]
    disc = -4.0 * p ** 3 - 27.0 * q ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        # three-real-root branch (p < 0)
        tri = disc > 0.0
        amp = 2.0 * np.sqrt(np.where(tri, -p / 3.0, np.nan))
        arg = np.clip(3.0 * q / (2.0 * p) * np.sqrt(np.where(tri, -3.0 / p, np.nan)), -1, 1)
        theta = np.arccos(arg)
        for k in range(3):
            roots[k] = np.where(tri, amp * np.cos((theta - 2.0 * np.pi * k) / 3.0), np.nan)
        # single-root branch
        single = ~tri
        half_q = -0.5 * q
        rad = np.sqrt(np.where(single, half_q ** 2 + (p / 3.0) ** 3, np.nan))
        t1 = np.where(half_q >= 0.0, half_q + rad, half_q - rad)
        t2 = np.where(t1 != 0.0, -((p / 3.0) ** 3) / t1, 0.0)
        r = np.cbrt(t1) + np.cbrt(t2)
        roots[0] = np.where(single, r, roots[0])
        # p == 0 and q == 0 degeneracies
        deg = single & (p == 0.0)
        roots[0] = np.where(deg, np.cbrt(-q), roots[0])
    return roots


# ------------------------------------------------------------ beta-grid oracle

def grid_min_d2(u, v, w, z, eps, coarse=2000, stages=2, full_grid=None):
    """Exhaustive beta-grid minimum of d2 over the search interval.

    With the default two-stage refinement the effective resolution is
    below a uniform 10^6-point grid; `full_grid` forces one literal pass
    of that many points instead.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    znorm2 = float(z @ z)
    znorm = math.sqrt(znorm2)
    f0 = float(slice_dist2_profile(u, v, w, eps, np.array([0.0]))[0])
    lo = (znorm / (1.0 + math.sqrt(f0) + 0.5 * znorm2)) ** 2
    hi = znorm2

    def d2_on(bs):
        return slice_dist2_profile(u, v, w, eps, bs) + (np.sqrt(bs) - znorm) ** 2

    if full_grid:
        bs = np.linspace(lo, hi, full_grid)
        vals = d2_on(bs)
        k = int(np.argmin(vals))
        return float(vals[k]), float(bs[k])

    best_val, best_beta = np.inf, lo
    for _ in range(stages):
        bs = np.linspace(lo, hi, coarse)
        vals = d2_on(bs)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_beta = float(vals[k]), float(bs[k])
        step = (hi - lo) / (coarse - 1)
        lo = max(0.0, bs[k] - 2.0 * step)
        hi = bs[k] + 2.0 * step
    return best_val, best_beta


def grid_project_row(row, eps, n=3):
    """Projection of one row via grid-refined beta (Brent-free)."""
    u, v, w, z = row[0], row[1:1 + n], row[1 + n], row[2 + n:]
    znorm2 = float(z @ z)
    if znorm2 == 0.0:
        fl = project_slice(u, v, w, eps, 0.0)
        return np.concatenate(([fl.rho], fl.m, [fl.E], np.zeros(n)))
    _, beta = grid_min_d2(u, v, w, z, eps, coarse=1500, stages=4)
    fl = project_slice(u, v, w, eps, beta)
    B = math.sqrt(beta) * z / math.sqrt(znorm2)
    return np.concatenate(([fl.rho], fl.m, [fl.E], B))


# ----------------------------------------------------------- Dykstra oracle

def dykstra_project(U, eps, n=3, iters=400, tol=1e-13, project_row=None):
    """Projection of U onto (conservation hyperplane) x (admissible rows)
    by Dykstra's alternating projections; solves the limiter problem."""
    from mhd_idp.limiter import admissible_rows_mask, prox_conservation

    if project_row is None:
        project_row = grid_project_row
    b = U.sum(axis=0)
    x = U.copy()
    p = np.zeros_like(U)
    q = np.zeros_like(U)
    for _ in range(iters):
        x_prev = x.copy()
        y = x + p
        mask = admissible_rows_mask(y, eps, n)
        y_proj = y.copy()
        for i in np.flatnonzero(~mask):
            y_proj[i] = project_row(y[i], eps, n)
        p = x + p - y_proj
        x = prox_conservation(y_proj + q, b)
        q = y_proj + q - x
        if np.linalg.norm(x - x_prev) <= tol * (1.0 + np.linalg.norm(U)):
            break
    return x


# ------------------------------------------------------------- KKT residuals

def slice_kkt_residual(u, v, w, eps, beta, rho, m_vec, E):
    """Conditioning-aware KKT residual of the slice projection.

    Residuals are measured as displacements (stationarity rows scaled by
    their own coefficients) relative to the data magnitude.
    """
    v = np.atleast_1d(np.asarray(v, dtype=float))
    m_vec = np.atleast_1d(np.asarray(m_vec, dtype=float))
    s = float(np.sqrt(v @ v))
    m = float(np.sqrt(m_vec @ m_vec))
    scale = 1.0 + max(abs(u), s, abs(w), beta)
    mu = E - w
    lam = rho - u - mu * m * m / (2.0 * rho * rho)
    lam_scale = 1.0 + abs(u) + rho + abs(mu) * m * m / (2.0 * rho * rho)
    e0 = eps + 0.5 * beta
    res = max(
        abs(m - s / (1.0 + mu / rho)),                     # momentum displacement
        max(-mu, 0.0) / scale,
        max(-lam, 0.0) / lam_scale,
        abs(lam * (rho - eps)) / (lam_scale * (1.0 + rho)),
        abs(mu * (E - m * m / (2.0 * rho) - e0)) / (scale * scale),
    )
    # momentum direction: output parallel to v
    if s > 0.0 and m > 0.0:
        res = max(res, float(np.linalg.norm(m_vec - (m / s) * v)) / scale)
    return res / scale


def mhd_kkt_residual(u, v, w, z, eps, state):
    """KKT residual of the full projection, including the magnetic row."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    znorm = float(np.linalg.norm(z))
    beta = float(state.B @ state.B)
    res = slice_kkt_residual(u, v, w, eps, beta, state.rho, state.m, state.E)
    mu = state.E - w
    # stationarity for B: (1 + mu) sqrt(beta) = |z|
    scale = 1.0 + max(abs(u), abs(w), znorm, float(np.linalg.norm(np.atleast_1d(v))))
    res = max(res, abs((1.0 + mu) * math.sqrt(beta) - znorm) / ((1.0 + abs(mu)) * scale))
    return res
