"""Pointwise limiters for the DG field: TVB slopes, Zhang-Shu scaling,
and the per-cell divergence-free projection of the in-plane field.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a soft dependency
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]

from . import basis
from .field import DGField

__all__ = ["tvb_limit", "zhang_shu_limit", "divfree_project"]

_SQRT3 = np.sqrt(3.0)
_SQRT5 = np.sqrt(5.0)

# interface-midpoint deviation weights: u(edge mid) - ubar in modal terms
# east  (+x): sqrt(3) c10 + sqrt(5) c20 - sqrt(5)/2 c02
# north (+y): sqrt(3) c01 + sqrt(5) c02 - sqrt(5)/2 c20
_DEV_X = np.array([0.0, _SQRT3, 0.0, _SQRT5, 0.0, -0.5 * _SQRT5])
_DEV_Y = np.array([0.0, 0.0, _SQRT3, -0.5 * _SQRT5, 0.0, _SQRT5])


def _minmod3(a, b, c):
    sign = np.sign(a)
    agree = (np.sign(b) == sign) & (np.sign(c) == sign)
    return np.where(agree, sign * np.minimum(np.abs(a), np.minimum(np.abs(b), np.abs(c))), 0.0)


def tvb_limit(field: DGField, M: float, ghost_avgs=None) -> DGField:
    """Componentwise TVB-modified minmod limiter.

    Interface-midpoint deviations are compared against neighbor average
    differences; deviations below M dx^2 pass untouched.  A cell flagged
    in either direction is rebuilt as the limited linear polynomial, which
    preserves its average.

    ghost_avgs supplies boundary neighbor averages as a dict with keys
    'W', 'E', 'S', 'N' mapping to (ny, 8) / (nx, 8) arrays; by default the
    mesh is treated as periodic.
    """
    c = field.coeffs
    avg = c[..., 0]
    threshold = M * field.dx ** 2

    if ghost_avgs is None:
        west = np.roll(avg, 1, axis=1)
        east = np.roll(avg, -1, axis=1)
        south = np.roll(avg, 1, axis=0)
        north = np.roll(avg, -1, axis=0)
    else:
        west = np.concatenate([ghost_avgs["W"][:, None, :], avg[:, :-1]], axis=1)
        east = np.concatenate([avg[:, 1:], ghost_avgs["E"][:, None, :]], axis=1)
        south = np.concatenate([ghost_avgs["S"][None, :, :], avg[:-1]], axis=0)
        north = np.concatenate([avg[1:], ghost_avgs["N"][None, :, :]], axis=0)

    dxp = east - avg
    dxm = avg - west
    dyp = north - avg
    dym = avg - south

    dev_e = c @ _DEV_X
    dev_w = -(c @ _DEV_X) + 2.0 * _SQRT5 * c[..., 3] - _SQRT5 * c[..., 5]
    dev_n = c @ _DEV_Y
    dev_s = -(c @ _DEV_Y) + 2.0 * _SQRT5 * c[..., 5] - _SQRT5 * c[..., 3]

    def needs(dev, dp, dm):
        lim = _minmod3(dev, dm, dp)
        return (np.abs(dev) > threshold) & (lim != dev)

    flag_x = needs(dev_e, dxp, dxm) | needs(-dev_w, dxp, dxm)
    flag_y = needs(dev_n, dyp, dym) | needs(-dev_s, dyp, dym)
    flagged = flag_x | flag_y
    if not flagged.any():
        return field

    sx = _minmod3(_SQRT3 * c[..., 1], dxm, dxp)
    sy = _minmod3(_SQRT3 * c[..., 2], dym, dyp)
    out = field.copy()
    oc = out.coeffs
    oc[..., 1] = np.where(flagged, sx / _SQRT3, oc[..., 1])
    oc[..., 2] = np.where(flagged, sy / _SQRT3, oc[..., 2])
    for k in (3, 4, 5):
        oc[..., k] = np.where(flagged, 0.0, oc[..., k])
    return out


def _internal_energy(U: np.ndarray) -> np.ndarray:
    rho = U[..., 0]
    m2 = U[..., 1] ** 2 + U[..., 2] ** 2 + U[..., 3] ** 2
    B2 = U[..., 5] ** 2 + U[..., 6] ** 2 + U[..., 7] ** 2
    return U[..., 4] - m2 / (2.0 * rho) - 0.5 * B2


@njit(cache=True)
def _scan_points(P, eps, bad):
    """Flag cells with an out-of-bound limiter point; P is (nc, 8, np)."""
    nc, _, npts = P.shape
    for i in range(nc):
        for q in range(npts):
            rho = P[i, 0, q]
            if rho < eps:
                bad[i] = True
                break
            m2 = P[i, 1, q] ** 2 + P[i, 2, q] ** 2 + P[i, 3, q] ** 2
            B2 = P[i, 5, q] ** 2 + P[i, 6, q] ** 2 + P[i, 7, q] ** 2
            if P[i, 4, q] - m2 / (2.0 * rho) - 0.5 * B2 < eps:
                bad[i] = True
                break


def zhang_shu_limit(field: DGField, eps: float, bisect_iters: int = 60) -> DGField:
    """Scale deviations about each admissible cell average so that every
    limiter point lands in the admissible set.

    A single theta per cell multiplies all nonconstant modes of all
    variables.  The density cap is closed form; the internal-energy cap is
    the unique root of a concave function along the scaling segment and is
    found by bisection (keeping the feasible endpoint).
    """
    avg = field.coeffs[..., 0]                       # (ny, nx, 8)
    rho_bar = avg[..., 0]
    ie_bar = _internal_energy(avg)
    # tolerate boundary states up to the rounding noise of evaluating ie
    noise = 1e-11 * (1.0 + np.abs(avg[..., 4])
                     + np.abs(ie_bar - avg[..., 4]))
    if np.any(rho_bar < eps - noise) or np.any(ie_bar < eps - noise):
        raise ValueError("zhang_shu_limit requires admissible cell averages")

    pts = field.eval_at(basis.LIM_BASIS)             # (ny, nx, 8, 24)

    # fast path: cells whose limiter points are all admissible keep theta 1
    flat = pts.reshape(-1, 8, pts.shape[-1])
    bad = np.zeros(flat.shape[0], dtype=np.bool_)
    _scan_points(flat, eps, bad)
    if not bad.any():
        return field
    bad_cells = bad.reshape(pts.shape[:2])

    Ub = np.moveaxis(pts[bad_cells], 1, 2)           # (nc, 24, 8)
    avg_b = avg[bad_cells]
    dev = Ub - avg_b[:, None, :]

    # density cap per point, closed form
    rho_pt = Ub[..., 0]
    drho = dev[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t_rho = np.where(rho_pt < eps,
                         (avg_b[:, None, 0] - eps) / np.maximum(-drho, 1e-300), 1.0)
    theta_pt = np.minimum(t_rho, 1.0)

    # internal-energy cap along U(theta) = avg + theta * dev
    base = np.broadcast_to(avg_b[:, None, :], Ub.shape)
    ie_cap = _internal_energy(base + theta_pt[..., None] * dev)
    viol = ie_cap < eps
    if viol.any():
        a0 = base[viol]
        dv = dev[viol]
        lo = np.zeros(a0.shape[0])
        hi = theta_pt[viol]
        for _ in range(bisect_iters):
            mid = 0.5 * (lo + hi)
            good = _internal_energy(a0 + mid[:, None] * dv) >= eps
            lo = np.where(good, mid, lo)
            hi = np.where(good, hi, mid)
        theta_pt[viol] = lo

    theta = np.clip(theta_pt.min(axis=1), 0.0, 1.0)  # (nc,)
    out = field.copy()
    out.coeffs[bad_cells, :, 1:] *= theta[:, None, None]
    return out


def divfree_project(field: DGField) -> DGField:
    """Cellwise L2 projection of (B1, B2) onto the divergence-free subspace.

    In the orthonormal modal basis the constraint d/dx B1 + d/dy B2 = 0 on
    a square cell decouples into three orthogonal coefficient pairs, each
    projected in closed form.  B3 and all cell averages are untouched.
    """
    out = field.copy()
    b1 = out.coeffs[..., 5, :]
    b2 = out.coeffs[..., 6, :]

    # constant part of the divergence: c1 + d2
    r = 0.5 * (b1[..., 1] + b2[..., 2])
    b1[..., 1] -= r
    b2[..., 2] -= r
    # xi part: sqrt(5) c3 + d4
    r = (np.sqrt(5.0) * b1[..., 3] + b2[..., 4]) / 6.0
    b1[..., 3] -= np.sqrt(5.0) * r
    b2[..., 4] -= r
    # eta part: c4 + sqrt(5) d5
    r = (b1[..., 4] + np.sqrt(5.0) * b2[..., 5]) / 6.0
    b1[..., 4] -= r
    b2[..., 5] -= np.sqrt(5.0) * r
    return out
