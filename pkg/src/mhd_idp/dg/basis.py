"""Orthonormal P2 modal basis and quadrature on the reference square.

The basis is the tensor product of scaled Legendre polynomials
phi_k = sqrt(2k+1) P_k on [-1, 1], restricted to total degree <= 2 and
orthonormal under the averaged inner product (1/4) int int.  Mode 0 is
the constant 1, so the cell average of a field equals its first modal
coefficient.

Mode ordering: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2) as (x, y) degrees.
"""

from __future__ import annotations

import numpy as np

N_MODES = 6
MODE_DEGREES = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))

# 3-point Gauss-Legendre on [-1, 1] (exact through degree 5)
GAUSS3_X = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
GAUSS3_W = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])

# 4-point Gauss-Lobatto on [-1, 1] (exact through degree 5); includes +-1
LOBATTO4_X = np.array([-1.0, -1.0 / np.sqrt(5.0), 1.0 / np.sqrt(5.0), 1.0])
LOBATTO4_W = np.array([1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0])


def _leg(k: int, x):
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x)
    if k == 1:
        return x
    return 0.5 * (3.0 * x * x - 1.0)


def _dleg(k: int, x):
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.zeros_like(x)
    if k == 1:
        return np.ones_like(x)
    return 3.0 * x


def eval_basis(xi, eta) -> np.ndarray:
    """Basis values at reference points; shape (*pts, 6)."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    cols = [np.sqrt((2 * kx + 1) * (2 * ky + 1)) * _leg(kx, xi) * _leg(ky, eta)
            for kx, ky in MODE_DEGREES]
    return np.stack(cols, axis=-1)


def eval_basis_grad(xi, eta):
    """Reference-coordinate gradients (d/dxi, d/deta); each (*pts, 6)."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    gx, gy = [], []
    for kx, ky in MODE_DEGREES:
        c = np.sqrt((2 * kx + 1) * (2 * ky + 1))
        gx.append(c * _dleg(kx, xi) * _leg(ky, eta))
        gy.append(c * _leg(kx, xi) * _dleg(ky, eta))
    return np.stack(gx, axis=-1), np.stack(gy, axis=-1)


def _volume_points():
    xi, eta = np.meshgrid(GAUSS3_X, GAUSS3_X, indexing="ij")
    wq = np.outer(GAUSS3_W, GAUSS3_W)
    return xi.ravel(), eta.ravel(), wq.ravel()


VOL_XI, VOL_ETA, VOL_W = _volume_points()          # 9 points, weights sum to 4
VOL_BASIS = eval_basis(VOL_XI, VOL_ETA)            # (9, 6)
VOL_GRAD_XI, VOL_GRAD_ETA = eval_basis_grad(VOL_XI, VOL_ETA)

# Edge traces at the 3 Gauss points along each face; ordering follows the
# face-local coordinate (eta on vertical faces, xi on horizontal faces).
EDGE_W = GAUSS3_W
TRACE_E = eval_basis(np.ones(3), GAUSS3_X)         # xi = +1
TRACE_W = eval_basis(-np.ones(3), GAUSS3_X)        # xi = -1
TRACE_N = eval_basis(GAUSS3_X, np.ones(3))         # eta = +1
TRACE_S = eval_basis(GAUSS3_X, -np.ones(3))        # eta = -1


def _limiter_points():
    """Zhang-Shu point set: (Lobatto x Gauss) union (Gauss x Lobatto)."""
    pts = set()
    for a in LOBATTO4_X:
        for b in GAUSS3_X:
            pts.add((float(a), float(b)))
            pts.add((float(b), float(a)))
    arr = np.array(sorted(pts))
    return arr[:, 0], arr[:, 1]


LIM_XI, LIM_ETA = _limiter_points()
LIM_BASIS = eval_basis(LIM_XI, LIM_ETA)            # (24, 6)


def project_function(fn, xlo, ylo, dx, dy, nx, ny, nvals):
    """L2-project a pointwise function onto the modal basis, cell by cell.

    `fn(x, y)` must map coordinate arrays to values of shape (..., nvals).
    Returns coefficients of shape (ny, nx, nvals, 6).
    """
    xc = xlo + dx * (np.arange(nx) + 0.5)
    yc = ylo + dy * (np.arange(ny) + 0.5)
    # physical quadrature coordinates per cell: (ny, nx, 9)
    X = np.broadcast_to(xc[None, :, None] + 0.5 * dx * VOL_XI[None, None, :],
                        (ny, nx, VOL_XI.size)).copy()
    Y = np.broadcast_to(yc[:, None, None] + 0.5 * dy * VOL_ETA[None, None, :],
                        (ny, nx, VOL_ETA.size)).copy()
    vals = fn(X, Y)                                 # (ny, nx, 9, nvals)
    # orthonormal basis under (1/4) int int -> coeffs = (1/4) sum w v phi
    return 0.25 * np.einsum("q,qk,yxqv->yxvk", VOL_W, VOL_BASIS, vals)
