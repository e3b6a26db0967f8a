"""Ideal-MHD physical flux and local Lax-Friedrichs interface flux.

Array kernels act on stacked states of shape (..., 8) ordered
(rho, m1, m2, m3, E, B1, B2, B3); the scalar API wraps them for single
:class:`~mhd_idp.state.ConservedState` traces.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a soft dependency
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]

from ..state import ConservedState, GasParams, InvalidStateError

__all__ = ["physical_flux", "physical_flux_axis", "max_signal_speed",
           "max_signal_speed_axis", "llf_flux", "llf_flux_axis", "llf_flux_states"]


def _unpack(U: np.ndarray):
    rho = U[..., 0]
    m = U[..., 1:4]
    E = U[..., 4]
    B = U[..., 5:8]
    return rho, m, E, B


def _pressure(U: np.ndarray, gamma: float):
    rho, m, E, B = _unpack(U)
    ie = E - np.einsum("...i,...i->...", m, m) / (2.0 * rho) \
        - 0.5 * np.einsum("...i,...i->...", B, B)
    return (gamma - 1.0) * ie


def physical_flux(U: np.ndarray, normal, gamma: float) -> np.ndarray:
    """Flux dotted with a unit normal, for states of shape (..., 8).

    Mass: m.n; momentum: m (u.n) + p_tot n - B (B.n); energy:
    (E + p_tot)(u.n) - (u.B)(B.n); induction: B (u.n) - u (B.n).
    """
    normal = np.asarray(normal, dtype=float)
    rho, m, E, B = _unpack(U)
    u = m / rho[..., None]
    p = _pressure(U, gamma)
    ptot = p + 0.5 * np.einsum("...i,...i->...", B, B)
    un = np.einsum("...i,i->...", u, normal[:3])
    Bn = np.einsum("...i,i->...", B, normal[:3])
    uB = np.einsum("...i,...i->...", u, B)
    F = np.empty_like(U)
    F[..., 0] = rho * un
    F[..., 1:4] = m * un[..., None] + ptot[..., None] * normal[:3] - B * Bn[..., None]
    F[..., 4] = (E + ptot) * un - uB * Bn
    F[..., 5:8] = B * un[..., None] - u * Bn[..., None]
    return F


def _prim_fast(U: np.ndarray, gamma: float):
    """(inv_rho, u1, u2, u3, p, B2) with a single division pass."""
    inv_rho = 1.0 / U[..., 0]
    u1 = U[..., 1] * inv_rho
    u2 = U[..., 2] * inv_rho
    u3 = U[..., 3] * inv_rho
    B2 = U[..., 5] ** 2 + U[..., 6] ** 2 + U[..., 7] ** 2
    kin = 0.5 * (u1 * U[..., 1] + u2 * U[..., 2] + u3 * U[..., 3])
    p = (gamma - 1.0) * (U[..., 4] - kin - 0.5 * B2)
    return inv_rho, u1, u2, u3, p, B2


def _flux_from_prim(U, axis, prim):
    inv_rho, u1, u2, u3, p, B2 = prim
    ptot = p + 0.5 * B2
    un = (u1, u2)[axis]
    Bn = U[..., 5 + axis]
    uB = u1 * U[..., 5] + u2 * U[..., 6] + u3 * U[..., 7]
    F = np.empty_like(U)
    F[..., 0] = U[..., 0] * un
    F[..., 1] = U[..., 1] * un - U[..., 5] * Bn
    F[..., 2] = U[..., 2] * un - U[..., 6] * Bn
    F[..., 3] = U[..., 3] * un - U[..., 7] * Bn
    F[..., 1 + axis] += ptot
    F[..., 4] = (U[..., 4] + ptot) * un - uB * Bn
    F[..., 5] = U[..., 5] * un - u1 * Bn
    F[..., 6] = U[..., 6] * un - u2 * Bn
    F[..., 7] = U[..., 7] * un - u3 * Bn
    F[..., 5 + axis] = 0.0
    return F


def _speed_from_prim(U, axis, prim, gamma):
    inv_rho, u1, u2, u3, p, B2 = prim
    if np.any(U[..., 0] <= 0.0):
        raise InvalidStateError("nonpositive density in wave speed evaluation")
    if np.any(p < 0.0):
        raise InvalidStateError(f"negative pressure (min {p.min()}) in wave speed evaluation")
    un = (u1, u2)[axis]
    Bn = U[..., 5 + axis]
    a2 = gamma * p * inv_rho
    b2 = B2 * inv_rho
    bn2 = Bn * Bn * inv_rho
    tot = a2 + b2
    disc = tot * tot - 4.0 * a2 * bn2
    np.maximum(disc, 0.0, out=disc)
    cf = np.sqrt(0.5 * (tot + np.sqrt(disc)))
    return np.abs(un) + cf


def physical_flux_axis(U: np.ndarray, axis: int, gamma: float) -> np.ndarray:
    """Axis-aligned physical flux (axis 0 = x, 1 = y); hot-path kernel."""
    return _flux_from_prim(U, axis, _prim_fast(U, gamma))


def max_signal_speed_axis(U: np.ndarray, axis: int, gamma: float) -> np.ndarray:
    """|u_axis| + c_f along a coordinate axis; raises on unreal speeds."""
    return _speed_from_prim(U, axis, _prim_fast(U, gamma), gamma)


def max_signal_speed(U: np.ndarray, normal, gamma: float) -> np.ndarray:
    """|u.n| + c_f per state; raises if any state lacks real wave speeds."""
    normal = np.asarray(normal, dtype=float)
    rho, m, E, B = _unpack(U)
    if np.any(rho <= 0.0):
        raise InvalidStateError("nonpositive density in wave speed evaluation")
    p = _pressure(U, gamma)
    if np.any(p < 0.0):
        raise InvalidStateError(f"negative pressure (min {p.min()}) in wave speed evaluation")
    u = m / rho[..., None]
    un = np.einsum("...i,i->...", u, normal[:3])
    Bn = np.einsum("...i,i->...", B, normal[:3])
    a2 = gamma * p / rho
    b2 = np.einsum("...i,...i->...", B, B) / rho
    bn2 = Bn * Bn / rho
    tot = a2 + b2
    disc = np.maximum(tot * tot - 4.0 * a2 * bn2, 0.0)
    cf = np.sqrt(0.5 * (tot + np.sqrt(disc)))
    return np.abs(un) + cf


@njit(cache=True)
def _llf_kernel(Um, Up, axis, gamma, F, alpha):
    """LLF flux for faces in variable-major layout: Um, Up, F are
    (nfaces, 8, npts); alpha is (nfaces,).

    Returns (min_rho, min_p) across both trace sets so the caller can
    reject states without real wave speeds.
    """
    nf, _, npts = Um.shape
    gm1 = gamma - 1.0
    min_p = np.inf
    min_rho = np.inf
    for i in range(nf):
        amax = 0.0
        for q in range(npts):
            for side in range(2):
                U = Um if side == 0 else Up
                rho = U[i, 0, q]
                if rho < min_rho:
                    min_rho = rho
                if rho <= 0.0:
                    continue
                inv = 1.0 / rho
                u1 = U[i, 1, q] * inv
                u2 = U[i, 2, q] * inv
                u3 = U[i, 3, q] * inv
                B1 = U[i, 5, q]
                B2 = U[i, 6, q]
                B3 = U[i, 7, q]
                Bsq = B1 * B1 + B2 * B2 + B3 * B3
                kin = 0.5 * (u1 * U[i, 1, q] + u2 * U[i, 2, q] + u3 * U[i, 3, q])
                p = gm1 * (U[i, 4, q] - kin - 0.5 * Bsq)
                if p < min_p:
                    min_p = p
                if p < 0.0:
                    continue
                un = u1 if axis == 0 else u2
                Bn = B1 if axis == 0 else B2
                a2 = gamma * p * inv
                b2 = Bsq * inv
                bn2 = Bn * Bn * inv
                tot = a2 + b2
                disc = tot * tot - 4.0 * a2 * bn2
                if disc < 0.0:
                    disc = 0.0
                cf = np.sqrt(0.5 * (tot + np.sqrt(disc)))
                a = abs(un) + cf
                if a > amax:
                    amax = a
        alpha[i] = amax
    if min_rho <= 0.0 or min_p < 0.0:
        return min_rho, min_p
    for i in range(nf):
        al = alpha[i]
        for q in range(npts):
            for side in range(2):
                U = Um if side == 0 else Up
                sgn = 0.5 if side == 0 else 0.5
                rho = U[i, 0, q]
                inv = 1.0 / rho
                u1 = U[i, 1, q] * inv
                u2 = U[i, 2, q] * inv
                u3 = U[i, 3, q] * inv
                B1 = U[i, 5, q]
                B2 = U[i, 6, q]
                B3 = U[i, 7, q]
                Bsq = B1 * B1 + B2 * B2 + B3 * B3
                kin = 0.5 * (u1 * U[i, 1, q] + u2 * U[i, 2, q] + u3 * U[i, 3, q])
                p = gm1 * (U[i, 4, q] - kin - 0.5 * Bsq)
                ptot = p + 0.5 * Bsq
                un = u1 if axis == 0 else u2
                Bn = B1 if axis == 0 else B2
                uB = u1 * B1 + u2 * B2 + u3 * B3
                f0 = rho * un
                f1 = U[i, 1, q] * un - B1 * Bn
                f2 = U[i, 2, q] * un - B2 * Bn
                f3 = U[i, 3, q] * un - B3 * Bn
                if axis == 0:
                    f1 += ptot
                else:
                    f2 += ptot
                f4 = (U[i, 4, q] + ptot) * un - uB * Bn
                f5 = B1 * un - u1 * Bn
                f6 = B2 * un - u2 * Bn
                f7 = B3 * un - u3 * Bn
                if axis == 0:
                    f5 = 0.0
                else:
                    f6 = 0.0
                if side == 0:
                    F[i, 0, q] = sgn * f0
                    F[i, 1, q] = sgn * f1
                    F[i, 2, q] = sgn * f2
                    F[i, 3, q] = sgn * f3
                    F[i, 4, q] = sgn * f4
                    F[i, 5, q] = sgn * f5
                    F[i, 6, q] = sgn * f6
                    F[i, 7, q] = sgn * f7
                else:
                    F[i, 0, q] += sgn * f0
                    F[i, 1, q] += sgn * f1
                    F[i, 2, q] += sgn * f2
                    F[i, 3, q] += sgn * f3
                    F[i, 4, q] += sgn * f4
                    F[i, 5, q] += sgn * f5
                    F[i, 6, q] += sgn * f6
                    F[i, 7, q] += sgn * f7
        for v in range(8):
            for q in range(npts):
                F[i, v, q] -= 0.5 * al * (Up[i, v, q] - Um[i, v, q])
    return min_rho, min_p


@njit(cache=True)
def _volume_flux_kernel(U, gamma, Fx, Fy):
    """Both axis fluxes at volume states in (ncells, 8, nq) layout."""
    nc, _, nq = U.shape
    gm1 = gamma - 1.0
    for i in range(nc):
        for q in range(nq):
            rho = U[i, 0, q]
            if rho == 0.0:
                for v in range(8):
                    Fx[i, v, q] = 0.0
                    Fy[i, v, q] = 0.0
                continue
            inv = 1.0 / rho
            m1 = U[i, 1, q]
            m2 = U[i, 2, q]
            m3 = U[i, 3, q]
            E = U[i, 4, q]
            B1 = U[i, 5, q]
            B2 = U[i, 6, q]
            B3 = U[i, 7, q]
            u1 = m1 * inv
            u2 = m2 * inv
            u3 = m3 * inv
            Bsq = B1 * B1 + B2 * B2 + B3 * B3
            kin = 0.5 * (u1 * m1 + u2 * m2 + u3 * m3)
            p = gm1 * (E - kin - 0.5 * Bsq)
            ptot = p + 0.5 * Bsq
            uB = u1 * B1 + u2 * B2 + u3 * B3
            Fx[i, 0, q] = rho * u1
            Fx[i, 1, q] = m1 * u1 - B1 * B1 + ptot
            Fx[i, 2, q] = m2 * u1 - B2 * B1
            Fx[i, 3, q] = m3 * u1 - B3 * B1
            Fx[i, 4, q] = (E + ptot) * u1 - uB * B1
            Fx[i, 5, q] = 0.0
            Fx[i, 6, q] = B2 * u1 - u2 * B1
            Fx[i, 7, q] = B3 * u1 - u3 * B1
            Fy[i, 0, q] = rho * u2
            Fy[i, 1, q] = m1 * u2 - B1 * B2
            Fy[i, 2, q] = m2 * u2 - B2 * B2 + ptot
            Fy[i, 3, q] = m3 * u2 - B3 * B2
            Fy[i, 4, q] = (E + ptot) * u2 - uB * B2
            Fy[i, 5, q] = B1 * u2 - u1 * B2
            Fy[i, 6, q] = 0.0
            Fy[i, 7, q] = B3 * u2 - u3 * B2


def llf_faces(Um: np.ndarray, Up: np.ndarray, axis: int, gamma: float):
    """LLF flux over face arrays in (..., 8, npts) layout.

    Returns (flux, per-face alpha); raises when a trace has no real wave
    speed.  The dissipation bound is uniform along each face.
    """
    shape = Um.shape
    Umf = np.ascontiguousarray(Um).reshape(-1, 8, shape[-1])
    Upf = np.ascontiguousarray(Up).reshape(-1, 8, shape[-1])
    F = np.empty_like(Umf)
    alpha = np.empty(Umf.shape[0])
    min_rho, min_p = _llf_kernel(Umf, Upf, axis, gamma, F, alpha)
    if min_rho <= 0.0:
        raise InvalidStateError("nonpositive density in wave speed evaluation")
    if min_p < 0.0:
        raise InvalidStateError(f"negative pressure (min {min_p}) in wave speed evaluation")
    return F.reshape(shape), alpha.reshape(shape[:-2])


def volume_fluxes(U: np.ndarray, gamma: float):
    """Both axis fluxes at volume quadrature states, (..., 8, nq) layout."""
    shape = U.shape
    flat = np.ascontiguousarray(U).reshape(-1, 8, shape[-1])
    Fx = np.empty_like(flat)
    Fy = np.empty_like(flat)
    _volume_flux_kernel(flat, gamma, Fx, Fy)
    return Fx.reshape(shape), Fy.reshape(shape)


def llf_flux_axis(Um: np.ndarray, Up: np.ndarray, axis: int, gamma: float,
                  alpha: np.ndarray) -> np.ndarray:
    F = physical_flux_axis(Um, axis, gamma)
    F += physical_flux_axis(Up, axis, gamma)
    F *= 0.5
    F -= 0.5 * np.asarray(alpha)[..., None] * (Up - Um)
    return F


def llf_flux(Um: np.ndarray, Up: np.ndarray, normal, gamma: float,
             alpha: np.ndarray | float | None = None) -> np.ndarray:
    """Local Lax-Friedrichs flux for stacked trace pairs.

    alpha defaults to the pointwise max of the two traces' signal speeds;
    pass a precomputed per-edge bound to dissipate uniformly along an edge.
    """
    if alpha is None:
        alpha = np.maximum(max_signal_speed(Um, normal, gamma),
                           max_signal_speed(Up, normal, gamma))
    Fm = physical_flux(Um, normal, gamma)
    Fp = physical_flux(Up, normal, gamma)
    return 0.5 * (Fm + Fp) - 0.5 * np.asarray(alpha)[..., None] * (Up - Um)


def llf_flux_states(Uminus: ConservedState, Uplus: ConservedState, normal,
                    p: GasParams) -> np.ndarray:
    """Scalar-state LLF flux; pads n < 3 vectors with zeros."""
    def as8(s: ConservedState):
        row = np.zeros(8)
        row[0] = s.rho
        row[1:1 + s.n] = s.m
        row[4] = s.E
        row[5:5 + s.n] = s.B
        return row

    nrm = np.zeros(3)
    nvec = np.atleast_1d(np.asarray(normal, dtype=float))
    nrm[:nvec.size] = nvec
    return llf_flux(as8(Uminus), as8(Uplus), nrm, p.gamma)
