"""Benchmark initial data and exact solutions.

Cases: a circularly polarized Alfven wave propagating obliquely on a
periodic box (smooth, with exact solution), the rotor problem, the
Orszag-Tang vortex, and a Mach 800 magnetized astrophysical jet.
"""

from __future__ import annotations

import numpy as np

from .config import RunConfig
from .field import DGField, field_from_function

__all__ = ["init_case", "exact_solution", "case_defaults", "CASES",
           "ALFVEN_ANGLE_COS", "ALFVEN_ANGLE_SIN", "jet_inflow_state",
           "jet_ambient_state"]

CASES = ("alfven", "rotor", "orszag-tang", "jet")

# propagation angle theta = atan(1/2)
ALFVEN_ANGLE_COS = 2.0 / np.sqrt(5.0)
ALFVEN_ANGLE_SIN = 1.0 / np.sqrt(5.0)


def _prim_to_cons(rho, ux, uy, uz, p, Bx, By, Bz, gamma):
    """Stack primitive arrays into conserved-variable arrays (..., 8)."""
    out = np.empty(np.broadcast(rho, ux, p, Bx).shape + (8,))
    out[..., 0] = rho
    out[..., 1] = rho * ux
    out[..., 2] = rho * uy
    out[..., 3] = rho * uz
    u2 = ux * ux + uy * uy + uz * uz
    B2 = Bx * Bx + By * By + Bz * Bz
    out[..., 4] = p / (gamma - 1.0) + 0.5 * rho * u2 + 0.5 * B2
    out[..., 5] = Bx
    out[..., 6] = By
    out[..., 7] = Bz
    return out


def _alfven_fields(x, y, t, gamma):
    ct, st = ALFVEN_ANGLE_COS, ALFVEN_ANGLE_SIN
    zeta = x * ct + y * st - t
    sin = 0.1 * np.sin(2.0 * np.pi * zeta)
    cos = 0.1 * np.cos(2.0 * np.pi * zeta)
    # parallel / perpendicular decomposition in the (x, y) plane
    v_par, v_perp, v_z = np.zeros_like(sin), sin, cos
    B_par, B_perp, B_z = np.ones_like(sin), sin, cos
    ux = v_par * ct - v_perp * st
    uy = v_par * st + v_perp * ct
    Bx = B_par * ct - B_perp * st
    By = B_par * st + B_perp * ct
    rho = np.ones_like(sin)
    p = np.full_like(sin, 0.1)
    return _prim_to_cons(rho, ux, uy, v_z, p, Bx, By, B_z, gamma)


def _rotor_fields(x, y, gamma):
    r0, r1 = 0.1, 0.115
    r = np.sqrt((x - 0.5) ** 2 + (y - 0.5) ** 2)
    lam = (r1 - r) / (r1 - r0)
    rsafe = np.maximum(r, 1e-300)

    rho = np.where(r <= r0, 10.0, np.where(r <= r1, 1.0 + 9.0 * lam, 1.0))
    ux = np.where(r <= r0, -(y - 0.5) / r0,
                  np.where(r <= r1, -lam * (y - 0.5) / rsafe, 0.0))
    uy = np.where(r <= r0, (x - 0.5) / r0,
                  np.where(r <= r1, lam * (x - 0.5) / rsafe, 0.0))
    p = np.full_like(x, 0.5)
    Bx = np.full_like(x, 2.5 / np.sqrt(4.0 * np.pi))
    zero = np.zeros_like(x)
    return _prim_to_cons(rho, ux, uy, zero, p, Bx, zero, zero, gamma)


def _orszag_tang_fields(x, y, gamma):
    rho = np.full_like(x, gamma * gamma)
    p = np.full_like(x, gamma)
    ux = -np.sin(y)
    uy = np.sin(x)
    Bx = -np.sin(y)
    By = np.sin(2.0 * x)
    zero = np.zeros_like(x)
    return _prim_to_cons(rho, ux, uy, zero, p, Bx, By, zero, gamma)


def jet_ambient_state(B0: float, gamma: float) -> np.ndarray:
    return _prim_to_cons(np.float64(0.14), 0.0, 0.0, 0.0, np.float64(1.0),
                         np.float64(B0), 0.0, 0.0, gamma)


def jet_inflow_state(B0: float, gamma: float) -> np.ndarray:
    return _prim_to_cons(np.float64(1.4), np.float64(800.0), 0.0, 0.0,
                         np.float64(1.0), np.float64(B0), 0.0, 0.0, gamma)


def _jet_fields(x, y, gamma, B0):
    rho = np.full_like(x, 0.14)
    p = np.ones_like(x)
    Bx = np.full_like(x, B0)
    zero = np.zeros_like(x)
    return _prim_to_cons(rho, zero, zero, zero, p, Bx, zero, zero, gamma)


def init_case(cfg: RunConfig) -> DGField:
    """L2-project a case's initial data onto the mesh of cfg."""
    if cfg.case == "alfven":
        fn = lambda X, Y: _alfven_fields(X, Y, 0.0, cfg.gamma)
    elif cfg.case == "rotor":
        fn = lambda X, Y: _rotor_fields(X, Y, cfg.gamma)
    elif cfg.case == "orszag-tang":
        fn = lambda X, Y: _orszag_tang_fields(X, Y, cfg.gamma)
    elif cfg.case == "jet":
        fn = lambda X, Y: _jet_fields(X, Y, cfg.gamma, cfg.jet_b0)
    else:
        raise ValueError(f"unknown case '{cfg.case}' (choose from {CASES})")
    return field_from_function(fn, cfg.xlim, cfg.ylim, cfg.nx, cfg.ny)


def exact_solution(case: str, x, y, t: float, gamma: float) -> np.ndarray:
    """Pointwise exact conserved state; only the Alfven wave provides one."""
    if case != "alfven":
        raise ValueError(f"case '{case}' has no analytic solution")
    return _alfven_fields(np.asarray(x, dtype=float), np.asarray(y, dtype=float), t, gamma)


def case_defaults(case: str) -> dict:
    """Desk-scale default configuration per benchmark."""
    if case == "alfven":
        return dict(case=case, xlim=(0.0, 0.5 * np.sqrt(5.0)), ylim=(0.0, np.sqrt(5.0)),
                    nx=16, ny=32, gamma=5.0 / 3.0, eps=1e-13, cfl=0.2, tvb_m=100.0,
                    t_final=2.0, fixed_dt=0.08 * 2.0 ** -5,
                    bc=dict(W="periodic", E="periodic", S="periodic", N="periodic"))
    if case == "rotor":
        return dict(case=case, xlim=(0.0, 1.0), ylim=(0.0, 1.0), nx=150, ny=150,
                    gamma=5.0 / 3.0, eps=1e-9, cfl=0.2, tvb_m=100.0, t_final=0.295,
                    bc=dict(W="outflow", E="outflow", S="outflow", N="outflow"))
    if case == "orszag-tang":
        return dict(case=case, xlim=(0.0, 2.0 * np.pi), ylim=(0.0, 2.0 * np.pi),
                    nx=100, ny=100, gamma=5.0 / 3.0, eps=1e-9, cfl=0.7, tvb_m=100.0,
                    t_final=0.5,
                    bc=dict(W="periodic", E="periodic", S="periodic", N="periodic"))
    if case == "jet":
        return dict(case=case, xlim=(0.0, 1.5), ylim=(0.0, 0.75), nx=150, ny=75,
                    gamma=1.4, eps=1e-6, cfl=0.2, tvb_m=110.0, t_final=5e-4,
                    jet_b0=np.sqrt(200.0),
                    bc=dict(W="jet-inflow", E="outflow", S="reflective", N="outflow"))
    raise ValueError(f"unknown case '{case}' (choose from {CASES})")
