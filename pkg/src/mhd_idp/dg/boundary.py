"""Exterior trace construction for the supported boundary conditions."""

from __future__ import annotations

import numpy as np

from . import basis
from .cases import jet_ambient_state, jet_inflow_state
from .config import RunConfig

__all__ = ["exterior_trace", "ghost_averages"]

_JET_HALF_WIDTH = 0.05


def _mirror(U: np.ndarray, axis: int, var_axis: int = -2) -> np.ndarray:
    """Reflect a trace: negate normal momentum and normal magnetic field."""
    out = U.copy()
    idx = [slice(None)] * out.ndim
    idx[var_axis] = 1 + axis
    out[tuple(idx)] *= -1.0
    idx[var_axis] = 5 + axis
    out[tuple(idx)] *= -1.0
    return out


def _edge_point_coords(cfg: RunConfig, side: str) -> np.ndarray:
    """Physical coordinates of the boundary edge quadrature points.

    Returns the along-edge coordinate with shape (ncells_along, 3).
    """
    if side in ("W", "E"):
        lo, n = cfg.ylim[0], cfg.ny
    else:
        lo, n = cfg.xlim[0], cfg.nx
    h = cfg.dx
    centers = lo + h * (np.arange(n) + 0.5)
    return centers[:, None] + 0.5 * h * basis.GAUSS3_X[None, :]


def exterior_trace(interior: np.ndarray, wrap: np.ndarray, side: str,
                   cfg: RunConfig) -> np.ndarray:
    """Exterior trace on one boundary side.

    Args:
        interior: interior trace at the boundary, shape (ncells, 8, npts).
        wrap: trace from the opposite side of the mesh (periodic partner).
        side: one of 'W', 'E', 'S', 'N'.
    """
    kind = cfg.bc[side]
    if kind == "periodic":
        return wrap
    if kind == "outflow":
        return interior
    axis = 0 if side in ("W", "E") else 1
    if kind == "reflective":
        return _mirror(interior, axis)
    if kind == "jet-inflow":
        if side != "W":
            raise ValueError("jet inflow is defined on the west boundary")
        coords = _edge_point_coords(cfg, side)            # (ny, npts) y values
        jet = jet_inflow_state(cfg.jet_b0, cfg.gamma)[:, None]
        ambient = jet_ambient_state(cfg.jet_b0, cfg.gamma)[:, None]
        # outward normal is -x: u.n = -u_x, so inflow means u_x >= 0
        inflow = (interior[:, 1] / interior[:, 0] >= 0.0)[:, None, :]
        out = np.where(inflow, ambient, interior)
        nozzle = (np.abs(coords) <= _JET_HALF_WIDTH)[:, None, :]
        return np.where(nozzle, jet, out)
    raise ValueError(f"unsupported boundary kind '{kind}'")


def ghost_averages(avg: np.ndarray, cfg: RunConfig) -> dict:
    """Neighbor cell averages outside each boundary, for the TVB limiter."""
    out = {}
    for side in ("W", "E", "S", "N"):
        kind = cfg.bc[side]
        if side == "W":
            inner, wrap = avg[:, 0], avg[:, -1]
        elif side == "E":
            inner, wrap = avg[:, -1], avg[:, 0]
        elif side == "S":
            inner, wrap = avg[0], avg[-1]
        else:
            inner, wrap = avg[-1], avg[0]
        if kind == "periodic":
            out[side] = wrap
        elif kind == "outflow":
            out[side] = inner
        elif kind == "reflective":
            out[side] = _mirror(inner, 0 if side in ("W", "E") else 1, var_axis=-1)
        elif kind == "jet-inflow":
            g = inner.copy()
            centers = cfg.ylim[0] + cfg.dx * (np.arange(g.shape[0]) + 0.5)
            g[np.abs(centers) <= _JET_HALF_WIDTH] = jet_inflow_state(cfg.jet_b0, cfg.gamma)
            out[side] = g
        else:
            raise ValueError(f"unsupported boundary kind '{kind}'")
    return out
