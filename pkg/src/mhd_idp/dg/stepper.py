"""Semi-discrete DG residual, SSP-RK3 stepping, and the run driver.

Each RK stage applies, in order: the optimization-based cell-average
limiter (only when some average leaves the admissible set), the TVB
limiter, and the Zhang-Shu limiter.  The divergence-free projection runs
once at the start of every time step.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ..limiter import (admissibility_margins, admissible_rows_mask,
                       apply_limited_averages, limit_cell_averages)
from ..state import InvalidStateError
from . import basis
from .boundary import exterior_trace, ghost_averages
from .config import RunConfig
from .field import DGField
from .flux import llf_faces, max_signal_speed_axis, volume_fluxes
from .limiting import divfree_project, tvb_limit, zhang_shu_limit

__all__ = ["SolverAbort", "StepInfo", "step_ssprk3", "residual",
           "max_wave_speed", "limit_stage"]

_NX_HAT = np.array([1.0, 0.0, 0.0])
_NY_HAT = np.array([0.0, 1.0, 0.0])


class SolverAbort(RuntimeError):
    """Hard failure: an inadmissible state survived the limiting chain."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump


@dataclass
class StepInfo:
    dt: float
    dy_triggered: int = 0
    dy_iters: int = 0
    dy_conservation_residual: float = 0.0
    dy_slice_calls: int = 0
    min_rho: float = np.inf
    min_internal_energy: float = np.inf


def _face_states(fld: DGField, cfg: RunConfig):
    """Left/right trace pairs on interior + boundary faces, both axes.

    Variable-major layout: x faces (ny, nx+1, 8, 3) with normal +x,
    y faces (ny+1, nx, 8, 3) with normal +y.
    """
    # all four edge-trace sets in one coefficient contraction
    stacked = np.concatenate([basis.TRACE_E, basis.TRACE_W,
                              basis.TRACE_N, basis.TRACE_S])
    tr = fld.eval_at(stacked)                             # (ny, nx, 8, 12)
    npt = basis.TRACE_E.shape[0]
    trE, trW, trN, trS = (tr[..., i * npt:(i + 1) * npt] for i in range(4))

    ny, nx = fld.ny, fld.nx
    ULx = np.empty((ny, nx + 1, 8, npt))
    URx = np.empty((ny, nx + 1, 8, npt))
    ULx[:, 1:] = trE
    URx[:, :nx] = trW
    ULx[:, 0] = exterior_trace(trW[:, 0], trE[:, -1], "W", cfg)
    URx[:, nx] = exterior_trace(trE[:, -1], trW[:, 0], "E", cfg)

    ULy = np.empty((ny + 1, nx, 8, npt))
    URy = np.empty((ny + 1, nx, 8, npt))
    ULy[1:] = trN
    URy[:ny] = trS
    ULy[0] = exterior_trace(trS[0], trN[-1], "S", cfg)
    URy[ny] = exterior_trace(trN[-1], trS[0], "N", cfg)
    return (ULx, URx), (ULy, URy)


def _edge_alphas(UL, UR, axis, gamma):
    """Per-edge dissipation bound: max signal speed over points and traces."""
    a = np.maximum(max_signal_speed_axis(np.moveaxis(UL, -2, -1), axis, gamma),
                   max_signal_speed_axis(np.moveaxis(UR, -2, -1), axis, gamma))
    return a.max(axis=-1)


def max_wave_speed(fld: DGField, cfg: RunConfig) -> float:
    """Largest per-edge LLF bound, used for the CFL time step."""
    (ULx, URx), (ULy, URy) = _face_states(fld, cfg)
    ax = _edge_alphas(ULx, URx, 0, cfg.gamma)
    ay = _edge_alphas(ULy, URy, 1, cfg.gamma)
    return float(max(ax.max(), ay.max()))


def _project_test(F, W, ny, nx):
    """sum_q w_q F_q phi_k as one flat matrix product.

    F is (ny, nx, 8, Q) and W is (Q, K); returns (ny, nx, 8, K).
    """
    return (F.reshape(-1, W.shape[0]) @ W).reshape(ny, nx, 8, W.shape[1])


def residual(fld: DGField, cfg: RunConfig):
    """Time derivative of the modal coefficients; also returns the max
    per-edge signal speed for time-step control."""
    dx = fld.dx
    gamma = cfg.gamma
    ny, nx = fld.ny, fld.nx

    (ULx, URx), (ULy, URy) = _face_states(fld, cfg)
    Fx, ax = llf_faces(ULx, URx, 0, gamma)
    Fy, ay = llf_faces(ULy, URy, 1, gamma)

    # volume term: (1/4) sum_q w_q (Fx 2/dx dphi_xi + Fy 2/dy dphi_eta)
    Uq = fld.eval_at(basis.VOL_BASIS)                     # (ny, nx, 8, 9)
    Gx, Gy = volume_fluxes(Uq, gamma)
    w_gx = basis.VOL_W[:, None] * basis.VOL_GRAD_XI
    w_gy = basis.VOL_W[:, None] * basis.VOL_GRAD_ETA
    vol = _project_test(Gx, w_gx, ny, nx)
    vol += _project_test(Gy, w_gy, ny, nx)
    vol *= 0.5 / dx

    # edge term: (1/(2 dx)) sum_q w_q Fhat phi, difference of the two faces
    w = basis.EDGE_W[:, None]
    edge = _project_test(Fx[:, 1:], w * basis.TRACE_E, ny, nx)
    edge -= _project_test(Fx[:, :-1], w * basis.TRACE_W, ny, nx)
    edge += _project_test(Fy[1:], w * basis.TRACE_N, ny, nx)
    edge -= _project_test(Fy[:-1], w * basis.TRACE_S, ny, nx)
    edge *= 0.5 / dx

    vol -= edge
    return vol, float(max(ax.max(), ay.max()))


def limit_stage(fld: DGField, cfg: RunConfig, info: StepInfo) -> DGField:
    """Post-stage limiting chain: cell-average limiter (if any average is
    out of bound), then TVB, then Zhang-Shu."""
    avgs = fld.cell_averages()
    if not admissible_rows_mask(avgs, cfg.eps).all():
        x_star, report = limit_cell_averages(avgs, cfg.eps, tol_dy=cfg.dy_tol,
                                             max_iters=cfg.dy_max_iters,
                                             threads=cfg.threads)
        if not report.converged:
            raise SolverAbort(
                f"cell-average limiter failed to converge in {report.n_iters} iterations",
                dump=avgs)
        fld = apply_limited_averages(fld, x_star)
        info.dy_triggered += 1
        info.dy_iters += report.n_iters
        info.dy_conservation_residual = max(info.dy_conservation_residual,
                                            report.conservation_residual)
        info.dy_slice_calls += report.n_slice_calls

    fld = tvb_limit(fld, cfg.tvb_m, ghost_averages(fld.coeffs[..., 0], cfg))
    fld = zhang_shu_limit(fld, cfg.eps)

    avgs = fld.cell_averages()
    rho = avgs[:, 0]
    ie = avgs[:, 4] - np.einsum("ij,ij->i", avgs[:, 1:4], avgs[:, 1:4]) / (2.0 * rho) \
        - 0.5 * np.einsum("ij,ij->i", avgs[:, 5:8], avgs[:, 5:8])
    info.min_rho = min(info.min_rho, float(rho.min()))
    info.min_internal_energy = min(info.min_internal_energy, float(ie.min()))
    viol, scale = admissibility_margins(avgs, cfg.eps)
    if np.any(viol > 1e-11 * scale):
        raise SolverAbort("inadmissible cell average after the limiting chain", dump=avgs)
    return fld


def step_ssprk3(fld: DGField, cfg: RunConfig, dt: float | None = None) -> tuple[DGField, StepInfo]:
    """Advance one SSP-RK3 step, limiting after every stage.

    dt defaults to the CFL rule using the current field's wave speeds.
    """
    fld = divfree_project(fld)
    # restore pointwise admissibility; scaling deviations preserves the
    # cellwise divergence-free property just enforced
    fld = zhang_shu_limit(fld, cfg.eps)
    try:
        r0, alpha = residual(fld, cfg)
    except InvalidStateError as exc:
        raise SolverAbort(f"wave-speed evaluation failed: {exc}",
                          dump=fld.cell_averages()) from exc
    if dt is None:
        dt = cfg.fixed_dt if cfg.fixed_dt is not None else cfg.cfl * fld.dx / alpha
    info = StepInfo(dt=dt)

    u1 = fld.copy()
    u1.coeffs += dt * r0
    u1 = limit_stage(u1, cfg, info)

    try:
        r1, _ = residual(u1, cfg)
        u2 = fld.copy()
        u2.coeffs = 0.75 * fld.coeffs + 0.25 * (u1.coeffs + dt * r1)
        u2 = limit_stage(u2, cfg, info)

        r2, _ = residual(u2, cfg)
        out = fld.copy()
        out.coeffs = fld.coeffs / 3.0 + 2.0 / 3.0 * (u2.coeffs + dt * r2)
        out = limit_stage(out, cfg, info)
    except InvalidStateError as exc:
        raise SolverAbort(f"wave-speed evaluation failed: {exc}",
                          dump=fld.cell_averages()) from exc
    return out, info
