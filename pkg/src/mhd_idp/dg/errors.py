"""Discrete error norms for the Alfven wave convergence study.

Errors are measured on the four wave-carrying components: in-plane
transverse velocity and magnetic field, and their z components.  Per
cell the four component norms are averaged; the L1 norms are summed over
cells (with cell-volume quadrature weights) and the Linf norm takes the
max over cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis
from .cases import ALFVEN_ANGLE_COS, ALFVEN_ANGLE_SIN, exact_solution
from .field import DGField

__all__ = ["ErrorReport", "compute_errors", "convergence_rate"]


@dataclass(frozen=True)
class ErrorReport:
    err1: float
    errinf: float
    rate1: float | None = None
    rateinf: float | None = None


def _wave_components(U: np.ndarray):
    """(v_perp, v_z, B_perp, B_z) for stacked conserved states (..., 8)."""
    ct, st = ALFVEN_ANGLE_COS, ALFVEN_ANGLE_SIN
    u = U[..., 1:4] / U[..., 0:1]
    v_perp = -u[..., 0] * st + u[..., 1] * ct
    B_perp = -U[..., 5] * st + U[..., 6] * ct
    return v_perp, u[..., 2], B_perp, U[..., 7]


def compute_errors(fld: DGField, t: float, gamma: float, case: str = "alfven") -> ErrorReport:
    """L1 and Linf errors against the analytic solution at time t."""
    if case != "alfven":
        raise ValueError(f"case '{case}' provides no analytic solution")
    xc, yc = fld.cell_centers()
    X = xc[None, :, None] + 0.5 * fld.dx * basis.VOL_XI[None, None, :]
    Y = yc[:, None, None] + 0.5 * fld.dy * basis.VOL_ETA[None, None, :]
    exact = exact_solution(case, X, Y, t, gamma)          # (ny, nx, 9, 8)
    num = np.moveaxis(fld.eval_at(basis.VOL_BASIS), 2, 3)  # (ny, nx, 9, 8)

    diffs = [np.abs(a - b) for a, b in zip(_wave_components(num), _wave_components(exact))]
    cell_area_w = 0.25 * fld.dx * fld.dy * basis.VOL_W     # quadrature weights per cell

    err1 = 0.0
    errinf_cells = np.zeros((fld.ny, fld.nx))
    for d in diffs:
        err1 += 0.25 * float(np.sum(d @ cell_area_w))
        errinf_cells += 0.25 * d.max(axis=2)
    return ErrorReport(err1=err1, errinf=float(errinf_cells.max()))


def convergence_rate(err_coarse: float, err_fine: float) -> float:
    """Order estimate ln(err_h / err_{h/2}) / ln 2."""
    return float(np.log(err_coarse / err_fine) / np.log(2.0))
