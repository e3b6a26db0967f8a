"""Field output: legacy-ASCII VTK snapshots and per-run diagnostics CSV."""

from __future__ import annotations

import os

import numpy as np

from .field import DGField

__all__ = ["write_vtk", "DiagnosticsWriter", "dump_averages"]

DIAG_HEADER = ("time,dt,dy_triggered,dy_iters,conservation_residual,"
               "min_rho,min_internal_energy")


def write_vtk(path, fld: DGField, gamma: float):
    """Structured-grid VTK snapshot of the cell averages.

    Cell-data arrays: rho, m (vector), E, B (vector), pressure, mach.
    """
    avg = fld.cell_averages()
    rho = avg[:, 0]
    m = avg[:, 1:4]
    E = avg[:, 4]
    B = avg[:, 5:8]
    u2 = np.einsum("ij,ij->i", m, m) / rho ** 2
    ie = E - 0.5 * rho * u2 - 0.5 * np.einsum("ij,ij->i", B, B)
    p = (gamma - 1.0) * ie
    with np.errstate(invalid="ignore", divide="ignore"):
        mach = np.sqrt(u2) / np.sqrt(np.maximum(gamma * p / rho, 1e-300))

    nx, ny = fld.nx, fld.ny
    xs = np.linspace(fld.xlim[0], fld.xlim[1], nx + 1)
    ys = np.linspace(fld.ylim[0], fld.ylim[1], ny + 1)
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write("mhd_idp cell averages\nASCII\n")
        fh.write("DATASET STRUCTURED_GRID\n")
        fh.write(f"DIMENSIONS {nx + 1} {ny + 1} 1\n")
        fh.write(f"POINTS {(nx + 1) * (ny + 1)} double\n")
        for y in ys:
            for x in xs:
                fh.write(f"{x:.17g} {y:.17g} 0\n")
        fh.write(f"CELL_DATA {nx * ny}\n")

        def scalars(name, vals):
            fh.write(f"SCALARS {name} double 1\nLOOKUP_TABLE default\n")
            fh.write("\n".join(f"{v:.17g}" for v in vals) + "\n")

        def vectors(name, arr):
            fh.write(f"VECTORS {name} double\n")
            for row in arr:
                fh.write(f"{row[0]:.17g} {row[1]:.17g} {row[2]:.17g}\n")

        scalars("rho", rho)
        vectors("m", m)
        scalars("E", E)
        vectors("B", B)
        scalars("pressure", p)
        scalars("mach", mach)


class DiagnosticsWriter:
    """Appends one CSV row per time step."""

    def __init__(self, path):
        self.path = path
        with open(path, "w") as fh:
            fh.write(DIAG_HEADER + "\n")

    def record(self, t, info):
        with open(self.path, "a") as fh:
            fh.write(f"{t:.17g},{info.dt:.17g},{1 if info.dy_triggered else 0},"
                     f"{info.dy_iters},{info.dy_conservation_residual:.17g},"
                     f"{info.min_rho:.17g},{info.min_internal_energy:.17g}\n")


def dump_averages(out_dir, tag, averages: np.ndarray) -> str:
    """Write a postmortem cell-average dump; returns the path."""
    from ..limiter import write_averages_csv

    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"dump_{tag}.csv")
    write_averages_csv(path, averages)
    return path
