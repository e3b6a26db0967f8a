"""Time-marching driver for the benchmark cases."""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from .cases import init_case
from .config import RunConfig
from .errors import ErrorReport, compute_errors
from .field import DGField
from .output import DiagnosticsWriter, dump_averages, write_vtk
from .stepper import SolverAbort, StepInfo, step_ssprk3

__all__ = ["RunResult", "run_case"]


@dataclass
class RunResult:
    field: DGField
    t: float
    n_steps: int
    n_dy_triggers: int
    max_dy_iters: int
    min_rho: float
    min_internal_energy: float
    total_slice_calls: int
    error_report: ErrorReport | None = None
    step_infos: list = dc_field(default_factory=list)


def run_case(cfg: RunConfig, progress=None, collect_infos: bool = False) -> RunResult:
    """March a case to t_final, emitting outputs per the configured cadence.

    Raises SolverAbort (with a postmortem dump path attached) if any
    inadmissible state survives the limiting chain.
    """
    fld = init_case(cfg)
    out_dir = cfg.out_dir
    diag = None
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        diag = DiagnosticsWriter(os.path.join(out_dir, f"{cfg.case}_diagnostics.csv"))

    t = 0.0
    n_steps = 0
    n_triggers = 0
    max_iters = 0
    min_rho = np.inf
    min_ie = np.inf
    total_calls = 0
    infos = []

    def emit(tag):
        if out_dir:
            write_vtk(os.path.join(out_dir, f"{cfg.case}_{tag}.vtk"), fld, cfg.gamma)
            from ..limiter import write_averages_csv
            write_averages_csv(os.path.join(out_dir, f"{cfg.case}_{tag}_avg.csv"),
                               fld.cell_averages())

    while t < cfg.t_final - 1e-14 * max(cfg.t_final, 1.0):
        if cfg.fixed_dt is not None:
            dt = cfg.fixed_dt
        else:
            from .stepper import max_wave_speed
            dt = cfg.cfl * fld.dx / max_wave_speed(fld, cfg)
        dt = min(dt, cfg.t_final - t)
        try:
            fld, info = step_ssprk3(fld, cfg, dt=dt)
        except SolverAbort as exc:
            if out_dir and exc.dump is not None:
                path = dump_averages(out_dir, f"{cfg.case}_abort_step{n_steps}", exc.dump)
                raise SolverAbort(f"{exc} (state dump: {path})", dump=exc.dump) from exc
            raise
        t += dt
        n_steps += 1
        n_triggers += info.dy_triggered
        max_iters = max(max_iters, info.dy_iters)
        min_rho = min(min_rho, info.min_rho)
        min_ie = min(min_ie, info.min_internal_energy)
        total_calls += info.dy_slice_calls
        if collect_infos:
            infos.append(info)
        if diag:
            diag.record(t, info)
        if progress:
            progress(n_steps, t, info)
        if out_dir and cfg.output_every and n_steps % cfg.output_every == 0:
            emit(f"step{n_steps:06d}")

    emit("final")
    err = compute_errors(fld, t, cfg.gamma) if cfg.case == "alfven" else None
    return RunResult(field=fld, t=t, n_steps=n_steps, n_dy_triggers=n_triggers,
                     max_dy_iters=max_iters, min_rho=min_rho,
                     min_internal_energy=min_ie, total_slice_calls=total_calls,
                     error_report=err, step_infos=infos)
