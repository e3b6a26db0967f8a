"""P2 discontinuous Galerkin ideal-MHD solver on uniform quad meshes."""

from .cases import case_defaults, exact_solution, init_case
from .config import RunConfig, load_config, parse_config_text
from .errors import ErrorReport, compute_errors, convergence_rate
from .field import DGField, field_from_function
from .flux import llf_flux, llf_flux_states, max_signal_speed, physical_flux
from .limiting import divfree_project, tvb_limit, zhang_shu_limit
from .runner import RunResult, run_case
from .stepper import SolverAbort, StepInfo, step_ssprk3

__all__ = [
    "RunConfig", "load_config", "parse_config_text",
    "DGField", "field_from_function",
    "init_case", "exact_solution", "case_defaults",
    "physical_flux", "llf_flux", "llf_flux_states", "max_signal_speed",
    "tvb_limit", "zhang_shu_limit", "divfree_project",
    "compute_errors", "convergence_rate", "ErrorReport",
    "step_ssprk3", "SolverAbort", "StepInfo",
    "run_case", "RunResult",
]
