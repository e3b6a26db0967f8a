"""Conservative invariant-domain-preserving limiter for ideal MHD.

Projection onto the MHD admissible set by magnetic-energy slicing, a
Davis-Yin cell-average limiter, and a P2 DG solver harness for the
standard benchmarks.
"""

from .brent import BrentConfig, BrentResult, minimize
from .euler_projection import (FluidProjection, ProjectionError,
                               cubic_real_roots, project_slice)
from .limiter import (DYReport, apply_limited_averages, limit_cell_averages,
                      prox_admissible, prox_conservation, read_averages_csv,
                      write_averages_csv)
from .slicing import SlicingResult, eval_d2, project_admissible, search_interval
from .state import (ConservedState, GasParams, InvalidStateError,
                    fast_magnetosonic_speed, internal_energy_density,
                    is_admissible, pressure_of, signal_speed,
                    state_from_primitive)

__version__ = "0.1.0"

__all__ = [
    "ConservedState", "GasParams", "InvalidStateError",
    "internal_energy_density", "is_admissible", "pressure_of",
    "fast_magnetosonic_speed", "signal_speed", "state_from_primitive",
    "FluidProjection", "ProjectionError", "cubic_real_roots", "project_slice",
    "BrentConfig", "BrentResult", "minimize",
    "SlicingResult", "project_admissible", "eval_d2", "search_interval",
    "DYReport", "prox_conservation", "prox_admissible",
    "limit_cell_averages", "apply_limited_averages",
    "read_averages_csv", "write_averages_csv",
    "__version__",
]
