"""Projection onto the MHD admissible set via magnetic-energy slicing.

The admissible set couples (rho, m, E) with B only through the magnetic
energy beta = |B|^2.  Fixing beta decouples the projection into a
closed-form magnetic part, B = sqrt(beta) z/|z|, and an Euler-like fluid
part handled by :mod:`mhd_idp.euler_projection`.  The squared distance

    d2(beta) = f(beta) + (sqrt(beta) - |z|)^2

is strictly convex and continuous, and its minimizer lies inside
[beta_low, |z|^2] with beta_low = (|z| / (1 + sqrt(f(0)) + |z|^2/2))^2,
so a bracketed scalar minimization (Brent) finds it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .brent import BrentConfig, minimize
from .euler_projection import project_slice
from .state import ConservedState, GasParams, is_admissible

__all__ = [
    "SlicingResult",
    "project_admissible",
    "project_admissible_row",
    "eval_d2",
    "search_interval",
]

# |z| at or below this is treated as exactly zero (avoids denormal division)
_Z_FLOOR = 1e-300

_FEAS_TOL = 1e-10


@dataclass(frozen=True)
class SlicingResult:
    """Outcome of one projection onto the admissible set.

    Attributes:
        state: the projected conserved state.
        beta_star: minimizing magnetic energy (|B|^2 of the output).
        interval: Brent search interval (beta_low, beta_high).
        n_slice_calls: number of Euler-slice projections performed.
        dist2: squared distance from the input point.
        converged: Brent status (True for the short-circuit branches).
    """

    state: ConservedState
    beta_star: float
    interval: tuple[float, float]
    n_slice_calls: int
    dist2: float
    converged: bool = True


def eval_d2(u, v, w, z, eps: float, beta: float) -> float:
    """Objective d2(beta) = f(beta) + (sqrt(beta) - |z|)^2 for z != 0."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    znorm = math.sqrt(float(z @ z))
    fluid = project_slice(u, v, w, eps, beta)
    return fluid.dist2 + (math.sqrt(beta) - znorm) ** 2


def search_interval(u, v, w, z, eps: float) -> tuple[float, float, float]:
    """Search interval (beta_low, beta_high) plus f(0) for a point with z != 0.

    beta_high = |z|^2; beta_low follows from the subgradient bound of the
    fluid distance and is clamped into [0, beta_high] defensively.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    znorm2 = float(z @ z)
    znorm = math.sqrt(znorm2)
    if znorm <= _Z_FLOOR:
        raise ValueError("search interval requires z != 0")
    f0 = project_slice(u, v, w, eps, 0.0).dist2
    beta_low = (znorm / (1.0 + math.sqrt(f0) + 0.5 * znorm2)) ** 2
    beta_low = min(max(beta_low, 0.0), znorm2)
    return beta_low, znorm2, f0


def project_admissible(u, v, w, z, eps: float,
                       cfg: BrentConfig | None = None) -> SlicingResult:
    """Project the point (u, v, w, z) onto the admissible set.

    An admissible input is returned unchanged.  For z = 0 the magnetic
    output is zero and the fluid part is a single slice projection at
    beta = 0; otherwise d2 is minimized over the bracketing interval.
    """
    if cfg is None:
        cfg = BrentConfig()
    v = np.atleast_1d(np.asarray(v, dtype=float))
    z = np.atleast_1d(np.asarray(z, dtype=float))
    state_in = ConservedState(float(u), v, float(w), z)
    params = GasParams(gamma=2.0, eps=eps)  # gamma irrelevant for membership
    if is_admissible(state_in, params):
        return SlicingResult(state=state_in, beta_star=float(z @ z),
                             interval=(0.0, float(z @ z)), n_slice_calls=0,
                             dist2=0.0)

    znorm2 = float(z @ z)
    znorm = math.sqrt(znorm2)
    if znorm <= _Z_FLOOR:
        fluid = project_slice(u, v, w, eps, 0.0)
        out = ConservedState(fluid.rho, fluid.m, fluid.E, np.zeros_like(z))
        _check_feasible(out, eps)
        return SlicingResult(state=out, beta_star=0.0, interval=(0.0, 0.0),
                             n_slice_calls=1, dist2=fluid.dist2 + znorm2)

    n_calls = 1  # f(0) evaluation below
    f0 = project_slice(u, v, w, eps, 0.0).dist2
    beta_low = (znorm / (1.0 + math.sqrt(f0) + 0.5 * znorm2)) ** 2
    beta_low = min(max(beta_low, 0.0), znorm2)
    beta_high = znorm2

    calls = [0]

    def d2(beta):
        calls[0] += 1
        fluid = project_slice(u, v, w, eps, beta)
        return fluid.dist2 + (math.sqrt(beta) - znorm) ** 2

    res = minimize(d2, beta_low, beta_high, cfg)
    beta_star = res.x_min
    fluid = project_slice(u, v, w, eps, beta_star)
    calls[0] += 1
    n_calls += calls[0]

    B = math.sqrt(beta_star) * (z / znorm)
    out = ConservedState(fluid.rho, fluid.m, fluid.E, B)
    _check_feasible(out, eps)
    dist2 = fluid.dist2 + (math.sqrt(beta_star) - znorm) ** 2
    return SlicingResult(state=out, beta_star=beta_star,
                         interval=(beta_low, beta_high),
                         n_slice_calls=n_calls, dist2=dist2,
                         converged=res.converged)


def project_admissible_row(row: np.ndarray, eps: float, n: int = 3,
                           cfg: BrentConfig | None = None) -> SlicingResult:
    """Projection taking the (rho, m.., E, B..) row layout."""
    row = np.asarray(row, dtype=float)
    return project_admissible(row[0], row[1:1 + n], row[1 + n], row[2 + n:], eps, cfg)


def _check_feasible(s: ConservedState, eps: float):
    kin = float(s.m @ s.m) / (2.0 * s.rho)
    mag = 0.5 * float(s.B @ s.B)
    viol = max(eps - s.rho, eps - (s.E - kin - mag))
    # violation beyond the rounding noise of the energy balance is a bug
    if viol > _FEAS_TOL * (1.0 + abs(s.E) + kin + mag):
        raise RuntimeError(f"assembled projection violates the admissible set by {viol}")
