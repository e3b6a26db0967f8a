"""Derivative-free scalar minimization on a closed interval (Brent).

Combines golden-section steps with inverse parabolic interpolation; the
parabolic step is taken only when it falls inside the bracket and moves
less than half the second-to-last displacement.  Convergence is declared
when the best point is within twice the mixed tolerance of the bracket
midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["BrentConfig", "BrentResult", "minimize"]

# golden ratio c = (3 - sqrt(5)) / 2
_GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class BrentConfig:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_iters: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class BrentResult:
    x_min: float
    f_min: float
    n_evals: int
    converged: bool


def minimize(f, a: float, b: float, cfg: BrentConfig | None = None) -> BrentResult:
    """Minimize a continuous convex f on [a, b].

    Returns the best point found; `converged` is False only when the
    iteration cap is exhausted before the stopping criterion fires.
    """
    if cfg is None:
        cfg = BrentConfig()
    if a > b:
        raise ValueError(f"invalid interval [{a}, {b}]")

    sa, sb = a, b
    x = a + _GOLDEN * (b - a)
    w = v = x
    fx = f(x)
    fw = fv = fx
    n_evals = 1
    d = 0.0
    e = 0.0

    for _ in range(cfg.max_iters):
        m = 0.5 * (sa + sb)
        tol = cfg.rel_tol * abs(x) + cfg.abs_tol
        if abs(x - m) < 2.0 * tol - 0.5 * (sb - sa):
            return BrentResult(x, fx, n_evals, True)

        take_parabola = False
        p = q = 0.0
        if abs(e) > tol:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            else:
                q = -q
            r_e = e
            e = d
            if abs(p) < 0.5 * abs(q * r_e) and q * (sa - x) < p < q * (sb - x):
                take_parabola = True

        if take_parabola:
            d = p / q
        else:
            e = (sb - x) if x < m else (sa - x)
            d = _GOLDEN * e

        # never evaluate closer than tol to the current best point
        u = x + d if abs(d) >= tol else x + math.copysign(tol, d)
        fu = f(u)
        n_evals += 1

        if fu <= fx:
            if u < x:
                sb = x
            else:
                sa = x
            v, fv = w, fw
            w, fw = x, fx
            x, fx = u, fu
        else:
            if u < x:
                sa = u
            else:
                sb = u
            if fu <= fw or w == x:
                v, fv = w, fw
                w, fw = u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu

    return BrentResult(x, fx, n_evals, False)
