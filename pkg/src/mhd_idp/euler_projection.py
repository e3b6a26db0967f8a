"""Closed-form Euclidean projection onto an Euler-like admissible slice.

The slice with magnetic energy beta fixed is

    F = { (rho, m, E) : rho >= eps,  E - |m|^2 / (2 rho) >= eps + beta/2 }.

The projection of (u, v, w) onto F reduces to a scalar-momentum problem:
stationarity forces the projected momentum parallel to v, so with
s = |v| we project (u, s, w) in three dimensions and rotate back.  The
minimizer is found by enumerating the KKT candidate points; the active
cases lead to a depressed cubic (both constraints active) or a pair of
quadratic roots in rho (energy constraint active only), all solvable in
real arithmetic.

The strict KKT sign conditions only prune candidates; every candidate is
feasible by construction.  They are therefore applied with a small
relative slack so that catastrophic cancellation near multiplier
boundaries cannot reject the true minimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["FluidProjection", "ProjectionError", "cubic_real_roots", "project_slice"]

# Relative slack on the KKT pruning inequalities (not on feasibility).
_PRUNE_SLACK = 1e-9

_TWO_PI = 2.0 * math.pi


class ProjectionError(RuntimeError):
    """Internal consistency failure: no feasible candidate was produced."""


@dataclass(frozen=True)
class FluidProjection:
    """Projection of a fluid point onto one slice.

    Attributes:
        rho, m, E: the projected state; m is parallel to the input v.
        dist2: squared Euclidean distance to the input.
    """

    rho: float
    m: np.ndarray
    E: float
    dist2: float


def _cbrt(t: float) -> float:
    return math.copysign(abs(t) ** (1.0 / 3.0), t)


def cubic_real_roots(p: float, q: float) -> list[float]:
    """All real roots of m^3 + p m + q = 0 using real arithmetic only.

    One root (Cardano) or three roots (trigonometric method) depending on
    the discriminant -4 p^3 - 27 q^2; repeated roots are returned once per
    distinct value.
    """
    if p == 0.0 and q == 0.0:
        return [0.0]
    if p == 0.0:
        return [_cbrt(-q)]
    if q == 0.0:
        roots = [0.0]
        if p < 0.0:
            r = math.sqrt(-p)
            roots += [r, -r]
        return roots
    disc = -4.0 * p * p * p - 27.0 * q * q
    if disc > 0.0:
        # three distinct real roots; requires p < 0
        amp = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (2.0 * p) * math.sqrt(-3.0 / p)
        theta = math.acos(min(1.0, max(-1.0, arg)))
        return [amp * math.cos((theta - _TWO_PI * k) / 3.0) for k in range(3)]
    if disc == 0.0:
        # double root at 3q/p, simple root at -3q/(2p)
        return [3.0 * q / p, -1.5 * q / p]
    half_q = -0.5 * q
    rad = math.sqrt(half_q * half_q + (p / 3.0) ** 3)
    # pick the large-magnitude Cardano term first, recover the other from
    # t1 * t2 = -(p/3)^3 to avoid cancellation for tiny roots
    t1 = half_q + rad if half_q >= 0.0 else half_q - rad
    t2 = -((p / 3.0) ** 3) / t1 if t1 != 0.0 else 0.0
    return [_cbrt(t1) + _cbrt(t2)]


def _project_reduced(u: float, s: float, w: float, eps: float, beta: float):
    """Project (u, s, w) with s = |v| >= 0; returns (rho, m, E, dist2)."""
    e0 = eps + 0.5 * beta
    if u >= eps and w - (s * s) / (2.0 * u) >= e0:
        return u, s, w, 0.0

    cands = []
    if u < eps and w - (s * s) / (2.0 * eps) >= e0:
        # density clamp alone restores feasibility
        cands.append((eps, s, w))
    if s > 0.0:
        # both constraints active: rho = eps on the energy boundary
        p = 4.0 * eps * eps + eps * beta - 2.0 * eps * w
        q = -2.0 * eps * eps * s
        for mr in cubic_real_roots(p, q):
            if 0.0 < mr <= s * (1.0 + _PRUNE_SLACK):
                cands.append((eps, mr, mr * mr / (2.0 * eps) + e0))
        # energy constraint active only: rho solves a quadratic
        c = e0 + u - w
        den = 2.0 * s * s + c * c
        num = u * u * den - 2.0 * u * s * s * (w - e0) + s ** 4
        if den > 0.0 and num >= 0.0:
            rad = 0.5 * math.sqrt(num) / math.sqrt(den)
            # roots of rho^2 - u rho + C = 0; small root via the product
            # C to dodge cancellation when the two terms nearly agree
            prod = (2.0 * u * s * s * (w - e0) - s ** 4) / (4.0 * den)
            big = 0.5 * u + rad if u >= 0.0 else 0.5 * u - rad
            roots = (big, prod / big) if big != 0.0 else (0.5 * u,)
            for rho in roots:
                if rho < eps:
                    continue
                mrad2 = s * s - 8.0 * rho * (rho - u)
                if mrad2 < 0.0:
                    continue
                mrad = 0.5 * math.sqrt(mrad2)
                for m in (0.5 * s - mrad, 0.5 * s + mrad):
                    cands.append((rho, m, e0 + m * m / (2.0 * rho)))
    # clamp point; always feasible, and the exact projection when s = 0
    cands.append((max(u, eps), 0.0, max(w, e0)))

    best = None
    best_d = math.inf
    for rho, m, E in cands:
        d = (rho - u) ** 2 + (m - s) ** 2 + (E - w) ** 2
        if d < best_d:
            best_d = d
            best = (rho, m, E)
    if best is None:  # pragma: no cover - the clamp point above forbids this
        raise ProjectionError(f"no feasible candidate for ({u}, {s}, {w}, eps={eps}, beta={beta})")
    return best[0], best[1], best[2], best_d


def project_slice(u: float, v, w: float, eps: float, beta: float = 0.0) -> FluidProjection:
    """Project the point (u, v, w) onto the slice set F.

    Args:
        u: density coordinate.
        v: momentum coordinate vector (length 1 to 3).
        w: energy coordinate.
        eps: admissibility tolerance, > 0.
        beta: fixed magnetic energy of the slice, >= 0.

    Returns the unique minimizer together with its squared distance; a
    feasible input is returned unchanged with dist2 = 0.
    """
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if beta < 0.0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    s2 = float(v @ v)
    s = math.sqrt(s2)
    rho, m_s, E, dist2 = _project_reduced(float(u), s, float(w), eps, beta)
    if m_s == s:
        m = v.copy()
    elif s > 0.0:
        m = (m_s / s) * v
    else:
        m = np.zeros_like(v)
    return FluidProjection(rho=rho, m=m, E=E, dist2=dist2)
