"""Ideal-MHD conserved state algebra and admissibility checks.

A state holds the conserved variables (rho, m, E, B) with momentum and
magnetic field vectors of configurable dimension n in {1, 2, 3}.  The
numerically admissible set keeps density and internal energy density at
or above a small tolerance eps; it is closed and convex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConservedState",
    "GasParams",
    "InvalidStateError",
    "internal_energy_density",
    "is_admissible",
    "pressure_of",
    "fast_magnetosonic_speed",
    "signal_speed",
    "state_from_primitive",
]


class InvalidStateError(ValueError):
    """A state cannot be evaluated (nonpositive density, negative pressure)."""


@dataclass(frozen=True)
class GasParams:
    """Ideal-gas adiabatic index and admissibility tolerance."""

    gamma: float
    eps: float = 1e-13

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not self.eps > 0.0:
            raise ValueError(f"eps must be positive, got {self.eps}")


@dataclass(frozen=True, eq=False)
class ConservedState:
    """One conserved MHD state (rho, m, E, B) with n-component vectors."""

    rho: float
    m: np.ndarray
    E: float
    B: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, ConservedState):
            return NotImplemented
        return (self.rho == other.rho and self.E == other.E
                and np.array_equal(self.m, other.m)
                and np.array_equal(self.B, other.B))

    def __post_init__(self):
        m = np.atleast_1d(np.asarray(self.m, dtype=float))
        B = np.atleast_1d(np.asarray(self.B, dtype=float))
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "B", B)
        if m.shape != B.shape or m.ndim != 1 or m.size not in (1, 2, 3):
            raise ValueError(f"m and B must share a length in (1,2,3), got {m.shape} and {B.shape}")
        if not (math.isfinite(self.rho) and math.isfinite(self.E)
                and np.all(np.isfinite(m)) and np.all(np.isfinite(B))):
            raise ValueError("state components must be finite")

    @property
    def n(self) -> int:
        return self.m.size

    def to_row(self) -> np.ndarray:
        """Flatten to the (rho, m_1..m_n, E, B_1..B_n) row layout."""
        return np.concatenate(([self.rho], self.m, [self.E], self.B))

    @classmethod
    def from_row(cls, row, n: int = 3) -> "ConservedState":
        row = np.asarray(row, dtype=float)
        if row.size != 2 + 2 * n:
            raise ValueError(f"row of length {row.size} does not match n={n}")
        return cls(row[0], row[1:1 + n], row[1 + n], row[2 + n:])


def internal_energy_density(s: ConservedState) -> float:
    """Thermal part of the total energy: E - |m|^2/(2 rho) - |B|^2/2."""
    if s.rho <= 0.0:
        raise InvalidStateError(f"density must be positive, got {s.rho}")
    return s.E - float(s.m @ s.m) / (2.0 * s.rho) - 0.5 * float(s.B @ s.B)


def is_admissible(s: ConservedState, p: GasParams) -> bool:
    """True iff rho >= eps and the internal energy density >= eps.

    Total function: nonpositive density returns False without touching
    the energy term.
    """
    if s.rho < p.eps:
        return False
    return internal_energy_density(s) >= p.eps


def pressure_of(s: ConservedState, p: GasParams) -> float:
    """Ideal-gas pressure (gamma - 1) * rho * e."""
    return (p.gamma - 1.0) * internal_energy_density(s)


def state_from_primitive(rho, u, pressure, B, p: GasParams) -> ConservedState:
    """Build a conserved state from (rho, velocity, pressure, B)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    B = np.atleast_1d(np.asarray(B, dtype=float))
    m = rho * u
    E = pressure / (p.gamma - 1.0) + 0.5 * rho * float(u @ u) + 0.5 * float(B @ B)
    return ConservedState(rho, m, E, B)


def fast_magnetosonic_speed(s: ConservedState, p: GasParams, normal) -> float:
    """Fast magnetosonic speed along a unit normal.

    c_f^2 = (a^2 + b^2 + sqrt((a^2 + b^2)^2 - 4 a^2 b_n^2)) / 2 with
    a^2 = gamma p / rho, b^2 = |B|^2 / rho and b_n = (B . n) / sqrt(rho).
    Raises if the state has no real wave speeds (rho <= 0 or p < 0).
    """
    normal = np.atleast_1d(np.asarray(normal, dtype=float))
    pres = pressure_of(s, p)
    if pres < 0.0:
        raise InvalidStateError(f"negative pressure {pres}: state leaves the admissible set")
    a2 = p.gamma * pres / s.rho
    b2 = float(s.B @ s.B) / s.rho
    bn2 = float(s.B @ normal) ** 2 / s.rho
    tot = a2 + b2
    disc = tot * tot - 4.0 * a2 * bn2
    cf2 = 0.5 * (tot + math.sqrt(max(disc, 0.0)))
    return math.sqrt(cf2)


def signal_speed(s: ConservedState, p: GasParams, normal) -> float:
    """LLF dissipation bound |u . n| + c_f for one trace state."""
    normal = np.atleast_1d(np.asarray(normal, dtype=float))
    un = float(s.m @ normal) / s.rho
    return abs(un) + fast_magnetosonic_speed(s, p, normal)
