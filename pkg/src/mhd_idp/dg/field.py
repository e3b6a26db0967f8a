"""DG field container: P2 modal coefficients on a uniform quad mesh."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis

N_VARS = 8  # rho, m1, m2, m3, E, B1, B2, B3


@dataclass
class DGField:
    """Per-cell modal coefficients for all conserved variables.

    coeffs has shape (ny, nx, 8, 6); mode 0 is the cell average.  Cells
    are square: dx == dy.
    """

    coeffs: np.ndarray
    xlim: tuple[float, float]
    ylim: tuple[float, float]

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.ndim != 4 or self.coeffs.shape[2:] != (N_VARS, basis.N_MODES):
            raise ValueError(f"bad coefficient shape {self.coeffs.shape}")
        if abs(self.dx - self.dy) > 1e-12 * max(self.dx, self.dy):
            raise ValueError(f"cells must be square, got dx={self.dx}, dy={self.dy}")

    @property
    def ny(self) -> int:
        return self.coeffs.shape[0]

    @property
    def nx(self) -> int:
        return self.coeffs.shape[1]

    @property
    def dx(self) -> float:
        return (self.xlim[1] - self.xlim[0]) / self.nx

    @property
    def dy(self) -> float:
        return (self.ylim[1] - self.ylim[0]) / self.ny

    def copy(self) -> "DGField":
        return DGField(self.coeffs.copy(), self.xlim, self.ylim)

    def cell_averages(self) -> np.ndarray:
        """Averages as an (N, 8) matrix in row-major cell order."""
        return self.coeffs[..., 0].reshape(-1, N_VARS)

    def cell_centers(self):
        xc = self.xlim[0] + self.dx * (np.arange(self.nx) + 0.5)
        yc = self.ylim[0] + self.dy * (np.arange(self.ny) + 0.5)
        return xc, yc

    def eval_at(self, point_basis: np.ndarray) -> np.ndarray:
        """Field values at reference points given their basis table (P, 6).

        Returns shape (ny, nx, 8, P).
        """
        flat = np.ascontiguousarray(self.coeffs).reshape(-1, basis.N_MODES)
        out = flat @ point_basis.T
        return out.reshape(self.ny, self.nx, N_VARS, point_basis.shape[0])


def field_from_function(fn, xlim, ylim, nx, ny) -> DGField:
    """Initialize by cellwise L2 projection of `fn(x, y) -> (..., 8)`."""
    dx = (xlim[1] - xlim[0]) / nx
    dy = (ylim[1] - ylim[0]) / ny
    coeffs = basis.project_function(fn, xlim[0], ylim[0], dx, dy, nx, ny, N_VARS)
    return DGField(coeffs, tuple(xlim), tuple(ylim))
