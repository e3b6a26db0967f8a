"""Optimization-based cell-average limiter via Davis-Yin splitting.

Cell averages form an N x (2 + 2n) matrix with rows (rho, m.., E, B..).
The limited averages solve

    min 0.5 ||X - Ubar||_F^2   s.t.  column sums preserved, rows admissible,

split as d1 = conservation-hyperplane indicator, d2 = quadratic distance,
d3 = admissibility indicator.  The gradient of d2 is 1-Lipschitz, so the
constant step gamma = 1 is used.  The returned iterate is the feasible
side x^{k+1/2}; its conservation defect is bounded by the stopping
increment and reported.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .brent import BrentConfig
from .slicing import project_admissible_row

__all__ = [
    "DYReport",
    "CsvFormatError",
    "admissible_rows_mask",
    "conservation_target",
    "prox_conservation",
    "prox_admissible",
    "limit_cell_averages",
    "apply_limited_averages",
    "read_averages_csv",
    "write_averages_csv",
    "CSV_HEADER",
]

CSV_HEADER = "rho,m1,m2,m3,E,B1,B2,B3"


class CsvFormatError(ValueError):
    """Cell-average CSV does not conform to the expected layout."""


@dataclass
class DYReport:
    n_iters: int
    conservation_residual: float
    feasibility_residual: float
    converged: bool
    increment_history: list = field(default_factory=list)
    n_slice_calls: int = 0


def _split_columns(X: np.ndarray, n: int):
    rho = X[:, 0]
    m = X[:, 1:1 + n]
    E = X[:, 1 + n]
    B = X[:, 2 + n:]
    return rho, m, E, B


def admissibility_margins(X: np.ndarray, eps: float, n: int = 3):
    """Per-row admissibility violation and its float-noise scale.

    violation > 0 means the row is outside the set.  The scale bounds the
    rounding error of evaluating the internal energy (relevant when the
    energy terms dwarf eps, e.g. high-Mach states).
    """
    rho, m, E, B = _split_columns(np.asarray(X, dtype=float), n)
    kin = np.full_like(rho, np.inf)
    pos = rho > 0.0
    kin[pos] = np.einsum("ij,ij->i", m[pos], m[pos]) / (2.0 * rho[pos])
    mag = 0.5 * np.einsum("ij,ij->i", B, B)
    ie = E - kin - mag
    viol = np.maximum(eps - rho, np.where(pos, eps - ie, np.inf))
    scale = 1.0 + np.abs(E) + np.where(pos, kin, 0.0) + mag
    return viol, scale


def admissible_rows_mask(X: np.ndarray, eps: float, n: int = 3) -> np.ndarray:
    """Boolean mask of rows inside the admissible set (inclusive)."""
    viol, _ = admissibility_margins(X, eps, n)
    return viol <= 0.0


def feasibility_residual(X: np.ndarray, eps: float, n: int = 3) -> float:
    """Worst admissibility violation over all rows (0 when all admissible)."""
    viol, _ = admissibility_margins(X, eps, n)
    return float(max(viol.max(initial=0.0), 0.0))


def conservation_target(Ubar: np.ndarray) -> np.ndarray:
    """Column sums b of the input averages (uniform mesh, A = [1,...,1])."""
    return np.asarray(Ubar, dtype=float).sum(axis=0)


def prox_conservation(X: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact projection onto the conservation hyperplanes A X = b^T.

    With A = [1,...,1] the pseudo inverse is 1/N, so every column is
    shifted uniformly by its sum defect divided by N.
    """
    X = np.asarray(X, dtype=float)
    ncells = X.shape[0]
    return X + (b - X.sum(axis=0)) / ncells


def prox_admissible(X: np.ndarray, eps: float, n: int = 3,
                    cfg: BrentConfig | None = None,
                    threads: int = 1):
    """Project every row onto the admissible set.

    Admissible rows pass through untouched.  Returns the projected matrix
    and the accumulated Euler-slice call count.  Rows are independent, so
    the optional thread pool maps over the out-of-bound rows; results are
    written back by row index, keeping the output deterministic.
    """
    X = np.asarray(X, dtype=float)
    out = X.copy()
    mask = admissible_rows_mask(X, eps, n)
    bad = np.flatnonzero(~mask)
    total_calls = 0

    def _one(i):
        return project_admissible_row(X[i], eps, n, cfg)

    if threads > 1 and bad.size > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_one, bad))
    else:
        results = [_one(i) for i in bad]
    for i, res in zip(bad, results):
        out[i] = res.state.to_row()
        total_calls += res.n_slice_calls
    return out, total_calls


def limit_cell_averages(Ubar: np.ndarray, eps: float, tol_dy: float = 1e-12,
                        max_iters: int = 500, n: int = 3,
                        cfg: BrentConfig | None = None, gamma: float = 1.0,
                        threads: int = 1):
    """Solve the constrained limiter problem by Davis-Yin iteration.

    Stops once ||x^{k+1} - x^{k+1/2}||_F <= tol_dy * (1 + ||Ubar||_F).
    Returns (X_star, DYReport) with X_star = x^{k+1/2} of the final
    iteration (row-feasible by construction); its conservation defect is
    bounded by the stopping increment and reported.
    """
    Ubar = np.asarray(Ubar, dtype=float)
    b = conservation_target(Ubar)
    if admissible_rows_mask(Ubar, eps, n).all():
        report = DYReport(n_iters=0, conservation_residual=0.0,
                          feasibility_residual=feasibility_residual(Ubar, eps, n),
                          converged=True)
        return Ubar.copy(), report

    scale = 1.0 + float(np.linalg.norm(Ubar))
    z = Ubar.copy()
    history = []
    total_calls = 0
    x_half = Ubar
    converged = False
    iters = 0
    for iters in range(1, max_iters + 1):
        x_half, calls = prox_admissible(z, eps, n, cfg, threads)
        total_calls += calls
        x_next = prox_conservation(2.0 * x_half - z - gamma * (x_half - Ubar), b)
        inc = float(np.linalg.norm(x_next - x_half))
        history.append(inc)
        z += x_next - x_half
        if inc <= tol_dy * scale:
            converged = True
            break

    cons_res = float(np.max(np.abs(x_half.sum(axis=0) - b)))
    report = DYReport(n_iters=iters, conservation_residual=cons_res,
                      feasibility_residual=feasibility_residual(x_half, eps, n),
                      converged=converged, increment_history=history,
                      n_slice_calls=total_calls)
    return x_half, report


def apply_limited_averages(field, X_star: np.ndarray):
    """Shift each cell polynomial so its average matches X_star.

    Only the constant mode moves; higher modes are untouched, so the
    postprocessed polynomial is (U - Ubar) + X_star cellwise.
    """
    X_star = np.asarray(X_star, dtype=float)
    out = field.copy()
    nvar = out.coeffs.shape[-2]
    out.coeffs[..., 0] = X_star.reshape(out.ny, out.nx, nvar)
    return out


def write_averages_csv(path_or_buf, X: np.ndarray):
    """Write averages in the rho,m1,m2,m3,E,B1,B2,B3 layout (17 sig. digits)."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != 8:
        raise ValueError(f"expected an (N, 8) matrix, got {X.shape}")
    own = isinstance(path_or_buf, (str, bytes))
    fh = open(path_or_buf, "w") if own else path_or_buf
    try:
        fh.write(CSV_HEADER + "\n")
        for row in X:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
    finally:
        if own:
            fh.close()


def read_averages_csv(path_or_buf) -> np.ndarray:
    """Read a cell-average CSV; raises CsvFormatError with the line number."""
    own = isinstance(path_or_buf, (str, bytes))
    fh = open(path_or_buf, "r") if own else path_or_buf
    try:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise CsvFormatError(f"line 1: expected header '{CSV_HEADER}', got '{header}'")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 8:
                raise CsvFormatError(f"line {lineno}: expected 8 fields, got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise CsvFormatError(f"line {lineno}: {exc}") from None
        if not rows:
            raise CsvFormatError("no data rows")
        return np.asarray(rows, dtype=float)
    finally:
        if own:
            fh.close()
