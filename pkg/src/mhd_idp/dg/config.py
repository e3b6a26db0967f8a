"""Run configuration and the flat key = value config-file format."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["RunConfig", "parse_config_text", "load_config"]

_BC_KINDS = ("periodic", "outflow", "reflective", "jet-inflow")


@dataclass
class RunConfig:
    case: str
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    nx: int
    ny: int
    gamma: float
    eps: float
    cfl: float = 0.2
    tvb_m: float = 100.0
    t_final: float = 1.0
    fixed_dt: float | None = None
    output_every: int = 0
    out_dir: str = "."
    jet_b0: float = 0.0
    bc: dict = field(default_factory=lambda: dict(W="periodic", E="periodic",
                                                  S="periodic", N="periodic"))
    dy_tol: float = 1e-12
    dy_max_iters: int = 500
    threads: int = 1

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError("need at least 4 cells per direction")
        if not self.cfl > 0.0:
            raise ValueError("cfl must be positive")
        dx = (self.xlim[1] - self.xlim[0]) / self.nx
        dy = (self.ylim[1] - self.ylim[0]) / self.ny
        if abs(dx - dy) > 1e-12 * max(dx, dy):
            raise ValueError(f"cells must be square: dx={dx}, dy={dy}")
        for side, kind in self.bc.items():
            if kind not in _BC_KINDS:
                raise ValueError(f"unknown boundary kind '{kind}' on side {side}")

    @property
    def dx(self) -> float:
        return (self.xlim[1] - self.xlim[0]) / self.nx


def parse_config_text(text: str) -> RunConfig:
    """Parse 'key = value' lines; '#' starts a comment.

    Only `case` is required; everything else falls back to the case's
    desk-scale defaults.
    """
    from .cases import case_defaults

    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got '{line}'")
        key, val = (part.strip() for part in line.split("=", 1))
        raw[key] = val
    if "case" not in raw:
        raise ValueError("config must set 'case'")
    kw = case_defaults(raw.pop("case"))
    converters = dict(nx=int, ny=int, gamma=float, eps=float, cfl=float,
                      tvb_m=float, t_final=float, fixed_dt=float,
                      output_every=int, out_dir=str, jet_b0=float,
                      dy_tol=float, dy_max_iters=int, threads=int)
    for key, val in raw.items():
        if key not in converters:
            raise ValueError(f"unknown config key '{key}'")
        kw[key] = converters[key](val)
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())
