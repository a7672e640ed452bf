"""Figure data for the four worked scenarios (CSV only, no plotting).

Each scenario yields four tables:

``profile_t0.csv``
    ``x, re, im, density`` of the initial profile.
``density_surface.csv``
    long format ``alpha, x, t, density``.
``time_traces.csv``
    wide format ``t, re_a<alpha>, im_a<alpha>, ...`` at ``output.trace_x``.
``alpha_surface.csv``
    long format ``alpha, t, re`` at ``output.trace_x``.

Values come from the resummed form ``f(x) E_a(-lambda t^a)`` whenever the
series closes onto a Mittag-Leffler ladder, and from the truncated series
otherwise.  For ``alpha < 1`` the order-by-order cubic term does not close
on the profile; there the frozen-density series (density held at
``|psi(x, 0)|^2``) is used, and the choice is recorded with the data.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import RunConfig
from .exceptions import ClosureViolation
from .hpm import SeriesSolution, evaluate_series, hpm_iterate

__all__ = ["FigureSolution", "solve_for_alpha", "figure_tables", "write_table", "write_figures"]


@dataclass(frozen=True, eq=False)
class FigureSolution:
    """A profile-backend series plus how it is evaluated."""

    solution: SeriesSolution
    nonlinearity: str
    resummed: bool

    @property
    def alpha(self) -> float:
        return self.solution.alpha

    def __call__(self, x, t) -> np.ndarray:
        """``psi`` on the outer product of ``t`` (rows) and ``x`` (columns)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        f = self.solution.config.profile(x)
        if self.resummed:
            return np.multiply.outer(self.solution.closure.reference(t), f)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return evaluate_series(self.solution, x[None, :], t[:, None])


def solve_for_alpha(run: RunConfig, alpha: float, order: int | None = None) -> FigureSolution:
    """Profile-backend series at ``alpha`` for figure emission (at least 20 terms)."""
    order = max(run.scenario.order, 20) if order is None else order
    cfg = replace(run.scenario, alpha=float(alpha), order=max(order, 2), backend="profile")
    try:
        sol = hpm_iterate(cfg)
    except ClosureViolation:
        if cfg.nonlinearity != "hermitian":
            raise
        cfg = replace(cfg, nonlinearity="frozen-density")
        sol = hpm_iterate(cfg)
    closed = sol.closure is not None and sol.closure.closed
    return FigureSolution(sol, cfg.nonlinearity, closed)


def _fmt(v) -> str:
    return f"{float(v) + 0.0:.17g}"


def _alpha_label(a: float) -> str:
    return f"a{a:g}"


def figure_tables(run: RunConfig, alphas=(1.0, 0.9, 0.8)) -> dict[str, tuple[list[str], list[list]]]:
    """All figure tables as ``name -> (header, rows)``; rows hold floats."""
    out = run.output
    alphas = [float(a) for a in alphas]
    sols = {a: solve_for_alpha(run, a) for a in alphas}
    x = out.x.values
    t = out.t.values
    x0 = out.trace_x
    tables: dict[str, tuple[list[str], list[list]]] = {}

    psi0 = sols[alphas[0]](x, [0.0])[0]
    tables["profile_t0"] = (["x", "re", "im", "density"],
                            [[xi, v.real, v.imag, abs(v) ** 2] for xi, v in zip(x, psi0)])

    rows = []
    for a in alphas:
        dens = np.abs(sols[a](x, t)) ** 2
        for i, ti in enumerate(t):
            rows.extend([a, xi, ti, d] for xi, d in zip(x, dens[i]))
    tables["density_surface"] = (["alpha", "x", "t", "density"], rows)

    tt = np.linspace(0.0, out.trace_t_max, out.trace_points)
    header = ["t"]
    cols = []
    for a in alphas:
        v = sols[a]([x0], tt)[:, 0]
        header += [f"re_{_alpha_label(a)}", f"im_{_alpha_label(a)}"]
        cols += [v.real, v.imag]
    tables["time_traces"] = (header, [[ti, *(c[i] for c in cols)] for i, ti in enumerate(tt)])

    rows = []
    for a in out.alpha_surface.values:
        v = solve_for_alpha(run, a)([x0], tt)[:, 0]
        rows.extend([a, ti, vi.real] for ti, vi in zip(tt, v))
    tables["alpha_surface"] = (["alpha", "t", "re"], rows)

    tables["series_info"] = (
        ["alpha", "nonlinearity", "resummed", "rate_re", "rate_im"],
        [[a, sols[a].nonlinearity, int(sols[a].resummed),
          sols[a].solution.closure.rate.real, sols[a].solution.closure.rate.imag]
         for a in alphas])
    return tables


def write_table(path, header, rows) -> Path:
    """CSV with a header row; floats written with 17 significant digits."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return path


def write_figures(run: RunConfig, out_dir, alphas=(1.0, 0.9, 0.8)) -> list[Path]:
    """Write every figure table of ``run`` into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [write_table(out_dir / f"{name}.csv", header, rows)
            for name, (header, rows) in figure_tables(run, alphas).items()]
