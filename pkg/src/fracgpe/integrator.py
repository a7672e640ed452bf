"""Method-of-lines RK4 integrator for the integer-order GPE.

Used as an independent oracle for the series solutions: it shares only the
grid, the potential and the finite-difference Laplacian with the HPM code.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DomainError, GridMismatch, NumericalFailure, StabilityError
from .model import (ComplexField, Grid, PhysicalConstants, Potential, energy_functional,
                    laplacian, norm_functional)

__all__ = [
    "Trajectory",
    "ErrorRecord",
    "stability_bound",
    "integrate_rk4",
    "compare_series_vs_trajectory",
]


def stability_bound(grid: Grid, constants: PhysicalConstants) -> float:
    """Largest accepted time step, ``0.5 h^2 m / hbar``."""
    return 0.5 * grid.spacing ** 2 * constants.mass / constants.hbar


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution with conserved-quantity logs.

    ``times`` is strictly monotone (increasing for forward runs, decreasing
    for backward runs) and ``fields[0]`` is the initial condition itself.
    """

    times: np.ndarray
    fields: tuple[ComplexField, ...]
    norms: np.ndarray
    energies: np.ndarray
    dt: float = field(default=math.nan)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if len(times) != len(self.fields):
            raise ValueError("one field per time sample is required")
        steps = np.diff(times)
        if len(steps) and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("times must be strictly monotone")
        object.__setattr__(self, "times", times)

    @property
    def grid(self) -> Grid:
        return self.fields[0].grid

    def field_at(self, t: float) -> np.ndarray:
        """Field at ``t``, linearly interpolated between the bracketing samples."""
        times = self.times
        forward = len(times) < 2 or times[-1] > times[0]
        ts = times if forward else times[::-1]
        fs = self.fields if forward else self.fields[::-1]
        if not ts[0] - 1e-12 <= t <= ts[-1] + 1e-12:
            raise DomainError(f"t={t} outside the trajectory [{ts[0]}, {ts[-1]}]")
        k = int(np.searchsorted(ts, t))
        if k < len(ts) and abs(ts[k] - t) <= 1e-12:
            return fs[k].values
        k = min(max(k, 1), len(ts) - 1)
        w = (t - ts[k - 1]) / (ts[k] - ts[k - 1])
        return (1 - w) * fs[k - 1].values + w * fs[k].values

    def relative_drift(self) -> tuple[float, float]:
        """Max relative change of the norm and of the energy versus t=0."""
        n0, e0 = self.norms[0], self.energies[0]
        dn = float(np.max(np.abs(self.norms - n0)) / abs(n0))
        de = float(np.max(np.abs(self.energies - e0)) / abs(e0))
        return dn, de

    def to_csv(self, path) -> Path:
        """Long-format CSV with columns ``t, x, re, im, density``."""
        path = Path(path)
        x = self.grid.x
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x", "re", "im", "density"])
            for t, f in zip(self.times, self.fields):
                v = f.values
                for xi, vi in zip(x, v):
                    w.writerow([f"{t:.17g}", f"{xi:.17g}", f"{vi.real:.17g}",
                                f"{vi.imag:.17g}", f"{abs(vi) ** 2:.17g}"])
        return path


@dataclass(frozen=True)
class ErrorRecord:
    """Discrepancy between a series and a trajectory at one time."""

    t: float
    sup: float
    l2: float


def _rhs_factory(grid: Grid, potential: Potential, constants: PhysicalConstants,
                 stencil_order: int, boundary_rate: float | None):
    V = potential(grid.x)
    kin = constants.kinetic
    g = constants.g
    hbar = constants.hbar
    fixed = grid.boundary == "fixed-zero"

    def rhs(psi):
        lap = laplacian(psi, grid, stencil_order, near_boundary="centered")
        out = (-1j / hbar) * (-kin * lap + V * psi + g * (psi.real ** 2 + psi.imag ** 2) * psi)
        if fixed:
            # Dirichlet ends: either frozen or rotating with a known phase rate
            rate = 0.0 if boundary_rate is None else boundary_rate
            out[0] = (-1j * rate / hbar) * psi[0]
            out[-1] = (-1j * rate / hbar) * psi[-1]
        return out

    return rhs


def integrate_rk4(initial: ComplexField, potential: Potential, constants: PhysicalConstants,
                  dt: float | None = None, t_end: float = 1.0, stencil_order: int = 4, *,
                  samples: int = 101, boundary_rate: float | None = None,
                  backward: bool = False, t_start: float = 0.0) -> Trajectory:
    """Classic RK4 on ``i hbar psi_t = -hbar^2/2m psi_xx + V psi + g |psi|^2 psi``.

    Parameters
    ----------
    dt:
        Requested step (default ``0.4 h^2 m / hbar``).  It is shortened so that
        ``samples - 1`` output intervals contain whole numbers of steps.
    t_end:
        Duration of the run (positive).  With ``backward=True`` the run goes
        from ``t_start`` down to ``t_start - t_end``.
    boundary_rate:
        On fixed grids the end values obey ``psi' = -i rate psi / hbar``;
        ``None`` holds them constant.  Use the chemical potential for
        stationary states whose tails do not vanish (tanh).

    Raises
    ------
    StabilityError
        ``dt`` exceeds :func:`stability_bound`.
    NumericalFailure
        NaN/Inf appeared; ``last_good_time`` gives the last finite sample.
    """
    grid = initial.grid
    if t_end <= 0:
        raise DomainError("t_end must be positive")
    if stencil_order not in (2, 4):
        raise DomainError("stencil order must be 2 or 4")
    if samples < 2:
        raise DomainError("need at least two output samples")
    bound = stability_bound(grid, constants)
    if dt is None:
        dt = 0.8 * bound
    if dt <= 0:
        raise DomainError("dt must be positive")
    if dt > bound:
        raise StabilityError(f"dt={dt:.3e} exceeds the stability bound {bound:.3e}")

    intervals = samples - 1
    per_interval = max(1, math.ceil(t_end / intervals / dt))
    step = t_end / (intervals * per_interval)
    sign = -1.0 if backward else 1.0
    h = sign * step

    rhs = _rhs_factory(grid, potential, constants, stencil_order, boundary_rate)
    psi = np.array(initial.values, dtype=complex)
    fields = [initial]
    times = [t_start]
    norms = [norm_functional(initial)]
    energies = [energy_functional(initial, potential, constants)]

    for k in range(1, intervals + 1):
        for _ in range(per_interval):
            k1 = rhs(psi)
            k2 = rhs(psi + 0.5 * h * k1)
            k3 = rhs(psi + 0.5 * h * k2)
            k4 = rhs(psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(psi)):
            raise NumericalFailure("integration blew up", last_good_time=times[-1])
        f = ComplexField(grid, psi)
        fields.append(f)
        times.append(t_start + sign * k * per_interval * step)
        norms.append(norm_functional(f))
        energies.append(energy_functional(f, potential, constants))

    return Trajectory(np.array(times), tuple(fields), np.array(norms), np.array(energies),
                      dt=step)


def compare_series_vs_trajectory(sol, traj: Trajectory, t: float, *,
                                 skirt: float = 0.1) -> ErrorRecord:
    """Sup and L2 discrepancy of the series versus the trajectory at ``t``.

    Only interior points are compared on fixed grids (a ``skirt`` fraction
    of the domain is dropped at each end).  Grid-backend series must live on
    the trajectory's grid.
    """
    from .hpm import evaluate_series  # local import keeps the oracle module standalone

    grid = traj.grid
    if sol.is_profile:
        series = evaluate_series(sol, grid.x, t, warn=False)
    else:
        if sol.config.grid != grid:
            raise GridMismatch("series and trajectory use different grids")
        series = evaluate_series(sol, None, t, warn=False)
    ref = traj.field_at(t)
    mask = grid.interior_mask(skirt)
    diff = np.abs(np.asarray(series) - ref)[mask]
    sup = float(np.max(diff))
    l2 = float(np.sqrt(np.sum(diff ** 2) * grid.spacing))
    return ErrorRecord(float(t), sup, l2)
