"""RK4 oracle: accuracy, conservation, reversibility and bookkeeping."""

import csv
import math

import numpy as np
import pytest

from fracgpe.exceptions import DomainError, GridMismatch, StabilityError
from fracgpe.hpm import hpm_iterate
from fracgpe.integrator import (Trajectory, compare_series_vs_trajectory, integrate_rk4,
                                stability_bound)
from fracgpe.model import ComplexField, Grid, PhysicalConstants, Potential, laplacian
from fracgpe.validation import scenario

FREE = PhysicalConstants(g=0.0, mu=0.0)


def plane_wave(k, points=64):
    grid = Grid.periodic(0.0, 2 * math.pi, points)
    return grid, ComplexField(grid, np.exp(1j * k * grid.x))


def semi_discrete_frequency(grid, k):
    """Frequency of exp(ikx) under the 4th-order stencil (exact in time)."""
    u = np.exp(1j * k * grid.x)
    return float(np.real(-0.5 * laplacian(u, grid, 4)[0] / u[0]))


def test_stability_bound():
    grid = Grid(0, 1, 11)
    assert stability_bound(grid, PhysicalConstants()) == pytest.approx(0.005)
    with pytest.raises(StabilityError):
        integrate_rk4(ComplexField(grid, np.zeros(11)), Potential(), FREE, dt=0.01)


def test_plane_wave_matches_the_dispersion_relation():
    grid, psi0 = plane_wave(2)
    traj = integrate_rk4(psi0, Potential(), FREE, t_end=1.0, samples=5)
    final = traj.fields[-1].values
    # continuum dispersion up to the O(h^4) stencil error ...
    exact = np.exp(1j * 2 * grid.x - 0.5j * 4 * 1.0)
    assert np.max(np.abs(final - exact)) < 5e-5
    # ... and the stencil's own dispersion up to the RK4 error
    omega = semi_discrete_frequency(grid, 2)
    assert np.max(np.abs(final - np.exp(1j * 2 * grid.x - 1j * omega))) < 1e-9


def test_time_error_drops_sixteenfold_when_dt_halves():
    k = 8
    grid, psi0 = plane_wave(k)
    omega = semi_discrete_frequency(grid, k)
    exact = np.exp(1j * k * grid.x - 1j * omega * 0.5)
    dt = 0.9 * stability_bound(grid, FREE)
    errs = []
    for step in (dt, dt / 2):
        traj = integrate_rk4(psi0, Potential(), FREE, dt=step, t_end=0.5, samples=2)
        errs.append(np.max(np.abs(traj.fields[-1].values - exact)))
    assert 13 < errs[0] / errs[1] < 19


def test_forward_then_backward_returns_to_the_start():
    grid = Grid.periodic(-math.pi, 2 * math.pi, 64)
    psi0 = ComplexField(grid, np.cos(grid.x) + 0.3 * np.sin(2 * grid.x))
    c = PhysicalConstants(g=1.0)
    fwd = integrate_rk4(psi0, Potential("plus-sin-squared"), c, t_end=0.5, samples=3)
    back = integrate_rk4(fwd.fields[-1], Potential("plus-sin-squared"), c, t_end=0.5, samples=3,
                         backward=True, t_start=0.5)
    assert back.times[-1] == pytest.approx(0.0, abs=1e-15)
    assert np.max(np.abs(back.fields[-1].values - psi0.values)) < 1e-9


def test_stationary_states_conserve_norm_and_energy():
    grid = Grid(-20, 20, 401)
    c = PhysicalConstants(g=1.0, mu=1.0)
    traj = integrate_rk4(ComplexField(grid, np.tanh(grid.x)), Potential(), c, t_end=0.5,
                         samples=11, boundary_rate=1.0)
    dn, de = traj.relative_drift()
    assert dn < 1e-8 and de < 1e-6
    exact = np.tanh(grid.x) * np.exp(-0.5j)
    assert np.max(np.abs(traj.field_at(0.5) - exact)) < 1e-4


def test_series_vs_trajectory_comparison():
    grid = Grid.periodic(-math.pi, 2 * math.pi, 128)
    cfg = scenario(3, 1.0, 16)
    sol = hpm_iterate(cfg)
    traj = integrate_rk4(ComplexField(grid, np.cos(grid.x)), cfg.potential, cfg.constants,
                         t_end=0.5, samples=11)
    rec = compare_series_vs_trajectory(sol, traj, 0.25)
    assert rec.sup < 1e-5 and rec.l2 < 1e-5 and rec.t == 0.25

    other = hpm_iterate(scenario(3, 1.0, 3, backend="grid",
                                 grid=Grid.periodic(-math.pi, 2 * math.pi, 32)))
    with pytest.raises(GridMismatch):
        compare_series_vs_trajectory(other, traj, 0.25)


def test_field_at_interpolates_linearly():
    grid = Grid(0, 1, 8)
    fields = tuple(ComplexField(grid, np.full(8, v)) for v in (0.0, 2.0, 4.0))
    traj = Trajectory([0.0, 1.0, 2.0], fields, np.zeros(3), np.zeros(3))
    assert traj.field_at(0.25)[0] == pytest.approx(0.5)
    assert traj.field_at(2.0)[0] == 4.0
    with pytest.raises(DomainError):
        traj.field_at(2.5)
    back = Trajectory([2.0, 1.0, 0.0], fields, np.zeros(3), np.zeros(3))
    assert back.field_at(1.5)[0] == pytest.approx(1.0)


def test_trajectory_validation():
    grid = Grid(0, 1, 8)
    f = ComplexField(grid, np.zeros(8))
    with pytest.raises(ValueError):
        Trajectory([0.0, 1.0, 0.5], (f, f, f), np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        Trajectory([0.0, 1.0], (f,), np.zeros(1), np.zeros(1))


def test_csv_export(tmp_path):
    grid, psi0 = plane_wave(1, points=16)
    traj = integrate_rk4(psi0, Potential(), FREE, t_end=0.1, samples=3)
    path = traj.to_csv(tmp_path / "traj.csv")
    with path.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x", "re", "im", "density"]
    assert len(rows) == 1 + 3 * 16
    assert float(rows[1][4]) == pytest.approx(1.0)


@pytest.mark.parametrize("kw", [dict(t_end=0.0), dict(samples=1), dict(stencil_order=3),
                                dict(dt=-1.0)])
def test_argument_validation(kw):
    grid, psi0 = plane_wave(1, points=16)
    with pytest.raises(DomainError):
        integrate_rk4(psi0, Potential(), FREE, **kw)
