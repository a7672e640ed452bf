"""Problem definitions for the one-dimensional GPE.

Grids, potentials, spatial profiles with analytic second derivatives,
closed-form solitons, finite-difference operators and the functionals
N(psi), E(psi), mu(psi).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .exceptions import DomainError, GridMismatch

__all__ = [
    "Grid",
    "Potential",
    "Profile",
    "ComplexField",
    "PhysicalConstants",
    "gradient",
    "laplacian",
    "dark_soliton",
    "bright_soliton",
    "traveling_soliton",
    "norm_functional",
    "energy_functional",
    "chemical_potential_functional",
]

Boundary = Literal["fixed-zero", "periodic"]


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid.

    For ``boundary="fixed-zero"`` the samples run from ``x_min`` to ``x_max``
    inclusive.  For ``boundary="periodic"`` the same samples are used and the
    period is ``points * spacing``; build such grids with :meth:`periodic` so
    the duplicate end point is left out.
    """

    x_min: float
    x_max: float
    points: int
    boundary: Boundary = "fixed-zero"

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.points) != self.points or self.points < 8:
            raise DomainError(f"need an integer number of points >= 8, got {self.points}")
        if self.boundary not in ("fixed-zero", "periodic"):
            raise DomainError(f"unknown boundary {self.boundary!r}")

    @classmethod
    def periodic(cls, x_min: float, period: float, points: int) -> "Grid":
        return cls(x_min, x_min + period * (points - 1) / points, points, "periodic")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    @property
    def length(self) -> float:
        if self.boundary == "periodic":
            return self.points * self.spacing
        return self.x_max - self.x_min

    def integrate(self, values: np.ndarray) -> float | complex:
        """Trapezoidal rule (rectangle rule with wrap-around if periodic)."""
        if self.boundary == "periodic":
            return np.sum(values) * self.spacing
        return np.trapezoid(values, dx=self.spacing)

    def interior_mask(self, skirt: float = 0.1) -> np.ndarray:
        """Mask excluding a ``skirt`` fraction of the domain at each fixed end."""
        mask = np.ones(self.points, dtype=bool)
        if self.boundary == "fixed-zero" and skirt > 0:
            width = skirt * self.length
            x = self.x
            mask &= (x >= self.x_min + width) & (x <= self.x_max - width)
        return mask


@dataclass(frozen=True)
class Potential:
    """External potential V(x)."""

    kind: Literal["zero", "plus-sin-squared", "minus-sin-squared", "custom"] = "zero"
    custom: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("zero", "plus-sin-squared", "minus-sin-squared", "custom"):
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if self.kind == "custom" and self.custom is None:
            raise DomainError("custom potential needs an evaluator")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "plus-sin-squared":
            return np.sin(x) ** 2
        if self.kind == "minus-sin-squared":
            return -np.sin(x) ** 2
        return np.asarray(self.custom(x), dtype=float)

    @property
    def is_periodic(self) -> bool:
        return self.kind != "custom"


@dataclass(frozen=True)
class Profile:
    """Real spatial profile with an analytic second derivative.

    Built-in kinds are ``A*tanh(k x)``, ``A*sech(k x)`` and ``A*cos(k x)``.
    A ``custom`` profile must supply both ``func`` and ``second``.
    """

    kind: Literal["tanh", "sech", "cos", "custom"]
    amplitude: float = 1.0
    wavenumber: float = 1.0
    func: Callable | None = field(default=None, compare=False)
    second: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("tanh", "sech", "cos", "custom"):
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if self.kind == "custom" and (self.func is None or self.second is None):
            raise DomainError("custom profile needs func and its analytic second derivative")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, k = self.amplitude, self.wavenumber
        if self.kind == "tanh":
            return a * np.tanh(k * x)
        if self.kind == "sech":
            return a / np.cosh(k * x)
        if self.kind == "cos":
            return a * np.cos(k * x)
        return np.asarray(self.func(x), dtype=float)

    def second_derivative(self, x):
        x = np.asarray(x, dtype=float)
        a, k = self.amplitude, self.wavenumber
        if self.kind == "tanh":
            th = np.tanh(k * x)
            return -2.0 * a * k * k * th * (1.0 - th * th)
        if self.kind == "sech":
            s = 1.0 / np.cosh(k * x)
            return a * k * k * (s - 2.0 * s ** 3)
        if self.kind == "cos":
            return -a * k * k * np.cos(k * x)
        return np.asarray(self.second(x), dtype=float)

    @property
    def is_periodic(self) -> bool:
        return self.kind == "cos"


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, mass, interaction strength g and chemical potential mu."""

    hbar: float = 1.0
    mass: float = 1.0
    g: float = 1.0
    mu: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0 or not self.mass > 0:
            raise DomainError("hbar and mass must be positive")

    @property
    def kinetic(self) -> float:
        """Prefactor hbar**2 / (2 m) of the Laplacian."""
        return self.hbar ** 2 / (2.0 * self.mass)


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex wave function sampled on a :class:`Grid`; values are read-only."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.grid.points,):
            raise GridMismatch(f"expected {self.grid.points} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("field values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable) -> "ComplexField":
        return cls(grid, func(grid.x))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


# -- finite differences ------------------------------------------------------

# one-sided second-derivative stencils (offsets 0..len-1), rows for the first
# and second grid point
_D2_ONE_SIDED = {
    2: [np.array([2.0, -5.0, 4.0, -1.0])],
    4: [
        np.array([15 / 4, -77 / 6, 107 / 6, -13.0, 61 / 12, -5 / 6]),
        np.array([5 / 6, -5 / 4, -1 / 3, 7 / 6, -1 / 2, 1 / 12]),
    ],
}


def gradient(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Second-order centred first derivative (one-sided at fixed ends)."""
    h = grid.spacing
    if grid.boundary == "periodic":
        return (np.roll(values, -1) - np.roll(values, 1)) / (2 * h)
    return np.gradient(values, h, edge_order=2)


def laplacian(values: np.ndarray, grid: Grid, order: int = 2, *,
              near_boundary: Literal["one-sided", "centered"] = "one-sided") -> np.ndarray:
    """Finite-difference second derivative of order 2 or 4.

    On periodic grids the centred stencil wraps around.  On fixed grids the
    rows that the centred stencil cannot reach use one-sided stencils of the
    same order (``near_boundary="one-sided"``), or, with ``"centered"``, the
    end rows are left at zero and the 4th-order stencil falls back to the
    2nd-order one next to the ends.  The time integrator uses the latter: it
    never touches the pinned end values, so no extrapolated stencil reaches
    past the data it evolves.
    """
    if order not in (2, 4):
        raise DomainError(f"stencil order must be 2 or 4, got {order}")
    u = np.asarray(values)
    h2 = grid.spacing ** 2
    if grid.boundary == "periodic":
        if order == 2:
            return (np.roll(u, -1) - 2 * u + np.roll(u, 1)) / h2
        return (-np.roll(u, -2) + 16 * np.roll(u, -1) - 30 * u
                + 16 * np.roll(u, 1) - np.roll(u, 2)) / (12 * h2)

    out = np.zeros_like(u)
    if order == 2:
        out[1:-1] = u[2:] - 2 * u[1:-1] + u[:-2]
    else:
        out[2:-2] = (-u[4:] + 16 * u[3:-1] - 30 * u[2:-2] + 16 * u[1:-3] - u[:-4]) / 12
        if near_boundary == "centered":
            out[1] = u[2] - 2 * u[1] + u[0]
            out[-2] = u[-1] - 2 * u[-2] + u[-3]
    if near_boundary == "one-sided":
        for row, stencil in enumerate(_D2_ONE_SIDED[order]):
            w = len(stencil)
            out[row] = stencil @ u[:w]
            out[-1 - row] = stencil @ u[::-1][:w]
    return out / h2


# -- closed-form solitons ----------------------------------------------------

def dark_soliton(constants: PhysicalConstants, x, t):
    """Dark soliton ``sqrt(mu/g) tanh(sqrt(mu) x) exp(-i mu t / hbar)``."""
    if constants.g <= 0:
        raise DomainError("dark soliton needs repulsive interaction g > 0")
    if constants.mu <= 0:
        raise DomainError("dark soliton needs mu > 0")
    mu = constants.mu
    amp = math.sqrt(mu / constants.g)
    x = np.asarray(x, dtype=float)
    return amp * np.tanh(math.sqrt(mu) * x) * np.exp(-1j * mu * np.asarray(t) / constants.hbar)


def bright_soliton(constants: PhysicalConstants, x, t):
    """Bright soliton ``sqrt(mu/|g|) sech(sqrt(mu) x) exp(-i mu t / hbar)``.

    The amplitude uses ``|g|`` so that it stays real for attractive g < 0.
    """
    if constants.g == 0:
        raise DomainError("bright soliton needs g != 0")
    if constants.mu <= 0:
        raise DomainError("bright soliton needs mu > 0")
    mu = constants.mu
    amp = math.sqrt(mu / abs(constants.g))
    x = np.asarray(x, dtype=float)
    return amp / np.cosh(math.sqrt(mu) * x) * np.exp(-1j * mu * np.asarray(t) / constants.hbar)


def traveling_soliton(kind: Literal["dark", "bright"], constants: PhysicalConstants,
                      v: float, x0: float, x, t):
    """Stationary soliton shape moved to ``x - v t - x0`` with the same phase."""
    t = np.asarray(t, dtype=float)
    xi = np.asarray(x, dtype=float) - v * t - x0
    if kind == "dark":
        return dark_soliton(constants, xi, t)
    if kind == "bright":
        return bright_soliton(constants, xi, t)
    raise DomainError(f"unknown soliton kind {kind!r}")


# -- functionals -------------------------------------------------------------

def norm_functional(field: ComplexField) -> float:
    """Particle number ``N = integral |psi|^2 dx``."""
    return float(field.grid.integrate(field.density))


def _energy_parts(field: ComplexField, potential: Potential, constants: PhysicalConstants):
    grid = field.grid
    psi = field.values
    dpsi = gradient(psi, grid)
    rho = field.density
    kinetic = grid.integrate(constants.kinetic * np.abs(dpsi) ** 2)
    pot = grid.integrate(potential(grid.x) * rho)
    quartic = grid.integrate(rho ** 2)
    return float(kinetic), float(pot), float(quartic)


def energy_functional(field: ComplexField, potential: Potential,
                      constants: PhysicalConstants) -> float:
    """``E = integral [ hbar^2/2m |grad psi|^2 + V |psi|^2 + g/2 |psi|^4 ] dx``."""
    kin, pot, quartic = _energy_parts(field, potential, constants)
    return kin + pot + 0.5 * constants.g * quartic


def chemical_potential_functional(field: ComplexField, potential: Potential,
                                  constants: PhysicalConstants) -> float:
    """``mu = integral [ hbar^2/2m |grad psi|^2 + V |psi|^2 + g |psi|^4 ] dx``.

    Only meaningful for a normalised field; a :class:`UserWarning` is issued
    when the norm is more than 10% away from 1.
    """
    norm = norm_functional(field)
    if abs(norm - 1.0) > 0.1:
        warnings.warn(f"chemical potential of a field with norm {norm:.4g}", UserWarning,
                      stacklevel=2)
    kin, pot, quartic = _energy_parts(field, potential, constants)
    return kin + pot + constants.g * quartic
