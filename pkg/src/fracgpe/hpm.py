"""Homotopy perturbation series for the (time-fractional) GPE.

The iterates are monomials in time: iterate ``j`` is ``phi_j(x) * t**(j*alpha)``.
Starting from ``phi_0 = psi(x, 0)``, each new spatial factor is

    phi_j = (i/hbar) * Gamma((j-1)a + 1) / Gamma(j a + 1)
            * [ hbar^2/2m lap(phi_{j-1}) - V phi_{j-1} - g C_{j-1} ]

where ``C_{j-1}`` is the order ``j-1`` part of ``|psi|^2 psi`` and the Gamma
ratio is the Riemann-Liouville integral of order ``a`` of ``t**((j-1) a)``.
Two spatial backends are provided:

``profile``
    ``phi_j = c_j f(x)`` with scalar ``c_j``.  Valid only while every source
    term stays proportional to the profile ``f``; this is checked at each
    step and :class:`ClosureViolation` is raised otherwise.  The scalars are
    computed with 40-digit arithmetic and stored in extended precision:
    rounding errors excite the non-closed part of the recursion, which grows
    by a factor of about 4-5 per order and would spoil closure by j ~ 15 in
    double precision.
``grid``
    ``phi_j`` sampled on a :class:`Grid`, Laplacian by finite differences.
    Round-off in the highest grid modes grows roughly like
    ``(4 / h**2)**j / Gamma(j a + 1)``, so keep ``h`` moderate when ``N`` is large.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Literal, Sequence

import mpmath as mp
import numpy as np

from .exceptions import (ClosureViolation, ConfigError, DomainError, NumericalFailure,
                         SeriesExtrapolationWarning)
from .model import ComplexField, Grid, PhysicalConstants, Potential, Profile, laplacian
from .special import _lgamma_ld, gamma_ratio, mittag_leffler

__all__ = [
    "ScenarioConfig",
    "SeriesSolution",
    "ClosureReport",
    "hpm_iterate",
    "cubic_convolution",
    "cubic_term_count",
    "evaluate_series",
    "detect_ml_closure",
    "residual_integer",
    "coefficient_recursion_check",
]

#: Closure tolerance on the relative spread of ``S_{j-1}(x) / f(x)``.
CLOSURE_TOL = 1e-8
#: Sample points with ``|f(x)|`` at or below this are skipped by the closure check.
PROFILE_ZERO_GUARD = 1e-3


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to build one HPM series.

    ``nonlinearity="hermitian"`` expands ``|psi|^2 psi`` order by order as
    ``sum conj(phi_i) phi_k phi_m``.  ``"frozen-density"`` replaces the density
    by the initial one, ``|phi_0|^2 psi``; the two agree for stationary
    states at ``alpha = 1``.
    """

    potential: Potential
    constants: PhysicalConstants
    profile: Profile | None
    alpha: float = 1.0
    order: int = 12
    backend: Literal["profile", "grid"] = "profile"
    grid: Grid | None = None
    stencil_order: int = 4
    nonlinearity: Literal["hermitian", "frozen-density"] = "hermitian"

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha}")
        if isinstance(self.order, bool) or int(self.order) != self.order or self.order < 1:
            raise ConfigError(f"order must be a positive integer, got {self.order}")
        if self.backend not in ("profile", "grid"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.profile is None:
            raise ConfigError("an initial profile is required")
        if self.backend == "grid" and self.grid is None:
            raise ConfigError("grid backend needs a grid")
        if self.stencil_order not in (2, 4):
            raise ConfigError(f"stencil order must be 2 or 4, got {self.stencil_order}")
        if self.nonlinearity not in ("hermitian", "frozen-density"):
            raise ConfigError(f"unknown nonlinearity {self.nonlinearity!r}")


@dataclass(frozen=True)
class ClosureReport:
    """Outcome of testing for ``c_j ~ (-rate)**j / Gamma(j alpha + 1)``."""

    rate: complex
    deviation: float
    closed: bool
    alpha: float
    step_rates: tuple[complex, ...] = ()

    def reference(self, t) -> np.ndarray:
        """``E_alpha(-rate * t**alpha)``, the resummed time factor."""
        t = np.asarray(t, dtype=float)
        return mittag_leffler(self.alpha, -self.rate * t ** self.alpha)


@dataclass(frozen=True, eq=False)
class SeriesSolution:
    """Ordered HPM iterates.

    ``iterates[j]`` is a complex scalar ``c_j`` (profile backend, meaning
    ``c_j f(x) t**(j alpha)``) or a :class:`ComplexField` (grid backend).
    """

    config: ScenarioConfig
    iterates: tuple
    closure: ClosureReport | None = None
    sample_points: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def from_coefficients(cls, config: ScenarioConfig, coefficients: Sequence[complex]):
        """Wrap externally supplied profile coefficients (e.g. reference tables)."""
        return cls(config, tuple(np.clongdouble(c) for c in coefficients))

    @property
    def order(self) -> int:
        return len(self.iterates) - 1

    @property
    def alpha(self) -> float:
        return self.config.alpha

    @property
    def exponents(self) -> np.ndarray:
        return self.alpha * np.arange(len(self.iterates))

    @property
    def is_profile(self) -> bool:
        return not isinstance(self.iterates[0], ComplexField)

    @property
    def coefficients(self) -> np.ndarray:
        """Profile-backend ``c_j`` as an array."""
        if not self.is_profile:
            raise TypeError("grid-backend iterates are fields, not scalars")
        return np.array(self.iterates, dtype=complex)

    def spatial(self, j: int, x=None) -> np.ndarray:
        """Spatial factor of iterate ``j`` at ``x`` (profile) or on the grid."""
        if self.is_profile:
            if x is None:
                raise ValueError("profile backend needs sample points x")
            return self.iterates[j] * self.config.profile(x)
        values = self.iterates[j].values
        return values if x is None else values[x]


def _ladder(j: int, alpha: float) -> np.longdouble:
    """Gamma((j-1) alpha + 1) / Gamma(j alpha + 1), in extended precision."""
    return np.exp(_lgamma_ld((j - 1) * alpha + 1) - _lgamma_ld(j * alpha + 1))


def _values(phi):
    return phi.values if isinstance(phi, ComplexField) else phi


def cubic_convolution(iterates: Sequence, j: int):
    """Order ``j - 1`` part of ``|psi|^2 psi`` from iterates ``0 .. j-1``.

    Returns ``sum over i + k + m = j - 1 of conj(phi_i) phi_k phi_m``.
    Works on complex scalars, arrays or :class:`ComplexField` values.
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    vals = [np.asarray(_values(p)) for p in iterates[:j]]
    n = j - 1
    pairs = [sum(vals[k] * vals[p - k] for k in range(p + 1)) for p in range(n + 1)]
    return sum(np.conj(vals[i]) * pairs[n - i] for i in range(n + 1))


def cubic_term_count(j: int) -> int:
    """Number of (i, k, m) triples summed by :func:`cubic_convolution`."""
    return (j + 1) * j // 2


def _cubic_convolution_direct(vals: Sequence, j: int):
    n = j - 1
    total = 0
    for i, k in product(range(n + 1), repeat=2):
        m = n - i - k
        if m >= 0:
            total = total + np.conj(vals[i]) * vals[k] * vals[m]
    return total


def _default_samples(profile: Profile) -> np.ndarray:
    return np.linspace(-4.0, 4.0, 64)


#: Working precision (decimal digits) of the profile-backend scalar recursion.
PROFILE_DPS = 40


def _to_clongdouble(z) -> np.clongdouble:
    """Round an mpmath number to extended precision via a double-double split."""
    def ld(v):
        hi = float(v)
        return np.longdouble(hi) + np.longdouble(float(v - hi))
    z = mp.mpc(z)
    return np.clongdouble(ld(z.real) + 1j * ld(z.imag))


def _to_mp(z) -> mp.mpc:
    z = np.clongdouble(z)
    def part(v):
        hi = float(v)
        return mp.mpf(hi) + mp.mpf(float(v - np.longdouble(hi)))
    return mp.mpc(part(z.real), part(z.imag))


def _profile_samples(cfg: ScenarioConfig, xs: np.ndarray):
    """Per-sample ``f''/f``, ``V`` and ``|f|^2`` as mpmath numbers."""
    f_all = cfg.profile(xs)
    mask = np.abs(f_all) > PROFILE_ZERO_GUARD
    if not np.any(mask):
        raise DomainError("profile vanishes at every sample point")
    f = f_all[mask]
    f2 = cfg.profile.second_derivative(xs[mask])
    V = cfg.potential(xs[mask])
    return [(mp.mpf(float(b)) / mp.mpf(float(a)), mp.mpf(float(v)), mp.mpf(float(a)) ** 2)
            for a, b, v in zip(f, f2, V)]


def _profile_source_ratio(coeffs, j, samples, cfg, cubic):
    """``S_{j-1}(x) / f(x)`` on the sample points."""
    c_prev = coeffs[j - 1]
    if cfg.nonlinearity == "hermitian":
        d = cubic(coeffs, j)
    else:
        d = abs(coeffs[0]) ** 2 * c_prev
    k = mp.mpf(cfg.constants.kinetic)
    g = mp.mpf(cfg.constants.g)
    return [k * f2f * c_prev - v * c_prev - g * fsq * d for f2f, v, fsq in samples]


def _closure_spread(s):
    ref = mp.fsum(s) / len(s)
    scale = max(abs(ref), max(abs(v) for v in s))
    if scale == 0:
        return ref, 0.0
    return ref, float(max(abs(v - ref) for v in s) / scale)


def _ladder_mp(j: int, alpha: float):
    a = mp.mpf(alpha)
    return mp.gamma((j - 1) * a + 1) / mp.gamma(j * a + 1)


def _iterate_profile(cfg: ScenarioConfig, closure_tol: float, sample_points):
    xs = _default_samples(cfg.profile) if sample_points is None else np.asarray(sample_points, float)
    hbar = cfg.constants.hbar
    with mp.workdps(PROFILE_DPS):
        samples = _profile_samples(cfg, xs)
        coeffs = [mp.mpc(1)]
        for j in range(1, cfg.order + 1):
            s = _profile_source_ratio(coeffs, j, samples, cfg, cubic_convolution)
            ref, spread = _closure_spread(s)
            if not (math.isfinite(spread) and mp.isfinite(ref)):
                raise NumericalFailure(f"non-finite source at iterate {j}")
            if spread > closure_tol:
                raise ClosureViolation(j, spread)
            coeffs.append(mp.mpc(0, 1) / hbar * ref * _ladder_mp(j, cfg.alpha))
        stored = tuple(_to_clongdouble(c) for c in coeffs)
    return SeriesSolution(cfg, stored, sample_points=xs)


def _grid_source(phis, j, V, cfg, cubic):
    prev = phis[j - 1]
    lap = laplacian(prev, cfg.grid, cfg.stencil_order)
    if cfg.nonlinearity == "hermitian":
        d = cubic(phis, j)
    else:
        d = np.abs(phis[0]) ** 2 * prev
    return cfg.constants.kinetic * lap - V * prev - cfg.constants.g * d


def _iterate_grid(cfg: ScenarioConfig):
    grid = cfg.grid
    x = grid.x
    V = cfg.potential(x)
    hbar = cfg.constants.hbar
    phis = [np.asarray(cfg.profile(x), dtype=complex)]
    for j in range(1, cfg.order + 1):
        s = _grid_source(phis, j, V, cfg, cubic_convolution)
        nxt = 1j / hbar * float(_ladder(j, cfg.alpha)) * s
        if not np.all(np.isfinite(nxt)):
            raise NumericalFailure(f"non-finite values in grid iterate {j}")
        phis.append(nxt)
    return SeriesSolution(cfg, tuple(ComplexField(grid, p) for p in phis))


def hpm_iterate(config: ScenarioConfig, *, closure_tol: float = CLOSURE_TOL,
                sample_points=None) -> SeriesSolution:
    """Build iterates ``0 .. config.order`` and attach a closure report.

    Raises
    ------
    ClosureViolation
        Profile backend only: a source term is not proportional to the profile.
    NumericalFailure
        A NaN or Inf appeared.
    """
    if config.backend == "profile":
        sol = _iterate_profile(config, closure_tol, sample_points)
    else:
        sol = _iterate_grid(config)
    if len(sol.iterates) >= 3:
        sol = replace(sol, closure=detect_ml_closure(sol))
    return sol


def _series_time_factors(sol: SeriesSolution, t, terms: int) -> list:
    t = np.asarray(t, dtype=float)
    return [np.power(t, j * sol.alpha) for j in range(terms + 1)]


def evaluate_series(sol: SeriesSolution, x=None, t=0.0, terms: int | None = None, *,
                    warn: bool = True):
    """Truncated series ``sum_{j <= terms} phi_j(x) t**(j alpha)``.

    Profile backend: ``x`` is a position or array; the result broadcasts
    ``x`` against ``t``.  Grid backend: ``x`` is ``None`` (every grid point),
    an index, or an index array; for array ``t`` the result has shape
    ``t.shape + spatial shape``.

    A :class:`SeriesExtrapolationWarning` is issued when the last included term
    exceeds ``1e-3`` of the partial sum.
    """
    terms = sol.order if terms is None else terms
    if terms < 0 or terms > sol.order:
        raise ValueError(f"terms must lie in [0, {sol.order}], got {terms}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t must be non-negative")
    powers = _series_time_factors(sol, t_arr, terms)

    if sol.is_profile:
        c = sol.coefficients
        time_part = sum(c[j] * powers[j] for j in range(terms + 1))
        last = c[terms] * powers[terms]
        fx = sol.config.profile(np.asarray(x, dtype=float))
        total = fx * time_part
        last_term = fx * last
    else:
        fields = [sol.spatial(j, x) for j in range(terms + 1)]
        total = sum(np.multiply.outer(powers[j], fields[j]) for j in range(terms + 1))
        last_term = np.multiply.outer(powers[terms], fields[terms])

    if warn and terms > 0:
        big = float(np.max(np.abs(last_term))) if np.size(last_term) else 0.0
        ref = float(np.max(np.abs(total))) if np.size(total) else 0.0
        if big > 1e-3 * ref:
            warnings.warn(
                f"last series term is {big / max(ref, 1e-300):.2e} of the sum; "
                "the truncated series is not trustworthy at this t",
                SeriesExtrapolationWarning, stacklevel=2)
    return total


def _scalar_iterates(sol: SeriesSolution) -> tuple[np.ndarray, float]:
    """Scalar coefficients and the worst departure from proportionality."""
    if sol.is_profile:
        return np.array(sol.iterates, dtype=np.clongdouble), 0.0
    grid = sol.config.grid
    mask = grid.interior_mask(0.1)
    base = sol.iterates[0].values[mask]
    norm = np.vdot(base, base)
    coeffs = []
    prop = 0.0
    for phi in sol.iterates:
        v = phi.values[mask]
        c = np.vdot(base, v) / norm
        coeffs.append(c)
        scale = np.max(np.abs(v))
        if scale > 0:
            prop = max(prop, float(np.max(np.abs(v - c * base)) / scale))
    return np.array(coeffs), prop


def detect_ml_closure(sol: SeriesSolution, tol: float = CLOSURE_TOL) -> ClosureReport:
    """Test whether the iterates follow a Gamma ladder with a fixed rate.

    ``lambda_j = -c_j Gamma(j a + 1) / (c_{j-1} Gamma((j-1) a + 1))``; closure is
    reported when every ``lambda_j`` matches ``lambda_1`` to ``tol`` (relative),
    in which case the series resums to ``f(x) E_a(-lambda t**a)``.
    """
    if len(sol.iterates) < 3:
        raise ValueError("closure detection needs at least three iterates")
    a = sol.alpha
    c, prop = _scalar_iterates(sol)
    rates = []
    for j in range(1, len(c)):
        if c[j - 1] == 0:
            return ClosureReport(complex("nan"), math.inf, False, a, tuple(rates))
        rates.append(complex(-c[j] / c[j - 1] / _ladder(j, a)))
    lam = rates[0]
    if lam == 0:
        dev = max(abs(r) for r in rates)
    else:
        dev = max(abs(r - lam) for r in rates) / abs(lam)
    dev = max(dev, prop)
    return ClosureReport(lam, float(dev), bool(dev <= tol), a, tuple(rates))


def _spatial_stack(sol: SeriesSolution, terms: int, x):
    """Spatial factors a_j(x) and their Laplacians, j = 0..terms."""
    cfg = sol.config
    if sol.is_profile:
        if x is None:
            if cfg.grid is not None:
                x = cfg.grid.x
            elif cfg.profile.is_periodic:
                x = np.linspace(-np.pi, np.pi, 257)
            else:
                x = np.linspace(-5.0, 5.0, 201)
        x = np.asarray(x, dtype=float)
        f = cfg.profile(x)
        f2 = cfg.profile.second_derivative(x)
        f = f.astype(np.longdouble)
        f2 = f2.astype(np.longdouble)
        c = sol.iterates[: terms + 1]
        a = [cj * f for cj in c]
        lap = [cj * f2 for cj in c]
        return x, a, lap
    grid = cfg.grid
    a = [sol.iterates[j].values for j in range(terms + 1)]
    lap = [laplacian(v, grid, cfg.stencil_order) for v in a]
    return grid.x, a, lap


def residual_integer(sol: SeriesSolution, t, terms: int | None = None, x=None, *,
                     chop: float = 64 * np.finfo(float).eps):
    """Sup-norm residual of the truncated series in the integer-order GPE.

    The residual ``i hbar d_t psi_N - H psi_N`` of a polynomial in ``t`` is
    itself a polynomial, assembled here coefficient by coefficient with the
    time derivative taken exactly.  Below order ``N`` the recursion cancels
    each coefficient; contributions that cancel to within ``chop`` times the
    size of the cancelling parts are treated as exact zeros, so the result
    shows the truncation error rather than the double-precision floor.

    Returns the sup over ``x`` for each ``t`` (same shape as ``t``).
    """
    cfg = sol.config
    if cfg.alpha != 1:
        raise DomainError("integer-order residual needs alpha = 1")
    N = sol.order if terms is None else terms
    if N < 0 or N > sol.order:
        raise ValueError(f"terms must lie in [0, {sol.order}]")
    xs, a, lap = _spatial_stack(sol, N, x)
    hbar, kin, g = cfg.constants.hbar, cfg.constants.kinetic, cfg.constants.g
    V = cfg.potential(xs)

    pairs = [sum(a[k] * a[p - k] for k in range(max(0, p - N), min(p, N) + 1))
             for p in range(2 * N + 1)]
    coeffs = []
    for k in range(3 * N + 1):
        cubic = sum(np.conj(a[i]) * pairs[k - i]
                    for i in range(max(0, k - 2 * N), min(k, N) + 1))
        parts = [-g * cubic]
        if k <= N:
            parts.append(kin * lap[k] - V * a[k])
        if k < N:
            parts.append(1j * hbar * (k + 1) * a[k + 1])
        r = sum(parts)
        if k < N:
            scale = sum(np.abs(p) for p in parts)
            r = np.where(np.abs(r) <= chop * scale, 0.0, r)
        coeffs.append(np.asarray(r, dtype=complex) * np.ones_like(xs))

    t_arr = np.asarray(t, dtype=float)
    out = np.empty(t_arr.shape)
    for idx, tv in np.ndenumerate(t_arr):
        total = np.zeros_like(coeffs[0])
        for r in reversed(coeffs):
            total = total * tv + r
        out[idx] = float(np.max(np.abs(total)))
    return float(out) if out.ndim == 0 else out


def coefficient_recursion_check(sol: SeriesSolution) -> float:
    """Largest relative gap between stored and independently recomputed iterates.

    Each iterate ``j`` is rebuilt from the stored iterates ``0 .. j-1`` with a
    triple-loop cubic sum and a direct Gamma ratio, then compared with the
    stored one.
    """
    cfg = sol.config
    a = cfg.alpha
    hbar = cfg.constants.hbar
    worst = 0.0
    if sol.is_profile:
        xs = sol.sample_points if sol.sample_points is not None else _default_samples(cfg.profile)
        with mp.workdps(PROFILE_DPS):
            samples = _profile_samples(cfg, xs)
            coeffs = [_to_mp(c) for c in sol.iterates]
            for j in range(1, len(coeffs)):
                s = _profile_source_ratio(coeffs, j, samples, cfg, _cubic_convolution_direct)
                ladder = gamma_ratio((j - 1) * a + 1, j * a + 1)
                fresh = mp.mpc(0, 1) / hbar * mp.fsum(s) / len(s) * ladder
                scale = max(abs(fresh), abs(coeffs[j]))
                if scale > 0:
                    worst = max(worst, float(abs(coeffs[j] - fresh) / scale))
        return worst

    V = cfg.potential(cfg.grid.x)
    phis = [phi.values for phi in sol.iterates]
    for j in range(1, len(phis)):
        s = _grid_source(phis, j, V, cfg, _cubic_convolution_direct)
        fresh = 1j / hbar * gamma_ratio((j - 1) * a + 1, j * a + 1) * s
        scale = max(float(np.max(np.abs(fresh))), float(np.max(np.abs(phis[j]))))
        if scale > 0:
            worst = max(worst, float(np.max(np.abs(phis[j] - fresh))) / scale)
    return worst
