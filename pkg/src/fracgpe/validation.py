"""Acceptance checks for the whole package, with a machine-readable report.

Each ``criterion_*`` function returns a :class:`CriterionResult` made of
named sub-checks.  :func:`run_validation` collects all of them together with
a list of documented deviations from reference coefficient tables.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np

from .exceptions import ClosureViolation
from .figures import figure_tables
from .config import load_preset
from .hpm import (ScenarioConfig, SeriesSolution, evaluate_series,
                  hpm_iterate, residual_integer)
from .integrator import compare_series_vs_trajectory, integrate_rk4
from .model import ComplexField, Grid, PhysicalConstants, Potential, Profile
from .special import (PowerTerm, mittag_leffler, rl_differintegrate_monomial,
                      rl_integral_quadrature)

__all__ = ["SubCheck", "CriterionResult", "CRITERIA", "run_validation", "scenario",
           "oracle_grid", "table_deviations"]

#: Perturbation added to c_3 when a coefficient fault is injected.
INJECTED_PERTURBATION = 1e-6


@dataclass(frozen=True)
class SubCheck:
    name: str
    passed: bool
    measured: float | str
    tolerance: str


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    checks: tuple[SubCheck, ...]
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [c.name for c in self.checks if not c.passed]
        tail = f"  (failed: {', '.join(failed)})" if failed else ""
        return f"[{status}] criterion {self.number:2d}: {self.title}{tail}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


# -- scenarios ---------------------------------------------------------------

_SCENARIOS = {
    1: (Profile("tanh"), Potential("zero"), PhysicalConstants(g=1.0, mu=1.0)),
    2: (Profile("sech"), Potential("zero"), PhysicalConstants(g=-1.0, mu=-0.5)),
    3: (Profile("cos"), Potential("plus-sin-squared"), PhysicalConstants(g=1.0, mu=1.5)),
    4: (Profile("cos"), Potential("minus-sin-squared"), PhysicalConstants(g=-1.0, mu=-0.5)),
}


def scenario(example: int, alpha: float = 1.0, order: int = 12, **kw) -> ScenarioConfig:
    """Scenario of worked example 1-4."""
    profile, potential, constants = _SCENARIOS[example]
    return ScenarioConfig(potential, constants, profile, alpha=alpha, order=order, **kw)


def oracle_grid(example: int) -> Grid:
    """Grid used by the time-stepping oracle."""
    if _SCENARIOS[example][0].kind == "cos":
        return Grid.periodic(-math.pi, 2 * math.pi, 256)
    return Grid(-20.0, 20.0, 1601)


@lru_cache(maxsize=None)
def _trajectory(example: int, t_end: float):
    profile, potential, constants = _SCENARIOS[example]
    grid = oracle_grid(example)
    init = ComplexField(grid, profile(grid.x))
    return integrate_rk4(init, potential, constants, t_end=t_end, samples=int(round(40 * t_end)) + 1,
                         boundary_rate=constants.mu)


def _coefficients(cfg: ScenarioConfig, inject: bool) -> np.ndarray:
    c = hpm_iterate(cfg).coefficients.copy()
    if inject and len(c) > 3:
        c[3] += INJECTED_PERTURBATION
    return c


def _check(name, value, ok, tol) -> SubCheck:
    return SubCheck(name, bool(ok), float(value) if not isinstance(value, str) else value, tol)


# -- criteria ----------------------------------------------------------------

def criterion_1(inject: bool = False) -> CriterionResult:
    t = np.linspace(0.0, 10.0, 1000)
    start = time.perf_counter()
    err = float(np.max(np.abs(mittag_leffler(1.0, -t, tol=1e-13) - np.exp(-t))))
    elapsed = time.perf_counter() - start
    return CriterionResult(1, "Mittag-Leffler E_1(-t) equals exp(-t)", (
        _check("max abs error on [0, 10]", err, err <= 1e-12, "<= 1e-12"),
        _check("runtime seconds", elapsed, elapsed < 1.0, "< 1 s"),
    ))


def criterion_2(inject: bool = False) -> CriterionResult:
    worst = 0.0
    for a in (0.3, 0.5, 0.8, 1.0):
        for mu in (0.0, 0.5, 1.0, 2.0):
            for t in (0.5, 1.0, 2.0):
                rule = rl_differintegrate_monomial(-a, PowerTerm(1.0, mu))(t)
                quad = rl_integral_quadrature(lambda s, mu=mu: s ** mu, a, t)
                worst = max(worst, abs(rule - quad) / abs(rule))
    return CriterionResult(2, "monomial rule agrees with product-integration quadrature", (
        _check("max relative error over 48 cases", worst, worst <= 1e-6, "<= 1e-6"),
    ))


def _ladder_check(example: int, rate: complex, alphas, tol: float, inject: bool, number: int,
                  title: str) -> CriterionResult:
    checks = []
    n = np.arange(13)
    for a in alphas:
        name = f"alpha={a:g}"
        try:
            c = _coefficients(scenario(example, a, 12), inject)
        except ClosureViolation as exc:
            checks.append(SubCheck(name, False,
                                   f"no profile closure at iterate {exc.order} "
                                   f"(spread {exc.deviation:.3g})", f"<= {tol:g}"))
            continue
        expected = np.array([(-rate) ** k / math.gamma(k * a + 1) for k in n])
        err = float(np.max(np.abs(c - expected)))
        checks.append(_check(name, err, err <= tol, f"<= {tol:g}"))
    return CriterionResult(number, title, tuple(checks))


def criterion_3(inject: bool = False) -> CriterionResult:
    return _ladder_check(1, 1j, (1.0, 0.9, 0.8), 1e-12, inject, 3,
                         "dark-soliton coefficients (-i)^n / Gamma(n alpha + 1), n <= 12")


def criterion_4(inject: bool = False) -> CriterionResult:
    return _ladder_check(3, 1.5j, (1.0, 0.9, 0.8), 1e-10, inject, 4,
                         "lattice (V = sin^2) coefficients (-3i/2)^n / Gamma(n alpha + 1), n <= 12")


def criterion_5(inject: bool = False) -> CriterionResult:
    checks = []
    t = np.linspace(0.0, 1.0, 41)
    for a in (1.0, 0.8):
        for ex in (1, 2, 3, 4):
            name = f"example {ex}, alpha={a:g}"
            try:
                sol = hpm_iterate(scenario(ex, a, 20))
            except ClosureViolation as exc:
                checks.append(SubCheck(name, False, f"no closure (iterate {exc.order})", "<= 1e-8"))
                continue
            if inject:
                c = list(sol.iterates)
                c[3] = c[3] + INJECTED_PERTURBATION
                sol = replace(sol, iterates=tuple(c))
            if not sol.closure.closed:
                checks.append(SubCheck(name, False, f"closure not detected "
                                       f"(deviation {sol.closure.deviation:.3g})", "<= 1e-8"))
                continue
            x = np.linspace(-3.0, 3.0, 61)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                series = evaluate_series(sol, x[None, :], t[:, None])
            ref = np.multiply.outer(sol.closure.reference(t), sol.config.profile(x))
            err = float(np.max(np.abs(series - ref)))
            checks.append(_check(name, err, err <= 1e-8, "<= 1e-8"))
    return CriterionResult(5, "series at N=20 equals f(x) E_alpha(-lambda t^alpha)", tuple(checks))


def criterion_6(inject: bool = False) -> CriterionResult:
    checks = []
    x = np.linspace(-5.0, 5.0, 101)
    for ex in (1, 3):
        sol = hpm_iterate(scenario(ex, 1.0, 20))
        if inject:
            c = list(sol.iterates)
            c[3] = c[3] + INJECTED_PERTURBATION
            sol = replace(sol, iterates=tuple(c))
        profile, _, constants = _SCENARIOS[ex]
        for t in (0.25, 0.5, 1.0):
            exact = profile(x) * np.exp(-1j * constants.mu * t)
            err = float(np.max(np.abs(evaluate_series(sol, x, t, warn=False) - exact)))
            checks.append(_check(f"example {ex}, t={t:g}", err, err <= 1e-8, "<= 1e-8"))
    return CriterionResult(6, "N=20 series reproduces the exact stationary solutions", tuple(checks))


def tabulated_example2_series(order: int = 20) -> SeriesSolution:
    """Series built from the tabulated bright-soliton coefficients c_n = (-i)^n / ((n+1) n!)."""
    coeffs = [(-1j) ** n / ((n + 1) * math.factorial(n)) for n in range(order + 1)]
    return SeriesSolution.from_coefficients(scenario(2, 1.0, order), coeffs)


def criterion_7(inject: bool = False) -> CriterionResult:
    checks = []
    for ex in (1, 2, 3, 4):
        sol = hpm_iterate(scenario(ex, 1.0, 20))
        if inject:
            c = list(sol.iterates)
            c[3] = c[3] + INJECTED_PERTURBATION
            sol = replace(sol, iterates=tuple(c))
        rec = compare_series_vs_trajectory(sol, _trajectory(ex, 1.0), 0.25)
        checks.append(_check(f"example {ex} sup error", rec.sup, rec.sup <= 1e-6, "<= 1e-6"))
    rec = compare_series_vs_trajectory(tabulated_example2_series(), _trajectory(2, 1.0), 0.25)
    checks.append(_check("tabulated example-2 coefficients (negative control)", rec.sup, rec.sup > 1e-3,
                         "> 1e-3"))
    return CriterionResult(7, "series vs RK4 oracle at t=0.25", tuple(checks))


def criterion_8(inject: bool = False) -> CriterionResult:
    checks = []
    t = np.logspace(-3, -1, 9)
    for n in (4, 8):
        sol = hpm_iterate(scenario(1, 1.0, n))
        if inject:
            c = list(sol.iterates)
            c[3] = c[3] + INJECTED_PERTURBATION
            sol = replace(sol, iterates=tuple(c))
        r = residual_integer(sol, t)
        slope = float(np.polyfit(np.log(t), np.log(r), 1)[0])
        checks.append(_check(f"N={n} slope", slope, abs(slope - n) <= 0.5, f"{n} +/- 0.5"))
    return CriterionResult(8, "residual scales as t^N", tuple(checks))


def criterion_9(inject: bool = False) -> CriterionResult:
    checks = []
    for ex in (1, 2, 3, 4):
        dn, de = _trajectory(ex, 1.0).relative_drift()
        checks.append(_check(f"example {ex} norm drift", dn, dn <= 1e-8, "<= 1e-8"))
        checks.append(_check(f"example {ex} energy drift", de, de <= 1e-6, "<= 1e-6"))
    return CriterionResult(9, "RK4 conserves norm and energy on [0, 1]", tuple(checks))


def _convergence_grids(example: int) -> list[Grid]:
    if _SCENARIOS[example][0].kind == "cos":
        return [Grid.periodic(-math.pi, 2 * math.pi, n) for n in (16, 32, 64)]
    return [Grid(-20.0, 20.0, n) for n in (201, 401, 801)]


def measured_orders(example: int, orders=(1, 2, 3), stencil_order: int = 4) -> dict[int, float]:
    """Least-squares convergence order of grid iterates against profile iterates."""
    top = max(orders)
    ref = hpm_iterate(scenario(example, 1.0, top))
    grids = _convergence_grids(example)
    errors = {j: [] for j in orders}
    for grid in grids:
        sol = hpm_iterate(scenario(example, 1.0, top, backend="grid", grid=grid,
                                   stencil_order=stencil_order))
        mask = grid.interior_mask(0.1)
        f = ref.config.profile(grid.x[mask])
        for j in orders:
            diff = sol.iterates[j].values[mask] - complex(ref.iterates[j]) * f
            errors[j].append(float(np.max(np.abs(diff))))
    h = np.array([g.spacing for g in grids])
    return {j: float(np.polyfit(np.log(h), np.log(errors[j]), 1)[0]) for j in orders}


def criterion_10(inject: bool = False) -> CriterionResult:
    checks = []
    for ex in (1, 2, 3, 4):
        for j, p in measured_orders(ex).items():
            checks.append(_check(f"example {ex}, iterate {j}", p, abs(p - 4) <= 0.5, "4 +/- 0.5"))
    return CriterionResult(10, "grid backend converges to profile coefficients at order 4",
                           tuple(checks))


def criterion_11(inject: bool = False) -> CriterionResult:
    checks = []
    for ex in (1, 2, 3, 4):
        tables = figure_tables(load_preset(ex))
        header, rows = tables["density_surface"]
        data = np.array(rows, dtype=float)
        one = data[data[:, 0] == 1.0]
        xs = np.unique(one[:, 1])
        ts = np.unique(one[:, 2])
        dens = one[:, 3].reshape(len(ts), len(xs))
        if ex == 1:
            at0 = dens[:, np.argmin(np.abs(xs))]
            ok = np.all(np.argmin(dens, axis=1) == np.argmin(np.abs(xs))) and at0.max() <= 1e-20
            checks.append(_check("example 1 density minimum 0 at x=0", at0.max(), ok,
                                 "argmin at x=0, value 0"))
        elif ex == 2:
            ok = np.all(np.argmax(dens, axis=1) == np.argmin(np.abs(xs)))
            checks.append(_check("example 2 density maximum at x=0", float(ok), ok, "argmax at x=0"))
        else:
            # shift by pi: the x axis spans [-2 pi, 2 pi] with 256 intervals
            step = (len(xs) - 1) // 4
            per = float(np.max(np.abs(dens[:, step:] - dens[:, :-step])))
            checks.append(_check(f"example {ex} density period pi", per, per <= 1e-12, "<= 1e-12"))

        header, rows = tables["time_traces"]
        tr = np.array(rows, dtype=float)
        t = tr[:, 0]
        amp = float(np.max(np.abs(tr[:, 1] + 1j * tr[:, 2])))
        ref = tr[:, 1:3]
        early = t <= 0.1 + 1e-12
        gap_early = max(float(np.max(np.abs(tr[early, c:c + 2] - ref[early]))) for c in (3, 5)) / amp
        gap_late = min(float(np.max(np.abs(tr[-1, c:c + 2] - ref[-1]))) for c in (3, 5)) / amp
        checks.append(_check(f"example {ex} traces coincide for t <= 0.1", gap_early,
                             gap_early <= 0.02, "<= 2% of amplitude"))
        checks.append(_check(f"example {ex} traces diverge by t=3", gap_late, gap_late >= 0.05,
                             ">= 5% of amplitude"))
    return CriterionResult(11, "figure-data shape checks", tuple(checks))


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


# -- documented deviations ---------------------------------------------------

def table_deviations() -> list[dict]:
    """Reference coefficient tables that disagree with the recursion and the oracle."""
    out = []
    sol2 = hpm_iterate(scenario(2, 1.0, 20))
    pub2 = tabulated_example2_series()
    traj2 = _trajectory(2, 1.0)
    out.append({
        "scenario": "example 2 (sech, V=0, g=-1)",
        "tabulated": "c_n = (-1)^n i^n / ((n+1) n!)",
        "computed": "c_n = (i/2)^n / n!, i.e. sech(x) exp(+i t/2)",
        "tabulated_c1": [pub2.coefficients[1].real, pub2.coefficients[1].imag],
        "computed_c1": [sol2.coefficients[1].real, sol2.coefficients[1].imag],
        "oracle_sup_error_tabulated": compare_series_vs_trajectory(pub2, traj2, 0.25).sup,
        "oracle_sup_error_computed": compare_series_vs_trajectory(sol2, traj2, 0.25).sup,
    })
    sol4 = hpm_iterate(scenario(4, 1.0, 20))
    pub4 = SeriesSolution.from_coefficients(
        scenario(4, 1.0, 20), [(-0.5j) ** n / math.factorial(n) for n in range(21)])
    traj4 = _trajectory(4, 1.0)
    out.append({
        "scenario": "example 4 (cos, V=-sin^2, g=-1)",
        "tabulated": "c_n = (-1)^n i^n / (2^n n!), i.e. cos(x) exp(-i t/2)",
        "computed": "c_n = (i/2)^n / n!, i.e. cos(x) exp(+i t/2), the stated exact solution",
        "tabulated_c1": [pub4.coefficients[1].real, pub4.coefficients[1].imag],
        "computed_c1": [sol4.coefficients[1].real, sol4.coefficients[1].imag],
        "oracle_sup_error_tabulated": compare_series_vs_trajectory(pub4, traj4, 0.25).sup,
        "oracle_sup_error_computed": compare_series_vs_trajectory(sol4, traj4, 0.25).sup,
    })
    for a in (0.9, 0.8):
        try:
            hpm_iterate(scenario(1, a, 12))
            spread, order = 0.0, None
        except ClosureViolation as exc:
            spread, order = exc.deviation, exc.order
        out.append({
            "scenario": f"examples 1-4 at alpha = {a:g}",
            "tabulated": "c_n = (-lambda)^n / Gamma(n alpha + 1)",
            "computed": "the order-by-order cubic term leaves the profile; the tabulated "
                        "ladder follows only if the density is frozen at |psi(x,0)|^2",
            "first_non_closing_iterate": order,
            "closure_spread_example_1": spread,
            # closing at iterate 3 needs Gamma(2a+1) = 2 Gamma(a+1)^2, true only at a = 1
            "gamma_identity_gap": math.gamma(2 * a + 1) - 2 * math.gamma(a + 1) ** 2,
        })
    return out


def run_validation(inject: bool = False, numbers=None) -> dict:
    """Run the selected criteria (all by default) and return the JSON-ready report."""
    numbers = sorted(CRITERIA) if numbers is None else list(numbers)
    results = []
    for n in numbers:
        start = time.perf_counter()
        res = CRITERIA[n](inject)
        results.append(replace(res, seconds=time.perf_counter() - start))
    return {
        "passed": all(r.passed for r in results),
        "injected_perturbation": INJECTED_PERTURBATION if inject else None,
        "criteria": [r.to_dict() for r in results],
        "deviations": table_deviations(),
    }
