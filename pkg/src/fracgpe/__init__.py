"""Series solutions of the (time-fractional) Gross-Pitaevskii equation.

Modules
-------
special      Gamma, Mittag-Leffler, Riemann-Liouville/Caputo rules, quadrature, 1F1, erfc.
model        Grids, potentials, profiles, solitons and the norm/energy functionals.
hpm          Homotopy-perturbation iterates, closure detection, evaluation, residuals.
integrator   Method-of-lines RK4 oracle for the integer-order equation.
config       YAML scenario files and the four shipped presets.
figures      CSV figure data; validation, cli: acceptance report and command line.
"""

from .exceptions import (ClosureViolation, ConfigError, ConvergenceError, DomainError,
                         FracGPEError, GridMismatch, NumericalFailure, PoleError,
                         SeriesExtrapolationWarning, StabilityError)
from .hpm import (ClosureReport, ScenarioConfig, SeriesSolution, coefficient_recursion_check,
                  cubic_convolution, detect_ml_closure, evaluate_series, hpm_iterate,
                  residual_integer)
from .integrator import ErrorRecord, Trajectory, compare_series_vs_trajectory, integrate_rk4
from .model import (ComplexField, Grid, PhysicalConstants, Potential, Profile, bright_soliton,
                    chemical_potential_functional, dark_soliton, energy_functional, laplacian,
                    norm_functional, traveling_soliton)
from .special import (MLArguments, PowerTerm, caputo_monomial, confluent_1f1, erfc, gamma,
                      mittag_leffler, ml_asymptotic, rl_differintegrate_monomial,
                      rl_integral_quadrature)

__version__ = "0.1.0"

__all__ = [
    "ErrorRecord",
    "Trajectory",
    "compare_series_vs_trajectory",
    "integrate_rk4",
    "ClosureViolation",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FracGPEError",
    "GridMismatch",
    "NumericalFailure",
    "PoleError",
    "SeriesExtrapolationWarning",
    "StabilityError",
    "ClosureReport",
    "ScenarioConfig",
    "SeriesSolution",
    "coefficient_recursion_check",
    "cubic_convolution",
    "detect_ml_closure",
    "evaluate_series",
    "hpm_iterate",
    "residual_integer",
    "ComplexField",
    "Grid",
    "PhysicalConstants",
    "Potential",
    "Profile",
    "bright_soliton",
    "chemical_potential_functional",
    "dark_soliton",
    "energy_functional",
    "laplacian",
    "norm_functional",
    "traveling_soliton",
    "MLArguments",
    "PowerTerm",
    "caputo_monomial",
    "confluent_1f1",
    "erfc",
    "gamma",
    "mittag_leffler",
    "ml_asymptotic",
    "rl_differintegrate_monomial",
    "rl_integral_quadrature",
]
