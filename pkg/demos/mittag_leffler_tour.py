"""A short tour of the special-function kernels.

Run:  python demos/mittag_leffler_tour.py
"""

import math

import numpy as np

from fracgpe.exceptions import ConvergenceError
from fracgpe.special import (PowerTerm, caputo_monomial, ml_asymptotic, mittag_leffler,
                             rl_differintegrate_monomial, rl_integral_quadrature)

# E_1 is the exponential.
t = np.linspace(0, 10, 1000)
err = np.max(np.abs(mittag_leffler(1.0, -t, tol=1e-13) - np.exp(-t)))
print(f"max |E_1(-t) - exp(-t)| on [0, 10]: {err:.2e}")

# E_{1/2}(-x) = exp(x^2) erfc(x): a stretched relaxation with a slow power-law tail.
for x in (0.5, 1.0, 2.0):
    print(f"E_1/2(-{x}) = {mittag_leffler(0.5, -x).real:.15f}   "
          f"exp(x^2) erfc(x) = {math.exp(x * x) * math.erfc(x):.15f}")

# The series refuses to lose digits silently.
try:
    mittag_leffler(0.5, -5.0, tol=1e-14)
except ConvergenceError as exc:
    print("refused:", exc)

# Short- and long-time asymptotes of E_a(-(t/tau)^a).
# Far out the series is refused and only the asymptote is available.
for r in (0.01, 0.1, 10.0, 100.0):
    try:
        exact = f"{mittag_leffler(0.6, -(r ** 0.6), tol=1e-9).real:.6f}"
    except ConvergenceError:
        exact = "(refused)"
    print(f"t/tau={r:6g}  E={exact:>9}  short={ml_asymptotic(0.6, r, 'short-time'):.6f}  "
          f"long={ml_asymptotic(0.6, r, 'long-time'):.6f}")

# Fractional integrals of monomials: closed form against product-integration quadrature.
a, mu = 0.5, 1.0
rule = rl_differintegrate_monomial(-a, PowerTerm(1.0, mu))
quad = rl_integral_quadrature(lambda s: s ** mu, a, 1.0)
print(f"I^0.5[t](1): rule {rule(1.0):.12f}, quadrature {complex(quad).real:.12f}")

# Caputo kills constants; Riemann-Liouville does not.
c = PowerTerm(1.0, 0.0)
print("Caputo D^0.5[1] =", caputo_monomial(0.5, c))
print("RL     D^0.5[1] =", rl_differintegrate_monomial(0.5, c))
