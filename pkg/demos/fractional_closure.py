"""Why the profile ladder does not survive alpha < 1 with the full cubic term.

With the order-by-order expansion of |psi|^2 psi the third iterate keeps its
shape only if Gamma(2a+1) = 2 Gamma(a+1)^2, which holds at a = 1 alone.  The
profile backend notices and raises ClosureViolation; the grid backend shows
the same thing as a growing departure from proportionality.  Holding the
density at its initial value restores the Mittag-Leffler ladder.

Run:  python demos/fractional_closure.py
"""

import math

import numpy as np

from fracgpe import ClosureViolation, hpm_iterate
from fracgpe.hpm import _scalar_iterates
from fracgpe.model import Grid
from fracgpe.validation import scenario

for a in (1.0, 0.9, 0.8, 0.5):
    gap = math.gamma(2 * a + 1) - 2 * math.gamma(a + 1) ** 2
    try:
        hpm_iterate(scenario(1, a, 12))
        verdict = "closes"
    except ClosureViolation as exc:
        verdict = f"breaks at iterate {exc.order} (spread {exc.deviation:.3f})"
    print(f"alpha={a}: Gamma identity gap {gap:+.4f}; hermitian profile series {verdict}")

grid = Grid.periodic(-math.pi, 2 * math.pi, 64)
for a in (1.0, 0.8):
    sol = hpm_iterate(scenario(3, a, 6, backend="grid", grid=grid))
    _, spread = _scalar_iterates(sol)
    print(f"grid backend, example 3, alpha={a}: departure from cos(x) {spread:.2e}")

sol = hpm_iterate(scenario(3, 0.8, 12, nonlinearity="frozen-density"))
expected = np.array([(-1.5j) ** k / math.gamma(0.8 * k + 1) for k in range(13)])
print("frozen density, alpha=0.8: closed =", sol.closure.closed,
      f"max |c - ladder| = {np.max(np.abs(sol.coefficients - expected)):.1e}")
