"""Special functions and fractional differintegration kernels.

Everything here is a pure function of its arguments.  The Mittag-Leffler
series is summed in extended (x87 ``long double``) precision with Kahan
compensation so that alternating series such as ``E_1(-10)`` still come out
with an absolute error close to ``1e-15``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .exceptions import ConvergenceError, DomainError, PoleError

__all__ = [
    "PowerTerm",
    "MLArguments",
    "gamma",
    "gamma_ratio",
    "mittag_leffler",
    "ml_asymptotic",
    "rl_differintegrate_monomial",
    "rl_integral_quadrature",
    "product_integration_weights",
    "caputo_monomial",
    "confluent_1f1",
    "erfc",
]

#: Largest |z| the Mittag-Leffler series is trusted with.
ML_SERIES_RADIUS = 25.0

_LD = np.longdouble
_EPS_LD = float(np.finfo(np.longdouble).eps)
_HALF_LOG_2PI = _LD("0.918938533204672741780329736405617639861")
# B_2 ... B_20
_BERNOULLI = [
    (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66),
    (-691, 2730), (7, 6), (-3617, 510), (43867, 798), (-174611, 330),
]


@dataclass(frozen=True)
class PowerTerm:
    """One term ``coefficient * t**exponent`` of a power series in time."""

    coefficient: complex
    exponent: float

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise DomainError(f"non-finite coefficient {self.coefficient!r}")
        if not math.isfinite(self.exponent):
            raise DomainError(f"non-finite exponent {self.exponent!r}")

    def __call__(self, t):
        return self.coefficient * np.power(t, self.exponent)


@dataclass(frozen=True)
class MLArguments:
    """Parameters and argument of ``E_{alpha,beta}(z)``."""

    alpha: float
    z: complex
    beta: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    def evaluate(self, tol: float = 1e-14, max_terms: int = 10_000) -> complex:
        return mittag_leffler(self.alpha, self.z, self.beta, tol=tol, max_terms=max_terms)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function for real ``x``.

    Raises :class:`PoleError` at ``0, -1, -2, ...`` and :class:`OverflowError`
    once the result exceeds the double range (``x > 171.62``).
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma needs a finite argument, got {x}")
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at {x:g}")
    try:
        return math.gamma(x)
    except OverflowError:
        raise OverflowError(f"gamma({x:g}) overflows double precision") from None


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    return -1.0 if math.floor(-x) % 2 == 0 else 1.0


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)``, stable for large arguments.

    ``b`` at a pole gives 0 (the reciprocal Gamma vanishes there); ``a`` at a
    pole raises :class:`PoleError`.
    """
    if _is_nonpositive_integer(a):
        raise PoleError(f"gamma has a pole at {a:g}")
    if _is_nonpositive_integer(b):
        return 0.0
    if abs(a) < 170 and abs(b) < 170:
        return math.gamma(a) / math.gamma(b)
    return _gamma_sign(a) * _gamma_sign(b) * math.exp(math.lgamma(a) - math.lgamma(b))


def _lgamma_ld(x) -> np.longdouble:
    """log Gamma(x) in extended precision for x > 0 (shifted Stirling series)."""
    y = _LD(x)
    shift = _LD(1)
    while y < 30:
        shift *= y
        y += 1
    s = (y - _LD("0.5")) * np.log(y) - y + _HALF_LOG_2PI
    inv = 1 / y
    inv2 = inv * inv
    p = inv
    for k, (num, den) in enumerate(_BERNOULLI, start=1):
        s += _LD(num) / _LD(den) / _LD(2 * k * (2 * k - 1)) * p
        p *= inv2
    return s - np.log(shift)


def mittag_leffler(alpha: float, z, beta: float = 1.0, *, tol: float = 1e-14,
                   max_terms: int = 10_000):
    r"""Two-parameter Mittag-Leffler function by direct series summation.

    .. math::

        E_{\alpha,\beta}(z) = \sum_{n \ge 0} \frac{z^n}{\Gamma(\alpha n + \beta)}

    Parameters
    ----------
    alpha, beta:
        Positive real parameters.
    z:
        Complex scalar or array.  Every entry must satisfy ``|z| <= 25``.
    tol:
        Target absolute error, in ``(0, 1e-3]``.
    max_terms:
        Cap on the number of series terms.

    Raises
    ------
    ConvergenceError
        If ``|z|`` is outside the series-safe disc, if terms have not dropped
        below ``tol`` within ``max_terms``, or if cancellation between terms
        would make the rounding error exceed ``tol``.
    """
    if not alpha > 0 or not beta > 0:
        raise DomainError(f"need alpha > 0 and beta > 0, got alpha={alpha}, beta={beta}")
    if not 0 < tol <= 1e-3:
        raise DomainError(f"tol must lie in (0, 1e-3], got {tol}")

    z_in = np.asarray(z, dtype=complex)
    scalar = z_in.ndim == 0
    zz = np.atleast_1d(z_in).astype(np.clongdouble)
    absz = np.abs(z_in)
    if np.any(~np.isfinite(absz)):
        raise DomainError("z must be finite")
    zmax = float(np.max(absz)) if absz.size else 0.0
    if zmax > ML_SERIES_RADIUS:
        raise ConvergenceError(
            f"|z| = {zmax:.3g} exceeds the series-safe radius {ML_SERIES_RADIUS}"
        )

    a = _LD(alpha)
    b = _LD(beta)
    lg_prev = _lgamma_ld(b)
    term = np.full(zz.shape, np.exp(-lg_prev), dtype=np.clongdouble)
    total = term.copy()
    comp = np.zeros_like(total)
    abs_sum = float(np.exp(-lg_prev))
    err_budget = 2.0 * abs_sum

    converged = False
    for n in range(1, max_terms + 1):
        lg_n = _lgamma_ld(a * n + b)
        ratio = np.exp(lg_prev - lg_n)
        term = term * zz * ratio
        # Kahan compensated accumulation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t

        tmax = float(np.max(np.abs(term)))
        abs_sum += tmax
        err_budget += (n + 2) * tmax
        # tail is geometric once the term ratio is below 1/2
        next_ratio = zmax * float(np.exp(lg_n - _lgamma_ld(a * (n + 1) + b)))
        if next_ratio < 0.5 and 2.0 * tmax * next_ratio < tol:
            converged = True
            break
        lg_prev = lg_n

    if not converged:
        raise ConvergenceError(
            f"Mittag-Leffler series did not converge within {max_terms} terms"
        )
    if _EPS_LD * err_budget > tol:
        raise ConvergenceError(
            f"cancellation in the series limits accuracy to ~{_EPS_LD * err_budget:.1e} > tol={tol:g}"
        )

    out = total.astype(complex)
    return complex(out[0]) if scalar else out.reshape(z_in.shape)


def ml_asymptotic(alpha: float, t_over_tau: float,
                  regime: Literal["short-time", "long-time"]) -> float:
    """Leading asymptotic forms of ``E_alpha(-(t/tau)**alpha)``.

    ``short-time`` gives the stretched exponential
    ``exp(-(t/tau)**alpha / Gamma(1 + alpha))``; ``long-time`` gives the
    inverse power law ``(t/tau)**(-alpha) / Gamma(1 - alpha)``.
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if t_over_tau < 0:
        raise DomainError("t/tau must be non-negative")
    if regime == "short-time":
        return math.exp(-(t_over_tau ** alpha) / math.gamma(1 + alpha))
    if regime == "long-time":
        if alpha == 1:
            raise DomainError("long-time power law needs alpha < 1 (Gamma(0) pole)")
        if t_over_tau <= 0:
            raise DomainError("long-time regime needs t/tau > 0")
        return t_over_tau ** (-alpha) / math.gamma(1 - alpha)
    raise DomainError(f"unknown regime {regime!r}")


def rl_differintegrate_monomial(nu: float, term: PowerTerm) -> PowerTerm:
    """Riemann-Liouville differintegral of order ``nu`` of ``c * t**mu``.

    ``nu > 0`` differentiates, ``nu < 0`` integrates.  Returns
    ``c * Gamma(1+mu)/Gamma(1+mu-nu) * t**(mu-nu)``.
    """
    mu = term.exponent
    if mu <= -1:
        raise DomainError(f"exponent must exceed -1, got {mu}")
    den = 1.0 + mu - nu
    if _is_nonpositive_integer(den):
        if term.coefficient == 0:
            return PowerTerm(0.0, mu - nu)
        raise PoleError(f"Gamma(1 + mu - nu) = Gamma({den:g}) is a pole")
    return PowerTerm(term.coefficient * gamma_ratio(1.0 + mu, den), mu - nu)


def _binomial_series(p: float, kmax: int) -> list[float]:
    coeffs = [1.0]
    for k in range(1, kmax + 1):
        coeffs.append(coeffs[-1] * (p - k + 1) / k)
    return coeffs


def _second_difference_power(m: np.ndarray, p: float) -> np.ndarray:
    """``(m+1)**p - 2 m**p + (m-1)**p`` without cancellation for large m."""
    m = np.asarray(m, dtype=float)
    out = np.empty_like(m)
    small = m < 64
    ms = m[small]
    out[small] = (ms + 1) ** p - 2 * ms ** p + np.abs(ms - 1) ** p
    ml = m[~small]
    if ml.size:
        c = _binomial_series(p, 14)
        inv2 = 1.0 / ml ** 2
        acc = np.zeros_like(ml)
        pw = inv2.copy()
        for k in range(2, 15, 2):
            acc += 2 * c[k] * pw
            pw *= inv2
        out[~small] = ml ** p * acc
    return out


def _first_weight(n: int, alpha: float) -> float:
    p = alpha + 1.0
    if n < 64:
        return (n - 1) ** p - (n - 1 - alpha) * n ** alpha
    c = _binomial_series(p, 14)
    acc = sum(c[k] * (-1.0 / n) ** k for k in range(2, 15))
    return n ** p * acc


def product_integration_weights(n: int, alpha: float) -> np.ndarray:
    """Weights ``a_k`` of the product trapezoidal rule on ``n`` uniform panels.

    The fractional integral of a piecewise-linear interpolant is
    ``h**alpha / Gamma(alpha + 2) * sum_k a_k f(s_k)``; the kernel
    ``(t - s)**(alpha - 1)`` is integrated exactly on each panel.
    """
    if n < 1:
        raise DomainError("need at least one panel")
    w = np.empty(n + 1)
    w[0] = _first_weight(n, alpha)
    if n > 1:
        k = np.arange(1, n)
        w[1:n] = _second_difference_power(n - k, alpha + 1.0)
    w[n] = 1.0
    return w


def rl_integral_quadrature(f: Callable | np.ndarray, alpha: float, t: float, *,
                           tol: float = 1e-9, min_panels: int = 16,
                           max_panels: int = 2 ** 21) -> complex:
    r"""Riemann-Liouville fractional integral by product integration.

    Computes :math:`\frac{1}{\Gamma(\alpha)}\int_0^t (t-s)^{\alpha-1} f(s)\,ds`.

    ``f`` is either a vectorised callable, in which case the panel count is
    doubled until successive values agree to ``tol`` (relative), or an array
    of samples on a uniform grid over ``[0, t]`` (used as is).
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")

    def rule(samples: np.ndarray) -> complex:
        n = samples.size - 1
        h = t / n
        w = product_integration_weights(n, alpha)
        return complex(h ** alpha / math.gamma(alpha + 2) * np.dot(w, samples))

    if not callable(f):
        samples = np.asarray(f)
        if samples.ndim != 1 or samples.size < 2:
            raise DomainError("need at least two samples on [0, t]")
        return rule(samples)

    def sample(n: int) -> np.ndarray:
        s = np.linspace(0.0, t, n + 1)
        v = np.asarray(f(s))
        if v.shape != s.shape:
            v = np.array([f(si) for si in s])
        return v

    n = min_panels
    prev = rule(sample(n))
    while n < max_panels:
        n *= 2
        cur = rule(sample(n))
        if abs(cur - prev) <= tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise ConvergenceError(
        f"product integration did not settle to {tol:g} within {max_panels} panels"
    )


def caputo_monomial(alpha: float, term: PowerTerm) -> PowerTerm:
    """Caputo derivative of ``c * t**mu`` of order ``alpha > 0``.

    Integer powers below ``n = ceil(alpha)`` (constants in particular) are
    annihilated.  An integer ``alpha`` gives the ordinary derivative.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    mu = term.exponent
    if mu < 0:
        raise DomainError(f"exponent must be non-negative, got {mu}")
    n = math.ceil(alpha)
    if mu == math.floor(mu) and mu < n:
        return PowerTerm(0.0, 0.0)
    if mu < n - 1:
        raise DomainError(
            f"t**{mu:g} has a non-integrable {n}-th derivative at 0; Caputo order {alpha:g} undefined"
        )
    return PowerTerm(term.coefficient * gamma_ratio(1.0 + mu, 1.0 + mu - alpha), mu - alpha)


def confluent_1f1(a: float, b: float, z, tol: float = 1e-15,
                  max_terms: int = 10_000) -> complex:
    """Kummer's confluent hypergeometric function ``1F1(a; b; z)`` by series."""
    if _is_nonpositive_integer(b):
        raise PoleError(f"1F1 undefined for b = {b:g}")
    z = complex(z)
    terms_re = [1.0]
    terms_im = [0.0]
    term = 1.0 + 0j
    partial = 1.0 + 0j
    for k in range(max_terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        terms_re.append(term.real)
        terms_im.append(term.imag)
        partial += term
        if term == 0:
            break
        if k + 1 > abs(z) and abs(term) <= tol * max(1.0, abs(partial)):
            break
    else:
        raise ConvergenceError(f"1F1 series did not converge within {max_terms} terms")
    return complex(math.fsum(terms_re), math.fsum(terms_im))


def erfc(x: float) -> float:
    """Complementary error function ``1 - erf(x)``."""
    x = float(x)
    if math.isnan(x):
        raise DomainError("erfc of NaN")
    return math.erfc(x)
