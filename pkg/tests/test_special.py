import math

import mpmath as mp
import numpy as np
import pytest

from fracgpe.exceptions import ConvergenceError, DomainError, PoleError
from fracgpe.special import (MLArguments, PowerTerm, caputo_monomial, confluent_1f1, erfc, gamma,
                             gamma_ratio, ml_asymptotic, mittag_leffler,
                             product_integration_weights, rl_differintegrate_monomial,
                             rl_integral_quadrature)

rng = np.random.default_rng(20240611)


# -- Gamma -------------------------------------------------------------------

@pytest.mark.parametrize("x, expected", [(1, 1.0), (4, 6.0), (0.5, math.sqrt(math.pi))])
def test_gamma_examples(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-14)


def test_gamma_recurrence_random():
    xs = rng.uniform(0.1, 50, 1000)
    rel = [abs(gamma(x + 1) - x * gamma(x)) / abs(gamma(x + 1)) for x in xs]
    assert max(rel) <= 1e-12


def test_gamma_negative_arguments_against_mpmath():
    for x in (-0.5, -1.5, -3.25, -10.7, -150.3):
        assert gamma(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


@pytest.mark.parametrize("x", [0, -1, -7])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


def test_gamma_overflow():
    with pytest.raises(OverflowError):
        gamma(200.0)


def test_gamma_ratio_large_arguments():
    assert gamma_ratio(300.5, 300.0) == pytest.approx(float(mp.gamma(300.5) / mp.gamma(300)), rel=1e-12)
    assert gamma_ratio(2.0, -3.0) == 0.0


# -- Mittag-Leffler -----------------------------------------------------------

def test_ml_reduces_to_exp():
    assert mittag_leffler(1.0, -1.0, tol=1e-17) == pytest.approx(math.exp(-1), abs=1e-16)
    z = rng.uniform(-10, 10, 50) + 1j * rng.uniform(-3, 3, 50)
    z = z[np.abs(z) <= 10]
    assert np.max(np.abs(mittag_leffler(1.0, z, tol=1e-12) - np.exp(z))) <= 1e-12


def test_ml_at_zero_is_reciprocal_gamma():
    assert mittag_leffler(0.8, 0.0) == 1.0
    assert mittag_leffler(0.7, 0.0, beta=2.5) == pytest.approx(1 / math.gamma(2.5), rel=1e-15)


def test_ml_half_order_erfc_identity():
    # E_{1/2}(-x) = exp(x^2) erfc(x)
    for x in (0.25, 1.0, 2.0):
        assert mittag_leffler(0.5, -x) == pytest.approx(math.exp(x * x) * math.erfc(x), rel=1e-13)
    assert mittag_leffler(0.5, -1.0) == pytest.approx(0.4275835761558070, abs=1e-13)


def test_ml_conjugation_symmetry():
    z = 1.3 - 2.1j
    assert mittag_leffler(0.7, np.conj(z), 1.2) == pytest.approx(np.conj(mittag_leffler(0.7, z, 1.2)),
                                                                 abs=1e-14)


def test_ml_against_arbitrary_precision_sum():
    for alpha, beta, z in [(0.8, 1.0, -2.5 + 1j), (0.3, 1.7, 0.9j), (1.6, 0.5, -6.0)]:
        with mp.workdps(40):
            ref = mp.nsum(lambda n: mp.mpc(z) ** n / mp.gamma(alpha * n + beta), [0, mp.inf])
        assert abs(mittag_leffler(alpha, z, beta, tol=1e-13) - complex(ref)) <= 5e-13


def test_ml_argument_record():
    args = MLArguments(0.5, -1.0)
    assert args.evaluate() == pytest.approx(mittag_leffler(0.5, -1.0))
    with pytest.raises(DomainError):
        MLArguments(0.0, 1.0)


def test_ml_refuses_large_arguments():
    with pytest.raises(ConvergenceError, match="series-safe"):
        mittag_leffler(0.5, -30.0)


def test_ml_reports_cancellation_instead_of_wrong_digits():
    with pytest.raises(ConvergenceError):
        mittag_leffler(0.5, -5.0, tol=1e-14)


def test_ml_term_cap():
    with pytest.raises(ConvergenceError):
        mittag_leffler(1.0, 20.0, tol=1e-14, max_terms=10)


def test_ml_tolerance_validation():
    with pytest.raises(DomainError):
        mittag_leffler(1.0, 1.0, tol=0.1)


# -- asymptotics ---------------------------------------------------------------

def test_short_time_asymptote():
    assert ml_asymptotic(1.0, 2.0, "short-time") == pytest.approx(math.exp(-2))
    assert ml_asymptotic(0.8, 0.1, "short-time") == pytest.approx(
        math.exp(-(0.1 ** 0.8) / math.gamma(1.8)))


def test_long_time_power_law():
    assert ml_asymptotic(0.5, 100.0, "long-time") == pytest.approx(0.05641895835477563, rel=1e-14)
    # the leading decay term tracks the function itself at large argument
    x = 20.0
    exact = mittag_leffler(0.5, -math.sqrt(x), tol=1e-7)
    assert ml_asymptotic(0.5, x, "long-time") == pytest.approx(exact, rel=0.05)


def test_long_time_needs_fractional_order():
    with pytest.raises(DomainError):
        ml_asymptotic(1.0, 5.0, "long-time")


# -- Riemann-Liouville and Caputo rules -----------------------------------------

def test_monomial_rule_examples():
    out = rl_differintegrate_monomial(-1.0, PowerTerm(1.0, 1.0))
    assert (out.coefficient, out.exponent) == (pytest.approx(0.5), 2.0)
    a, k = 0.7, 3
    out = rl_differintegrate_monomial(-a, PowerTerm(1.0, k * a))
    assert out.coefficient == pytest.approx(math.gamma(k * a + 1) / math.gamma((k + 1) * a + 1))
    assert out.exponent == pytest.approx((k + 1) * a)
    out = rl_differintegrate_monomial(0.5, PowerTerm(3.0, 0.0))
    assert out.coefficient == pytest.approx(3.0 / math.gamma(0.5))
    assert out.exponent == -0.5


def test_monomial_rule_integer_derivatives():
    out = rl_differintegrate_monomial(2.0, PowerTerm(1.0, 5.0))
    assert out.coefficient == pytest.approx(20.0) and out.exponent == 3.0


def test_monomial_rule_pole():
    # d/dt of a constant: 1 + mu - nu = 0
    with pytest.raises(PoleError):
        rl_differintegrate_monomial(1.0, PowerTerm(2.0, 0.0))
    assert rl_differintegrate_monomial(1.0, PowerTerm(0.0, 0.0)).coefficient == 0


def test_monomial_semigroup():
    for _ in range(100):
        a, b = rng.uniform(0.01, 1, 2)
        term = PowerTerm(1.0, rng.uniform(0, 3))
        twice = rl_differintegrate_monomial(-b, rl_differintegrate_monomial(-a, term))
        once = rl_differintegrate_monomial(-(a + b), term)
        assert twice.coefficient == pytest.approx(once.coefficient, rel=1e-12)


def test_power_term_validation():
    with pytest.raises(DomainError):
        PowerTerm(float("nan"), 1.0)
    assert PowerTerm(2.0, 0.5)(4.0) == pytest.approx(4.0)


def test_caputo_annihilates_constants_unlike_rl():
    c = PowerTerm(1.5, 0.0)
    assert caputo_monomial(0.5, c).coefficient == 0
    rl = rl_differintegrate_monomial(0.5, c)
    assert rl.coefficient == pytest.approx(1.5 / math.gamma(0.5))


def test_caputo_monomials():
    out = caputo_monomial(0.5, PowerTerm(1.0, 1.0))
    assert out.coefficient == pytest.approx(1 / math.gamma(1.5)) and out.exponent == 0.5
    out = caputo_monomial(1.0, PowerTerm(1.0, 2.0))
    assert out.coefficient == pytest.approx(2.0) and out.exponent == 1.0


def test_caputo_against_defining_integral():
    # D^a t = I^{1-a}[1], evaluated by quadrature
    a = 0.5
    quad = rl_integral_quadrature(lambda s: np.ones_like(s), 1 - a, 0.8)
    assert caputo_monomial(a, PowerTerm(1.0, 1.0))(0.8) == pytest.approx(quad, rel=1e-8)


# -- quadrature --------------------------------------------------------------

def test_weights_integrate_constants_and_lines_exactly():
    n, a = 37, 0.4
    w = product_integration_weights(n, a)
    s = np.linspace(0, 1, n + 1)
    h = 1 / n
    scale = h ** a / math.gamma(a + 2)
    assert scale * w.sum() == pytest.approx(1 / math.gamma(1 + a), rel=1e-13)
    assert scale * (w @ s) == pytest.approx(1 / math.gamma(2 + a), rel=1e-13)


def test_weights_large_panel_count_stable():
    w = product_integration_weights(5000, 0.3)
    assert np.all(w > 0)


def test_quadrature_examples():
    assert rl_integral_quadrature(lambda s: np.ones_like(s), 1.0, 2.0) == pytest.approx(2.0)
    assert rl_integral_quadrature(lambda s: s, 0.5, 1.0) == pytest.approx(0.7522527780636751,
                                                                          rel=1e-9)


def test_quadrature_oscillatory_integrand_converges():
    f = lambda s: np.exp(1j * s)  # noqa: E731
    v = rl_integral_quadrature(f, 0.8, 0.5, tol=1e-11)
    # closed form: t^a sum (i t)^k / Gamma(k + a + 1)
    ref = 0.5 ** 0.8 * mittag_leffler(1.0, 0.5j, beta=1.8)
    assert abs(v - ref) <= 1e-9
    assert abs(v - (0.5864904106273585 + 0.16730624152009743j)) <= 1e-9


def test_quadrature_accepts_samples():
    s = np.linspace(0, 1, 2049)
    v = rl_integral_quadrature(s ** 2, 0.5, 1.0)
    assert v == pytest.approx(2 / math.gamma(3.5), rel=1e-5)


def test_quadrature_errors():
    with pytest.raises(DomainError):
        rl_integral_quadrature(lambda s: s, 1.5, 1.0)
    with pytest.raises(DomainError):
        rl_integral_quadrature(np.array([1.0]), 0.5, 1.0)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 1.0])
@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.0])
def test_monomial_rule_matches_quadrature(alpha, mu):
    for t in (0.5, 1.0, 2.0):
        rule = rl_differintegrate_monomial(-alpha, PowerTerm(1.0, mu))(t)
        quad = rl_integral_quadrature(lambda s: s ** mu, alpha, t)
        assert abs(rule - quad) / rule <= 1e-6


# -- 1F1 and erfc ---------------------------------------------------------------

def test_1f1_examples():
    assert confluent_1f1(0.3, 1.7, 0.0) == 1.0
    assert confluent_1f1(1.0, 1.0, 2.0) == pytest.approx(math.exp(2), rel=1e-15)
    assert confluent_1f1(0.5, 1.5, -1.2 + 0.4j) == pytest.approx(complex(mp.hyp1f1(0.5, 1.5, -1.2 + 0.4j)),
                                                                  rel=1e-14)
    with pytest.raises(PoleError):
        confluent_1f1(1.0, -2.0, 0.5)


def test_half_derivative_of_exponential_two_routes():
    # D^{1/2} e^t = t^{-1/2}/Gamma(1/2) 1F1(1; 1/2; t)
    nu, t = 0.5, 1.0
    closed = t ** -nu / math.gamma(1 - nu) * confluent_1f1(1.0, 1 - nu, t)
    # RL derivative of a smooth f: f(0) t^{-nu}/Gamma(1-nu) + I^{1-nu}[f']
    quad = t ** -nu / math.gamma(1 - nu) + rl_integral_quadrature(np.exp, 1 - nu, t)
    assert abs(closed - quad) <= 1e-6


def test_erfc_examples():
    assert erfc(0.0) == 1.0
    assert erfc(1.0) == pytest.approx(0.15729920705028513, rel=1e-13)
    for x in (0.3, 1.7, 4.0):
        assert erfc(-x) == pytest.approx(2 - erfc(x), rel=1e-15)
    with pytest.raises(DomainError):
        erfc(float("nan"))


def test_half_order_ml_exponential_prefactor_sign():
    t = 1.0
    series = mittag_leffler(0.5, -math.sqrt(t), tol=1e-13)
    assert abs(series - math.exp(t) * erfc(math.sqrt(t))) <= 1e-8
    # a decaying prefactor does not reproduce the function
    assert abs(series - math.exp(-t) * erfc(math.sqrt(t))) > 0.1
