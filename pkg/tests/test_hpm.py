import math
from dataclasses import replace

import numpy as np
import pytest

from fracgpe.exceptions import ClosureViolation, ConfigError, DomainError, SeriesExtrapolationWarning
from fracgpe.hpm import (ScenarioConfig, SeriesSolution, _cubic_convolution_direct,
                         coefficient_recursion_check, cubic_convolution, cubic_term_count,
                         detect_ml_closure, evaluate_series, hpm_iterate, residual_integer)
from fracgpe.model import Grid, PhysicalConstants, Potential, Profile
from fracgpe.validation import scenario

RATES = {1: 1j, 2: -0.5j, 3: 1.5j, 4: -0.5j}


@pytest.mark.parametrize("example", [1, 2, 3, 4])
def test_first_iterate(example):
    c = hpm_iterate(scenario(example, 1.0, 4)).coefficients
    assert c[0] == 1
    assert c[1] == pytest.approx(-RATES[example], abs=1e-15)


def test_dark_soliton_second_and_third_iterates():
    c = hpm_iterate(scenario(1, 1.0, 3)).coefficients
    assert c[2] == pytest.approx(-0.5, abs=1e-15)
    assert c[3] == pytest.approx(1j / 6, abs=1e-15)


@pytest.mark.parametrize("example", [1, 2, 3, 4])
def test_integer_order_ladder_resums_to_the_phase(example):
    sol = hpm_iterate(scenario(example, 1.0, 20))
    assert sol.closure.closed
    assert sol.closure.rate == pytest.approx(RATES[example], abs=1e-14)
    n = np.arange(21)
    expected = np.array([(-RATES[example]) ** k / math.factorial(k) for k in n])
    assert np.max(np.abs(sol.coefficients - expected)) <= 1e-15


def test_cubic_term_count_and_convolution():
    assert [cubic_term_count(j) for j in (1, 2, 3, 4)] == [1, 3, 6, 10]
    assert cubic_convolution([2.0 + 1j], 1) == pytest.approx(abs(2 + 1j) ** 2 * (2 + 1j))
    rng = np.random.default_rng(3)
    vals = list(rng.normal(size=6) + 1j * rng.normal(size=6))
    for j in range(1, 7):
        assert cubic_convolution(vals, j) == pytest.approx(_cubic_convolution_direct(vals, j),
                                                           abs=1e-13)
    with pytest.raises(ValueError):
        cubic_convolution(vals, 0)


def test_cubic_convolution_matches_polynomial_product():
    # coefficients of conj(p) p p for p(t) = sum a_k t^k with real t
    a = np.array([1.0, 0.5j, -0.25, 0.1j, 0.3 - 0.2j])
    P = np.polynomial.polynomial
    product = P.polymul(P.polymul(np.conj(a), a), a)
    for j in range(1, len(a) + 1):
        assert cubic_convolution(list(a), j) == pytest.approx(product[j - 1], abs=1e-15)


def test_series_at_time_zero_is_the_profile():
    sol = hpm_iterate(scenario(2, 0.9, 6, nonlinearity="frozen-density"))
    x = np.linspace(-3, 3, 7)
    assert np.allclose(evaluate_series(sol, x, 0.0), Profile("sech")(x))


def test_extrapolation_warning():
    sol = hpm_iterate(scenario(1, 1.0, 4))
    with pytest.warns(SeriesExtrapolationWarning):
        evaluate_series(sol, 0.5, 3.0)
    with pytest.raises(ValueError):
        evaluate_series(sol, 0.5, 0.1, terms=9)
    with pytest.raises(DomainError):
        evaluate_series(sol, 0.5, -0.1)


@pytest.mark.parametrize("alpha", [0.9, 0.8])
def test_hermitian_cubic_breaks_profile_closure_below_unit_order(alpha):
    with pytest.raises(ClosureViolation) as info:
        hpm_iterate(scenario(1, alpha, 12))
    assert info.value.order == 3


@pytest.mark.parametrize("example", [1, 2, 3, 4])
def test_frozen_density_ladder_at_fractional_order(example):
    a = 0.8
    sol = hpm_iterate(scenario(example, a, 12, nonlinearity="frozen-density"))
    assert sol.closure.closed
    expected = [(-RATES[example]) ** k / math.gamma(k * a + 1) for k in range(13)]
    assert np.max(np.abs(sol.coefficients - expected)) <= 1e-12


def test_closure_detection_on_a_broken_ladder():
    sol = hpm_iterate(scenario(1, 1.0, 8))
    c = list(sol.iterates)
    c[5] = c[5] * 1.01
    report = detect_ml_closure(replace(sol, iterates=tuple(c)))
    assert not report.closed
    assert report.deviation == pytest.approx(0.01, rel=1e-6)
    with pytest.raises(ValueError):
        detect_ml_closure(SeriesSolution(sol.config, sol.iterates[:2]))


def test_recursion_check_and_perturbation_detection():
    sol = hpm_iterate(scenario(3, 1.0, 12))
    assert coefficient_recursion_check(sol) <= 1e-12
    c = list(sol.iterates)
    c[3] = c[3] + 1e-6
    assert coefficient_recursion_check(replace(sol, iterates=tuple(c))) > 1e-8


def test_recursion_check_grid_backend():
    grid = Grid.periodic(-math.pi, 2 * math.pi, 32)
    sol = hpm_iterate(scenario(4, 0.9, 6, backend="grid", grid=grid))
    assert coefficient_recursion_check(sol) <= 1e-12


def test_grid_backend_matches_profile_coefficients():
    grid = Grid.periodic(-math.pi, 2 * math.pi, 64)
    prof = hpm_iterate(scenario(3, 1.0, 3))
    sol = hpm_iterate(scenario(3, 1.0, 3, backend="grid", grid=grid))
    f = Profile("cos")(grid.x)
    for j in range(4):
        assert np.max(np.abs(sol.iterates[j].values - complex(prof.iterates[j]) * f)) < 1e-4
    assert sol.closure.rate == pytest.approx(1.5j, abs=1e-4)


def test_grid_backend_evaluation_shape():
    grid = Grid(-10, 10, 101)
    sol = hpm_iterate(scenario(1, 1.0, 3, backend="grid", grid=grid))
    t = np.array([0.0, 0.01, 0.02])
    assert evaluate_series(sol, None, t).shape == (3, 101)
    assert evaluate_series(sol, 60, t).shape == (3,)
    with pytest.raises(TypeError):
        sol.coefficients


@pytest.mark.parametrize("n", [4, 8])
def test_integer_residual_is_order_n(n):
    sol = hpm_iterate(scenario(1, 1.0, n))
    t = np.logspace(-3, -1, 9)
    r = residual_integer(sol, t)
    slope = np.polyfit(np.log(t), np.log(r), 1)[0]
    assert abs(slope - n) < 0.1


def test_residual_requires_integer_order():
    sol = hpm_iterate(scenario(1, 0.9, 4, nonlinearity="frozen-density"))
    with pytest.raises(DomainError):
        residual_integer(sol, 0.1)


@pytest.mark.parametrize("kw", [
    dict(alpha=0.0), dict(alpha=1.2), dict(order=0), dict(order=2.5), dict(order=True),
    dict(backend="spectral"), dict(backend="grid"), dict(stencil_order=6),
    dict(nonlinearity="quintic"), dict(profile=None),
])
def test_config_validation(kw):
    base = dict(potential=Potential(), constants=PhysicalConstants(), profile=Profile("tanh"))
    base.update(kw)
    with pytest.raises(ConfigError):
        ScenarioConfig(**base)


def test_profile_guard_skips_nodes():
    # the dark soliton vanishes at x = 0; the sample set straddles the node
    sol = hpm_iterate(scenario(1, 1.0, 4), sample_points=np.linspace(-1, 1, 5))
    assert sol.closure.closed


def test_profile_that_vanishes_everywhere_is_refused():
    cfg = replace(scenario(1, 1.0, 3), profile=Profile("tanh", amplitude=1e-6))
    with pytest.raises(DomainError):
        hpm_iterate(cfg)


def test_custom_profile_without_closure():
    prof = Profile("custom", func=lambda x: np.exp(-x ** 2),
                   second=lambda x: (4 * x ** 2 - 2) * np.exp(-x ** 2))
    cfg = ScenarioConfig(Potential(), PhysicalConstants(), prof, order=3)
    with pytest.raises(ClosureViolation) as info:
        hpm_iterate(cfg)
    assert info.value.order == 1
