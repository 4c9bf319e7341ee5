from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from exact_fa.classify.evaluate import implied_covariance
from exact_fa.classify.fitters import (
    FITTERS,
    FitResult,
    best_fit,
    default_start,
    fit,
    fit_em,
    fit_jennrich,
    fit_lawley,
    fit_multistart,
    lawley_profile,
    psi_profile,
    random_starts,
)
from exact_fa.config import FitSettings
from exact_fa.faml.solutions import enumerate_solutions

MODEL_L = np.array([[0.8], [0.7], [0.6]])
MODEL_PSI = np.array([0.36, 0.51, 0.64])
MODEL_S = implied_covariance(MODEL_L, MODEL_PSI)


@pytest.mark.parametrize("algorithm", sorted(FITTERS))
def test_fitters_recover_an_exact_model(algorithm):
    settings = FitSettings(algorithm=algorithm, max_iterations=5000, gradient_tolerance=1e-12)
    result = fit(MODEL_S, 1, None, settings)
    assert result.algorithm == algorithm
    assert result.discrepancy < 1e-8
    tolerance = 1e-3 if algorithm == "em" else 1e-4
    assert result.Psi == pytest.approx(MODEL_PSI, abs=tolerance)
    assert result.L.ravel() == pytest.approx(MODEL_L.ravel(), abs=tolerance)


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        fit(MODEL_S, 1, None, FitSettings(algorithm="newton"))  # type: ignore[arg-type]


def test_bad_inputs():
    with pytest.raises(ValueError):
        fit_jennrich(np.ones((2, 3)), 1)
    with pytest.raises(ValueError):
        fit_jennrich(MODEL_S, 3)
    with pytest.raises(ValueError):
        fit_lawley(MODEL_S, 1, [0.5, -0.1, 0.5])


def test_best_multistart_fit_reaches_the_exact_optimum(example1_array, fit_settings):
    # the exact minimizer is the boundary point psi = (3/4, 0, 5/9) with q = 0
    results = []
    for algorithm in sorted(FITTERS):
        results.extend(fit_multistart(example1_array, 1, replace(fit_settings, algorithm=algorithm), seed=1))
    best = best_fit(results)
    assert best is not None
    assert best.discrepancy == pytest.approx(0.0, abs=1e-6)
    assert best.Psi == pytest.approx([0.75, 0.0, 5 / 9], abs=1e-3)
    assert np.abs(best.L.ravel()) == pytest.approx([0.5, 1.0, 2 / 3], abs=1e-3)


def test_lawley_respects_the_floor(example1_array):
    settings = FitSettings(algorithm="lawley")
    result = fit_lawley(example1_array, 1, settings=settings)
    assert np.all(result.Psi >= settings.lawley_floor)
    assert result.Psi[1] == pytest.approx(settings.lawley_floor)


def test_lawley_profile_has_no_columns_below_one():
    value, loadings = lawley_profile(np.diag(MODEL_S).copy(), np.eye(3), 1)
    assert value == pytest.approx(0.0, abs=1e-12)
    assert not loadings.any()


def test_lawley_fit_is_eigen_consistent():
    # an exact one-factor model with two off-diagonal entries nudged, so the fit is interior but not perfect
    L4 = np.array([[0.8], [0.7], [0.6], [0.5]])
    S = implied_covariance(L4, 1.0 - L4.ravel() ** 2)
    S[0, 3] = S[3, 0] = S[0, 3] + 0.05
    S[1, 2] = S[2, 1] = S[1, 2] - 0.04
    result = fit_lawley(S, 1, settings=FitSettings(algorithm="lawley", max_iterations=5000, gradient_tolerance=1e-12))
    assert np.all(result.Psi > 0.1)

    # L = Psi^1/2 u sqrt(theta - 1) for the top eigenpair of Psi^-1/2 S Psi^-1/2
    root = np.sqrt(result.Psi)
    theta, vectors = np.linalg.eigh(S / np.outer(root, root))
    expected = root * vectors[:, -1] * np.sqrt(theta[-1] - 1.0)
    sign = np.sign(expected @ result.L[:, 0])
    assert result.L[:, 0] == pytest.approx(sign * expected, abs=1e-5)
    # and Psi = diag(S - LL') at the stationary point
    assert result.Psi == pytest.approx(np.diag(S - result.L @ result.L.T), abs=1e-5)


@pytest.mark.slow
def test_em_never_increases_the_discrepancy(random_spd):
    rng = np.random.default_rng(2024)
    settings = FitSettings(algorithm="em", max_iterations=200, gradient_tolerance=0.0)
    for _ in range(50):
        S = random_spd(rng, 4)
        result = fit_em(S, 1, settings=settings)
        history = np.array(result.history)
        assert history.size == 201
        assert np.all(np.diff(history) <= 1e-10)


def test_em_from_explicit_loadings():
    settings = FitSettings(algorithm="em", max_iterations=2000)
    result = fit_em(MODEL_S, 1, [0.5, 0.5, 0.5], settings, loadings0=np.full((3, 1), 0.5))
    assert result.history[0] > result.history[-1]
    assert result.discrepancy < 1e-6


def test_random_starts_are_seeded(example1_array):
    first = random_starts(example1_array, 5, seed=9)
    assert first.shape == (5, 3)
    assert np.all(first > 0) and np.all(first <= 1)
    assert np.array_equal(first, random_starts(example1_array, 5, seed=9))
    assert not np.array_equal(first, random_starts(example1_array, 5, seed=10))


def test_default_start():
    assert default_start(np.eye(4), 2) == pytest.approx([0.75] * 4)


def test_best_fit_skips_infinite_discrepancies():
    infinite = FitResult(np.zeros((3, 1)), np.zeros(3), False, 1, float("inf"), "jennrich")
    finite = FitResult(MODEL_L, MODEL_PSI, True, 3, 0.5, "jennrich")
    assert best_fit([infinite, finite]) is finite
    assert best_fit([infinite]) is None


def test_psi_profile_is_lowest_at_the_boundary(example1_array):
    rows = psi_profile(example1_array, 1, 1, [0.0, 0.25, 0.5])
    assert [fixed for fixed, _ in rows] == [0.0, 0.25, 0.5]
    values = [value for _, value in rows]
    assert values[0] == pytest.approx(0.0, abs=1e-6)
    assert values[0] < values[1] < values[2]
    with pytest.raises(ValueError):
        psi_profile(example1_array, 1, 3, [0.0])


@pytest.mark.slow
def test_converged_fits_are_among_the_exact_solutions(example1_problem, example1_array):
    exact = [
        (np.abs(np.asarray(solution.L, dtype=float)).ravel(), np.asarray(solution.Psi, dtype=float))
        for solution in enumerate_solutions(example1_problem)
    ]
    results = fit_multistart(example1_array, 1, FitSettings(starts=200, algorithm="jennrich"), seed=11)
    converged = [result for result in results if result.converged]
    assert converged
    for result in converged:
        loadings, psi = np.abs(result.L).ravel(), result.Psi
        assert any(
            np.max(np.abs(loadings - L)) < 1e-3 and np.max(np.abs(psi - Psi)) < 1e-3 for L, Psi in exact
        ), result.to_dict()
