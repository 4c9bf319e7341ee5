from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exact_fa.classify.pattern import PATTERNS, classify_exact, classify_numeric, classify_pattern
from exact_fa.config import FitSettings
from exact_fa.errors import DomainError
from exact_fa.faml.problem import FactorProblem
from exact_fa.faml.solutions import CandidateSolution, enumerate_solutions

# LL' + Psi for L = (4/5, 7/10, 3/5), Psi = (9/25, 51/100, 16/25)
MODEL_S = (
    (Fraction(1), Fraction(14, 25), Fraction(12, 25)),
    (Fraction(14, 25), Fraction(1), Fraction(21, 50)),
    (Fraction(12, 25), Fraction(21, 50), Fraction(1)),
)
MODEL_ARRAY = np.array([[float(value) for value in row] for row in MODEL_S])

EXAMPLE1_S = (
    (Fraction(1), Fraction(1, 2), Fraction(1, 3)),
    (Fraction(1, 2), Fraction(1), Fraction(2, 3)),
    (Fraction(1, 3), Fraction(2, 3), Fraction(1)),
)
EXAMPLE1_ARRAY = np.array([[float(value) for value in row] for row in EXAMPLE1_S])


def _candidate(L, psi, leaf="x"):
    return CandidateSolution(tuple(tuple(row) for row in L), tuple(psi), leaf)


def test_patterns():
    assert PATTERNS == ("Proper", "Improper", "NoSolution")


def test_empty_candidate_list_is_rejected(example1_array):
    with pytest.raises(DomainError):
        classify_pattern([], example1_array)


def test_example1_exact_is_improper(example1_problem):
    report = classify_exact(example1_problem)
    assert report.pattern == "Improper"
    assert report.best is not None
    assert report.best.leaf == "101"
    assert report.best.exact_psi == (Fraction(3, 4), Fraction(0), Fraction(5, 9))
    assert report.discrepancy == pytest.approx(0.0, abs=1e-12)
    assert report.candidates == 7
    assert report.diagnostics["complete"] is True
    assert report.to_dict()["pattern"] == "Improper"


def test_exact_model_is_proper():
    report = classify_exact(FactorProblem(MODEL_S, 1))
    assert report.pattern == "Proper"
    assert report.psi_min == pytest.approx(0.36)
    assert report.fisher_min_eigenvalue > 0


def test_numeric_model_is_proper():
    report = classify_numeric(MODEL_ARRAY, 1, T=10, seed=4)
    assert report.pattern == "Proper"
    assert report.starts == 10
    assert report.algorithm == "jennrich"
    assert report.best.psi == pytest.approx((0.36, 0.51, 0.64), abs=1e-4)


def test_numeric_example1_is_not_proper(example1_array, fit_settings):
    report = classify_numeric(example1_array, 1, seed=0, settings=fit_settings)
    assert report.pattern != "Proper"
    assert abs(report.psi_min) < 1e-4


def test_ties_go_to_the_smaller_leaf_label(example1_array):
    L = [[0.5], [1.0], [2 / 3]]
    psi = [0.75, 0.0, 5 / 9]
    report = classify_pattern([_candidate(L, psi, "b"), _candidate(L, psi, "a")], example1_array)
    assert report.best.leaf == "a"


def test_stationary_point_that_is_not_a_minimum(example1_array):
    # L = 0 solves the likelihood equations but is not the best candidate
    null = _candidate([[0.0], [0.0], [0.0]], [1.0, 1.0, 1.0], "111")
    report = classify_pattern([null], example1_array, 100)
    assert report.eqdiff0_residual < 1e-12
    assert report.pattern == "Proper"
    both = classify_pattern([null, _candidate([[0.5], [1.0], [2 / 3]], [0.75, 0.0, 5 / 9], "101")], example1_array)
    assert both.best.leaf == "101"
    assert both.pattern == "Improper"


def test_non_solution_is_reported(example1_array):
    report = classify_pattern([_candidate([[0.9], [0.9], [0.9]], [0.2, 0.2, 0.2])], example1_array)
    assert report.pattern == "NoSolution"
    assert "likelihood equations" in report.diagnostics["reason"]


def test_singular_candidates_give_no_solution(example1_array):
    report = classify_pattern([_candidate([[1.0], [0.0], [0.0]], [0.0, 0.0, 0.0])], example1_array)
    assert report.pattern == "NoSolution"


def test_starts_must_be_positive(example1_array):
    with pytest.raises(DomainError):
        classify_numeric(example1_array, 1, T=0, settings=FitSettings())


def test_negative_unique_variance_optimum_is_improper():
    # s12 * s13 / s23 = 6/5 > s11, so the perfect fit has psi1 = -1/5
    S = (
        (Fraction(1), Fraction(3, 5), Fraction(1, 2)),
        (Fraction(3, 5), Fraction(1), Fraction(1, 4)),
        (Fraction(1, 2), Fraction(1, 4), Fraction(1)),
    )
    report = classify_exact(FactorProblem(S, 1))
    assert report.pattern == "Improper"
    assert report.psi_min == pytest.approx(-0.2, abs=1e-9)
    assert report.discrepancy == pytest.approx(0.0, abs=1e-9)


def test_folded_fisher_columns_are_reported(example1_array):
    null = _candidate([[0.0], [0.0], [0.0]], [1.0, 1.0, 1.0], "111")
    report = classify_pattern([null], example1_array)
    assert report.diagnostics["fisher_parameters"] == 3
    assert report.diagnostics["fisher_folded_columns"] == 1
    full = classify_pattern([_candidate([[0.8], [0.7], [0.6]], [0.36, 0.51, 0.64])], MODEL_ARRAY)
    assert full.diagnostics["fisher_parameters"] == 6
    assert "fisher_folded_columns" not in full.diagnostics


@pytest.fixture(scope="module")
def example1_candidates():
    return list(enumerate_solutions(FactorProblem(EXAMPLE1_S, 1)))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_verdict_does_not_depend_on_candidate_order(example1_candidates, data):
    shuffled = data.draw(st.permutations(example1_candidates))
    reference = classify_pattern(example1_candidates, EXAMPLE1_ARRAY)
    report = classify_pattern(shuffled, EXAMPLE1_ARRAY)
    assert report.pattern == reference.pattern == "Improper"
    assert report.best.leaf == "101"
    assert report.best.loadings == reference.best.loadings
    assert report.discrepancy == reference.discrepancy
    assert report.diagnostics == reference.diagnostics
