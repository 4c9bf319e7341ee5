from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from exact_fa.algebra.groebner import Ideal, buchberger, ideal_sum, saturate
from exact_fa.algebra.polyring import GREVLEX, LEX
from exact_fa.algebra.realsolve import solve_triangular
from exact_fa.config import AlgebraSettings
from exact_fa.errors import DomainError, SingularCovariance
from exact_fa.faml.decompose import decompose, decompose_ideal, problem_splitters
from exact_fa.faml.ideal import build_joint_ideal, build_likelihood_ideal, extra_splitters, psi_polynomials
from exact_fa.faml.problem import FactorProblem, determinant, loading_names, rational_matrix_inverse
from exact_fa.faml.solutions import (
    canonicalize_sign,
    collapse_sign_classes,
    enumerate_solutions,
    format_solution,
    likelihood_residual,
    recover_psi,
)
from exact_fa.pool import WorkerPool


# ----------------------------------------------------------------------
# Problem
# ----------------------------------------------------------------------
def test_example1_problem(example1_problem):
    assert example1_problem.p == 3
    assert example1_problem.determinant() == Fraction(5, 12)
    assert example1_problem.loading_names() == ("l11", "l21", "l31")
    inverse = example1_problem.inverse()
    product = [[sum(a * b for a, b in zip(row, column)) for column in zip(*inverse)] for row in example1_problem.S]
    assert product == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def test_loading_layout_has_upper_triangle_zeros():
    prob = FactorProblem([[2, 1, 1, 1], [1, 2, 1, 1], [1, 1, 2, 1], [1, 1, 1, 2]], 2)
    assert prob.nloadings == 7
    assert prob.loading_names() == ("l11", "l21", "l22", "l31", "l32", "l41", "l42")
    matrix = prob.loadings_from_vector([1, 2, 3, 4, 5, 6, 7])
    assert matrix[0] == [1, 0]
    assert matrix[3] == [6, 7]
    assert loading_names(10, 1)[0] == "l1_1"


def test_problem_validation():
    with pytest.raises(SingularCovariance):
        FactorProblem([[1, 1], [1, 1]], 1)
    with pytest.raises(DomainError):
        FactorProblem([[1, 2], [3, 1]], 1)
    with pytest.raises(DomainError):
        FactorProblem([[1, 0], [0, 1]], 2)
    with pytest.raises(DomainError):
        FactorProblem([[-1, 0, 0], [0, -1, 0], [0, 0, -1]], 1)


def test_ridge_regularizes_a_singular_matrix():
    prob = FactorProblem([[1, 1, 0], [1, 1, 0], [0, 0, 1]], 1, ridge="1/100")
    assert prob.covariance[0][0] == Fraction(101, 100)
    assert prob.S[0][0] == 1
    assert prob.determinant() > 0


def test_determinant_and_inverse_are_exact():
    assert determinant([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]) == 3
    assert rational_matrix_inverse([[2, 1], [1, 2]]) == (
        (Fraction(2, 3), Fraction(-1, 3)),
        (Fraction(-1, 3), Fraction(2, 3)),
    )


# ----------------------------------------------------------------------
# Ideals
# ----------------------------------------------------------------------
def test_likelihood_ideal_vanishes_at_the_perfect_fit(example1_problem):
    ideal = build_likelihood_ideal(example1_problem)
    assert ideal.nvars == 3
    assert len(ideal) == 3
    for point in ([Fraction(1, 2), Fraction(1), Fraction(2, 3)], [Fraction(0)] * 3):
        assert all(poly.evaluate(point) == 0 for poly in ideal.generators)


def test_psi_polynomials(example1_problem):
    psi = psi_polynomials(example1_problem)
    assert [poly.evaluate([Fraction(1, 2), Fraction(1), Fraction(2, 3)]) for poly in psi] == [
        Fraction(3, 4),
        Fraction(0),
        Fraction(5, 9),
    ]


def test_joint_ideal_ring(example1_problem):
    ideal, ring = build_joint_ideal(example1_problem)
    assert ring.names == ("psi1", "psi2", "psi3", "l11", "l21", "l31")
    assert len(ideal) == 6
    point = [Fraction(3, 4), Fraction(0), Fraction(5, 9), Fraction(1, 2), Fraction(1), Fraction(2, 3)]
    assert all(poly.evaluate(point) == 0 for poly in ideal.generators)


def test_sum_and_saturation_by_psi1(example1_problem):
    ideal, ring = build_joint_ideal(example1_problem)
    psi1 = ring.gen("psi1")
    with_zero = buchberger(ideal_sum(ideal, Ideal.of([psi1])), GREVLEX)
    assert with_zero.contains(psi1)
    saturated = buchberger(saturate(ideal, psi1), LEX)
    assert not saturated.is_unit
    # (1, 1, 1, 0, 0, 0) has psi1 != 0 and survives the saturation
    assert all(poly.evaluate([1, 1, 1, 0, 0, 0]) == 0 for poly in saturated.elements)


def test_extra_splitters_for_two_factors():
    prob = FactorProblem([[2, 1, 1, 1], [1, 2, 1, 1], [1, 1, 2, 1], [1, 1, 1, 2]], 2)
    names = [name for name, _ in extra_splitters(prob)]
    assert names[:4] == ["l11", "l22", "l32", "l42"]
    assert names[4:] == ["det(2,3)", "det(2,4)", "det(3,4)"]
    assert extra_splitters(FactorProblem([[1, 0], [0, 1]], 1)) == []


# ----------------------------------------------------------------------
# Decomposition
# ----------------------------------------------------------------------
def _joint_tree(prob, pool=None):
    ideal, ring = build_joint_ideal(prob)
    splitters = [(name, ring.gen(name)) for name in ring.names[: prob.p]]
    return decompose_ideal(ideal, splitters, pool=pool), ring


def test_example4_bases(example1_problem, example4_bases):
    leaves, ring = _joint_tree(example1_problem)
    by_label = {leaf.label: leaf for leaf in leaves}
    assert sorted(by_label) == sorted(example4_bases["bases"])
    for label, texts in example4_bases["bases"].items():
        leaf = by_label[label]
        if texts == ["1"]:
            assert leaf.status == "Empty", label
            continue
        assert leaf.status == "ZeroDim", label
        expected = {ring.parse(text).monic(LEX) for text in texts}
        assert set(leaf.lex_basis().elements) == expected, label


def test_example4_bases_with_workers(example1_problem, example4_bases):
    leaves, _ = _joint_tree(example1_problem, WorkerPool(2))
    assert {leaf.label: leaf.status for leaf in leaves} == {
        label: ("Empty" if texts == ["1"] else "ZeroDim") for label, texts in example4_bases["bases"].items()
    }


def test_empty_root_is_a_single_leaf(example1_problem):
    unit = Ideal.unit(3)
    main, _ = problem_splitters(example1_problem)
    leaves = decompose_ideal(unit, main)
    assert [(leaf.label, leaf.status) for leaf in leaves] == [("", "Empty")]


def test_budget_leaf_is_reported(example1_problem):
    leaves = decompose(build_likelihood_ideal(example1_problem), example1_problem, max_basis_size=1)
    assert any(leaf.status == "Budget" for leaf in leaves)
    budget = next(leaf for leaf in leaves if leaf.status == "Budget")
    assert budget.gb_grevlex is None
    assert "basis_size" in budget.summary()["diagnostics"]


def test_wall_clock_budget_leaf_is_reported(example1_problem):
    (leaf,) = decompose(build_likelihood_ideal(example1_problem), example1_problem, max_seconds=0)
    assert (leaf.label, leaf.status) == ("", "Budget")
    assert leaf.diagnostics["stage"] == "buchberger"
    assert "seconds" in leaf.summary()["diagnostics"]


def test_reduction_budget_leaf_is_reported(example1_problem):
    leaves = decompose(build_likelihood_ideal(example1_problem), example1_problem, max_reductions=0)
    budget = [leaf for leaf in leaves if leaf.status == "Budget"]
    assert budget
    assert all(leaf.diagnostics["max_reductions"] == 0 for leaf in budget)


def test_four_variable_run_stops_on_its_budget():
    p4_S = (
        (1, "14/25", "12/25", "2/5"),
        ("14/25", 1, "21/50", "7/20"),
        ("12/25", "21/50", 1, "3/10"),
        ("2/5", "7/20", "3/10", 1),
    )
    solutions = enumerate_solutions(FactorProblem(p4_S, 1), AlgebraSettings(max_seconds=0))
    assert not solutions.complete
    assert len(solutions) == 0
    assert all(message.startswith("budget exceeded") for message in solutions.errors.values())


@pytest.mark.parametrize("permutation", [(0, 1, 2), (2, 1, 0), (1, 2, 0)])
def test_decomposition_does_not_depend_on_splitter_order(example1_problem, permutation):
    main, _ = problem_splitters(example1_problem)
    ideal = build_likelihood_ideal(example1_problem)

    def points_by_label(order):
        found = {}
        for leaf in decompose_ideal(ideal, [main[index] for index in order]):
            assert leaf.status in ("Empty", "ZeroDim")
            label = "".join(leaf.label[order.index(index)] for index in range(len(order)))
            points = [] if leaf.status == "Empty" else solve_triangular(leaf.lex_basis())
            found[label] = sorted(tuple(round(value, 9) for value in point.values()) for point in points)
        return found

    assert points_by_label(permutation) == points_by_label((0, 1, 2))


# ----------------------------------------------------------------------
# Solutions
# ----------------------------------------------------------------------
EXAMPLE1_SOLUTIONS = {
    "011": (Fraction(0), Fraction(3, 4), Fraction(8, 9)),
    "101": (Fraction(3, 4), Fraction(0), Fraction(5, 9)),
    "110": (Fraction(8, 9), Fraction(5, 9), Fraction(0)),
    "111": (Fraction(1), Fraction(1), Fraction(1)),
}


def test_example1_has_seven_exact_solutions(example1_problem):
    solutions = enumerate_solutions(example1_problem)
    assert len(solutions) == 7
    assert solutions.complete
    assert all(solution.exact for solution in solutions)
    loadings = {solution.exact_loadings for solution in solutions}
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    for sign in (1, -1):
        assert ((sign * Fraction(1),), (sign * half,), (sign * third,)) in loadings
        assert ((sign * half,), (sign * Fraction(1),), (sign * Fraction(2, 3),)) in loadings
        assert ((sign * third,), (sign * Fraction(2, 3),), (sign * Fraction(1),)) in loadings
    assert ((Fraction(0),), (Fraction(0),), (Fraction(0),)) in loadings
    # signs are coupled within a column
    assert ((Fraction(1),), (-half,), (third,)) not in loadings
    for solution in solutions:
        assert solution.exact_psi == EXAMPLE1_SOLUTIONS[solution.leaf]
        assert solution.residual < 1e-12


def test_sign_classes(example1_problem):
    solutions = enumerate_solutions(example1_problem)
    classes = collapse_sign_classes(list(solutions))
    assert len(classes) == 4
    for solution in classes:
        assert all(value >= 0 for row in solution.canonical_loadings for value in row)


def test_solution_report_fields(example1_problem):
    solutions = enumerate_solutions(example1_problem)
    data = solutions.to_dict()
    assert data["complete"] is True
    assert len(data["solutions"]) == 7
    assert {leaf["label"] for leaf in data["leaves"]} >= {"011", "101", "110", "111"}
    perfect = next(solution for solution in solutions if solution.leaf == "101")
    assert perfect.to_dict()["psi_exact"] == ["3/4", "0", "5/9"]
    assert format_solution(perfect).startswith("[101] psi=(3/4, 0, 5/9)")


def test_identity_covariance_has_a_positive_dimensional_variety():
    prob = FactorProblem([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 1)
    solutions = enumerate_solutions(prob, AlgebraSettings(slice_points=2), seed=3)
    assert any(leaf.status == "PositiveDim" for leaf in solutions.leaves)
    assert not solutions.complete
    for solution in solutions:
        loadings = np.array(solution.loadings).ravel()
        # real points lie on the coordinate axes
        assert np.count_nonzero(np.abs(loadings) > 1e-9) <= 1
        assert np.allclose(solution.Psi + loadings**2, 1.0, atol=1e-9)


def test_recover_psi_and_residual(example1_array):
    L = [[0.5], [1.0], [2.0 / 3.0]]
    assert recover_psi(L, example1_array) == pytest.approx((0.75, 0.0, 5.0 / 9.0))
    assert likelihood_residual(example1_array, L) < 1e-12
    assert likelihood_residual(example1_array, [[0.9], [0.9], [0.9]]) > 1e-3


def test_canonicalize_sign():
    assert canonicalize_sign(((Fraction(-1), Fraction(1)), (Fraction(1, 2), Fraction(-3)))) == (
        (Fraction(1), Fraction(-1)),
        (Fraction(-1, 2), Fraction(3)),
    )
    flipped = canonicalize_sign(np.array([[-0.2], [-0.9]]))
    assert flipped.tolist() == [[0.2], [0.9]]
