from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exact_fa.algebra.polyring import (
    GREVLEX,
    LEX,
    MonomialOrder,
    Ordering,
    Polynomial,
    PolynomialRing,
    monomial_cmp,
    monomial_product,
    normal_form,
)
from exact_fa.errors import DomainError, StructuralError
from exact_fa.faml.ideal import build_joint_ideal
from exact_fa.faml.problem import FactorProblem
from exact_fa.utils.poly_text import format_polynomial, parse_polynomial, parse_rational

RING = PolynomialRing(("x", "y"))

monomials = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polynomials = st.dictionaries(monomials, rationals, max_size=5).map(lambda terms: Polynomial(3, terms))


def test_lex_and_grevlex_disagree_on_textbook_pair():
    a, b = (2, 0), (1, 3)
    assert monomial_cmp(a, b, LEX) is Ordering.GREATER
    assert monomial_cmp(a, b, GREVLEX) is Ordering.LESS
    assert monomial_cmp(a, a, LEX) is Ordering.EQUAL


def test_leading_monomial_follows_the_order():
    f = RING.parse("3*x^2 + 2*x*y^3")
    assert f.leading_monomial(LEX) == (2, 0)
    assert f.leading_monomial(GREVLEX) == (1, 3)
    assert f.leading_coefficient(GREVLEX) == 2


def test_leading_monomial_of_constant_and_zero():
    assert Polynomial.constant(2, 5).leading_monomial(LEX) == (0, 0)
    with pytest.raises(DomainError):
        Polynomial.zero(2).leading_monomial(LEX)


def test_example1_f4_leading_monomials(example1_problem):
    ideal, ring = build_joint_ideal(example1_problem)
    f4 = ideal.generators[3]
    lex_lead = f4.leading_monomial(LEX)
    # leading variable is psi1 under lex
    assert lex_lead[ring.index("psi1")] == 1
    assert lex_lead == tuple(1 if name in ("psi1", "l11") else 0 for name in ring.names)
    assert f4.leading_monomial(GREVLEX) == tuple(3 if name == "l11" else 0 for name in ring.names)


def test_permuted_order_ranks_variables():
    order = MonomialOrder.lex((1, 0))
    assert monomial_cmp((0, 1), (5, 0), order) is Ordering.GREATER
    assert MonomialOrder.from_tag(order.tag()) == order


def test_arity_mismatch_is_structural():
    with pytest.raises(StructuralError):
        monomial_cmp((1, 0), (1, 0, 0), LEX)
    with pytest.raises(StructuralError):
        Polynomial.variable(2, 0) + Polynomial.variable(3, 0)


def test_normal_form_examples():
    f = RING.parse("x^2 - 1")
    g = RING.parse("x - y")
    assert normal_form(f, [g], LEX) == RING.parse("y^2 - 1")
    assert normal_form(f, [f], LEX).is_zero()


def test_zero_coefficients_are_not_stored():
    f = Polynomial(2, {(1, 0): Fraction(1, 2), (0, 1): 0})
    assert len(f) == 1
    assert (f - f).is_zero()
    assert len(Polynomial.zero(2).terms) == 0


def test_float_coefficients_are_rejected():
    with pytest.raises(DomainError):
        Polynomial(1, {(1,): 0.5})


def test_substitute_and_evaluate():
    f = RING.parse("x^2*y + 3")
    assert f.substitute({0: RING.parse("y + 1")}) == RING.parse("y^3 + 2*y^2 + y + 3")
    assert f.evaluate([Fraction(1, 2), Fraction(4)]) == Fraction(4)
    assert f.evaluate_float([0.5, 4.0]) == pytest.approx(4.0)


def test_derivative():
    assert RING.parse("x^3*y - 2*y").derivative(1) == RING.parse("x^3 - 2")


def test_extend_and_drop_last_are_inverse():
    f = RING.parse("x*y - 1/3")
    assert f.extend().drop_last() == f
    with pytest.raises(DomainError):
        Polynomial.variable(3, 2).drop_last()


def test_text_format_round_trip():
    names = ("l11", "l21")
    text = "3/4*l11^2*l21 - 1/2"
    poly = parse_polynomial(text, names)
    assert poly.coefficient((2, 1)) == Fraction(3, 4)
    assert poly.constant_term() == Fraction(-1, 2)
    assert parse_polynomial(format_polynomial(poly, names), names) == poly


def test_parse_accepts_decimals_and_python_powers():
    assert parse_rational("0.35") == Fraction(7, 20)
    assert parse_rational("-2/6") == Fraction(-1, 3)
    assert RING.parse("x**2 - 0.5") == RING.parse("x^2 - 1/2")


def test_parse_rejects_unknown_variables():
    with pytest.raises(DomainError):
        RING.parse("x*z")


@settings(max_examples=60, deadline=None)
@given(polynomials, polynomials, polynomials)
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f + g) - g == f
    for _, coefficient in (f * g).items():
        assert coefficient.denominator > 0
        assert coefficient == Fraction(coefficient.numerator, coefficient.denominator)


@settings(max_examples=100, deadline=None)
@given(monomials, monomials, monomials, st.sampled_from([LEX, GREVLEX]))
def test_monomial_order_is_total_and_multiplicative(a, b, c, order):
    forward = monomial_cmp(a, b, order)
    assert monomial_cmp(b, a, order) == Ordering(-forward)
    if forward is Ordering.GREATER:
        assert monomial_cmp(monomial_product(a, c), monomial_product(b, c), order) is Ordering.GREATER
    assert monomial_cmp(monomial_product(a, c), a, order) is not Ordering.LESS


@settings(max_examples=60, deadline=None)
@given(polynomials, st.lists(polynomials.filter(lambda poly: not poly.is_zero()), min_size=1, max_size=3))
def test_normal_form_is_idempotent(f, divisors):
    once = normal_form(f, divisors, GREVLEX)
    assert normal_form(once, divisors, GREVLEX) == once
