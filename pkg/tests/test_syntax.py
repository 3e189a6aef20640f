import random
from fractions import Fraction

import pytest

from algcps.errors import TermSyntaxError
from algcps.harness import GenConfig, gen_term
from algcps.scalars import GAUSSIAN_RATIONALS
from algcps.syntax import format_term, parse_term
from algcps.terms import ZERO, App, Lam, Namespace, Scale, Sum, var, var_name


def test_application_is_left_associative():
    assert parse_term("f x y") == App(App(var("f"), var("x")), var("y"))
    assert format_term(parse_term("f (x y)")) == "f (x y)"


def test_sum_is_right_associative():
    assert parse_term("x + y + z") == Sum(var("x"), Sum(var("y"), var("z")))
    assert format_term(parse_term("x + y + z")) == "x + y + z"
    assert format_term(parse_term("(x + y) + z")) == "(x + y) + z"


def test_scaling_binds_looser_than_application():
    assert parse_term("2.f x") == Scale(Fraction(2), App(var("f"), var("x")))
    assert parse_term("1/2.x + y") == Sum(Scale(Fraction(1, 2), var("x")), var("y"))
    assert format_term(parse_term("2.(x + 0)")) == "2.(x + 0)"


def test_lambda_binders():
    expected = Lam(var_name("x"), Lam(var_name("f"), App(App(var("f"), var("x")), var("x"))))
    assert parse_term(r"\x f. f x x") == expected
    assert parse_term("λx. λf. f x x") == expected
    assert format_term(expected) == r"\x. \f. f x x"


def test_minimal_parentheses():
    assert format_term(parse_term(r"(\x. (x)) (y)")) == r"(\x. x) y"
    assert format_term(parse_term(r"f (\x. x) y")) == r"f (\x. x) y"
    assert format_term(parse_term(r"2.(\x. x) + y")) == r"2.(\x. x) + y"


def test_zero_literal():
    assert parse_term("0") is ZERO
    assert parse_term("f 0") == App(var("f"), ZERO)
    assert parse_term("0.x") == Scale(Fraction(0), var("x"))


def test_reserved_names_parse_into_their_namespaces():
    assert parse_term("k").name.namespace is Namespace.CONTINUATION
    assert parse_term(r"\b1. b1").var.namespace is Namespace.INTERMEDIATE
    assert parse_term("k'").name.namespace is Namespace.CONTINUATION


def test_complex_scalars_need_the_gaussian_ring():
    term = parse_term("[1/2+1/2i].x", GAUSSIAN_RATIONALS)
    assert format_term(term) == "[1/2+1/2i].x"
    with pytest.raises(TermSyntaxError):
        parse_term("[1/2+1/2i].x")


@pytest.mark.parametrize(
    "text, position",
    [
        (r"(\x. x", 6),
        ("x $", 2),
        ("2 x", 0),
        (r"\. x", 1),
        ("x +", 3),
    ],
)
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(text)
    assert info.value.position == position
    assert f"column {position + 1}" in info.value.message


def test_printed_generated_terms_parse_back():
    for seed in range(50):
        term = gen_term(GenConfig(seed=seed, max_depth=4), random.Random(seed))
        assert parse_term(format_term(term)) == term
