from fractions import Fraction

import pytest

from algcps.syntax import parse_term as t
from algcps.terms import (
    ZERO,
    Namespace,
    Scale,
    VarName,
    alpha_eq,
    canonicalize_linear,
    free_vars,
    is_base_value,
    is_value,
    linear_key,
    replace_at,
    subterm_at,
    substitute,
    var,
    var_name,
)


def names(*items):
    return {var_name(item) for item in items}


def test_namespaces():
    assert var_name("x").namespace is Namespace.SOURCE
    assert var_name("k").namespace is Namespace.CONTINUATION
    assert var_name("b1").namespace is Namespace.INTERMEDIATE
    assert var_name("b2''").namespace is Namespace.INTERMEDIATE
    assert var_name("kx").namespace is Namespace.SOURCE
    with pytest.raises(ValueError):
        VarName(Namespace.SOURCE, "k")


def test_free_vars():
    assert free_vars(t(r"\x. x")) == frozenset()
    assert free_vars(t("2.y + 3.z")) == names("y", "z")
    assert free_vars(t(r"(\x. f x x) (2.y + 3.z)")) == names("f", "y", "z")


def test_substitute():
    assert substitute(t("f x x"), var_name("x"), var("y")) == t("f y y")
    assert substitute(t(r"\f. f x x"), var_name("x"), t("y + z")) == t(r"\f. f (y + z) (y + z)")


def test_substitute_avoids_capture():
    result = substitute(t(r"\y. x"), var_name("x"), var("y"))
    assert alpha_eq(result, t(r"\z. y"))
    assert result.var == var_name("y'")
    assert free_vars(result) == names("y")


def test_substitute_stops_at_shadowing_binder():
    term = t(r"\x. x")
    assert substitute(term, var_name("x"), var("y")) is term


def test_alpha_eq():
    assert alpha_eq(t(r"\x. x"), t(r"\y. y"))
    assert not alpha_eq(t(r"\x. x y"), t(r"\y. y y"))
    assert alpha_eq(t(r"2.(\x. x) + f"), t(r"2.(\z. z) + f"))
    assert not alpha_eq(t("x + y"), t("y + x"))


def test_values():
    assert is_value(t("2.y + 3.z"))
    assert not is_value(t(r"(\x. x) y"))
    assert is_value(ZERO)
    assert not is_base_value(ZERO)
    assert is_base_value(t(r"\x. (\y. y) x"))


def test_canonicalize_linear():
    assert canonicalize_linear(t("2.x + 3.x")) == t("5.x")
    assert canonicalize_linear(t("1.x")) == t("x")
    assert canonicalize_linear(t("0.x")) == ZERO
    assert canonicalize_linear(t("2.3.x + 0")) == t("6.x")
    assert canonicalize_linear(t("y + x")) == t("x + y")
    assert canonicalize_linear(t("x + -1.x")) == ZERO


def test_canonicalize_merges_alpha_equivalent_atoms():
    result = canonicalize_linear(t(r"(\x. x) + (\y. y)"))
    assert isinstance(result, Scale)
    assert result.scalar == Fraction(2)
    assert alpha_eq(result.body, t(r"\z. z"))


def test_canonicalize_positions():
    # never under a binder, but on the function side of an application
    frozen = t(r"\x. x + x")
    assert canonicalize_linear(frozen) == frozen
    assert canonicalize_linear(t("(x + x) y")) == t("(2.x) y")
    assert canonicalize_linear(t("f (x + x)")) == t("f (x + x)")


def test_canonicalize_is_idempotent():
    term = t(r"2.(f + 3.g) + 1/2.(\x. x) + g + 0")
    once = canonicalize_linear(term)
    assert canonicalize_linear(once) == once
    assert linear_key(term) == linear_key(once)


def test_positions():
    term = t("f (x + y)")
    assert subterm_at(term, (1, 0)) == t("x")
    assert replace_at(term, (1, 1), t("z")) == t("f (x + z)")
    assert replace_at(term, (), t("w")) == t("w")
