from fractions import Fraction

import pytest

from algcps.errors import ScalarSyntaxError
from algcps.scalars import (
    GAUSSIAN_RATIONALS,
    RATIONALS,
    GaussianRational,
    add,
    eq,
    format_scalar,
    get_ring,
    is_complex,
    mul,
)


def q(text):
    return RATIONALS.parse(text)


def test_rational_arithmetic():
    assert add(q("1/2"), q("1/2")) == 1
    assert add(q("2/3"), q("1/6")) == q("5/6")
    assert mul(q("2/3"), q("3/4")) == q("1/2")
    assert mul(q("7/5"), RATIONALS.zero) == 0
    assert mul(q("7/5"), RATIONALS.one) == q("7/5")


def test_rational_equality_is_canonical():
    assert eq(q("1/2"), q("2/4"))
    assert not eq(RATIONALS.zero, RATIONALS.one)
    assert eq(add(q("1/3"), q("1/3")), q("2/3"))
    assert format_scalar(q("-6/4")) == "-3/2"


@pytest.mark.parametrize("text", ["", "1/0", "x", "1.5", "2/3/4"])
def test_rational_parse_rejects(text):
    with pytest.raises(ScalarSyntaxError):
        RATIONALS.parse(text)


def test_gaussian_parse_and_format():
    half = GAUSSIAN_RATIONALS.parse("1/2+1/2i")
    assert half == GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert format_scalar(half) == "1/2+1/2i"
    assert GAUSSIAN_RATIONALS.parse("-i") == GaussianRational(0, -1)
    assert format_scalar(GAUSSIAN_RATIONALS.parse("2-3i")) == "2-3i"
    assert format_scalar(GAUSSIAN_RATIONALS.parse("[3i]")) == "3i"


def test_gaussian_ring_laws():
    i = GAUSSIAN_RATIONALS.parse("i")
    assert mul(i, i) == -1
    assert add(i, -i) == 0
    assert mul(GAUSSIAN_RATIONALS.parse("1+i"), GAUSSIAN_RATIONALS.parse("1-i")) == 2


def test_real_gaussian_behaves_like_rational():
    two = GaussianRational(Fraction(2))
    assert two == Fraction(2)
    assert hash(two) == hash(Fraction(2))
    assert not is_complex(two)
    assert is_complex(GaussianRational(0, 1))


def test_rational_ring_rejects_complex():
    with pytest.raises(ScalarSyntaxError):
        RATIONALS.coerce(GaussianRational(0, 1))
    assert RATIONALS.coerce(GaussianRational(3)) == 3


def test_get_ring():
    assert get_ring("rational") is RATIONALS
    assert get_ring("gaussian") is GAUSSIAN_RATIONALS
    with pytest.raises(ScalarSyntaxError):
        get_ring("reals")
