from fractions import Fraction

import pytest
from conftest import gaussian
from hypothesis import given

from bilattice.errors import ContextError, NeedsTwoExtensions, ParseError
from bilattice.scalar import (I, ONE, ZERO, ExactScalar, Extension, as_scalar, format_scalar,
                              parse_scalar, root_of, sqrt_exact, sqrt_in)


def test_sqrt_exact_examples():
    assert sqrt_exact("9/4") == as_scalar("3/2")
    assert sqrt_exact(-1) == I
    assert sqrt_exact(2) is None
    ext = Extension(2)
    assert ext.root * ext.root == 2
    assert format_scalar(ext.root) == "sqrt(2)"


def test_sqrt_exact_gaussian_and_principal_branch():
    assert sqrt_exact("2i") == as_scalar("1+i")
    assert sqrt_exact("-4") == as_scalar("2i")
    assert sqrt_exact("3+4i") == as_scalar("2+i")
    assert sqrt_exact(0) == ZERO


def test_sqrt_in_extension():
    ext = Extension(2)
    r = sqrt_in(8, ext)
    assert r == ext.root * 2
    assert sqrt_in(3, ext) is None
    assert sqrt_in(4, ext) == ext.lift(2)


def test_root_of_opens_and_refuses_second_extension():
    r = root_of(3)
    assert r * r == 3
    with pytest.raises(NeedsTwoExtensions) as info:
        root_of(5, r.ext)
    assert len(info.value.discriminants) == 2


def test_mixing_extensions_is_an_error():
    with pytest.raises(ContextError):
        Extension(2).root + Extension(3).root


def test_surd_without_extension_is_an_error():
    with pytest.raises(ContextError):
        ExactScalar(0, 0, 1, 0)


def test_extension_rejects_squares():
    with pytest.raises(ValueError):
        Extension(4)


def test_inverse_in_extension():
    ext = Extension(-7)
    x = ext.lift(3) + ext.root * Fraction(1, 2)
    assert x * x.inverse() == ONE


@pytest.mark.parametrize("text, expected", [
    ("3/4-2/5i", ExactScalar(Fraction(3, 4), Fraction(-2, 5))),
    ("-i", ExactScalar(0, -1)),
    ("1/2i", ExactScalar(0, Fraction(1, 2))),
    ("7", ExactScalar(7)),
])
def test_parse_examples(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("text", ["1/", "3+*2", "z", "abc", "1/0"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_scalar(text)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_scalar("1+*2")
    assert info.value.position is not None


@given(gaussian(), gaussian(), gaussian())
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    if not x.is_zero():
        assert x * x.inverse() == ONE


@given(gaussian())
def test_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(gaussian())
def test_sqrt_exact_squares_back(x):
    r = sqrt_exact(x * x)
    assert r is not None and r * r == x * x


@given(gaussian(), gaussian())
def test_extension_arithmetic(x, y):
    ext = Extension(-3)
    v = ext.lift(x) + ext.root * y
    assert ext.root * ext.root == -3
    w = v * v.conjugate_surd()
    assert not w.has_surd
    assert parse_scalar(format_scalar(v), ext) == v
