import pytest
import sympy as sp
from hypothesis import given

from conftest import fn_to_sympy, same, xs
from strategies import polys
from twistgeom.functions import DimensionError, FunctionExpr, fn_mul, partial
from twistgeom.parse import ParseError, parse_function, parse_vector
from twistgeom.scalars import I, QI


@given(polys(waves=True), polys(waves=True))
def test_product_agrees_with_sympy(f, g):
    assert same(fn_to_sympy(fn_mul(f, g)), fn_to_sympy(f) * fn_to_sympy(g))


@given(polys(waves=True))
def test_partials_agree_with_sympy(f):
    X = xs(2)
    for mu in range(2):
        assert same(fn_to_sympy(partial(mu, f)), sp.diff(fn_to_sympy(f), X[mu]))


@given(polys(), polys(), polys())
def test_leibniz_rule(f, g, h):
    fg = f * g
    assert partial(0, fg) == partial(0, f) * g + f * partial(0, g)
    assert (f + g) * h == f * h + g * h


def test_parse_literals():
    f = parse_function("x1*x2 + (1/2)*x2^2 - 3*i*e(1,-2)", 2)
    X = xs(2)
    expect = X[0] * X[1] + sp.Rational(1, 2) * X[1] ** 2 - 3 * sp.I * sp.exp(sp.I * (X[0] - 2 * X[1]))
    assert same(fn_to_sympy(f), expect)


def test_parse_aliases_and_names():
    assert parse_function("x*y", 2) == parse_function("x1*x2", 2)
    assert parse_function("q*p", 2, names=("q", "p")) == parse_function("x1*x2", 2)


def test_plane_wave_derivative_brings_down_ik():
    w = FunctionExpr.plane_wave((2, -1))
    assert partial(0, w) == w * QI(0, 2)
    assert partial(1, w) == w * (-I)


@pytest.mark.parametrize("text", ["x1+", "x3", "x1^x2", "x1/x2", "x1^-1", "1.5*x1", "sin(x1)", "e(1)", ""])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_function(text, 2)


def test_parse_vector_length():
    with pytest.raises(ParseError):
        parse_vector(["x1"], 2)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        parse_function("x1", 2) + parse_function("x1", 3)


def test_rendering_is_canonical():
    f = parse_function("x2^2 - x1 + 2", 2)
    assert f.render() == "2 - x1 + x2^2"
    assert parse_function("0", 2).render() == "0"
