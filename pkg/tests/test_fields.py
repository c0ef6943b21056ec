import pytest
import sympy as sp
from hypothesis import given

from conftest import fn_to_sympy, same, xs
from strategies import polys, vector_fields
from twistgeom.fields import (Form, OneForm, VectorField, as_form, contract, lie, lie_bracket, pairing)
from twistgeom.functions import DimensionError
from twistgeom.parse import parse_function, parse_vector

X = xs(2)


def vf_apply_sympy(v, expr):
    return sum(fn_to_sympy(c) * sp.diff(expr, x) for c, x in zip(v.components(), X))


@given(vector_fields(), vector_fields(), polys())
def test_bracket_is_commutator_of_derivations(u, v, h):
    lhs = fn_to_sympy(lie_bracket(u, v)(h))
    H = fn_to_sympy(h)
    assert same(lhs, vf_apply_sympy(u, vf_apply_sympy(v, H)) - vf_apply_sympy(v, vf_apply_sympy(u, H)))


@given(vector_fields(), vector_fields(), vector_fields())
def test_bracket_jacobi(u, v, w):
    s = (lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u))
         + lie_bracket(w, lie_bracket(u, v)))
    assert not s


@given(polys(), polys())
def test_d_squared_and_graded_leibniz(f, g):
    df = as_form(f).d()
    assert not df.d()
    assert as_form(f * g).d() == df.scale_fn(g) + as_form(g).d().scale_fn(f)
    assert not df.wedge(df)


@given(vector_fields(), polys())
def test_lie_commutes_with_d(v, f):
    w = as_form(f).d()
    assert lie(v, w).d() == lie(v, w.d())
    assert lie(v, w) == as_form(lie(v, f)).d()


@given(vector_fields(), vector_fields(), polys())
def test_lie_derivative_represents_bracket_on_one_forms(u, v, f):
    w = OneForm([f, f * f])
    lhs = lie(u, lie(v, w)) - lie(v, lie(u, w))
    assert lhs == lie(lie_bracket(u, v), w)


def test_pairing_and_onion_contraction():
    v = parse_vector(["x2", "1"], 2)
    w = OneForm([parse_function("x1", 2), parse_function("3", 2)])
    assert pairing(v, w) == parse_function("x1*x2 + 3", 2)
    t = v.tensor(v)
    r = w.tensor(w)
    assert contract(t, r) == pairing(v, w) * pairing(v, w)


def test_wedge_of_coordinate_differentials():
    dx1, dx2 = (Form.basis((j,), 2) for j in range(2))
    assert dx1.wedge(dx2) == -dx2.wedge(dx1)
    assert dx1.wedge(dx2).component(0, 1) == parse_function("1", 2)


def test_type_and_dimension_errors():
    v = parse_vector(["x1", "x2"], 2)
    with pytest.raises(DimensionError):
        lie_bracket(v, VectorField([parse_function("1", 3)] * 3))
    with pytest.raises(TypeError):
        pairing(v, v)
