import pytest
import sympy as sp
from hypothesis import given, settings

from conftest import fn_to_sympy, same, xs
from strategies import polys
from twistgeom import checks as C
from twistgeom.fields import VectorField
from twistgeom.functions import DimensionError, FunctionExpr
from twistgeom.poisson import (IncompatibleTwistError, PhaseSpaceContext, compat_check, constants_check,
                               explicit_star_poisson, ham_vf, ham_vf_pairing, lie_route_residual,
                               morphism_residual, poisson, star_poisson, time_evolution)

PS = PhaseSpaceContext(2, [[0, "3/2"], ["-3/2", 0]], order=4)
LAM = PS.bivector
P = PS.parse
phase_polys = polys(dim=4, max_deg=3, max_terms=3)


def sympy_star_poisson(f, g, theta):
    """Twisted bracket from two copies of phase space ``(x1, x2, p1, p2) = (x1..x4)``."""
    x = xs(4)
    y = sp.symbols("y1:5")
    G = fn_to_sympy(g).subs(dict(zip(x, y)), simultaneous=True)
    term = total = sp.expand(fn_to_sympy(f) * G)
    for n in range(1, 8):
        term = sp.expand(sum(theta[a][b] * sp.diff(term, x[a], y[b])
                             for a in range(2) for b in range(2) if theta[a][b]) * sp.I / 2 / n)
        if term == 0:
            break
        total += term
    br = sum(sp.diff(total, x[l], y[2 + l]) - sp.diff(total, x[2 + l], y[l]) for l in range(2))
    return sp.expand(br.subs(dict(zip(y, x)), simultaneous=True))


def test_canonical_brackets_and_hamiltonian_fields():
    assert poisson(P("x1"), P("p1"), LAM) == P("1")
    assert poisson(P("p2"), P("x2"), LAM) == P("-1")
    # X_f(g) = {f, g}
    assert ham_vf(P("p1"), LAM) == VectorField([P("-1"), P("0"), P("0"), P("0")])
    assert ham_vf(P("x1"), LAM) == VectorField([P("0"), P("0"), P("1"), P("0")])


@given(phase_polys, phase_polys)
def test_hamiltonian_field_routes_agree(f, g):
    assert ham_vf(f, LAM) == ham_vf_pairing(f, LAM)
    assert ham_vf(f, LAM)(g) == poisson(f, g, LAM)


@settings(max_examples=15)
@given(phase_polys, phase_polys)
def test_twisted_bracket_matches_two_copy_oracle(f, g):
    expect = sympy_star_poisson(f, g, [[0, sp.Rational(3, 2)], [sp.Rational(-3, 2), 0]])
    assert same(fn_to_sympy(star_poisson(f, g, PS)), expect)


@settings(max_examples=10)
@given(phase_polys, phase_polys, phase_polys)
def test_bracket_laws(f, g, h):
    assert C.poisson_antisymmetry(f, g, PS).ok
    assert C.poisson_jacobi(f, g, h, PS).ok
    assert C.poisson_leibniz(f, g, h, PS).ok


@settings(max_examples=10)
@given(phase_polys, phase_polys)
def test_bracket_routes_and_morphism(f, g):
    assert star_poisson(f, g, PS) == explicit_star_poisson(f, g, PS)
    assert lie_route_residual(f, g, PS, 3).ok
    assert morphism_residual(f, g, PS, 3).ok


def test_deformation_is_visible():
    f, g = P("x1^2"), P("x2*p1")
    assert poisson(f, g, LAM) == P("2*x1*x2")
    assert star_poisson(f, g, PS) == P("2*x1*x2 + 3/2*i")


def test_momentum_flow_and_constants():
    H = P("p1^2 + p2^2")
    assert time_evolution(H, P("x1"), PS) == P("2*p1")
    rep = constants_check(H, [P("p1"), P("p2"), P("x1*p2 - x2*p1")], PS)
    assert rep["ok"]
    assert {tuple(r["pair"]): r["bracket"] for r in rep["closure"]}[(0, 2)] == "-p2"


def test_compatibility():
    gens = [VectorField.basis(l, 4) for l in range(2)]
    assert compat_check(gens, LAM)
    # x1 d_x1 rescales x1 but not p1
    assert not compat_check([VectorField([P("x1"), P("0"), P("0"), P("0")])], LAM)
    # x1 d_p1 is the Hamiltonian field of -x1^2/2, hence compatible
    assert compat_check([VectorField([P("0"), P("0"), P("x1"), P("0")])], LAM)
    with pytest.raises(IncompatibleTwistError):
        PhaseSpaceContext(2, [[0, 1], [-1, 0]], generators=[VectorField([P("x1"), P("0"), P("0"), P("0")]),
                                                            VectorField.basis(1, 4)])


def test_zero_theta_is_classical():
    ps0 = PhaseSpaceContext(2)
    f, g = P("x1^2*p2 + x2"), P("x1*x2*p1")
    assert star_poisson(f, g, ps0) == poisson(f, g, LAM)


def test_dimension_checks():
    with pytest.raises(DimensionError):
        poisson(FunctionExpr.coordinate(0, 2), P("x1"), LAM)


def test_from_json():
    ps = PhaseSpaceContext.from_json({"n": 1, "theta": [[0]], "order": 2})
    assert ps.dim == 2 and ps.names == ("x1", "p1")
