import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from twistgeom import checks as C
from twistgeom.corpus import default_lattice, mode_pairs, rng
from twistgeom.modes import (ANN, CRE, ClassicalModePoly, LatticeError, ModeLattice, QuantumElement,
                             correspondence_check, field_bracket_check, hbar_order, mode_poisson,
                             mode_poisson_star, mode_star, normal_order, quantize, quantum_star,
                             star_commutator)
from twistgeom.scalars import QI

LAT = default_lattice()
K, KP = (1, 0), (0, 1)
A = lambda k: ClassicalModePoly.a(LAT, k)
AS = lambda k: ClassicalModePoly.astar(LAT, k)
Q = lambda kind, k: normal_order(LAT, [(kind, k)])


def theta_exponent(p, q, factor):
    """``factor * theta(p, q)`` as coefficients of theta12 (d = 2)."""
    return (mpq(factor) * (p[0] * q[1] - p[1] * q[0]),)


@pytest.mark.parametrize("k", LAT.momenta)
@pytest.mark.parametrize("kp", LAT.momenta)
def test_four_phase_relations(k, kp):
    # a a -> e^{-i theta/2}, a* a -> e^{+i theta/2}, a a* -> e^{+i theta/2}, a* a* -> e^{-i theta/2}
    for F, G, s in ((A(k), A(kp), -1), (AS(k), A(kp), 1), (A(k), AS(kp), 1), (AS(k), AS(kp), -1)):
        expect = (F * G).scale(1, phase=theta_exponent(k, kp, mpq(s, 2)))
        assert mode_star(F, G) == expect


def test_phase_rendering():
    assert mode_star(A(K), A(KP)).render() == "a(0,1)*a(1,0)*exp(i*(-1/2*theta12))"


@pytest.mark.parametrize("k", LAT.momenta)
@pytest.mark.parametrize("kp", LAT.momenta)
def test_basic_brackets(k, kp):
    expect = ClassicalModePoly.constant(LAT, QI(0, -1), hbar=-1) if k == kp else ClassicalModePoly.zero(LAT)
    assert mode_poisson_star(A(k), AS(kp)) == expect
    assert not mode_poisson_star(A(k), A(kp))
    assert not mode_poisson_star(AS(k), AS(kp))
    one = normal_order(LAT, [], 1 if k == kp else 0)
    assert star_commutator(Q(ANN, k), Q(CRE, kp)) == one
    assert not star_commutator(Q(ANN, k), Q(ANN, kp))


@pytest.mark.parametrize("k", LAT.momenta)
@pytest.mark.parametrize("kp", LAT.momenta)
def test_braided_commutator_forms(k, kp):
    a, ad = Q(ANN, k), Q(CRE, kp)
    one = normal_order(LAT, [], 1 if k == kp else 0)
    lhs = quantum_star(a, ad) - quantum_star(ad, a).scale(1, phase=LAT.phase(kp, k, -1))
    assert lhs == one
    plain = a * ad - ad * a
    assert lhs == plain.scale(1, phase=LAT.phase(k, kp, mpq(1, 2)))
    assert plain == one


def test_normal_ordering_examples():
    assert normal_order(LAT, [(ANN, K), (CRE, K)]) == normal_order(LAT, [(CRE, K), (ANN, K)]) + normal_order(LAT, [])
    assert (normal_order(LAT, [(ANN, K), (ANN, K), (CRE, K)])
            == normal_order(LAT, [(CRE, K), (ANN, K), (ANN, K)]) + normal_order(LAT, [(ANN, K)], 2))
    assert normal_order(LAT, [(ANN, K), (CRE, KP)]) == normal_order(LAT, [(CRE, KP), (ANN, K)])


# -- independent check of normal ordering: a -> d/dz, a+ -> z (Bargmann picture) -----------

Z = {k: sp.Symbol("z_%d_%d" % k) for k in LAT.momenta}


def act_word(word, poly):
    for kind, k in reversed(word):
        poly = sp.diff(poly, Z[k]) if kind == ANN else Z[k] * poly
    return sp.expand(poly)


def act_element(el: QuantumElement, poly):
    out = 0
    for (w, h, ph, wave), c in el.terms.items():
        assert h == 0 and not any(ph) and not wave
        out += sp.Rational(int(c.re.numerator), int(c.re.denominator)) * act_word(w, poly)
    return sp.expand(out)


letters = st.lists(st.tuples(st.sampled_from([ANN, CRE]), st.sampled_from(LAT.momenta[:3])), max_size=5)


@settings(max_examples=40)
@given(letters)
def test_normal_order_agrees_with_differential_representation(word):
    test_poly = sp.expand(sum(Z.values()) ** 3 + Z[K] ** 4)
    assert act_element(normal_order(LAT, word), test_poly) == act_word(word, test_poly)


# -- algebraic laws ------------------------------------------------------------------------

def _monos(seed, n, deg):
    from twistgeom.corpus import random_mode_monomial
    r = rng(seed)
    return [random_mode_monomial(r, LAT, deg, LAT.momenta[:3]) for _ in range(n)]


def test_deformed_bracket_differs_only_for_unbalanced_momenta():
    # the bracket picks up the same phase as the star product of the two arguments
    F = A(K) * A(KP)
    G = AS(K)
    expect = mode_poisson(F, G).scale(1, phase=theta_exponent((1, 1), (-1, 0), mpq(-1, 2)))
    assert mode_poisson_star(F, G) == expect != mode_poisson(F, G)
    # total momenta p and -p carry no phase, so the deformation is invisible
    H = AS(K) * AS(KP)
    assert mode_poisson_star(F, H) == mode_poisson(F, H)


def test_star_is_associative_and_braided():
    F, G, H = _monos(1, 3, 2)
    assert C.mode_associativity(F, G, H).ok
    assert C.mode_r_commutativity(F, G).ok
    assert mode_star(A(K), A(KP)) != mode_star(A(KP), A(K))


@pytest.mark.parametrize("kind", ["poisson", "commutator"])
def test_bracket_laws(kind):
    F, G, H = _monos(2, 3, 2)
    if kind == "commutator":
        F, G, H = quantize(F), quantize(G), quantize(H)
    assert C.mode_bracket_antisymmetry(F, G, kind).ok
    assert C.mode_bracket_leibniz(F, G, H, kind).ok
    assert C.mode_bracket_jacobi(F, G, H, kind).ok


# -- correspondence ---------------------------------------------------------------------------

def test_correspondence_on_quartic_corpus():
    for F, G in mode_pairs(rng(3), LAT, 30):
        rep = correspondence_check(F, G)
        assert rep["leading_residual_terms"] == 0


def test_correspondence_is_exact_for_single_modes():
    rep = correspondence_check(A(K), AS(K))
    assert rep["exact_zero"] and rep["leading_order"] == -2


def test_correspondence_has_subleading_corrections():
    # multiple contractions in the commutator produce terms beyond the leading order
    F = A(K) * A(KP) * AS(K)
    G = AS(KP) * A((1, 1)) * AS(K)
    rep = correspondence_check(F, G)
    assert rep["leading_residual_terms"] == 0
    assert rep["higher_residual_terms"] > 0


def test_hbar_order_counts_mode_factors():
    assert hbar_order(((("a", K), ("a*", K)), -1, (), ())) == -4


# -- lattice fields -----------------------------------------------------------------------------

def test_field_brackets_are_undeformed():
    assert field_bracket_check(ModeLattice(2, [(1, 0), (-1, 0)]))["ok"]
    lat4 = ModeLattice(2, [(1, 2), (-1, -2), (2, -1), (-2, 1)],
                       E={(1, 2): "3/7", (-1, -2): "3/7", (2, -1): "5/2", (-2, 1): "5/2"})
    rep = field_bracket_check(lat4)
    assert rep["ok"] and rep["phi-pi"]["plain_minus_expected_terms"] == 0


def test_lattice_errors():
    with pytest.raises(LatticeError):
        field_bracket_check(ModeLattice(2, [(1, 0)]))
    with pytest.raises(LatticeError):
        field_bracket_check(ModeLattice(2, [(1, 0), (-1, 0)], E={(1, 0): 2, (-1, 0): 3}))
    with pytest.raises(LatticeError):
        ModeLattice(2, [(1, 0, 0)])
    with pytest.raises(LatticeError):
        ModeLattice(2, [(1, 0)], theta=[[0, 1], [1, 0]])
    with pytest.raises(LatticeError):
        normal_order(LAT, [(ANN, (5, 5))])
    with pytest.raises(LatticeError):
        mode_star(A(K), ClassicalModePoly.a(ModeLattice(2, [(1, 0)]), (1, 0)))


def test_numeric_theta_zero_is_classical():
    lat0 = default_lattice(theta=[[0, 0], [0, 0]])
    for F, G in mode_pairs(rng(4), lat0, 10, 2):
        assert mode_star(F, G) == F * G
        assert mode_poisson_star(F, G) == mode_poisson(F, G)
        Fq, Gq = quantize(F), quantize(G)
        assert star_commutator(Fq, Gq) == Fq * Gq - Gq * Fq


def test_numeric_theta_phase():
    lat = default_lattice(theta=[[0, "1/3"], ["-1/3", 0]])
    a = ClassicalModePoly.a
    assert mode_star(a(lat, K), a(lat, KP)).render() == "a(0,1)*a(1,0)*exp(i*(-1/6))"


def test_from_json():
    lat = ModeLattice.from_json({"d": 2, "momenta": [[1, 0], [-1, 0]], "theta": "sym", "E": {"1,0": "2"}})
    assert lat.E[(1, 0)] == 2 and lat.E[(-1, 0)] == 2
    assert lat.is_negation_closed()
