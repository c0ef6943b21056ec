from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from twistgeom.residual import Residual, series_residual
from twistgeom.scalars import I, QI, LambdaSeries, as_rational, bilinear, exp_series, rational_str

rats = st.fractions(min_value=-50, max_value=50, max_denominator=12)
qis = st.builds(lambda a, b: QI(a, b), rats, rats)


def as_complex_fraction(z):
    return (Fraction(int(z.re.numerator), int(z.re.denominator)),
            Fraction(int(z.im.numerator), int(z.im.denominator)))


@given(qis, qis, qis)
def test_gaussian_rationals_form_a_ring(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == QI(0)


@given(qis, qis)
def test_product_matches_pairwise_formula(a, b):
    (ar, ai), (br, bi) = as_complex_fraction(a), as_complex_fraction(b)
    assert as_complex_fraction(a * b) == (ar * br - ai * bi, ar * bi + ai * br)


@given(qis)
def test_division_inverts_multiplication(a):
    if a:
        assert (QI(3, -2) * a) / a == QI(3, -2)


def test_i_squared():
    assert I * I == QI(-1)
    assert I.conj() == QI(0, -1)


def test_rational_parsing_and_rendering():
    assert as_rational("3/6") == mpq(1, 2)
    assert rational_str(mpq(-4, 6)) == "-2/3"
    assert rational_str(mpq(5)) == "5"
    assert QI.parse("-1/2i") == QI(0, mpq(-1, 2))


def test_float_coefficients_are_rejected():
    with pytest.raises((TypeError, ValueError)):
        QI.coerce(0.5j)


def test_series_product_truncates():
    a = LambdaSeries({0: QI(1), 1: QI(1)}, 2)
    sq = bilinear(a, a, lambda x, y: x * y, 2)
    assert [(d, c) for d, c in sq.items()] == [(0, QI(1)), (1, QI(2)), (2, QI(1))]
    cube = bilinear(sq, a, lambda x, y: x * y, 2)
    assert cube[2] == QI(3) and cube[3] is None


def test_exp_series_coefficients():
    e = exp_series(QI(1), QI(1), 4)
    assert [c for _, c in e.items()] == [QI(1), QI(1), QI(mpq(1, 2)), QI(mpq(1, 6)), QI(mpq(1, 24))]


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        LambdaSeries({}, -1)


def test_residual_merge_and_json():
    r = Residual({0: 0, 1: 2}).merge(Residual({1: 1, 2: 0}))
    assert not r.ok
    assert r.to_json() == {"0": 0, "1": 3, "2": 0}
    assert series_residual(LambdaSeries({}, 2)).to_json() == {"0": 0, "1": 0, "2": 0}
