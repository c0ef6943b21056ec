"""Shared helpers: an independent sympy rendering of package objects."""
import sys
import sympy as sp
import pytest
from hypothesis import settings

from twistgeom.scalars import LambdaSeries

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

LAM = sp.Symbol("L")


def xs(dim):
    return sp.symbols("x1:%d" % (dim + 1))


def qi_to_sympy(c):
    return sp.Rational(int(c.re.numerator), int(c.re.denominator)) + sp.I * sp.Rational(
        int(c.im.numerator), int(c.im.denominator))


def fn_to_sympy(f, dim=None):
    """Plain sympy expression for a FunctionExpr (polynomial times plane waves)."""
    dim = f.dim if dim is None else dim
    X = xs(dim)
    out = sp.Integer(0)
    for key, c in f.terms.items():
        alpha, k = key[:dim], key[dim:]
        mono = sp.Mul(*[x ** a for x, a in zip(X, alpha)])
        wave = sp.exp(sp.I * sum(kj * x for kj, x in zip(k, X)))
        out += qi_to_sympy(c) * mono * wave
    return out


def series_to_sympy(s: LambdaSeries, dim):
    return sum((LAM ** d * fn_to_sympy(c, dim) for d, c in s.items()), sp.Integer(0))


def truncate(expr, order):
    expr = sp.expand(expr)
    return sum((expr.coeff(LAM, d) * LAM ** d for d in range(order + 1)), sp.Integer(0))


def same(a, b):
    return sp.expand(a - b) == 0


@pytest.fixture
def sym():
    return sp


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines after the run, even when output is captured."""
    lines = getattr(sys.modules.get("test_acceptance"), "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
