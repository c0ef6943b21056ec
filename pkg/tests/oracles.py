"""Closed-form star products computed with sympy, independent of the twist machinery.

Each routine acts with the inverse twist on ``f(x) g(y)`` written in two sets
of variables, then sets ``y = x`` and truncates at ``lambda^order``.
"""
import sympy as sp

from conftest import LAM, truncate


def _two_copies(dim):
    x = sp.symbols("x1:%d" % (dim + 1))
    y = sp.symbols("y1:%d" % (dim + 1))
    return x, y


def _diagonal(expr, x, y, order):
    return truncate(expr.subs(dict(zip(y, x)), simultaneous=True), order)


def moyal_star(f, g, theta, order):
    """``exp((i/2) lambda theta^{mn} d_m (x) d_n)`` applied to ``f (x) g``."""
    dim = len(theta)
    x, y = _two_copies(dim)
    fg = f * g.subs(dict(zip(x, y)), simultaneous=True)
    term, total = fg, fg
    for n in range(1, order + 1):
        nxt = 0
        for m in range(dim):
            for k in range(dim):
                if theta[m][k]:
                    nxt += sp.Rational(theta[m][k]) * sp.diff(term, x[m], y[k])
        term = sp.expand(nxt * sp.I * LAM / 2 / n)
        total += term
    return _diagonal(total, x, y, order)


def _jordanian_inverse(expr, x, y, order):
    """``x1^a (x) g  ->  x1^a (x) (1 + lambda d_y1)^a g`` (H = -2 x1 d_x1 acts diagonally)."""
    poly = sp.Poly(sp.expand(expr), x[0])
    out = 0
    for (a,), coeff in poly.terms():
        acc = sum(sp.binomial(a, k) * LAM ** k * sp.diff(coeff, y[0], k) for k in range(min(a, order) + 1))
        out += x[0] ** a * acc
    return sp.expand(out)


def jordanian_star(f, g, dim, order):
    x, y = _two_copies(dim)
    fg = sp.expand(f * g.subs(dict(zip(x, y)), simultaneous=True))
    return _diagonal(_jordanian_inverse(fg, x, y, order), x, y, order)


def ext_jordanian_star(f, g, dim, order):
    """Jordanian factor first, then ``exp(-lambda d_x2 (x) y2 d_y1 (1 + lambda d_y1)^-1)``."""
    x, y = _two_copies(dim)
    fg = sp.expand(f * g.subs(dict(zip(x, y)), simultaneous=True))
    base = _jordanian_inverse(fg, x, y, order)

    def D(e):
        s = sum((-LAM) ** k * sp.diff(e, y[0], k + 1) for k in range(order + 1))
        return truncate(y[1] * s, order)

    total, term = base, base
    for n in range(1, order + 1):
        term = truncate(-LAM * D(sp.diff(term, x[1])) / n, order)
        total += term
    return _diagonal(total, x, y, order)
