"""Twisted bilinear maps: star products, module actions, tensor and wedge
products, pairings, Lie derivatives and brackets.

Every deformed map has the same shape: apply the inverse twist
``F^-1 = fbar^a (x) fbar_a`` to the two arguments (twist factors act by Lie
derivative, i.e. by the adjoint action on vector fields) and compose with
the classical map.  ``rswap`` provides the braided flip through
``R^-1 = Rbar^a (x) Rbar_a``.
"""
from __future__ import annotations

from typing import Any, Callable, Dict

from .fields import Form, Tensor, as_form, contract, lie, lie_bracket, pairing
from .functions import DimensionError, FunctionExpr, fn_mul
from .hopf import UElem, act
from .residual import Residual
from .scalars import LambdaSeries
from .twist import TwistExpansion, TwistSpec, expand_twist, uenv_star

__all__ = [
    "StarContext",
    "twisted",
    "rswap",
    "series",
    "star_fn",
    "star_module",
    "tensor_star",
    "wedge_star",
    "exterior_d",
    "pairing_star",
    "pairing_star_tensor",
    "star_lie_derivative",
    "star_lie_bracket",
    "star_symmetrize",
    "star_antisymmetrize",
    "series_apply",
    "act_series",
    "star_mul",
    "star_right",
    "uenv_from_fields",
    "bracket_as_operator_residual",
]


class StarContext:
    """A twist expanded to a working order on ``R^dim``; all star maps take one."""

    def __init__(self, twist, order: int | None = None):
        if isinstance(twist, TwistSpec):
            if order is None:
                raise ValueError("an order is needed to expand a twist specification")
            twist = expand_twist(twist, order)
        self.twist: TwistExpansion = twist
        self.dim = twist.dim
        self.order = twist.order if order is None else min(order, twist.order)
        self.finv = [t for t in twist.flat("Finv") if t[0] <= self.order]
        self.rinv = [t for t in twist.flat("Rinv") if t[0] <= self.order]

    @classmethod
    def build(cls, spec: TwistSpec, order: int) -> "StarContext":
        return cls(expand_twist(spec, order))

    def zero_series(self) -> LambdaSeries:
        return LambdaSeries({}, self.order)

    def check_dim(self, *objs):
        for o in objs:
            d = _dim_of(o)
            if d is not None and d != self.dim:
                raise DimensionError("object on R^%d used with a twist on R^%d" % (d, self.dim))


def _dim_of(o):
    if isinstance(o, LambdaSeries):
        for c in o.coeffs.values():
            return _dim_of(c)
        return None
    return getattr(o, "dim", None)


def series(obj, ctx: StarContext) -> LambdaSeries:
    return LambdaSeries.promote(obj, ctx.order)


def _accumulate(out: Dict[int, Any], d: int, val, order: int):
    if isinstance(val, LambdaSeries):
        for dv, cv in val.coeffs.items():
            _accumulate(out, d + dv, cv, order)
        return
    if d > order or val is None:
        return
    if isinstance(val, (FunctionExpr, Tensor, Form, UElem)) and not val:
        return
    prev = out.get(d)
    out[d] = val if prev is None else prev + val


def twisted(a, b, op: Callable, ctx: StarContext, terms=None) -> LambdaSeries:
    """``sum lambda^d c op(w1(a), w2(b))`` over twist terms ``(d, c, (w1, w2))``.

    ``a`` and ``b`` may be plain objects or lambda series; ``op`` may return a
    plain object or a lambda series.
    """
    terms = ctx.finv if terms is None else terms
    order = ctx.order
    A = series(a, ctx)
    B = series(b, ctx)
    out: Dict[int, Any] = {}
    for da, ca in A.coeffs.items():
        for db, cb in B.coeffs.items():
            base = da + db
            if base > order:
                continue
            for d, c, (w1, w2) in terms:
                if base + d > order:
                    continue
                x = act(w1, ca)
                if not x:
                    continue
                y = act(w2, cb)
                if not y:
                    continue
                val = op(x, y)
                if isinstance(val, LambdaSeries):
                    val = val.scale(c)
                elif val is not None:
                    val = val * c
                _accumulate(out, base + d, val, order)
    return LambdaSeries(out, order)


def rswap(a, b, op: Callable, ctx: StarContext) -> LambdaSeries:
    """``op(Rbar^a(b), Rbar_a(a))``: the braided flip of ``(a, b)`` fed to ``op``."""
    return twisted(b, a, op, ctx, ctx.rinv)


def act_series(word, s: LambdaSeries) -> LambdaSeries:
    return s.map(lambda c: act(word, c))


def series_apply(fn: Callable, s, ctx: StarContext) -> LambdaSeries:
    """Apply a linear map coefficient-wise."""
    s = series(s, ctx)
    out: Dict[int, Any] = {}
    for d, c in s.coeffs.items():
        _accumulate(out, d, fn(c), ctx.order)
    return LambdaSeries(out, ctx.order)


# -- products --------------------------------------------------------------

def star_fn(f, g, ctx: StarContext) -> LambdaSeries:
    """``f * g = fbar^a(f) fbar_a(g)``."""
    ctx.check_dim(f, g)
    return twisted(f, g, fn_mul, ctx)


def _scale_left(h, X):
    if isinstance(X, FunctionExpr):
        return fn_mul(h, X)
    return X.scale_fn(h)


def _scale_right(X, h):
    if isinstance(X, FunctionExpr):
        return fn_mul(X, h)
    return X.scale_fn(h)


def star_module(h, X, ctx: StarContext, side: str = "left") -> LambdaSeries:
    """``h * X`` (side ``left``) or ``X * h`` (side ``right``) for a field ``X``."""
    ctx.check_dim(h, X)
    if side == "left":
        return twisted(h, X, _scale_left, ctx)
    if side == "right":
        return twisted(X, h, _scale_right, ctx)
    raise ValueError("side must be 'left' or 'right'")


def star_right(X, h, ctx: StarContext) -> LambdaSeries:
    """``X * h`` with the function on the right."""
    return star_module(h, X, ctx, side="right")


def star_mul(a, b, ctx: StarContext) -> LambdaSeries:
    """Star product of a function with anything, or anything with a function."""
    a0 = _first(a)
    b0 = _first(b)
    if isinstance(a0, FunctionExpr) and isinstance(b0, FunctionExpr):
        return star_fn(a, b, ctx)
    if isinstance(a0, FunctionExpr):
        return star_module(a, b, ctx, "left")
    if isinstance(b0, FunctionExpr):
        return star_module(a, b, ctx, "right")
    raise TypeError("star_mul needs a function on at least one side")


def _first(x):
    if isinstance(x, LambdaSeries):
        for _, c in x.items():
            return c
        return None
    return x


def _tensor(x, y):
    if isinstance(x, FunctionExpr):
        return _scale_left(x, y)
    if isinstance(y, FunctionExpr):
        return _scale_right(x, y)
    return x.tensor(y)


def tensor_star(t1, t2, ctx: StarContext) -> LambdaSeries:
    """``t1 (x)* t2 = fbar^a(t1) (x) fbar_a(t2)``."""
    ctx.check_dim(t1, t2)
    return twisted(t1, t2, _tensor, ctx)


def _wedge(x, y):
    return as_form(x).wedge(as_form(y))


def wedge_star(w1, w2, ctx: StarContext) -> LambdaSeries:
    """``w1 ^* w2 = fbar^a(w1) ^ fbar_a(w2)`` on exterior forms."""
    ctx.check_dim(w1, w2)
    return twisted(w1, w2, _wedge, ctx)


def exterior_d(w, ctx: StarContext | None = None):
    """Undeformed exterior derivative of a function, 1-form, form or series thereof."""
    if isinstance(w, LambdaSeries):
        return w.map(lambda c: as_form(c).d())
    return as_form(w).d()


def pairing_star(v, w, ctx: StarContext) -> LambdaSeries:
    """``<v, w>* = <fbar^a(v), fbar_a(w)>``."""
    ctx.check_dim(v, w)
    return twisted(v, w, pairing, ctx)


def _contract(t, r):
    if isinstance(t, FunctionExpr):
        return _scale_left(t, r)
    if isinstance(r, FunctionExpr):
        return _scale_right(t, r)
    return contract(t, r)


def pairing_star_tensor(t, r, ctx: StarContext) -> LambdaSeries:
    """Onion pairing ``<fbar^a(t), fbar_a(r)>`` contracting innermost slots first."""
    ctx.check_dim(t, r)
    return twisted(t, r, _contract, ctx)


def _lie(u, T):
    return lie(u, T)


def star_lie_derivative(u, T, ctx: StarContext) -> LambdaSeries:
    """``L*_u(T) = L_{fbar^a(u)}(fbar_a(T))``."""
    ctx.check_dim(u, T)
    return twisted(u, T, _lie, ctx)


def star_lie_bracket(u, v, ctx: StarContext) -> LambdaSeries:
    """``[u, v]* = [fbar^a(u), fbar_a(v)]``."""
    ctx.check_dim(u, v)
    return twisted(u, v, lie_bracket, ctx)


def star_symmetrize(w1, w2, ctx: StarContext) -> LambdaSeries:
    """``w1 (x)* w2 + Rbar^a(w2) (x)* Rbar_a(w1)``."""
    return tensor_star(w1, w2, ctx) + rswap(w1, w2, lambda x, y: tensor_star(x, y, ctx), ctx)


def star_antisymmetrize(w1, w2, ctx: StarContext) -> LambdaSeries:
    """``w1 (x)* w2 - Rbar^a(w2) (x)* Rbar_a(w1)``."""
    return tensor_star(w1, w2, ctx) - rswap(w1, w2, lambda x, y: tensor_star(x, y, ctx), ctx)


def uenv_from_fields(s, ctx: StarContext) -> UElem:
    """Vector field (series) viewed as an element of the enveloping algebra."""
    return UElem.from_series(series(s, ctx), ctx.order)


def bracket_as_operator_residual(u, v, ctx: StarContext, deg: int = 6) -> Residual:
    """``[u,v]* - (u * v - Rbar^a(v) * Rbar_a(u))`` in the deformed enveloping algebra."""
    from .hopf import op_residual

    tw = ctx.twist
    U = uenv_from_fields(u, ctx)
    V = uenv_from_fields(v, ctx)
    lhs = uenv_from_fields(star_lie_bracket(u, v, ctx), ctx)
    prod = uenv_star(U, V, tw)
    swapped = UElem.zero(1, ctx.order)
    for d, c, (w1, w2) in ctx.rinv:
        a = act(w1, V)
        b = act(w2, U)
        if a and b:
            swapped = swapped + uenv_star(a, b, tw).scale(c, shift=d)
    return op_residual(lhs - (prod - swapped), deg, ctx.dim)
