"""Residuals of the identities the deformed structures must satisfy.

Every function returns a ``Residual`` (per lambda-order term counts of
``lhs - rhs``); an exact identity gives all-zero counts.  The suites in
``twistgeom.suites`` and the test-suite share these definitions.
"""
from __future__ import annotations

from typing import Callable, Dict

from .fields import VectorField, as_form, lie_bracket
from .functions import FunctionExpr, fn_mul, partial
from .hopf import UElem, act, op_residual
from .modes import (braid, mode_poisson_star, mode_star, quantum_star, star_commutator)
from .poisson import PhaseSpaceContext, poisson
from .residual import Residual, series_residual, term_count
from .scalars import LambdaSeries
from .star import (StarContext, exterior_d, pairing_star, pairing_star_tensor, rswap, series, star_antisymmetrize,
                   star_fn, star_lie_bracket, star_lie_derivative, star_module, star_right, star_symmetrize,
                   tensor_star, twisted, uenv_from_fields, wedge_star)
from .twist import dmap, uenv_star, xmap

__all__ = [
    "associativity", "r_commutativity", "module_associativity", "module_right_rule", "tensor_associativity",
    "wedge_antisymmetry", "d_squared", "d_leibniz", "pairing_left_linearity", "pairing_right_rule",
    "onion_rule", "lie_module_property", "lie_leibniz", "bracket_antisymmetry", "bracket_jacobi",
    "symmetrization_classical", "xd_identity", "dx_identity", "d_homomorphism", "act_uelem",
    "cov_left_linearity", "cov_leibniz", "cov_tensor_routes", "torsion_antisymmetry", "torsion_linearity",
    "curvature_antisymmetry", "curvature_linearity", "classical_torsion", "classical_curvature",
    "poisson_antisymmetry", "poisson_jacobi", "poisson_leibniz",
    "mode_associativity", "mode_r_commutativity", "mode_bracket_antisymmetry", "mode_bracket_leibniz",
    "mode_bracket_jacobi", "count",
]


def _r(diff) -> Residual:
    if isinstance(diff, LambdaSeries):
        return series_residual(diff)
    return Residual({0: term_count(diff)})


def count(obj) -> Residual:
    """Residual of an already formed difference."""
    return _r(obj)


# -- star calculus -------------------------------------------------------------

def associativity(f, g, h, ctx: StarContext) -> Residual:
    """``(f * g) * h - f * (g * h)``."""
    return _r(star_fn(star_fn(f, g, ctx), h, ctx) - star_fn(f, star_fn(g, h, ctx), ctx))


def r_commutativity(f, g, ctx: StarContext) -> Residual:
    """``f * g - Rbar^a(g) * Rbar_a(f)``."""
    return _r(star_fn(f, g, ctx) - rswap(f, g, lambda a, b: star_fn(a, b, ctx), ctx))


def module_associativity(h, g, X, ctx: StarContext) -> Residual:
    """``(h * g) * X - h * (g * X)``."""
    return _r(star_module(star_fn(h, g, ctx), X, ctx) - star_module(h, star_module(g, X, ctx), ctx))


def module_right_rule(X, h, ctx: StarContext) -> Residual:
    """``X * h - Rbar^a(h) * Rbar_a(X)``."""
    return _r(star_right(X, h, ctx) - rswap(X, h, lambda a, b: star_module(a, b, ctx), ctx))


def tensor_associativity(a, b, c, ctx: StarContext) -> Residual:
    lhs = tensor_star(tensor_star(a, b, ctx), c, ctx)
    rhs = tensor_star(a, tensor_star(b, c, ctx), ctx)
    return _r(lhs - rhs)


def wedge_antisymmetry(w1, w2, ctx: StarContext) -> Residual:
    """``w1 ^* w2`` (as a tensor) ``- (w1 (x)* w2 - Rbar^a(w2) (x)* Rbar_a(w1))`` for 1-forms."""
    lhs = wedge_star(w1, w2, ctx).map(lambda f: f.to_tensor())
    return _r(lhs - star_antisymmetrize(w1, w2, ctx))


def d_squared(w) -> Residual:
    return Residual({0: term_count(as_form(w).d().d())})


def d_leibniz(f, g, ctx: StarContext) -> Residual:
    """``d(f * g) - (df ^* g + f ^* dg)``."""
    lhs = exterior_d(star_fn(f, g, ctx))
    rhs = wedge_star(exterior_d(f), g, ctx) + wedge_star(f, exterior_d(g), ctx)
    return _r(lhs - rhs)


def pairing_left_linearity(h, u, w, k, ctx: StarContext) -> Residual:
    """``<h * u, w * k>* - h * <u, w>* * k``."""
    lhs = pairing_star(star_module(h, u, ctx), star_right(w, k, ctx), ctx)
    rhs = star_fn(star_fn(h, pairing_star(u, w, ctx), ctx), k, ctx)
    return _r(lhs - rhs)


def pairing_right_rule(u, h, w, ctx: StarContext) -> Residual:
    """``<u, h * w>* - Rbar^a(h) * <Rbar_a(u), w>*``."""
    lhs = pairing_star(u, star_module(h, w, ctx), ctx)
    rhs = rswap(u, h, lambda a, b: star_fn(a, pairing_star(b, w, ctx), ctx), ctx)
    return _r(lhs - rhs)


def onion_rule(tau, u, th, rho, ctx: StarContext) -> Residual:
    """``<tau (x)* u, th (x)* rho>* - <tau, <u, th>* * rho>*``."""
    lhs = pairing_star_tensor(tensor_star(tau, u, ctx), tensor_star(th, rho, ctx), ctx)
    rhs = pairing_star(tau, star_module(pairing_star(u, th, ctx), rho, ctx), ctx)
    return _r(lhs - rhs)


def act_uelem(xi: UElem, obj, ctx: StarContext) -> LambdaSeries:
    """Undeformed action of an enveloping-algebra element (lambda-graded)."""
    out: Dict = {}
    for (d, (w,)), c in xi.terms.items():
        val = act(w, obj)
        if not val:
            continue
        val = val * c
        out[d] = val if d not in out else out[d] + val
    return LambdaSeries(out, ctx.order)


def lie_module_property(u, v, T, ctx: StarContext) -> Residual:
    """``L*_u L*_v T - L_{D(u * v)} T``: the star action is a module action."""
    lhs = star_lie_derivative(u, star_lie_derivative(v, T, ctx), ctx)
    tw = ctx.twist
    uv = uenv_star(uenv_from_fields(u, ctx), uenv_from_fields(v, ctx), tw)
    return _r(lhs - act_uelem(dmap(uv, tw), T, ctx))


def lie_leibniz(u, h, g, ctx: StarContext) -> Residual:
    """``L*_u(h * g) - L*_u(h) * g - Rbar^a(h) * L*_{Rbar_a(u)}(g)``."""
    lhs = star_lie_derivative(u, star_fn(h, g, ctx), ctx)
    rhs = star_fn(star_lie_derivative(u, h, ctx), g, ctx)
    rhs = rhs + rswap(u, h, lambda a, b: star_fn(a, star_lie_derivative(b, g, ctx), ctx), ctx)
    return _r(lhs - rhs)


def bracket_antisymmetry(u, v, ctx: StarContext) -> Residual:
    """``[u, v]* + [Rbar^a(v), Rbar_a(u)]*``."""
    br = lambda a, b: star_lie_bracket(a, b, ctx)
    return _r(br(u, v) + rswap(u, v, br, ctx))


def bracket_jacobi(u, v, z, ctx: StarContext) -> Residual:
    """``[u,[v,z]*]* - [[u,v]*,z]* - [Rbar^a(v),[Rbar_a(u),z]*]*``."""
    br = lambda a, b: star_lie_bracket(a, b, ctx)
    lhs = br(u, br(v, z))
    rhs = br(br(u, v), z) + rswap(u, v, lambda a, b: br(a, br(b, z)), ctx)
    return _r(lhs - rhs)


def symmetrization_classical(w1, w2, ctx: StarContext) -> Residual:
    """For twist-invariant inputs the star symmetrization is the classical one."""
    lhs = star_symmetrize(w1, w2, ctx)
    rhs = series(w1.tensor(w2) + w2.tensor(w1), ctx)
    return _r(lhs - rhs)


def _uenv(xi, ctx):
    return xi if isinstance(xi, UElem) else uenv_from_fields(xi, ctx)


def xd_identity(xi, ctx: StarContext, deg: int = 6) -> Residual:
    xi = _uenv(xi, ctx)
    return op_residual(xmap(dmap(xi, ctx.twist), ctx.twist) - xi, deg, ctx.dim)


def dx_identity(xi, ctx: StarContext, deg: int = 6) -> Residual:
    xi = _uenv(xi, ctx)
    return op_residual(dmap(xmap(xi, ctx.twist), ctx.twist) - xi, deg, ctx.dim)


def d_homomorphism(xi, zeta, ctx: StarContext, deg: int = 6) -> Residual:
    """``D(xi * zeta) - D(xi) D(zeta)`` as operators."""
    tw = ctx.twist
    xi, zeta = _uenv(xi, ctx), _uenv(zeta, ctx)
    return op_residual(dmap(uenv_star(xi, zeta, tw), tw) - dmap(xi, tw) * dmap(zeta, tw), deg, ctx.dim)


# -- geometry --------------------------------------------------------------------

def cov_left_linearity(geo, h, u, v) -> Residual:
    """``nabla_{h * u} v - h * nabla_u v``."""
    ctx = geo.ctx
    return _r(geo.cov_deriv(star_module(h, u, ctx), v) - star_module(h, geo.cov_deriv(u, v), ctx))


def cov_leibniz(geo, u, h, v) -> Residual:
    """``nabla_u(h * v) - L*_u(h) * v - Rbar^a(h) * nabla_{Rbar_a(u)} v``."""
    ctx = geo.ctx
    lhs = geo.cov_deriv(u, star_module(h, v, ctx))
    rhs = star_module(star_lie_derivative(u, h, ctx), v, ctx)
    rhs = rhs + rswap(u, h, lambda a, b: star_module(a, geo.cov_deriv(b, v), ctx), ctx)
    return _r(lhs - rhs)


def cov_tensor_routes(geo, u, v, h, z) -> Residual:
    """``nabla_u`` of ``v (x)* (h * z)`` and of ``(v * h) (x)* z`` (the same tensor) agree."""
    ctx = geo.ctx
    a = geo.cov_deriv_tensor(u, [v, star_module(h, z, ctx)])
    b = geo.cov_deriv_tensor(u, [star_right(v, h, ctx), z])
    return _r(a - b)


def torsion_antisymmetry(geo, u, v) -> Residual:
    """``T(u, v) + T(Rbar^a(v), Rbar_a(u))``."""
    return _r(geo.torsion(u, v) + rswap(u, v, geo.torsion, geo.ctx))


def torsion_linearity(geo, h, u, v) -> Residual:
    """``T(h * u, v) - h * T(u, v)`` plus ``T(u, h * v) - Rbar^a(h) * T(Rbar_a(u), v)``."""
    ctx = geo.ctx
    first = geo.torsion(star_module(h, u, ctx), v) - star_module(h, geo.torsion(u, v), ctx)
    second = geo.torsion(u, star_module(h, v, ctx)) - rswap(
        u, h, lambda a, b: star_module(a, geo.torsion(b, v), ctx), ctx)
    return _r(first).merge(_r(second))


def curvature_antisymmetry(geo, u, v, z) -> Residual:
    """``R(u, v, z) + R(Rbar^a(v), Rbar_a(u), z)``."""
    return _r(geo.curvature(u, v, z) + rswap(u, v, lambda a, b: geo.curvature(a, b, z), geo.ctx))


def curvature_linearity(geo, h, u, v, z) -> Residual:
    """``R(h * u, v, z) - h * R(u, v, z)`` plus the braided rule in the second slot."""
    ctx = geo.ctx
    first = geo.curvature(star_module(h, u, ctx), v, z) - star_module(h, geo.curvature(u, v, z), ctx)
    second = geo.curvature(u, star_module(h, v, ctx), z) - rswap(
        u, h, lambda a, b: star_module(a, geo.curvature(b, v, z), ctx), ctx)
    return _r(first).merge(_r(second))


def _classical_nabla(conn, u: VectorField, v: VectorField) -> VectorField:
    """``nabla_u v = u(v^k) d_k + u^i v^j Gamma_ij^k d_k`` at lambda^0."""
    n = conn.dim
    uc, vc = u.components(), v.components()
    comps = []
    for k in range(n):
        acc = FunctionExpr.zero(n)
        for i in range(n):
            ui = uc[i]
            if ui:
                acc = acc + fn_mul(ui, partial(i, vc[k]))
        for (i, j, kk), g in conn.gamma.items():
            if kk == k:
                acc = acc + fn_mul(fn_mul(uc[i], vc[j]), g[0] or FunctionExpr.zero(n))
        comps.append(acc)
    return VectorField(comps)


def classical_torsion(conn, u: VectorField, v: VectorField) -> VectorField:
    return _classical_nabla(conn, u, v) - _classical_nabla(conn, v, u) - lie_bracket(u, v)


def classical_curvature(conn, u: VectorField, v: VectorField, z: VectorField) -> VectorField:
    nab = lambda a, b: _classical_nabla(conn, a, b)
    return nab(u, nab(v, z)) - nab(v, nab(u, z)) - nab(lie_bracket(u, v), z)


# -- Poisson -------------------------------------------------------------------------

def _pb(ps: PhaseSpaceContext, ctx):
    lam = ps.bivector
    return lambda a, b: twisted(a, b, lambda x, y: poisson(x, y, lam), ctx)


def poisson_antisymmetry(f, g, ps: PhaseSpaceContext) -> Residual:
    ctx = ps.ctx()
    S = _pb(ps, ctx)
    return _r(S(f, g) + rswap(f, g, S, ctx))


def poisson_jacobi(f, g, h, ps: PhaseSpaceContext) -> Residual:
    ctx = ps.ctx()
    S = _pb(ps, ctx)
    return _r(S(f, S(g, h)) - S(S(f, g), h) - rswap(f, g, lambda a, b: S(a, S(b, h)), ctx))


def poisson_leibniz(f, g, h, ps: PhaseSpaceContext) -> Residual:
    """``{f, g * h}* - {f, g}* * h - Rbar^a(g) * {Rbar_a(f), h}*``."""
    ctx = ps.ctx()
    S = _pb(ps, ctx)
    st = lambda a, b: star_fn(a, b, ctx)
    return _r(S(f, st(g, h)) - st(S(f, g), h) - rswap(f, g, lambda a, b: st(a, S(b, h)), ctx))


# -- modes ---------------------------------------------------------------------------------

def mode_associativity(F, G, H) -> Residual:
    return _r(mode_star(mode_star(F, G), H) - mode_star(F, mode_star(G, H)))


def mode_r_commutativity(F, G) -> Residual:
    """``F * G - Rbar^a(G) * Rbar_a(F)`` for commuting mode polynomials."""
    return _r(mode_star(F, G) - braid(F, G, mode_star))


def _mode_bracket(kind: str) -> Callable:
    return mode_poisson_star if kind == "poisson" else star_commutator


def _mode_product(kind: str) -> Callable:
    return mode_star if kind == "poisson" else quantum_star


def mode_bracket_antisymmetry(F, G, kind: str = "poisson") -> Residual:
    br = _mode_bracket(kind)
    return _r(br(F, G) + braid(F, G, br))


def mode_bracket_jacobi(F, G, H, kind: str = "poisson") -> Residual:
    br = _mode_bracket(kind)
    return _r(br(F, br(G, H)) - br(br(F, G), H) - braid(F, G, lambda a, b: br(a, br(b, H))))


def mode_bracket_leibniz(F, G, H, kind: str = "poisson") -> Residual:
    """``{F, G * H} - {F, G} * H - Rbar^a(G) * {Rbar_a(F), H}``."""
    br = _mode_bracket(kind)
    st = _mode_product(kind)
    return _r(br(F, st(G, H)) - st(br(F, G), H) - braid(F, G, lambda a, b: st(a, br(b, H))))
