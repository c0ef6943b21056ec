"""Poisson brackets and their twisted versions on phase space ``T*R^n``.

Coordinates are ``(x1..xn, p1..pn)``.  The canonical bivector is
``Lambda = d_p (x) d_x - d_x (x) d_p`` so that ``<Lambda, df (x) dg> =
f_x g_p - f_p g_x``.  The twist is Moyal along the position translations
``d_{x^l}``, with lambda absorbed into theta: brackets of polynomials are
exact once the expansion order reaches the position degree.
"""
from __future__ import annotations

import json
from typing import Dict, Sequence, Tuple

from .fields import Form, OneForm, Tensor, VectorField, contract, lie
from .functions import DimensionError, FunctionExpr, partial
from .parse import parse_function
from .residual import Residual, series_residual
from .scalars import LambdaSeries
from .star import StarContext, star_fn, star_lie_bracket, star_lie_derivative, twisted
from .twist import TwistSpec

__all__ = [
    "IncompatibleTwistError",
    "PoissonBivector",
    "PhaseSpaceContext",
    "phase_space_names",
    "poisson",
    "ham_vf",
    "ham_vf_pairing",
    "compat_check",
    "star_poisson",
    "star_poisson_series",
    "explicit_star_poisson",
    "morphism_residual",
    "lie_route_residual",
    "time_evolution",
    "constants_check",
]


class IncompatibleTwistError(ValueError):
    """Twist generators do not preserve the Poisson bivector."""


def phase_space_names(n: int) -> Tuple[str, ...]:
    return tuple("x%d" % (j + 1) for j in range(n)) + tuple("p%d" % (j + 1) for j in range(n))


class PoissonBivector:
    """Antisymmetric contravariant 2-tensor ``Lambda^{mu nu}``."""

    def __init__(self, tensor: Tensor):
        if tensor.slots != ("u", "u"):
            raise ValueError("a bivector has two vector slots")
        if tensor.swap() != -tensor:
            raise ValueError("Poisson bivector must be antisymmetric")
        self.tensor = tensor
        self.dim = tensor.dim

    @classmethod
    def canonical(cls, n: int) -> "PoissonBivector":
        dim = 2 * n
        one = FunctionExpr.constant(1, dim)
        comps = {}
        for l in range(n):
            comps[(n + l, l)] = one
            comps[(l, n + l)] = -one
        return cls(Tensor(dim, ("u", "u"), comps))


def poisson(f: FunctionExpr, g: FunctionExpr, lam: PoissonBivector) -> FunctionExpr:
    """``{f, g} = <Lambda, df (x) dg>``."""
    if f.dim != lam.dim or g.dim != lam.dim:
        raise DimensionError("functions and bivector live on different spaces")
    df = Form.from_function(f).d()
    dg = Form.from_function(g).d()
    rho = OneForm([df.component(m) for m in range(f.dim)]).tensor(
        OneForm([dg.component(m) for m in range(g.dim)]))
    return contract(lam.tensor, rho)


def ham_vf(f: FunctionExpr, lam: PoissonBivector) -> VectorField:
    """``X_f = <Lambda, df>`` so that ``X_f(g) = {f, g}``."""
    if f.dim != lam.dim:
        raise DimensionError("function and bivector live on different spaces")
    df = OneForm([partial(m, f) for m in range(f.dim)])
    return contract(lam.tensor, df)


def ham_vf_pairing(f: FunctionExpr, lam: PoissonBivector) -> VectorField:
    """``X_f`` assembled from ``X_f(x^mu) = {f, x^mu}`` (bracket route)."""
    comps = [poisson(f, FunctionExpr.coordinate(m, f.dim), lam) for m in range(f.dim)]
    return VectorField(comps)


def compat_check(generators: Sequence[VectorField], lam: PoissonBivector) -> bool:
    """True iff every twist generator Lie-derives ``Lambda`` to zero."""
    return all(not lie(t, lam.tensor) for t in generators)


class PhaseSpaceContext:
    """Canonical ``T*R^n`` with a Moyal twist (default generators ``d_{x^l}``)."""

    def __init__(self, n: int, theta=None, order: int = 6, generators: Sequence[VectorField] | None = None,
                 bivector: PoissonBivector | None = None):
        self.n = n
        self.dim = 2 * n
        self.names = phase_space_names(n)
        self.bivector = bivector or PoissonBivector.canonical(n)
        if generators is None:
            generators = [VectorField.basis(l, self.dim) for l in range(n)]
        k = len(generators)
        if theta is None:
            theta = [[0] * k for _ in range(k)]
        self.spec = TwistSpec.moyal(theta, dim=self.dim, generators=list(generators))
        if not compat_check(self.spec.generators, self.bivector):
            raise IncompatibleTwistError("twist generators do not preserve the Poisson bivector")
        self.order = order
        self._ctx: Dict[int, StarContext] = {}

    def ctx(self, order: int | None = None) -> StarContext:
        order = self.order if order is None else order
        if order not in self._ctx:
            self._ctx[order] = StarContext(self.spec, order)
        return self._ctx[order]

    def parse(self, text: str) -> FunctionExpr:
        return parse_function(text, self.dim, self.names)

    def render(self, f: FunctionExpr) -> str:
        return f.render(self.names)

    def needed_order(self, *fs: FunctionExpr) -> int:
        """Expansion order that makes the twisted bracket exact for these inputs."""
        if any(f.has_waves() for f in fs):
            return self.order
        xdeg = []
        for f in fs:
            xdeg.append(max((sum(key[: self.n]) for key in f.terms), default=0))
        return min(xdeg) if xdeg else 0

    @classmethod
    def from_json(cls, doc) -> "PhaseSpaceContext":
        if isinstance(doc, str):
            doc = json.loads(doc)
        n = int(doc["n"])
        theta = doc.get("theta")
        if theta is not None:
            theta = [[str(x) for x in row] for row in theta]
        return cls(n, theta, int(doc.get("order", 6)))


def _pb(lam):
    return lambda f, g: poisson(f, g, lam)


def star_poisson_series(f, g, ps: PhaseSpaceContext, order: int | None = None) -> LambdaSeries:
    """``{f, g}* = {fbar^a(f), fbar_a(g)}`` with lambda kept explicit."""
    return twisted(f, g, _pb(ps.bivector), ps.ctx(order))


def star_poisson(f: FunctionExpr, g: FunctionExpr, ps: PhaseSpaceContext) -> FunctionExpr:
    """Twisted bracket with lambda absorbed (series summed at lambda = 1)."""
    order = ps.needed_order(f, g)
    s = star_poisson_series(f, g, ps, order)
    return s.total(FunctionExpr.zero(ps.dim))


def explicit_star_poisson(f: FunctionExpr, g: FunctionExpr, ps: PhaseSpaceContext) -> FunctionExpr:
    """``sum_l d_{x^l} f * d_{p_l} g - d_{p_l} f * d_{x^l} g`` (star products summed)."""
    n = ps.n
    order = ps.needed_order(f, g)
    ctx = ps.ctx(order)
    out = FunctionExpr.zero(ps.dim)
    for l in range(n):
        a = star_fn(partial(l, f), partial(n + l, g), ctx)
        b = star_fn(partial(n + l, f), partial(l, g), ctx)
        out = out + (a - b).total(FunctionExpr.zero(ps.dim))
    return out


def morphism_residual(f: FunctionExpr, g: FunctionExpr, ps: PhaseSpaceContext, order: int | None = None) -> Residual:
    """``[X_f, X_g]* - X_{{f,g}*}`` per lambda order."""
    ctx = ps.ctx(order)
    lam = ps.bivector
    lhs = star_lie_bracket(ham_vf(f, lam), ham_vf(g, lam), ctx)
    rhs = star_poisson_series(f, g, ps, ctx.order).map(lambda h: ham_vf(h, lam))
    return series_residual(lhs - rhs)


def lie_route_residual(f, g, ps: PhaseSpaceContext, order: int | None = None) -> Residual:
    """``{f,g}* - L*_{X_f}(g)`` per lambda order."""
    ctx = ps.ctx(order)
    lhs = star_poisson_series(f, g, ps, ctx.order)
    rhs = star_lie_derivative(ham_vf(f, ps.bivector), g, ctx)
    return series_residual(lhs - rhs)


def time_evolution(H: FunctionExpr, f: FunctionExpr, ps: PhaseSpaceContext) -> FunctionExpr:
    """``df/dt = -{H, f}*``."""
    return -star_poisson(H, f, ps)


def constants_check(H: FunctionExpr, Qs: Sequence[FunctionExpr], ps: PhaseSpaceContext) -> Dict:
    """Check ``{Q,H}* = {Q,H} = {H,Q}* = 0`` and closure of the constants under ``{,}*``."""
    lam = ps.bivector
    rows = []
    ok = True
    for j, Q in enumerate(Qs):
        vals = [star_poisson(Q, H, ps), poisson(Q, H, lam), star_poisson(H, Q, ps)]
        good = all(not v for v in vals)
        ok = ok and good
        rows.append({"index": j, "conserved": good})
    closure = []
    for a in range(len(Qs)):
        for b in range(len(Qs)):
            if a == b:
                continue
            C = star_poisson(Qs[a], Qs[b], ps)
            good = not star_poisson(C, H, ps)
            ok = ok and good
            closure.append({"pair": [a, b], "bracket": ps.render(C), "conserved": good})
    return {"ok": ok, "constants": rows, "closure": closure}
