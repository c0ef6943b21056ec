"""Twist specifications, their lambda-expansion and the twist-axiom checks."""
from __future__ import annotations

import json
from typing import Dict, List, Sequence, Tuple

from gmpy2 import mpq

from .fields import VectorField, lie_bracket
from .functions import FunctionExpr
from .hopf import (
    UElem,
    UEnvElement,
    act,
    antipode,
    counit_left,
    counit_right,
    delta_left,
    delta_right,
    op_residual,
)
from .parse import parse_function
from .residual import Residual
from .scalars import QI, ONE, as_rational, rational_str

__all__ = [
    "TwistSpecError",
    "TwistSpec",
    "TwistExpansion",
    "expand_twist",
    "check_cocycle",
    "check_inverse_cocycle",
    "check_counit",
    "check_inverse",
    "uenv_star",
    "xmap",
    "dmap",
    "default_jordanian_fields",
]

VARIANTS = ("moyal", "jordanian", "ext_jordanian")


class TwistSpecError(ValueError):
    """A twist specification violates its defining Lie-algebra relations."""


def _coord(mu, dim):
    return FunctionExpr.coordinate(mu, dim)


def default_jordanian_fields(dim: int = 2) -> Dict[str, VectorField]:
    """``H = -2x d_x, E = d_x, A = d_y, B = y d_x`` (x, y the first two coordinates)."""
    if dim < 2:
        raise ValueError("the Jordanian realization needs at least two coordinates")
    z = FunctionExpr.zero(dim)
    one = FunctionExpr.constant(1, dim)

    def vf(c0, c1):
        return VectorField([c0, c1] + [z] * (dim - 2))

    return {
        "H": vf(_coord(0, dim) * -2, z),
        "E": vf(one, z),
        "A": vf(z, one),
        "B": vf(_coord(1, dim), z),
    }


class TwistSpec:
    """Data defining a twist; invariants are verified on construction."""

    def __init__(self, variant: str, dim: int, theta=None, generators: Sequence[VectorField] | None = None,
                 fields: Dict[str, VectorField] | None = None, alpha=0, beta=2):
        if variant not in VARIANTS:
            raise TwistSpecError("unknown twist variant %r" % variant)
        self.variant = variant
        self.dim = dim
        self.alpha = as_rational(alpha)
        self.beta = as_rational(beta)
        if variant == "moyal":
            gens = list(generators) if generators is not None else [VectorField.basis(m, dim) for m in range(dim)]
            k = len(gens)
            if theta is None:
                theta = [[0] * k for _ in range(k)]
            self.theta = tuple(tuple(as_rational(x) for x in row) for row in theta)
            self.generators = tuple(gens)
            self.fields = {}
        else:
            self.theta = ()
            self.generators = ()
            base = default_jordanian_fields(dim)
            base.update(fields or {})
            names = ("H", "E") if variant == "jordanian" else ("H", "E", "A", "B")
            self.fields = {n: base[n] for n in names}
        self.validate()

    @classmethod
    def moyal(cls, theta, dim: int | None = None, generators=None) -> "TwistSpec":
        if dim is None:
            dim = len(theta) if generators is None else generators[0].dim
        return cls("moyal", dim, theta=theta, generators=generators)

    @classmethod
    def identity(cls, dim: int) -> "TwistSpec":
        return cls("moyal", dim)

    @classmethod
    def jordanian(cls, dim: int = 2, **fields) -> "TwistSpec":
        return cls("jordanian", dim, fields=fields)

    @classmethod
    def ext_jordanian(cls, dim: int = 2, alpha=0, beta=2, **fields) -> "TwistSpec":
        return cls("ext_jordanian", dim, fields=fields, alpha=alpha, beta=beta)

    def validate(self):
        dims = {v.dim for v in list(self.generators) + list(self.fields.values())}
        if dims - {self.dim}:
            raise TwistSpecError("twist generators must live on R^%d" % self.dim)
        if self.variant == "moyal":
            k = len(self.generators)
            if len(self.theta) != k or any(len(r) != k for r in self.theta):
                raise TwistSpecError("theta must be a %dx%d matrix" % (k, k))
            for a in range(k):
                for b in range(k):
                    if self.theta[a][b] != -self.theta[b][a]:
                        raise TwistSpecError("theta must be antisymmetric")
            for a in range(k):
                for b in range(a + 1, k):
                    if lie_bracket(self.generators[a], self.generators[b]):
                        raise TwistSpecError("Moyal generators %d and %d do not commute" % (a, b))
            return
        f = self.fields

        def need(lhs, rhs, label):
            if lhs != rhs:
                raise TwistSpecError("relation %s fails for the given fields" % label)

        need(lie_bracket(f["H"], f["E"]), f["E"] * 2, "[H,E]=2E")
        if self.variant == "ext_jordanian":
            if self.alpha + self.beta != 2:
                raise TwistSpecError("alpha + beta must equal 2")
            need(lie_bracket(f["H"], f["A"]), f["A"] * QI(self.alpha), "[H,A]=alpha A")
            need(lie_bracket(f["H"], f["B"]), f["B"] * QI(self.beta), "[H,B]=beta B")
            need(lie_bracket(f["A"], f["B"]), f["E"], "[A,B]=E")
            zero = VectorField.basis(0, self.dim) * 0
            need(lie_bracket(f["E"], f["A"]), zero, "[E,A]=0")
            need(lie_bracket(f["E"], f["B"]), zero, "[E,B]=0")

    def is_trivial(self) -> bool:
        return self.variant == "moyal" and not any(x for row in self.theta for x in row)

    def describe(self) -> Dict:
        out = {"variant": self.variant, "dim": self.dim}
        if self.variant == "moyal":
            out["theta"] = [[rational_str(x) for x in row] for row in self.theta]
        if self.variant == "ext_jordanian":
            out["alpha"] = rational_str(self.alpha)
            out["beta"] = rational_str(self.beta)
        return out

    # JSON -------------------------------------------------------------
    @classmethod
    def from_json(cls, doc) -> "TwistSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        variant = doc.get("variant", "moyal")
        dim = int(doc.get("dim", 2))
        raw_fields = doc.get("fields")
        if variant == "moyal":
            gens = None
            if raw_fields:
                items = raw_fields if isinstance(raw_fields, list) else list(raw_fields.values())
                gens = [VectorField([parse_function(str(s), dim) for s in comp]) for comp in items]
            theta = doc.get("theta")
            if theta is None:
                k = len(gens) if gens else dim
                theta = [[0] * k for _ in range(k)]
            theta = [[as_rational(str(x)) for x in row] for row in theta]
            return cls("moyal", dim, theta=theta, generators=gens)
        fields = {}
        for name, comp in (raw_fields or {}).items():
            fields[name] = VectorField([parse_function(str(s), dim) for s in comp])
        return cls(variant, dim, fields=fields,
                   alpha=as_rational(str(doc.get("alpha", 0))), beta=as_rational(str(doc.get("beta", 2))))


def _series_exp(X: UElem, order: int, keyfn=None) -> UElem:
    """``exp(X)`` for ``X`` of lambda-degree >= 1."""
    out = UElem.unit(X.arity, order)
    term = UElem.unit(X.arity, order)
    for m in range(1, order + 1):
        term = (term * X).scale(QI(mpq(1, m))).canonical(keyfn)
        if not term:
            break
        out = out + term
    return out


def _log1p(E: VectorField, order: int) -> UElem:
    """``ln(1 + lambda E)`` in ``U``."""
    terms = {}
    for k in range(1, order + 1):
        terms[(k, ((E,) * k,))] = QI(mpq((-1) ** (k + 1), k))
    return UEnvElement(terms, order)


def _geometric(E: VectorField, order: int) -> UElem:
    """``(1 + lambda E)^{-1}``."""
    terms = {(k, ((E,) * k,)): QI((-1) ** k) for k in range(order + 1)}
    return UEnvElement(terms, order)


class TwistExpansion:
    """Order-by-order twist data ``F, F^-1, F_21, R = F_21 F^-1, R^-1``."""

    def __init__(self, spec: TwistSpec, order: int, F: UElem, Finv: UElem, keyfn=None):
        self.spec = spec
        self.order = order
        self.dim = spec.dim
        self.keyfn = keyfn
        self.F = F
        self.Finv = Finv
        self.F21 = F.flip()
        self.R = (self.F21 * Finv).canonical(keyfn)
        self.Rinv = (F * Finv.flip()).canonical(keyfn)
        self._flat = {}

    def flat(self, which: str) -> List[Tuple[int, QI, Tuple]]:
        """Terms ``(degree, coefficient, words)`` of one of F, Finv, R, Rinv."""
        if which not in self._flat:
            el = getattr(self, which)
            self._flat[which] = [(d, c, w) for (d, w), c in el.terms.items()]
        return self._flat[which]

    def generators(self) -> List[VectorField]:
        if self.spec.variant == "moyal":
            return list(self.spec.generators)
        return list(self.spec.fields.values())


def expand_twist(spec: TwistSpec, order: int) -> TwistExpansion:
    if order < 0:
        raise ValueError("order must be non-negative")
    spec.validate()
    if spec.variant == "moyal":
        gens = spec.generators
        index = {}
        for j, g in enumerate(gens):
            index.setdefault(g, j)
        keyfn = index.__getitem__
        terms = {}
        coef = QI(0, mpq(-1, 2))
        for a, ta in enumerate(gens):
            for b, tb in enumerate(gens):
                th = spec.theta[a][b]
                if th:
                    key = (1, ((ta,), (tb,)))
                    terms[key] = terms.get(key, QI(0)) + coef * th
        X = UElem(2, order, terms)
        F = _series_exp(X, order, keyfn)
        Finv = _series_exp(-X, order, keyfn)
        return TwistExpansion(spec, order, F, Finv, keyfn)
    f = spec.fields
    half = QI(mpq(1, 2))
    X = UEnvElement.generator(f["H"], order).tensor(_log1p(f["E"], order)).scale(half)
    FX = _series_exp(X, order)
    FXinv = _series_exp(-X, order)
    if spec.variant == "jordanian":
        return TwistExpansion(spec, order, FX, FXinv)
    right = (UEnvElement.generator(f["B"], order) * _geometric(f["E"], order))
    Y = UEnvElement.generator(f["A"], order).tensor(right).scale(ONE, shift=1)
    FY = _series_exp(Y, order)
    FYinv = _series_exp(-Y, order)
    return TwistExpansion(spec, order, FX * FY, FYinv * FXinv)


def _embed12(F: UElem) -> UElem:
    return F.tensor(UElem.unit(1, F.order))


def _embed23(F: UElem) -> UElem:
    return UElem.unit(1, F.order).tensor(F)


def check_cocycle(tw: TwistExpansion, deg: int = 6) -> Residual:
    """Per-order residual of ``F12 (Delta (x) id)F - F23 (id (x) Delta)F``."""
    lhs = (_embed12(tw.F) * delta_left(tw.F)).canonical(tw.keyfn)
    rhs = (_embed23(tw.F) * delta_right(tw.F)).canonical(tw.keyfn)
    return op_residual(lhs - rhs, deg, tw.dim)


def check_inverse_cocycle(tw: TwistExpansion, deg: int = 6) -> Residual:
    """``((Delta (x) id)F^-1) F^-1_12 - ((id (x) Delta)F^-1) F^-1_23``."""
    lhs = (delta_left(tw.Finv) * _embed12(tw.Finv)).canonical(tw.keyfn)
    rhs = (delta_right(tw.Finv) * _embed23(tw.Finv)).canonical(tw.keyfn)
    return op_residual(lhs - rhs, deg, tw.dim)


def check_counit(tw: TwistExpansion, deg: int = 6) -> Residual:
    """``(epsilon (x) id)F - 1`` and ``(id (x) epsilon)F - 1`` per order."""
    one = UElem.unit(1, tw.order)
    r1 = op_residual(counit_left(tw.F) - one, deg, tw.dim)
    r2 = op_residual(counit_right(tw.F) - one, deg, tw.dim)
    return r1.merge(r2)


def check_inverse(tw: TwistExpansion, deg: int = 6) -> Residual:
    """``F F^-1 - 1 (x) 1`` and ``F^-1 F - 1 (x) 1``."""
    one = UElem.unit(2, tw.order)
    r1 = op_residual((tw.F * tw.Finv).canonical(tw.keyfn) - one, deg, tw.dim)
    r2 = op_residual((tw.Finv * tw.F).canonical(tw.keyfn) - one, deg, tw.dim)
    return r1.merge(r2)


# -- deformed enveloping algebra -----------------------------------------

def _twisted_uenv(xi: UElem, zeta: UElem, terms, order) -> UElem:
    out = UElem.zero(1, order)
    for d, c, (w1, w2) in terms:
        if d > order:
            continue
        a = act(w1, xi)
        if not a:
            continue
        b = act(w2, zeta)
        if not b:
            continue
        out = out + (a * b).scale(c, shift=d)
    return out


def uenv_star(xi: UElem, zeta: UElem, tw: TwistExpansion) -> UElem:
    """``xi * zeta = fbar^a(xi) fbar_a(zeta)`` with adjoint-acting bar factors."""
    order = min(xi.order, zeta.order, tw.order)
    return _twisted_uenv(xi, zeta, tw.flat("Finv"), order)


def dmap(xi: UElem, tw: TwistExpansion) -> UElem:
    """``D(xi) = fbar^a(xi) fbar_a`` (adjoint action, then product in U)."""
    order = min(xi.order, tw.order)
    out = UElem.zero(1, order)
    for d, c, (w1, w2) in tw.flat("Finv"):
        if d > order:
            continue
        a = act(w1, xi)
        if a:
            out = out + (a * UEnvElement.word(w2, order)).scale(c, shift=d)
    return out


def chi(tw: TwistExpansion) -> UElem:
    """``chi = f^b S(f_b)``."""
    return _mu_with_antipode(tw.F, tw.order)


def _mu_with_antipode(F: UElem, order: int) -> UElem:
    out = {}
    for (d, (a, b)), c in F.terms.items():
        sign = -1 if len(b) % 2 else 1
        key = (d, (a + b[::-1],))
        out[key] = out.get(key, QI(0)) + c * sign
    return UEnvElement(out, order)


def xmap(xi: UElem, tw: TwistExpansion) -> UElem:
    """``X_xi = fbar^a xi chi S(fbar_a)`` (``S^-1 = S`` on ``U``)."""
    order = min(xi.order, tw.order)
    ch = chi(tw).truncate(order)
    mid = xi * ch
    out = UElem.zero(1, order)
    for d, c, (w1, w2) in tw.flat("Finv"):
        if d > order:
            continue
        left = UEnvElement.word(w1, order)
        right = antipode(UEnvElement.word(w2, order))
        out = out + (left * mid * right).scale(c, shift=d)
    return out
