"""Polynomial times plane-wave functions on R^n with Gaussian-rational coefficients.

A term is ``c * x^alpha * exp(i k.x)`` with ``alpha`` a multi-index and ``k`` an
integer wave-vector.  Internally each term is keyed by the concatenated tuple
``alpha + k`` of length ``2n``.
"""
from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

from .scalars import QI, ONE, I

__all__ = ["FunctionExpr", "fn_mul", "partial", "DimensionError", "default_names"]


class DimensionError(ValueError):
    """Operands live on coordinate spaces of different dimension."""


def default_names(n: int) -> Tuple[str, ...]:
    return tuple("x%d" % (j + 1) for j in range(n))


class FunctionExpr:
    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Dict[Tuple[int, ...], QI] | None = None, _clean: bool = False):
        self.dim = dim
        if _clean:
            self.terms = terms
        else:
            self.terms = {k: c for k, c in (terms or {}).items() if c}
            for k in self.terms:
                if len(k) != 2 * dim:
                    raise DimensionError("term key %r does not match dimension %d" % (k, dim))
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "FunctionExpr":
        return cls(dim, {}, True)

    @classmethod
    def constant(cls, c, dim: int) -> "FunctionExpr":
        c = QI.coerce(c)
        return cls(dim, {(0,) * (2 * dim): c} if c else {}, True)

    @classmethod
    def monomial(cls, alpha: Sequence[int], c=1, wave: Sequence[int] | None = None) -> "FunctionExpr":
        dim = len(alpha)
        wave = tuple(wave) if wave is not None else (0,) * dim
        if len(wave) != dim:
            raise DimensionError("wave-vector length differs from monomial length")
        if any(a < 0 for a in alpha):
            raise ValueError("negative exponent")
        return cls(dim, {tuple(alpha) + wave: QI.coerce(c)})

    @classmethod
    def coordinate(cls, mu: int, dim: int) -> "FunctionExpr":
        if not 0 <= mu < dim:
            raise IndexError("coordinate index %d out of range for dimension %d" % (mu, dim))
        alpha = [0] * dim
        alpha[mu] = 1
        return cls.monomial(alpha)

    @classmethod
    def plane_wave(cls, k: Sequence[int], c=1) -> "FunctionExpr":
        return cls.monomial((0,) * len(k), c, k)

    # structure --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(k) for k in self.terms)

    def constant_term(self) -> QI:
        return self.terms.get((0,) * (2 * self.dim), QI(0))

    def degree(self) -> int:
        """Maximal polynomial degree (plane-wave factors ignored)."""
        n = self.dim
        return max((sum(k[:n]) for k in self.terms), default=-1)

    def has_waves(self) -> bool:
        n = self.dim
        return any(any(k[n:]) for k in self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, FunctionExpr):
            return self.dim == other.dim and self.terms == other.terms
        if isinstance(other, (int, QI)):
            return self == FunctionExpr.constant(other, self.dim)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self):
        return tuple(sorted((k, (c.re, c.im)) for k, c in self.terms.items()))

    # arithmetic -------------------------------------------------------
    def _check(self, other: "FunctionExpr"):
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (self.dim, other.dim))

    def __add__(self, other):
        if not isinstance(other, FunctionExpr):
            other = FunctionExpr.constant(other, self.dim)
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            if k in out:
                s = out[k] + c
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return FunctionExpr(self.dim, out, True)

    __radd__ = __add__

    def __neg__(self):
        return FunctionExpr(self.dim, {k: -c for k, c in self.terms.items()}, True)

    def __sub__(self, other):
        if not isinstance(other, FunctionExpr):
            other = FunctionExpr.constant(other, self.dim)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FunctionExpr):
            return fn_mul(self, other)
        c = QI.coerce(other)
        if not c:
            return FunctionExpr.zero(self.dim)
        if c == ONE:
            return self
        return FunctionExpr(self.dim, {k: v * c for k, v in self.terms.items()}, True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n: int):
        out = FunctionExpr.constant(1, self.dim)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, mu: int) -> "FunctionExpr":
        return partial(mu, self)

    # rendering --------------------------------------------------------
    def ordered_terms(self):
        n = self.dim
        return sorted(self.terms.items(), key=lambda kc: (sum(kc[0][:n]), kc[0][:n], kc[0][n:]))

    def render(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_names(self.dim)
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.ordered_terms():
            parts.append(_render_term(key, c, names, self.dim))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __str__(self):
        return self.render()

    def __repr__(self):
        return "FunctionExpr(%s)" % self.render()


def _render_term(key, c: QI, names, n) -> str:
    factors = []
    for j in range(n):
        e = key[j]
        if e == 1:
            factors.append(names[j])
        elif e > 1:
            factors.append("%s^%d" % (names[j], e))
    wave = key[n:]
    if any(wave):
        factors.append("e(%s)" % ",".join(str(w) for w in wave))
    if not factors:
        return c.render()
    body = "*".join(factors)
    if c == ONE:
        return body
    if c == QI(-1):
        return "-" + body
    return c.render() + "*" + body


def fn_mul(f: FunctionExpr, g: FunctionExpr) -> FunctionExpr:
    """Pointwise product; exponents and wave-vectors add."""
    if f.dim != g.dim:
        raise DimensionError("dimension mismatch: %d vs %d" % (f.dim, g.dim))
    if not f.terms or not g.terms:
        return FunctionExpr.zero(f.dim)
    out: Dict[Tuple[int, ...], QI] = {}
    get = out.get
    for k1, c1 in f.terms.items():
        for k2, c2 in g.terms.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            c = c1 * c2
            prev = get(k)
            out[k] = c if prev is None else prev + c
    return FunctionExpr(f.dim, {k: c for k, c in out.items() if c}, True)


def partial(mu: int, f: FunctionExpr) -> FunctionExpr:
    """Partial derivative along coordinate ``mu``."""
    n = f.dim
    if not 0 <= mu < n:
        raise IndexError("coordinate index %d out of range for dimension %d" % (mu, n))
    out: Dict[Tuple[int, ...], QI] = {}
    for key, c in f.terms.items():
        a = key[mu]
        if a:
            k2 = key[:mu] + (a - 1,) + key[mu + 1:]
            v = c * a
            out[k2] = out[k2] + v if k2 in out else v
        w = key[n + mu]
        if w:
            v = c * I * w
            out[key] = out[key] + v if key in out else v
    return FunctionExpr(n, {k: c for k, c in out.items() if c}, True)


def sum_functions(items: Iterable[FunctionExpr], dim: int) -> FunctionExpr:
    out = FunctionExpr.zero(dim)
    for f in items:
        out = out + f
    return out
