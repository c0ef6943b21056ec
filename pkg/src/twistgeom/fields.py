"""Vector fields, 1-forms, mixed tensors and exterior forms on R^n.

Tensors carry a slot signature: ``"u"`` for a vector (contravariant) slot and
``"d"`` for a covector slot, in tensor-product order.  Exterior forms are
stored separately on strictly increasing index tuples with the determinant
convention ``dx^1 ^ dx^2 = dx^1 (x) dx^2 - dx^2 (x) dx^1``.
"""
from __future__ import annotations

from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from .functions import DimensionError, FunctionExpr, default_names, fn_mul, partial
from .scalars import QI

__all__ = [
    "Tensor",
    "VectorField",
    "OneForm",
    "Form",
    "lie_bracket",
    "pairing",
    "contract",
    "lie",
    "apply_vf",
    "as_form",
]


def _add_into(out: Dict, key, f: FunctionExpr):
    if not f:
        return
    prev = out.get(key)
    if prev is None:
        out[key] = f
    else:
        s = prev + f
        if s:
            out[key] = s
        else:
            del out[key]


class Tensor:
    """Mixed tensor field ``sum comps[idx] * slot_0 (x) slot_1 (x) ...``."""

    __slots__ = ("dim", "slots", "comps", "_hash")

    def __init__(self, dim: int, slots: Sequence[str], comps: Dict[Tuple[int, ...], FunctionExpr] | None = None):
        self.dim = dim
        self.slots = tuple(slots)
        if any(s not in ("u", "d") for s in self.slots):
            raise ValueError("slot kinds must be 'u' or 'd'")
        clean = {}
        for idx, f in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != len(self.slots) or any(not 0 <= i < dim for i in idx):
                raise IndexError("bad component index %r" % (idx,))
            if f.dim != dim:
                raise DimensionError("component dimension %d differs from %d" % (f.dim, dim))
            if f:
                clean[idx] = f
        self.comps = clean
        self._hash = None

    @staticmethod
    def make(dim: int, slots: Sequence[str], comps: Dict) -> "Tensor":
        slots = tuple(slots)
        cls = _TENSOR_CLASSES.get(slots, Tensor)
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.slots = slots
        obj.comps = {k: f for k, f in comps.items() if f}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, dim: int, slots: Sequence[str]) -> "Tensor":
        return Tensor.make(dim, slots, {})

    @property
    def rank(self) -> int:
        return len(self.slots)

    def component(self, *idx) -> FunctionExpr:
        return self.comps.get(tuple(idx), FunctionExpr.zero(self.dim))

    def __bool__(self):
        return bool(self.comps)

    def _check(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            raise TypeError("expected a tensor, got %r" % type(other).__name__)
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (self.dim, other.dim))
        if self.slots != other.slots:
            raise ValueError("slot signatures differ: %r vs %r" % (self.slots, other.slots))

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for k, f in other.comps.items():
            _add_into(out, k, f)
        return Tensor.make(self.dim, self.slots, out)

    def __neg__(self):
        return Tensor.make(self.dim, self.slots, {k: -f for k, f in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, FunctionExpr):
            return self.scale_fn(c)
        c = QI.coerce(c)
        return Tensor.make(self.dim, self.slots, {k: f * c for k, f in self.comps.items()})

    def __rmul__(self, c):
        return self.__mul__(c)

    def scale_fn(self, h: FunctionExpr) -> "Tensor":
        return Tensor.make(self.dim, self.slots, {k: fn_mul(h, f) for k, f in self.comps.items()})

    def tensor(self, other: "Tensor") -> "Tensor":
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (self.dim, other.dim))
        out: Dict = {}
        for k1, f1 in self.comps.items():
            for k2, f2 in other.comps.items():
                _add_into(out, k1 + k2, fn_mul(f1, f2))
        return Tensor.make(self.dim, self.slots + other.slots, out)

    def swap(self) -> "Tensor":
        """Exchange the two slots of a rank-2 tensor."""
        if self.rank != 2:
            raise ValueError("swap needs a rank-2 tensor")
        return Tensor.make(self.dim, self.slots[::-1], {(b, a): f for (a, b), f in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.dim == other.dim and self.slots == other.slots and self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.slots, frozenset(self.comps.items())))
        return self._hash

    def sort_key(self):
        return (self.slots, tuple(sorted((k, f.sort_key()) for k, f in self.comps.items())))

    def max_degree(self) -> int:
        return max((f.degree() for f in self.comps.values()), default=-1)

    def render(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_names(self.dim)
        if not self.comps:
            return "0"
        parts = []
        for idx in sorted(self.comps):
            basis = "(x)".join(
                ("d_%s" if s == "u" else "d%s") % names[i] for s, i in zip(self.slots, idx)
            )
            parts.append("(%s)*%s" % (self.comps[idx].render(names), basis))
        return " + ".join(parts)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.render())


class VectorField(Tensor):
    """``sum_mu v^mu d/dx^mu``."""

    __slots__ = ()

    def __init__(self, components: Sequence[FunctionExpr]):
        components = list(components)
        dim = len(components)
        super().__init__(dim, ("u",), {(mu,): f for mu, f in enumerate(components)})

    @classmethod
    def basis(cls, mu: int, dim: int) -> "VectorField":
        comps = [FunctionExpr.zero(dim)] * dim
        comps[mu] = FunctionExpr.constant(1, dim)
        return cls(comps)

    def components(self) -> List[FunctionExpr]:
        return [self.component(mu) for mu in range(self.dim)]

    def __call__(self, f: FunctionExpr) -> FunctionExpr:
        return apply_vf(self, f)


class OneForm(Tensor):
    """``sum_nu w_nu dx^nu``."""

    __slots__ = ()

    def __init__(self, components: Sequence[FunctionExpr]):
        components = list(components)
        dim = len(components)
        super().__init__(dim, ("d",), {(mu,): f for mu, f in enumerate(components)})

    @classmethod
    def basis(cls, mu: int, dim: int) -> "OneForm":
        comps = [FunctionExpr.zero(dim)] * dim
        comps[mu] = FunctionExpr.constant(1, dim)
        return cls(comps)

    def components(self) -> List[FunctionExpr]:
        return [self.component(mu) for mu in range(self.dim)]


_TENSOR_CLASSES = {("u",): VectorField, ("d",): OneForm}


def _sort_sign(idx: Sequence[int]):
    """Sorted tuple and permutation sign, or ``(None, 0)`` on repeated index."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return None, 0
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign


class Form:
    """Exterior p-form ``sum_{I increasing} comps[I] dx^I``."""

    __slots__ = ("dim", "degree", "comps", "_hash")

    def __init__(self, dim: int, degree: int, comps: Dict[Tuple[int, ...], FunctionExpr] | None = None):
        self.dim = dim
        self.degree = degree
        clean: Dict = {}
        for idx, f in (comps or {}).items():
            if len(idx) != degree:
                raise ValueError("index %r does not match degree %d" % (idx, degree))
            s, sign = _sort_sign(idx)
            if s is None:
                continue
            _add_into(clean, s, f if sign > 0 else -f)
        self.comps = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim, degree, comps) -> "Form":
        obj = cls.__new__(cls)
        obj.dim, obj.degree, obj._hash = dim, degree, None
        obj.comps = {k: f for k, f in comps.items() if f}
        return obj

    @classmethod
    def zero(cls, dim: int, degree: int) -> "Form":
        return cls._raw(dim, degree, {})

    @classmethod
    def from_function(cls, f: FunctionExpr) -> "Form":
        return cls._raw(f.dim, 0, {(): f})

    @classmethod
    def from_oneform(cls, w: Tensor) -> "Form":
        if w.slots != ("d",):
            raise ValueError("expected a 1-form")
        return cls._raw(w.dim, 1, dict(w.comps))

    @classmethod
    def basis(cls, idx: Sequence[int], dim: int) -> "Form":
        return cls(dim, len(idx), {tuple(idx): FunctionExpr.constant(1, dim)})

    def __bool__(self):
        return bool(self.comps)

    def _check(self, other: "Form"):
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (self.dim, other.dim))
        if self.degree != other.degree:
            raise ValueError("form degrees differ: %d vs %d" % (self.degree, other.degree))

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for k, f in other.comps.items():
            _add_into(out, k, f)
        return Form._raw(self.dim, self.degree, out)

    def __neg__(self):
        return Form._raw(self.dim, self.degree, {k: -f for k, f in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, FunctionExpr):
            return self.scale_fn(c)
        c = QI.coerce(c)
        return Form._raw(self.dim, self.degree, {k: f * c for k, f in self.comps.items()})

    __rmul__ = __mul__

    def scale_fn(self, h: FunctionExpr) -> "Form":
        return Form._raw(self.dim, self.degree, {k: fn_mul(h, f) for k, f in self.comps.items()})

    def wedge(self, other: "Form") -> "Form":
        if self.dim != other.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (self.dim, other.dim))
        out: Dict = {}
        for k1, f1 in self.comps.items():
            for k2, f2 in other.comps.items():
                s, sign = _sort_sign(k1 + k2)
                if s is None:
                    continue
                g = fn_mul(f1, f2)
                _add_into(out, s, g if sign > 0 else -g)
        return Form._raw(self.dim, self.degree + other.degree, out)

    def d(self) -> "Form":
        out: Dict = {}
        for idx, f in self.comps.items():
            for mu in range(self.dim):
                if mu in idx:
                    continue
                g = partial(mu, f)
                if not g:
                    continue
                s, sign = _sort_sign((mu,) + idx)
                _add_into(out, s, g if sign > 0 else -g)
        return Form._raw(self.dim, self.degree + 1, out)

    def component(self, *idx) -> FunctionExpr:
        s, sign = _sort_sign(idx)
        if s is None or s not in self.comps:
            return FunctionExpr.zero(self.dim)
        f = self.comps[s]
        return f if sign > 0 else -f

    def to_tensor(self) -> Tensor:
        """Fully antisymmetric covariant tensor with the same action."""
        out: Dict = {}
        for idx, f in self.comps.items():
            for perm in permutations(range(self.degree)):
                img = tuple(idx[p] for p in perm)
                _, sign = _sort_sign(img)
                _add_into(out, img, f if sign > 0 else -f)
        return Tensor.make(self.dim, ("d",) * self.degree, out)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.dim == other.dim and self.degree == other.degree and self.comps == other.comps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, self.degree, frozenset(self.comps.items())))
        return self._hash

    def render(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_names(self.dim)
        if not self.comps:
            return "0"
        parts = []
        for idx in sorted(self.comps):
            basis = "^".join("d%s" % names[i] for i in idx) or "1"
            parts.append("(%s)*%s" % (self.comps[idx].render(names), basis))
        return " + ".join(parts)

    def __repr__(self):
        return "Form%d(%s)" % (self.degree, self.render())


def as_form(x) -> Form:
    if isinstance(x, Form):
        return x
    if isinstance(x, FunctionExpr):
        return Form.from_function(x)
    if isinstance(x, Tensor) and x.slots == ("d",):
        return Form.from_oneform(x)
    raise TypeError("cannot interpret %r as an exterior form" % type(x).__name__)


# -- classical operations ------------------------------------------------

def apply_vf(v: Tensor, f: FunctionExpr) -> FunctionExpr:
    """Directional derivative ``v(f) = v^mu d_mu f``."""
    if v.dim != f.dim:
        raise DimensionError("dimension mismatch: %d vs %d" % (v.dim, f.dim))
    out = FunctionExpr.zero(f.dim)
    for (mu,), c in v.comps.items():
        df = partial(mu, f)
        if df:
            out = out + fn_mul(c, df)
    return out


def lie_bracket(u: Tensor, v: Tensor) -> VectorField:
    """``[u, v](h) = u(v(h)) - v(u(h))``."""
    if u.dim != v.dim:
        raise DimensionError("dimension mismatch: %d vs %d" % (u.dim, v.dim))
    if u.slots != ("u",) or v.slots != ("u",):
        raise TypeError("lie_bracket expects vector fields")
    out: Dict = {}
    for mu in range(u.dim):
        f = apply_vf(u, v.component(mu)) - apply_vf(v, u.component(mu))
        if f:
            out[(mu,)] = f
    return Tensor.make(u.dim, ("u",), out)


def pairing(v: Tensor, w: Tensor) -> FunctionExpr:
    """``<v^mu d_mu, w_nu dx^nu> = v^mu w_mu``."""
    if v.dim != w.dim:
        raise DimensionError("dimension mismatch: %d vs %d" % (v.dim, w.dim))
    if v.slots != ("u",) or w.slots != ("d",):
        raise TypeError("pairing expects a vector field and a 1-form")
    out = FunctionExpr.zero(v.dim)
    for (mu,), f in v.comps.items():
        g = w.comps.get((mu,))
        if g is not None:
            out = out + fn_mul(f, g)
    return out


def contract(tau: Tensor, rho: Tensor, k: int | None = None):
    """Onion pairing: innermost slots are contracted first.

    The last ``k`` slots of ``tau`` (vectors) meet the first ``k`` slots of
    ``rho`` (covectors) in mirrored order; leftover slots are kept.  A
    rank-0 result is returned as a ``FunctionExpr``.
    """
    if tau.dim != rho.dim:
        raise DimensionError("dimension mismatch: %d vs %d" % (tau.dim, rho.dim))
    if k is None:
        k = min(tau.rank, rho.rank)
    inner_t = tau.slots[tau.rank - k:]
    inner_r = rho.slots[:k]
    if any(s != "u" for s in inner_t) or any(s != "d" for s in inner_r):
        raise ValueError("rank mismatch: cannot pair slots %r with %r" % (inner_t, inner_r))
    keep_t = tau.rank - k
    out: Dict = {}
    by_head: Dict = {}
    for s, g in rho.comps.items():
        by_head.setdefault(s[:k], []).append((s[k:], g))
    for t, f in tau.comps.items():
        head = t[keep_t:][::-1]
        for rest, g in by_head.get(head, ()):
            _add_into(out, t[:keep_t] + rest, fn_mul(f, g))
    slots = tau.slots[:keep_t] + rho.slots[k:]
    if not slots:
        return out.get((), FunctionExpr.zero(tau.dim))
    return Tensor.make(tau.dim, slots, out)


def _dv(v: Tensor):
    """``dv[m][a] = d_m v^a`` (zero entries omitted)."""
    table: Dict[int, Dict[int, FunctionExpr]] = {}
    for (a,), f in v.comps.items():
        for m in range(v.dim):
            g = partial(m, f)
            if g:
                table.setdefault(m, {})[a] = g
    return table


def _lie_tensor(v: Tensor, T: Tensor) -> Tensor:
    dim = T.dim
    dv = _dv(v)
    out: Dict = {}
    for idx, f in T.comps.items():
        _add_into(out, idx, apply_vf(v, f))
        for s, kind in enumerate(T.slots):
            m = idx[s]
            if kind == "u":
                # -T^{..m..} d_m v^a  placed at index a
                for a, g in dv.get(m, {}).items():
                    _add_into(out, idx[:s] + (a,) + idx[s + 1:], -fn_mul(f, g))
            else:
                # +T_{..m..} d_a v^m placed at index a
                for a in range(dim):
                    g = dv.get(a, {}).get(m)
                    if g is not None:
                        _add_into(out, idx[:s] + (a,) + idx[s + 1:], fn_mul(f, g))
    return Tensor.make(dim, T.slots, out)


def _lie_form(v: Tensor, w: Form) -> Form:
    dim = w.dim
    dv = _dv(v)
    out: Dict = {}
    for idx, f in w.comps.items():
        _add_into(out, idx, apply_vf(v, f))
        for s in range(w.degree):
            m = idx[s]
            for a in range(dim):
                g = dv.get(a, {}).get(m)
                if g is None:
                    continue
                target, sign = _sort_sign(idx[:s] + (a,) + idx[s + 1:])
                if target is None:
                    continue
                h = fn_mul(f, g)
                _add_into(out, target, h if sign > 0 else -h)
    return Form._raw(dim, w.degree, out)


def lie(v: Tensor, obj):
    """Lie derivative of a function, tensor or exterior form along ``v``."""
    if v.slots != ("u",):
        raise TypeError("Lie derivative needs a vector field")
    if isinstance(obj, FunctionExpr):
        return apply_vf(v, obj)
    if isinstance(obj, Tensor):
        if obj.dim != v.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (v.dim, obj.dim))
        if obj.slots == ("u",):
            return lie_bracket(v, obj)
        return _lie_tensor(v, obj)
    if isinstance(obj, Form):
        if obj.dim != v.dim:
            raise DimensionError("dimension mismatch: %d vs %d" % (v.dim, obj.dim))
        return _lie_form(v, obj)
    raise TypeError("no Lie derivative for %r" % type(obj).__name__)


def frame(dim: int):
    """Coordinate frame ``e_i = d_i`` and its dual ``theta^i = dx^i``."""
    return [VectorField.basis(i, dim) for i in range(dim)], [OneForm.basis(i, dim) for i in range(dim)]
