"""Star covariant derivatives, torsion and curvature over the coordinate frame.

The frame is ``e_i = d_i`` with dual ``theta^j = dx^j``.  A connection is
given by coefficients ``Gamma_ij^k`` (lambda series of functions) through
``nabla_{e_i} e_j = Gamma_ij^k * e_k``.  Vector fields are decomposed as
``u = u^i * e_i`` with ``u^i = <u, theta^i>*`` and the derivative is extended
by the two defining axioms

    nabla_{h*u} v = h * nabla_u v
    nabla_u (h*v) = L*_u(h) * v + Rbar^a(h) * nabla_{Rbar_a(u)} v
"""
from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .fields import Form, VectorField, as_form, frame
from .functions import DimensionError
from .parse import parse_function
from .residual import Residual, series_residual
from .scalars import LambdaSeries, QI
from .star import (
    StarContext,
    exterior_d,
    pairing_star,
    pairing_star_tensor,
    rswap,
    series,
    star_lie_bracket,
    star_lie_derivative,
    star_module,
    star_right,
    tensor_star,
    twisted,
    wedge_star,
)

__all__ = [
    "FrameConnection",
    "Geometry",
    "TorsionTensor",
    "CurvatureTensor",
    "ConnectionForms",
]


class FrameConnection:
    """``Gamma[(i, j, k)] = Gamma_ij^k`` as lambda series of functions."""

    def __init__(self, dim: int, gamma: Dict[Tuple[int, int, int], object] | None = None, order: int = 0):
        self.dim = dim
        self.order = order
        self.gamma: Dict[Tuple[int, int, int], LambdaSeries] = {}
        for key, val in (gamma or {}).items():
            i, j, k = key
            if not all(0 <= x < dim for x in key):
                raise IndexError("connection index %r out of range" % (key,))
            s = LambdaSeries.promote(val, order)
            for c in s.coeffs.values():
                if c.dim != dim:
                    raise DimensionError("coefficient on R^%d in a connection on R^%d" % (c.dim, dim))
            if s:
                self.gamma[(i, j, k)] = s

    @classmethod
    def flat(cls, dim: int, order: int = 0) -> "FrameConnection":
        return cls(dim, {}, order)

    def coeff(self, i: int, j: int, k: int) -> LambdaSeries:
        return self.gamma.get((i, j, k), LambdaSeries({}, self.order))

    def is_flat(self) -> bool:
        return not self.gamma

    @classmethod
    def from_json(cls, doc, dim: int, order: int) -> "FrameConnection":
        """``{"i,j,k": literal}`` with 1-based or 0-based indices (``base`` key, default 1).

        A literal may also be a list ``[lambda^0 literal, lambda^1 literal, ...]``.
        """
        base = int(doc.get("base", 1)) if isinstance(doc, dict) else 1
        gamma = {}
        for key, val in doc.items():
            if key == "base":
                continue
            idx = tuple(int(x) - base for x in key.replace(" ", "").split(","))
            if len(idx) != 3:
                raise ValueError("connection key %r must have three indices" % key)
            if isinstance(val, list):
                gamma[idx] = LambdaSeries({d: parse_function(str(s), dim) for d, s in enumerate(val)}, order)
            else:
                gamma[idx] = parse_function(str(val), dim)
        return cls(dim, gamma, order)


def _vkey(s: LambdaSeries):
    return tuple((d, c) for d, c in s.items())


class TorsionTensor:
    def __init__(self, comps: Dict[Tuple[int, int, int], LambdaSeries], dim: int):
        self.comps = comps
        self.dim = dim

    def __getitem__(self, idx) -> LambdaSeries:
        return self.comps[idx]

    def is_zero(self) -> bool:
        return all(not s for s in self.comps.values())


class CurvatureTensor(TorsionTensor):
    pass


class ConnectionForms:
    """``omega[i][j]``, ``Theta[l]`` and ``Omega[k][l]`` as series of exterior forms."""

    def __init__(self, omega, Theta, Omega):
        self.omega = omega
        self.Theta = Theta
        self.Omega = Omega


class Geometry:
    """Derived geometric objects of a connection under a twist, with caching."""

    def __init__(self, conn: FrameConnection, ctx: StarContext):
        if conn.dim != ctx.dim:
            raise DimensionError("connection on R^%d, twist on R^%d" % (conn.dim, ctx.dim))
        self.conn = conn
        self.ctx = ctx
        self.dim = ctx.dim
        self.order = ctx.order
        self.e, self.theta = frame(self.dim)
        self._comp_cache: Dict = {}
        self._nf_cache: Dict = {}
        self._ne_cache: Dict = {}
        self._torsion = None
        self._curvature = None

    # -- building blocks ---------------------------------------------------
    def zero(self) -> LambdaSeries:
        return LambdaSeries({}, self.order)

    def components(self, u) -> List[LambdaSeries]:
        """``u^i = <u, theta^i>*``."""
        u = series(u, self.ctx)
        key = _vkey(u)
        hit = self._comp_cache.get(key)
        if hit is None:
            hit = [pairing_star(u, self.theta[i], self.ctx) for i in range(self.dim)]
            self._comp_cache[key] = hit
        return hit

    def _nabla_frame(self, w: VectorField, j: int) -> LambdaSeries:
        """``nabla_w e_j = <w, theta^k>* * Gamma_kj^m * e_m``."""
        key = (w, j)
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        ctx = self.ctx
        wk = self.components(w)
        out = self.zero()
        for m in range(self.dim):
            coeff = self.zero()
            for k in range(self.dim):
                g = self.conn.coeff(k, j, m)
                if not g or not wk[k]:
                    continue
                coeff = coeff + twisted(wk[k], g, _fmul, ctx)
            if coeff:
                out = out + star_module(coeff, self.e[m], ctx)
        self._nf_cache[key] = out
        return out

    def nabla_e(self, i: int, v) -> LambdaSeries:
        """``nabla_{e_i} v`` for a vector field (series) ``v``."""
        v = series(v, self.ctx)
        key = (i, _vkey(v))
        hit = self._ne_cache.get(key)
        if hit is not None:
            return hit
        ctx = self.ctx
        out = self.zero()
        for j, vj in enumerate(self.components(v)):
            if not vj:
                continue
            out = out + star_module(star_lie_derivative(self.e[i], vj, ctx), self.e[j], ctx)
            out = out + twisted(vj, self.e[i], lambda h, w, j=j: star_module(h, self._nabla_frame(w, j), ctx),
                                ctx, ctx.rinv)
        self._ne_cache[key] = out
        return out

    # -- public operations -------------------------------------------------
    def cov_deriv(self, u, v) -> LambdaSeries:
        """``nabla*_u v = u^i * nabla_{e_i} v``."""
        self.ctx.check_dim(u, v)
        out = self.zero()
        for i, ui in enumerate(self.components(u)):
            if ui:
                out = out + star_module(ui, self.nabla_e(i, v), self.ctx)
        return out

    def cov_deriv_tensor(self, u, factors: Sequence) -> LambdaSeries:
        """``nabla*_u (v1 (x)* v2 (x)* ...)`` by the deformed Leibniz rule.

        ``nabla_u(v (x)* Z) = nabla_u(v) (x)* Z + Rbar^a(v) (x)* nabla_{Rbar_a(u)}(Z)``.

        The rule acts on the given factorization.  The result only depends on
        the tensor itself (``(v * h) (x)* z`` versus ``v (x)* (h * z)``) when
        the connection commutes with the twist action, e.g. a flat one.
        """
        factors = [series(f, self.ctx) for f in factors]
        if not 1 <= len(factors) <= 3:
            raise ValueError("tensor rank %d unsupported (1..3)" % len(factors))
        if len(factors) == 1:
            return self.cov_deriv(u, factors[0])
        ctx = self.ctx
        v, rest = factors[0], factors[1:]
        Z = _tensor_chain(rest, ctx)
        first = tensor_star(self.cov_deriv(u, v), Z, ctx)
        second = twisted(v, u, lambda a, w: tensor_star(a, self.cov_deriv_tensor(w, rest), ctx), ctx, ctx.rinv)
        return first + second

    def torsion(self, u, v) -> LambdaSeries:
        """``T(u,v) = nabla_u v - nabla_{Rbar^a(v)} Rbar_a(u) - [u,v]*``."""
        ctx = self.ctx
        return (self.cov_deriv(u, v)
                - rswap(u, v, self.cov_deriv, ctx)
                - star_lie_bracket(u, v, ctx))

    def curvature(self, u, v, z) -> LambdaSeries:
        """``R(u,v,z) = nabla_u nabla_v z - nabla_{Rbar^a(v)} nabla_{Rbar_a(u)} z - nabla_{[u,v]*} z``."""
        ctx = self.ctx
        first = self.cov_deriv(u, self.cov_deriv(v, z))
        second = rswap(u, v, lambda a, b: self.cov_deriv(a, self.cov_deriv(b, z)), ctx)
        third = self.cov_deriv(star_lie_bracket(u, v, ctx), z)
        return first - second - third

    def torsion_coeffs(self) -> TorsionTensor:
        """``T_ij^l = <T(e_i, e_j), theta^l>*``."""
        if self._torsion is None:
            n, ctx = self.dim, self.ctx
            comps = {}
            for i in range(n):
                for j in range(n):
                    T = self.torsion(self.e[i], self.e[j])
                    for l in range(n):
                        comps[(i, j, l)] = pairing_star(T, self.theta[l], ctx)
            self._torsion = TorsionTensor(comps, n)
        return self._torsion

    def curvature_coeffs(self) -> CurvatureTensor:
        """``R_ijk^l = <R(e_i, e_j, e_k), theta^l>*``."""
        if self._curvature is None:
            n, ctx = self.dim, self.ctx
            comps = {}
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        Rv = self.curvature(self.e[i], self.e[j], self.e[k])
                        for l in range(n):
                            comps[(i, j, k, l)] = pairing_star(Rv, self.theta[l], ctx)
            self._curvature = CurvatureTensor(comps, n)
        return self._curvature

    def extract_coeffs(self) -> Tuple[TorsionTensor, CurvatureTensor]:
        return self.torsion_coeffs(), self.curvature_coeffs()

    # -- forms ---------------------------------------------------------------
    def _wedge_frame(self, j: int, i: int) -> LambdaSeries:
        return wedge_star(self.theta[j], self.theta[i], self.ctx)

    def connection_forms(self, curvature_index: str = "ijk") -> ConnectionForms:
        """``omega_i^j = theta^k * Gamma_ki^j``, ``Theta^l = -1/2 theta^j ^* theta^i * T_ij^l``,
        ``Omega_k^l = -1/2 theta^j ^* theta^i * R_ijk^l``.

        ``curvature_index="kij"`` uses ``R_kij^l`` instead (kept to document
        that this ordering breaks the second structural equation).
        """
        n, ctx = self.dim, self.ctx
        half = QI(-1) / 2
        omega = [[self.zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = self.zero()
                for k in range(n):
                    g = self.conn.coeff(k, i, j)
                    if g:
                        acc = acc + star_right(self.theta[k], g, ctx)
                omega[i][j] = acc.map(as_form)
        T = self.torsion_coeffs()
        Rc = self.curvature_coeffs()
        wedges = {(j, i): self._wedge_frame(j, i) for i in range(n) for j in range(n) if i != j}
        Theta = []
        for l in range(n):
            acc = self.zero()
            for (j, i), w in wedges.items():
                c = T[(i, j, l)]
                if c:
                    acc = acc + star_right(w, c, ctx)
            Theta.append(acc.scale(half))
        Omega = [[None] * n for _ in range(n)]
        for k in range(n):
            for l in range(n):
                acc = self.zero()
                for (j, i), w in wedges.items():
                    c = Rc[(i, j, k, l)] if curvature_index == "ijk" else Rc[(k, i, j, l)]
                    if c:
                        acc = acc + star_right(w, c, ctx)
                Omega[k][l] = acc.scale(half)
        return ConnectionForms(omega, Theta, Omega)

    def cartan_residuals(self, forms: ConnectionForms | None = None) -> Dict[str, Residual]:
        """Residuals of ``Theta^l = d theta^l - theta^k ^* omega_k^l`` and
        ``Omega_k^l = d omega_k^l - omega_k^m ^* omega_m^l``."""
        forms = forms or self.connection_forms()
        n, ctx = self.dim, self.ctx
        om = forms.omega
        r1 = Residual({d: 0 for d in range(self.order + 1)})
        for l in range(n):
            rhs = series(Form.zero(n, 2), ctx)
            rhs = rhs + series(as_form(self.theta[l]).d(), ctx)
            for k in range(n):
                rhs = rhs - wedge_star(self.theta[k], om[k][l], ctx)
            r1 = r1.merge(series_residual(forms.Theta[l] - rhs))
        r2 = Residual({d: 0 for d in range(self.order + 1)})
        for k in range(n):
            for l in range(n):
                rhs = exterior_d(om[k][l])
                for m in range(n):
                    rhs = rhs - wedge_star(om[k][m], om[m][l], ctx)
                r2 = r2.merge(series_residual(forms.Omega[k][l] - rhs))
        return {"cartan-torsion": r1, "cartan-curvature": r2}

    def bianchi_residuals(self, forms: ConnectionForms | None = None) -> Dict[str, Residual]:
        """Residuals of ``d Theta^i + Theta^j ^* omega_j^i - theta^j ^* Omega_j^i`` and
        ``d Omega_k^l + Omega_k^m ^* omega_m^l - omega_k^m ^* Omega_m^l``."""
        forms = forms or self.connection_forms()
        n, ctx = self.dim, self.ctx
        om, Th, Om = forms.omega, forms.Theta, forms.Omega
        r1 = Residual({d: 0 for d in range(self.order + 1)})
        for i in range(n):
            acc = exterior_d(Th[i])
            for j in range(n):
                acc = acc + wedge_star(Th[j], om[j][i], ctx) - wedge_star(self.theta[j], Om[j][i], ctx)
            r1 = r1.merge(series_residual(acc))
        r2 = Residual({d: 0 for d in range(self.order + 1)})
        for k in range(n):
            for l in range(n):
                acc = exterior_d(Om[k][l])
                for m in range(n):
                    acc = acc + wedge_star(Om[k][m], om[m][l], ctx) - wedge_star(om[k][m], Om[m][l], ctx)
                r2 = r2.merge(series_residual(acc))
        return {"bianchi-first": r1, "bianchi-second": r2}

    # -- reassembly ----------------------------------------------------------
    def reassembled_torsion(self, a: int, b: int) -> LambdaSeries:
        """``<e_a (x)* e_b, theta^j (x)* theta^i * T_ij^l (x)* e_l>*``."""
        ctx, n = self.ctx, self.dim
        T = self.torsion_coeffs()
        big = self.zero()
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    c = T[(i, j, l)]
                    if not c:
                        continue
                    left = star_right(tensor_star(self.theta[j], self.theta[i], ctx), c, ctx)
                    big = big + tensor_star(left, self.e[l], ctx)
        return pairing_star_tensor(tensor_star(self.e[a], self.e[b], ctx), big, ctx)

    def reassembled_curvature(self, a: int, b: int, c_: int) -> LambdaSeries:
        """``<e_a (x)* e_b (x)* e_c, theta^k (x)* theta^j (x)* theta^i * R_ijk^l (x)* e_l>*``."""
        ctx, n = self.ctx, self.dim
        Rc = self.curvature_coeffs()
        big = self.zero()
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        c = Rc[(i, j, k, l)]
                        if not c:
                            continue
                        th = tensor_star(tensor_star(self.theta[k], self.theta[j], ctx), self.theta[i], ctx)
                        left = star_right(th, c, ctx)
                        big = big + tensor_star(left, self.e[l], ctx)
        inner = tensor_star(tensor_star(self.e[a], self.e[b], ctx), self.e[c_], ctx)
        return pairing_star_tensor(inner, big, ctx)

    def torsion_form_tensor_residual(self) -> Residual:
        """``Theta^l`` as an antisymmetric tensor equals ``-(theta^j (x)* theta^i) * T_ij^l``."""
        ctx, n = self.ctx, self.dim
        T = self.torsion_coeffs()
        forms = self.connection_forms()
        res = Residual({d: 0 for d in range(self.order + 1)})
        for l in range(n):
            acc = forms.Theta[l].map(lambda f: f.to_tensor())
            for i in range(n):
                for j in range(n):
                    c = T[(i, j, l)]
                    if c:
                        acc = acc + star_right(tensor_star(self.theta[j], self.theta[i], ctx), c, ctx)
            res = res.merge(series_residual(acc))
        return res


def _fmul(a, b):
    return a * b


def _tensor_chain(factors, ctx) -> LambdaSeries:
    out = factors[0]
    for f in factors[1:]:
        out = tensor_star(out, f, ctx)
    return out
