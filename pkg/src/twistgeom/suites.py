"""Verification suites: run the identity checks on seeded corpora and
collect one record per (check, twist family).

A record is a plain dict::

    {"id": ..., "family": ..., "cases": n, "inputs": digest,
     "residual": {order: term count}, "status": "pass" | "fail", ...}

Records carry no timing; suite wall-times are returned separately so the
report body stays byte-stable for a fixed configuration.
"""
from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from gmpy2 import mpq

from . import checks as C
from .corpus import (family_specs, mode_pairs, random_connection, random_mode_monomial, random_poly,
                     random_polys, random_theta, random_vector_field, rng, default_lattice)
from .fields import OneForm, VectorField, as_form, frame, lie_bracket, pairing
from .functions import FunctionExpr, fn_mul
from .geometry import FrameConnection, Geometry
from .hopf import UEnvElement
from .modes import (ANN, CRE, ClassicalModePoly, ModeLattice, correspondence_check, field_bracket_check,
                    mode_poisson, mode_poisson_star, mode_star, normal_order, quantize, quantum_star,
                    star_commutator)
from .poisson import (PhaseSpaceContext, compat_check, constants_check, explicit_star_poisson, lie_route_residual,
                      morphism_residual, poisson, star_poisson, time_evolution)
from .residual import Residual
from .scalars import QI
from .star import (StarContext, bracket_as_operator_residual, pairing_star, star_fn, star_lie_bracket,
                   star_lie_derivative, star_module, tensor_star, wedge_star)
from .twist import TwistSpec, check_cocycle, check_counit, check_inverse, check_inverse_cocycle, expand_twist

__all__ = ["SUITES", "SuiteConfig", "run_suite", "run_suites"]

SUITES = ("twist", "starcalc", "geometry", "poisson", "modes")
FAMILIES = ("moyal", "jordanian", "ext_jordanian")


@dataclass
class SuiteConfig:
    suites: Sequence[str] = SUITES
    order: int = 4
    seed: int = 42
    deg: int = 6
    families: Sequence[str] = FAMILIES
    pairs: int = 50
    triples: int = 30
    uenv: int = 20
    connections: int = 10
    mode_pairs: int = 30

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be at least 1")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ValueError("unknown suite %r" % bad[0])
        bad = [f for f in self.families if f not in FAMILIES]
        if bad:
            raise ValueError("unknown twist family %r" % bad[0])

    def to_json(self) -> Dict:
        return {
            "suites": list(self.suites), "order": self.order, "seed": self.seed, "deg": self.deg,
            "families": list(self.families),
            "sizes": {"pairs": self.pairs, "triples": self.triples, "uenv": self.uenv,
                      "connections": self.connections, "mode_pairs": self.mode_pairs},
        }


def _render(x) -> str:
    if hasattr(x, "render"):
        return x.render()
    if isinstance(x, (list, tuple)):
        return "[" + ",".join(_render(y) for y in x) + "]"
    return str(x)


def digest(items: Iterable) -> str:
    h = hashlib.sha256()
    for x in items:
        h.update(_render(x).encode())
        h.update(b"\n")
    return h.hexdigest()[:16]


class _Collector:
    def __init__(self, suite: str):
        self.suite = suite
        self.records: List[Dict] = []

    def add(self, cid: str, family: str, residuals: Sequence[Residual], inputs: Sequence = (), **extra):
        total = Residual()
        for r in residuals:
            total = total.merge(r)
        rec = {"suite": self.suite, "id": cid, "family": family, "cases": len(residuals),
               "inputs": digest(inputs), "residual": total.to_json(),
               "status": "pass" if total.ok else "fail"}
        rec.update(extra)
        self.records.append(rec)

    def flag(self, cid: str, family: str, ok: bool, inputs: Sequence = (), **extra):
        rec = {"suite": self.suite, "id": cid, "family": family, "cases": 1, "inputs": digest(inputs),
               "status": "pass" if ok else "fail"}
        rec.update(extra)
        self.records.append(rec)


def _families(cfg: SuiteConfig, r, dim: int) -> List[Tuple[str, TwistSpec]]:
    return [(n, s) for n, s in family_specs(r, dim) if n in cfg.families]


# -- twist ----------------------------------------------------------------------

def suite_twist(cfg: SuiteConfig) -> List[Dict]:
    r = rng(cfg.seed)
    out = _Collector("twist")
    specs: List[Tuple[str, TwistSpec]] = []
    if "moyal" in cfg.families:
        for dim in (2, 3):
            for _ in range(3):
                specs.append(("moyal", TwistSpec.moyal([[str(x) for x in row] for row in random_theta(r, dim)])))
    for name in ("jordanian", "ext_jordanian"):
        if name in cfg.families:
            specs.append((name, TwistSpec(name, 2)))
    for name, spec in specs:
        tw = expand_twist(spec, cfg.order)
        desc = [str(sorted(spec.describe().items()))]
        tag = name if name != "moyal" else "moyal-R%d" % spec.dim
        out.add("twist-cocycle", tag, [check_cocycle(tw, cfg.deg)], desc, twist=spec.describe())
        out.add("twist-inverse-cocycle", tag, [check_inverse_cocycle(tw, cfg.deg)], desc, twist=spec.describe())
        out.add("twist-counit", tag, [check_counit(tw, cfg.deg)], desc, twist=spec.describe())
        out.add("twist-inverse", tag, [check_inverse(tw, cfg.deg)], desc, twist=spec.describe())
    return out.records


# -- star calculus -----------------------------------------------------------------

def _uenv_corpus(r, ctx, count):
    out = []
    for j in range(count):
        u = UEnvElement.generator(random_vector_field(r, ctx.dim, 1), ctx.order)
        if j % 2:
            u = u * UEnvElement.generator(random_vector_field(r, ctx.dim, 1), ctx.order)
        out.append(u)
    return out


def suite_starcalc(cfg: SuiteConfig) -> List[Dict]:
    r = rng(cfg.seed)
    out = _Collector("starcalc")
    for name, spec in _families(cfg, r, 2):
        ctx = StarContext(spec, cfg.order)
        trip = [random_polys(r, 3) for _ in range(cfg.pairs)]
        out.add("star-associativity", name, [C.associativity(f, g, h, ctx) for f, g, h in trip], trip)
        pairs = [random_polys(r, 2) for _ in range(cfg.pairs)]
        out.add("star-r-commutativity", name, [C.r_commutativity(f, g, ctx) for f, g in pairs], pairs)
        vt = [[random_vector_field(r) for _ in range(3)] for _ in range(cfg.triples)]
        out.add("bracket-antisymmetry", name, [C.bracket_antisymmetry(u, v, ctx) for u, v, _ in vt], vt)
        out.add("bracket-jacobi", name, [C.bracket_jacobi(u, v, z, ctx) for u, v, z in vt], vt)
        vp = vt[:max(1, cfg.triples // 3)]
        out.add("bracket-as-operator", name,
                [bracket_as_operator_residual(u, v, ctx, cfg.deg) for u, v, _ in vp], vp)
        ue = _uenv_corpus(r, ctx, cfg.uenv)
        out.add("x-after-d", name, [C.xd_identity(x, ctx, cfg.deg) for x in ue], [x.render() for x in ue])
        # D o X is costly (chi produces long words); a small sample suffices as a cross-check
        few = ue[:max(1, cfg.uenv // 10)]
        out.add("d-after-x", name, [C.dx_identity(x, ctx, cfg.deg) for x in few], [x.render() for x in few])
        hp = list(zip(ue[::2], ue[1::2]))
        out.add("d-homomorphism", name, [C.d_homomorphism(a, b, ctx, cfg.deg) for a, b in hp])
        small = [(random_polys(r, 4), random_vector_field(r), random_vector_field(r)) for _ in range(5)]
        out.add("module-associativity", name, [C.module_associativity(f, g, u, ctx) for (f, g, _, _), u, _ in small])
        out.add("module-right-rule", name, [C.module_right_rule(u, f, ctx) for (f, _, _, _), u, _ in small])
        forms = [(OneForm([f, g]), OneForm([h, k])) for (f, g, h, k), _, _ in small]
        out.add("tensor-associativity", name,
                [C.tensor_associativity(u, w1, v, ctx) for ((_, _, _, _), u, v), (w1, _) in zip(small, forms)])
        out.add("wedge-antisymmetry", name, [C.wedge_antisymmetry(w1, w2, ctx) for w1, w2 in forms])
        out.add("d-squared", name, [C.d_squared(w1) for w1, _ in forms])
        out.add("d-leibniz", name, [C.d_leibniz(f, g, ctx) for (f, g, _, _), _, _ in small])
        out.add("pairing-left-linearity", name,
                [C.pairing_left_linearity(f, u, w1, g, ctx) for ((f, g, _, _), u, _), (w1, _) in zip(small, forms)])
        out.add("pairing-right-rule", name,
                [C.pairing_right_rule(u, f, w1, ctx) for ((f, _, _, _), u, _), (w1, _) in zip(small, forms)])
        out.add("pairing-onion", name,
                [C.onion_rule(u, v, w1, w2, ctx) for (_, u, v), (w1, w2) in zip(small, forms)])
        out.add("lie-module", name, [C.lie_module_property(u, v, f, ctx) for (f, _, _, _), u, v in small])
        out.add("lie-leibniz", name, [C.lie_leibniz(u, f, g, ctx) for (f, g, _, _), u, _ in small])
    _starcalc_degeneration(cfg, r, out)
    return out.records


def _starcalc_degeneration(cfg, r, out: _Collector):
    """Identity twist against the classical operations."""
    ctx = StarContext(TwistSpec.identity(2), cfg.order)
    res = []
    for _ in range(cfg.pairs):
        f, g = random_polys(r, 2)
        u, v = random_vector_field(r), random_vector_field(r)
        w = OneForm([f, g])
        res += [
            C.count(star_fn(f, g, ctx) - fn_mul(f, g)),
            C.count(star_module(f, u, ctx) - u.scale_fn(f)),
            C.count(tensor_star(u, w, ctx) - u.tensor(w)),
            C.count(wedge_star(w, OneForm([g, f]), ctx) - _wedge(w, OneForm([g, f]))),
            C.count(pairing_star(u, w, ctx) - pairing(u, w)),
            C.count(star_lie_derivative(u, f, ctx) - u(f)),
            C.count(star_lie_bracket(u, v, ctx) - lie_bracket(u, v)),
        ]
    out.add("degeneration-starcalc", "identity", res)


def _wedge(a, b):
    return as_form(a).wedge(as_form(b))


# -- geometry ---------------------------------------------------------------------

def suite_geometry(cfg: SuiteConfig) -> List[Dict]:
    r = rng(cfg.seed)
    out = _Collector("geometry")
    dim = 3
    for name, spec in _families(cfg, r, dim):
        ctx = StarContext(spec, cfg.order)
        conns = [random_connection(r, dim, cfg.order) for _ in range(cfg.connections)]
        res: Dict[str, List[Residual]] = {}
        for conn in conns:
            geo = Geometry(conn, ctx)
            for key, val in list(geo.cartan_residuals().items()) + list(geo.bianchi_residuals().items()):
                res.setdefault(key, []).append(val)
            res.setdefault("torsion-form-tensor", []).append(geo.torsion_form_tensor_residual())
        inputs = [sorted((k, _series_text(v)) for k, v in _gamma_items(c)) for c in conns]
        for key in ("cartan-torsion", "cartan-curvature", "bianchi-first", "bianchi-second", "torsion-form-tensor"):
            out.add(key, name, res[key], inputs)
        # map-level properties on a few connections and random inputs
        props: Dict[str, List[Residual]] = {}
        e, _ = frame(dim)
        for conn in conns[:2]:
            geo = Geometry(conn, ctx)
            h = random_poly(r, dim, 1, 2)
            u, v, z = e[r.randrange(dim)], random_vector_field(r, dim, 1), e[r.randrange(dim)]
            props.setdefault("torsion-antisymmetry", []).append(C.torsion_antisymmetry(geo, u, v))
            props.setdefault("torsion-linearity", []).append(C.torsion_linearity(geo, h, u, v))
            props.setdefault("curvature-antisymmetry", []).append(C.curvature_antisymmetry(geo, u, v, z))
            props.setdefault("curvature-linearity", []).append(C.curvature_linearity(geo, h, u, e[0], z))
            props.setdefault("cov-left-linearity", []).append(C.cov_left_linearity(geo, h, u, v))
            props.setdefault("cov-leibniz", []).append(C.cov_leibniz(geo, u, h, v))
            reass = []
            for a in range(dim):
                for b in range(dim):
                    reass.append(C.count(geo.reassembled_torsion(a, b) - geo.torsion(e[a], e[b])))
            props.setdefault("torsion-reassembly", []).extend(reass)
        # both factorizations of a rank-2 tensor agree only for connections that
        # commute with the twist action: the flat one, and constant ones for Moyal
        equi = [FrameConnection.flat(dim, cfg.order)]
        if spec.variant == "moyal":
            equi.append(FrameConnection(dim, {(0, 1, 2): FunctionExpr.constant(2, dim),
                                              (1, 1, 0): FunctionExpr.constant(-1, dim)}, cfg.order))
        for conn in equi:
            geo = Geometry(conn, ctx)
            for _ in range(2):
                u, v, z = (random_vector_field(r, dim, 1) for _ in range(3))
                h = random_poly(r, dim, 2, 2)
                props.setdefault("cov-tensor-routes", []).append(C.cov_tensor_routes(geo, u, v, h, z))
        for key, val in props.items():
            out.add(key, name, val)
    _geometry_degeneration(cfg, r, out)
    return out.records


def _series_text(s) -> str:
    return " + ".join("[L^%d](%s)" % (d, c.render()) for d, c in sorted(s.items(), key=lambda kv: kv[0]))


def _gamma_items(conn: FrameConnection):
    for key, s in conn.gamma.items():
        yield ",".join(map(str, key)), s


def _geometry_degeneration(cfg, r, out: _Collector):
    dim = 3
    ctx = StarContext(TwistSpec.identity(dim), cfg.order)
    e, _ = frame(dim)
    flat = Geometry(FrameConnection.flat(dim, cfg.order), ctx)
    T, Rc = flat.extract_coeffs()
    out.flag("flat-control", "identity", T.is_zero() and Rc.is_zero())
    res = []
    for _ in range(max(1, cfg.connections // 2)):
        conn = random_connection(r, dim, cfg.order, lambda_deg=0)
        geo = Geometry(conn, ctx)
        for a in range(dim):
            for b in range(dim):
                res.append(C.count(geo.torsion(e[a], e[b]) - C.classical_torsion(conn, e[a], e[b])))
        u, v = random_vector_field(r, dim, 1), random_vector_field(r, dim, 1)
        res.append(C.count(geo.torsion(u, v) - C.classical_torsion(conn, u, v)))
        res.append(C.count(geo.curvature(u, v, e[0]) - C.classical_curvature(conn, u, v, e[0])))
    out.add("degeneration-geometry", "identity", res)


# -- Poisson ------------------------------------------------------------------------

def suite_poisson(cfg: SuiteConfig) -> List[Dict]:
    r = rng(cfg.seed)
    out = _Collector("poisson")
    theta = random_theta(r, 2)
    ps = PhaseSpaceContext(2, [[str(x) for x in row] for row in theta], order=cfg.order)
    fam = "moyal-momentum"
    trip = [random_polys(r, 3, 4, 3) for _ in range(cfg.triples)]
    out.add("poisson-antisymmetry", fam, [C.poisson_antisymmetry(f, g, ps) for f, g, _ in trip], trip)
    out.add("poisson-jacobi", fam, [C.poisson_jacobi(f, g, h, ps) for f, g, h in trip], trip)
    out.add("poisson-leibniz", fam, [C.poisson_leibniz(f, g, h, ps) for f, g, h in trip], trip)
    out.add("poisson-explicit-route", fam,
            [C.count(star_poisson(f, g, ps) - explicit_star_poisson(f, g, ps)) for f, g, _ in trip], trip)
    out.add("poisson-lie-route", fam, [lie_route_residual(f, g, ps) for f, g, _ in trip], trip)
    out.add("poisson-morphism", fam, [morphism_residual(f, g, ps) for f, g, _ in trip[:10]], trip[:10])
    lam = ps.bivector
    differs = [(f, g) for f, g, _ in trip if star_poisson(f, g, ps) != poisson(f, g, lam)]
    out.flag("poisson-nontrivial", fam, bool(differs), differs[:1],
             example=[ps.render(x) for x in differs[0]] if differs else None)
    H = ps.parse("p1^2 + p2^2")
    evo = time_evolution(H, ps.parse("x1"), ps)
    out.flag("poisson-evolution", fam, evo == ps.parse("2*p1"), [H], value=ps.render(evo))
    cons = constants_check(H, [ps.parse("p1"), ps.parse("p2"), ps.parse("x1*p2 - x2*p1")], ps)
    out.flag("poisson-constants", fam, cons["ok"], [H])
    bad_gen = VectorField([ps.parse("x1")] + [FunctionExpr.zero(4)] * 3)
    out.flag("poisson-compatibility", fam,
             compat_check(ps.spec.generators, lam) and not compat_check([bad_gen], lam))
    # identity twist against the classical bracket
    ps0 = PhaseSpaceContext(2, order=cfg.order)
    out.add("degeneration-poisson", "identity",
            [C.count(star_poisson(f, g, ps0) - poisson(f, g, lam)) for f, g, _ in trip], trip)
    return out.records


# -- modes ------------------------------------------------------------------------------

def _display_phase(lattice: ModeLattice, p, q, factor):
    """Exponent vector of ``exp(i * factor * sum_{a,b} theta^{ab} p_a q_b)``, read off term by term."""
    d = lattice.d
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            # theta^{ij} p_i q_j + theta^{ji} p_j q_i with theta^{ji} = -theta^{ij}
            out.append(mpq(factor) * (p[i] * q[j] - p[j] * q[i]))
    return tuple(out)


def suite_modes(cfg: SuiteConfig) -> List[Dict]:
    r = rng(cfg.seed)
    out = _Collector("modes")
    lat = default_lattice()
    A = lambda k: ClassicalModePoly.a(lat, k)
    As = lambda k: ClassicalModePoly.astar(lat, k)
    neg = lambda k: tuple(-x for x in k)
    # the four displayed phase relations on every ordered pair of momenta
    res = {"aa": [], "a*a": [], "aa*": [], "a*a*": []}
    for k in lat.momenta:
        for kp in lat.momenta:
            for key, F, G, s in (("aa", A(k), A(kp), -1), ("a*a", As(k), A(kp), 1),
                                 ("aa*", A(k), As(kp), 1), ("a*a*", As(k), As(kp), -1)):
                expected = (F * G).scale(1, phase=_display_phase(lat, k, kp, mpq(s, 2)))
                res[key].append(C.count(mode_star(F, G) - expected))
    for key, val in res.items():
        out.add("phase-display-%s" % key, "moyal-modes", val)
    # basic brackets
    basic = []
    for k in lat.momenta:
        for kp in lat.momenta:
            delta = ClassicalModePoly.constant(lat, QI(0, -1), hbar=-1) if k == kp else ClassicalModePoly.zero(lat)
            basic.append(C.count(mode_poisson_star(A(k), As(kp)) - delta))
            basic.append(C.count(mode_poisson_star(A(k), A(kp))))
            basic.append(C.count(mode_poisson_star(As(k), As(kp))))
    out.add("mode-brackets", "moyal-modes", basic)
    # quantum relations
    Q = lambda kind, k: normal_order(lat, [(kind, k)])
    ccr, braided, expanded, undeformed = [], [], [], []
    for k in lat.momenta:
        for kp in lat.momenta:
            a, ad = Q(ANN, k), Q(CRE, kp)
            delta = normal_order(lat, [], 1 if k == kp else 0)
            ccr.append(C.count(star_commutator(a, ad) - delta))
            ccr.append(C.count(star_commutator(a, Q(ANN, kp))))
            lhs = quantum_star(a, ad) - quantum_star(ad, a).scale(1, phase=lat.phase(kp, k, -1))
            braided.append(C.count(lhs - delta))
            plain = a * ad - ad * a
            expanded.append(C.count(lhs - plain.scale(1, phase=lat.phase(k, kp, mpq(1, 2)))))
            undeformed.append(C.count(plain - delta))
    out.add("star-ccr", "moyal-modes", ccr)
    out.add("braided-ccr-equivalence", "moyal-modes", braided)
    out.add("braided-ccr-expanded", "moyal-modes", expanded)
    out.add("undeformed-ccr", "moyal-modes", undeformed)
    # field brackets for negation-closed sets of sizes 2 and 4
    lat2 = ModeLattice(2, [(1, 0), (-1, 0)])
    E4 = {}
    for k in [(1, 2), (2, -1)]:
        val = Fraction(r.randint(1, 9), r.randint(1, 9))
        E4[k] = E4[neg(k)] = str(val)
    lat4 = ModeLattice(2, [(1, 2), (-1, -2), (2, -1), (-2, 1)], E={tuple(k): v for k, v in E4.items()})
    for tag, L in (("K2", lat2), ("K4", lat4)):
        rep = field_bracket_check(L)
        out.flag("field-brackets-%s" % tag, "moyal-modes", rep["ok"],
                 detail={k: v for k, v in rep.items() if k != "ok"})
    # algebraic laws on a monomial corpus
    mono = [[random_mode_monomial(r, lat, r.randint(1, 2), lat.momenta[:3]) for _ in range(3)] for _ in range(10)]
    out.add("mode-associativity", "moyal-modes", [C.mode_associativity(F, G, H) for F, G, H in mono])
    out.add("mode-r-commutativity", "moyal-modes", [C.mode_r_commutativity(F, G) for F, G, _ in mono])
    quant = [[quantize(x) for x in t] for t in mono]
    for kind, corpus in (("poisson", mono), ("commutator", quant)):
        out.add("%s-antisymmetry" % kind, "moyal-modes",
                [C.mode_bracket_antisymmetry(F, G, kind) for F, G, _ in corpus])
        out.add("%s-leibniz" % kind, "moyal-modes", [C.mode_bracket_leibniz(F, G, H, kind) for F, G, H in corpus])
        out.add("%s-jacobi" % kind, "moyal-modes", [C.mode_bracket_jacobi(F, G, H, kind) for F, G, H in corpus])
    # correspondence
    pairs = mode_pairs(r, lat, cfg.mode_pairs)
    lead, exact, higher = [], [], 0
    for F, G in pairs:
        rep = correspondence_check(F, G)
        lead.append(Residual({0: rep["leading_residual_terms"]}))
        higher += rep["higher_residual_terms"]
        if _degree(F) + _degree(G) <= 2:
            exact.append(Residual({0: 0 if rep["exact_zero"] else 1}))
    out.add("correspondence-leading", "moyal-modes", lead, [p for pr in pairs for p in pr],
            higher_order_terms=higher)
    out.add("correspondence-exact-low-degree", "moyal-modes", exact)
    # theta = 0 degeneration
    lat0 = default_lattice(theta=[[0, 0], [0, 0]])
    deg0 = []
    for F, G in mode_pairs(r, lat0, 10, 2):
        deg0.append(C.count(mode_star(F, G) - F * G))
        deg0.append(C.count(mode_poisson_star(F, G) - mode_poisson(F, G)))
        Fq, Gq = quantize(F), quantize(G)
        deg0.append(C.count(star_commutator(Fq, Gq) - (Fq * Gq - Gq * Fq)))
    out.add("degeneration-modes", "identity", deg0)
    return out.records


def _degree(F: ClassicalModePoly) -> int:
    return max((len(k[0]) for k in F.terms), default=0)


# -- driver -------------------------------------------------------------------------------

_RUNNERS: Dict[str, Callable[[SuiteConfig], List[Dict]]] = {
    "twist": suite_twist,
    "starcalc": suite_starcalc,
    "geometry": suite_geometry,
    "poisson": suite_poisson,
    "modes": suite_modes,
}


def run_suite(name: str, cfg: SuiteConfig) -> List[Dict]:
    return _RUNNERS[name](cfg)


def run_suites(cfg: SuiteConfig) -> Tuple[List[Dict], Dict[str, float]]:
    records: List[Dict] = []
    timing: Dict[str, float] = {}
    for name in cfg.suites:
        t0 = time.perf_counter()
        records.extend(run_suite(name, cfg))
        timing[name] = round(time.perf_counter() - t0, 3)
    return records, timing
