"""Command-line front end.

Subcommands: ``star``, ``bracket``, ``verify``, ``geometry``, ``modes``.
Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Sequence

from .corpus import mode_pairs, rng
from .functions import DimensionError
from .geometry import FrameConnection, Geometry
from .modes import LatticeError, ModeLattice, correspondence_check, field_bracket_check
from .parse import ParseError, parse_function, parse_vector
from .poisson import IncompatibleTwistError, PhaseSpaceContext, poisson, star_poisson
from .report import build_report, dumps, render_series, summary_lines, write_atomic
from .residual import Residual
from .scalars import as_rational
from .star import StarContext, star_fn, star_lie_bracket
from .suites import SUITES, SuiteConfig, _Collector, run_suites
from .twist import TwistSpec, TwistSpecError

__all__ = ["main", "build_parser"]

USAGE_ERRORS = (ParseError, DimensionError, TwistSpecError, IncompatibleTwistError, LatticeError,
                ValueError, KeyError, TypeError, IndexError, json.JSONDecodeError, OSError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, "%s: error: %s\n" % (self.prog, message))


def parse_theta(text: str, dim: int) -> List[List]:
    """JSON matrix, or comma-separated upper-triangle entries ``t12,t13,...,t23,...``."""
    text = text.strip()
    if text.startswith("["):
        rows = json.loads(text)
        return [[as_rational(str(x)) for x in row] for row in rows]
    vals = [as_rational(v) for v in text.split(",") if v.strip()]
    need = dim * (dim - 1) // 2
    if len(vals) != need:
        raise UsageError("theta needs %d upper-triangle entries for dimension %d" % (need, dim))
    th = [[as_rational(0)] * dim for _ in range(dim)]
    it = iter(vals)
    for i in range(dim):
        for j in range(i + 1, dim):
            x = next(it)
            th[i][j], th[j][i] = x, -x
    return th


def _twist_from_args(args) -> TwistSpec:
    if args.family == "moyal":
        return TwistSpec.moyal(parse_theta(args.theta, args.dim))
    if args.family == "jordanian":
        return TwistSpec.jordanian(args.dim)
    return TwistSpec.ext_jordanian(args.dim)


def _default_order(fallback: int = 4) -> int:
    env = os.environ.get("NC_ORDER")
    if env is None:
        return fallback
    try:
        val = int(env)
    except ValueError:
        raise UsageError("NC_ORDER must be an integer, got %r" % env)
    return val


def _order(args, fallback: int = 4) -> int:
    order = args.order if args.order is not None else _default_order(fallback)
    if order < 1:
        raise UsageError("order must be at least 1")
    return order


# -- subcommands ----------------------------------------------------------------

def cmd_star(args) -> int:
    spec = _twist_from_args(args)
    ctx = StarContext(spec, _order(args, 2))
    f = parse_function(args.f, args.dim)
    g = parse_function(args.g, args.dim)
    print(render_series(star_fn(f, g, ctx)))
    return 0


def cmd_bracket(args) -> int:
    order = _order(args, 4)
    if args.kind == "poisson":
        theta = parse_theta(args.theta, args.n)
        ps = PhaseSpaceContext(args.n, theta, order=order)
        f, g = ps.parse(args.f), ps.parse(args.g)
        print("star:      " + ps.render(star_poisson(f, g, ps)))
        print("classical: " + ps.render(poisson(f, g, ps.bivector)))
        return 0
    spec = _twist_from_args(args)
    ctx = StarContext(spec, order)
    u = parse_vector(args.f.split(";"), args.dim)
    v = parse_vector(args.g.split(";"), args.dim)
    print(render_series(star_lie_bracket(u, v, ctx)))
    return 0


CONFIG_KEYS = {"suites", "order", "seed", "deg", "families", "sizes", "out",
               "pairs", "triples", "uenv", "connections", "mode_pairs"}
SIZE_KEYS = ("pairs", "triples", "uenv", "connections", "mode_pairs")


def _load_config(path: str) -> Dict:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = sorted(set(doc) - CONFIG_KEYS)
    if unknown:
        raise UsageError("unknown config key %r" % unknown[0])
    return doc


def suite_config(args, doc: Dict) -> SuiteConfig:
    """Command-line flags override the config file, which overrides the defaults."""
    suites = args.suite or doc.get("suites") or ["all"]
    if "all" in suites:
        suites = list(SUITES)
    kw = {}
    sizes = dict(doc.get("sizes") or {})
    sizes.update({k: doc[k] for k in SIZE_KEYS if k in doc})
    for k, v in sizes.items():
        if k not in SIZE_KEYS:
            raise UsageError("unknown corpus size %r" % k)
        kw[k] = int(v)
    deg = args.deg if args.deg is not None else doc.get("deg")
    if deg is not None:
        kw["deg"] = int(deg)
    families = args.family or doc.get("families")
    if families:
        kw["families"] = list(families)
    order = args.order if args.order is not None else doc.get("order", _default_order(4))
    seed = args.seed if args.seed is not None else doc.get("seed", 42)
    return SuiteConfig(suites=list(suites), order=int(order), seed=int(seed), **kw)


def cmd_verify(args) -> int:
    doc = _load_config(args.config) if args.config else {}
    cfg = suite_config(args, doc)
    records, timing = run_suites(cfg)
    report = build_report(cfg.to_json(), records, None if args.no_timing else timing)
    out = args.out or doc.get("out")
    if out:
        write_atomic(out, dumps(report))
    if not args.quiet:
        print("\n".join(summary_lines(report)))
    return 0 if report["summary"]["status"] == "pass" else 1


def cmd_geometry(args) -> int:
    with open(args.scenario) as fh:
        doc = json.load(fh)
    spec = TwistSpec.from_json(doc.get("twist", {"variant": "moyal", "dim": 3}))
    order = args.order if args.order is not None else int(doc.get("order", _default_order(3)))
    ctx = StarContext(spec, order)
    conn = FrameConnection.from_json(doc.get("connection", {}), spec.dim, order)
    geo = Geometry(conn, ctx)
    out = _Collector("geometry")
    fam = spec.variant
    for key, res in list(geo.cartan_residuals().items()) + list(geo.bianchi_residuals().items()):
        out.add(key, fam, [res])
    out.add("torsion-form-tensor", fam, [geo.torsion_form_tensor_residual()])
    T, R = geo.extract_coeffs()
    coeffs = {
        "torsion": {",".join(str(i + 1) for i in k): render_series(v) for k, v in sorted(T.comps.items()) if v},
        "curvature": {",".join(str(i + 1) for i in k): render_series(v) for k, v in sorted(R.comps.items()) if v},
    }
    report = build_report({"scenario": os.path.basename(args.scenario), "order": order, "twist": spec.describe(),
                           "seed": None}, out.records)
    report["coefficients"] = coeffs
    return _emit(report, args)


def cmd_modes(args) -> int:
    with open(args.lattice) as fh:
        doc = json.load(fh)
    lat = ModeLattice.from_json(doc)
    out = _Collector("modes")
    if not lat.is_negation_closed():
        raise UsageError("momentum set must be closed under negation")
    rep = field_bracket_check(lat)
    out.flag("field-brackets", "lattice", rep["ok"], detail={k: v for k, v in rep.items() if k != "ok"})
    lead = []
    for F, G in mode_pairs(rng(args.seed), lat, args.pairs):
        c = correspondence_check(F, G)
        lead.append(Residual({0: c["leading_residual_terms"]}))
    out.add("correspondence-leading", "lattice", lead)
    report = build_report({"lattice": os.path.basename(args.lattice), "seed": args.seed}, out.records)
    return _emit(report, args)


def _emit(report: Dict, args) -> int:
    text = dumps(report)
    if getattr(args, "out", None):
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["status"] == "pass" else 1


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="twistgeom", description="Exact twisted differential geometry toolkit")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    def twist_args(sp, dim=2):
        sp.add_argument("--dim", type=int, default=dim)
        sp.add_argument("--family", choices=("moyal", "jordanian", "ext_jordanian"), default="moyal")
        sp.add_argument("--theta", default="0", help="JSON matrix or upper-triangle entries t12,t13,...")
        sp.add_argument("--order", type=int, default=None)

    s = sub.add_parser("star", help="print f * g through the given order")
    twist_args(s)
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    s.set_defaults(fn=cmd_star)

    b = sub.add_parser("bracket", help="twisted Poisson or Lie bracket")
    twist_args(b)
    b.add_argument("--kind", choices=("poisson", "lie"), default="poisson")
    b.add_argument("--n", type=int, default=2, help="degrees of freedom (poisson)")
    b.add_argument("--f", required=True, help="function, or vector components separated by ';'")
    b.add_argument("--g", required=True)
    b.set_defaults(fn=cmd_bracket)

    v = sub.add_parser("verify", help="run identity suites and write a JSON report")
    v.add_argument("--suite", action="append", choices=SUITES + ("all",))
    v.add_argument("--family", action="append", choices=("moyal", "jordanian", "ext_jordanian"))
    v.add_argument("--order", type=int, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--deg", type=int, default=None, help="degree bound for operator equality")
    v.add_argument("--out", default=None)
    v.add_argument("--config", default=None)
    v.add_argument("--no-timing", action="store_true")
    v.add_argument("--quiet", action="store_true")
    v.set_defaults(fn=cmd_verify)

    g = sub.add_parser("geometry", help="torsion, curvature and structure equations for a scenario")
    g.add_argument("scenario")
    g.add_argument("--order", type=int, default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(fn=cmd_geometry)

    m = sub.add_parser("modes", help="field-mode checks on a lattice scenario")
    m.add_argument("lattice")
    m.add_argument("--seed", type=int, default=42)
    m.add_argument("--pairs", type=int, default=30)
    m.add_argument("--out", default=None)
    m.set_defaults(fn=cmd_modes)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError,) + USAGE_ERRORS as exc:
        print("twistgeom: error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
