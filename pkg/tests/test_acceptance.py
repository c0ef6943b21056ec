"""One test per acceptance criterion; each prints a single PASS/FAIL line.

The full default verification run (all suites, order 4, seed 42) is executed
once and shared; every criterion reads the records it needs from it and
requires exact zero residuals at every lambda-order.
"""
import json
import time

import pytest

from twistgeom.cli import main
from twistgeom.report import build_report, dumps
from twistgeom.suites import SuiteConfig, run_suites


@pytest.fixture(scope="module")
def run():
    cfg = SuiteConfig()
    t0 = time.perf_counter()
    records, timing = run_suites(cfg)
    timing["total"] = time.perf_counter() - t0
    return cfg, records, timing


def pick(records, suite, ids=None, families=None):
    out = [r for r in records if r["suite"] == suite
           and (ids is None or r["id"] in ids) and (families is None or r["family"] in families)]
    assert out, "no records for %s %s" % (suite, ids)
    return out


def exact(records):
    """All records pass and every residual count is zero."""
    return all(r["status"] == "pass" and all(v == 0 for v in r.get("residual", {}).values()) for r in records)


def cases(records, rid, family=None):
    return sum(r["cases"] for r in records if r["id"] == rid and (family is None or r["family"] == family))


LINES = []


def report(n, ok, detail):
    line = "criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", detail)
    LINES.append(line)
    print(line)
    assert ok, detail


def test_01_twist_axioms(run):
    cfg, records, timing = run
    recs = pick(records, "twist", {"twist-cocycle", "twist-counit", "twist-inverse-cocycle", "twist-inverse"})
    fams = {r["family"] for r in recs}
    moyal2 = sum(1 for r in recs if r["family"] == "moyal-R2" and r["id"] == "twist-cocycle")
    moyal3 = sum(1 for r in recs if r["family"] == "moyal-R3" and r["id"] == "twist-cocycle")
    ok = (exact(recs) and cfg.order >= 4 and fams == {"moyal-R2", "moyal-R3", "jordanian", "ext_jordanian"}
          and moyal2 == 3 and moyal3 == 3 and timing["twist"] < 20)
    report(1, ok, "cocycle/counit exact through order %d, 3+3 Moyal thetas, %.1fs" % (cfg.order, timing["twist"]))


def test_02_associativity(run):
    cfg, records, timing = run
    recs = pick(records, "starcalc", {"star-associativity"})
    counts = {r["family"]: r["cases"] for r in recs}
    ok = exact(recs) and set(counts) == {"moyal", "jordanian", "ext_jordanian"} and min(counts.values()) >= 50
    report(2, ok, "(f*g)*h = f*(g*h) on %s triples, starcalc suite %.1fs" % (counts, timing["starcalc"]))
    assert timing["starcalc"] < 30


def test_03_r_commutativity(run):
    _, records, _ = run
    recs = pick(records, "starcalc", {"star-r-commutativity"})
    counts = {r["family"]: r["cases"] for r in recs}
    ok = exact(recs) and len(counts) == 3 and min(counts.values()) >= 50
    report(3, ok, "f*g = Rbar(g)*Rbar(f) on %s pairs" % counts)


def test_04_lie_laws(run):
    _, records, _ = run
    recs = pick(records, "starcalc", {"bracket-antisymmetry", "bracket-jacobi", "bracket-as-operator"})
    jac = min(cases(recs, "bracket-jacobi", f) for f in ("moyal", "jordanian", "ext_jordanian"))
    op = min(cases(recs, "bracket-as-operator", f) for f in ("moyal", "jordanian", "ext_jordanian"))
    ok = exact(recs) and jac >= 30 and op >= 1
    report(4, ok, "antisymmetry and Jacobi on >= %d triples per family; operator form on %d pairs (deg 6)"
           % (jac, op))


def test_05_x_and_d_maps(run):
    cfg, records, _ = run
    recs = pick(records, "starcalc", {"x-after-d", "d-homomorphism", "d-after-x"})
    xd = min(cases(recs, "x-after-d", f) for f in ("moyal", "jordanian", "ext_jordanian"))
    hom = min(cases(recs, "d-homomorphism", f) for f in ("moyal", "jordanian", "ext_jordanian"))
    ok = exact(recs) and cfg.order >= 3 and xd >= 20 and 2 * hom >= 20
    report(5, ok, "X(D(xi)) = xi on %d elements, D(xi*zeta) = D(xi)D(zeta) on %d pairs per family" % (xd, hom))


def test_06_geometry(run):
    cfg, records, timing = run
    ids = {"cartan-torsion", "cartan-curvature", "bianchi-first", "bianchi-second"}
    recs = pick(records, "geometry", ids)
    per = min(r["cases"] for r in recs)
    flat = pick(records, "geometry", {"flat-control"})
    fams = {r["family"] for r in recs}
    ok = (exact(recs) and exact(flat) and per >= 10 and fams == {"moyal", "jordanian", "ext_jordanian"}
          and cfg.order >= 3 and timing["geometry"] < 60)
    report(6, ok, "structure equations and Bianchi identities on %d connections per family, flat control zero, "
           "%.1fs" % (per, timing["geometry"]))


def test_07_torsion_curvature_maps(run):
    _, records, _ = run
    ids = {"torsion-antisymmetry", "torsion-linearity", "curvature-antisymmetry", "curvature-linearity"}
    recs = pick(records, "geometry", ids)
    ok = exact(recs) and {r["id"] for r in recs} == ids and len({r["family"] for r in recs}) == 3
    report(7, ok, "left linearity and braided antisymmetry of torsion and curvature, %d records" % len(recs))


def test_08_star_poisson(run):
    _, records, _ = run
    ids = {"poisson-antisymmetry", "poisson-jacobi", "poisson-leibniz", "poisson-explicit-route",
           "poisson-lie-route", "poisson-morphism"}
    recs = pick(records, "poisson", ids)
    nt = pick(records, "poisson", {"poisson-nontrivial"})
    ok = exact(recs) and {r["id"] for r in recs} == ids and exact(nt)
    report(8, ok, "bracket laws, routes and morphism exact; deformed bracket differs on %s" % nt[0].get("example"))


def test_09_modes(run):
    _, records, timing = run
    ids = {"phase-display-aa", "phase-display-a*a", "phase-display-aa*", "phase-display-a*a*", "mode-brackets",
           "star-ccr", "braided-ccr-equivalence", "braided-ccr-expanded", "undeformed-ccr", "field-brackets-K2",
           "field-brackets-K4"}
    recs = pick(records, "modes", ids)
    ok = exact(recs) and {r["id"] for r in recs} == ids and timing["modes"] < 10
    report(9, ok, "phase relations, mode brackets, CCR forms and lattice field brackets (|K| = 2, 4), %.2fs"
           % timing["modes"])


def test_10_correspondence(run):
    _, records, _ = run
    lead = pick(records, "modes", {"correspondence-leading"})
    low = pick(records, "modes", {"correspondence-exact-low-degree"})
    ok = exact(lead) and exact(low) and lead[0]["cases"] >= 30 and low[0]["cases"] >= 1
    report(10, ok, "leading-hbar residual zero on %d pairs (deg <= 4), exact on %d low-degree pairs; "
           "%d subleading terms recorded" % (lead[0]["cases"], low[0]["cases"], lead[0].get("higher_order_terms", 0)))


def test_11_degeneration(run):
    _, records, _ = run
    recs = [r for r in records if r["id"].startswith("degeneration-") or r["id"] == "flat-control"]
    suites = {r["suite"] for r in recs}
    ok = exact(recs) and suites == {"starcalc", "geometry", "poisson", "modes"}
    report(11, ok, "identity twist matches classical operations in %s (%d cases)"
           % (sorted(suites), sum(r["cases"] for r in recs)))


def test_12_determinism(run, tmp_path, capsys):
    cfg, records, timing = run
    first = dumps(build_report(cfg.to_json(), records))
    out = tmp_path / "report.json"
    code = main(["verify", "--seed", "42", "--no-timing", "--quiet", "--out", str(out)])
    capsys.readouterr()
    second = out.read_text()
    timed = build_report(cfg.to_json(), records, {k: v for k, v in timing.items() if k != "total"})
    untimed = dumps({k: v for k, v in timed.items() if k != "timing"})
    ok = code == 0 and first == second and untimed == first and json.loads(second)["seed"] == 42
    report(12, ok, "two independent full runs give byte-identical reports (%d bytes)" % len(second))
