import json
import os

import pytest

from twistgeom.parse import parse_function
from twistgeom.report import build_report, dumps, render_series, summary_lines, write_atomic
from twistgeom.scalars import LambdaSeries
from twistgeom.suites import SUITES, SuiteConfig, digest, run_suite, run_suites

SMALL = dict(order=2, pairs=3, triples=6, uenv=2, connections=1, mode_pairs=4)


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig(order=0)
    with pytest.raises(ValueError):
        SuiteConfig(suites=["twist", "nope"])
    with pytest.raises(ValueError):
        SuiteConfig(families=["quantum-group"])
    cfg = SuiteConfig()
    assert cfg.to_json()["seed"] == 42 and cfg.order == 4 and tuple(cfg.suites) == SUITES


@pytest.mark.parametrize("name", SUITES)
def test_each_suite_passes_on_a_small_corpus(name):
    records = run_suite(name, SuiteConfig(suites=[name], **SMALL))
    assert records
    bad = [r for r in records if r["status"] != "pass"]
    assert not bad
    for r in records:
        assert set(r) >= {"suite", "id", "family", "cases", "inputs", "status"}
        assert all(v == 0 for v in r.get("residual", {}).values())


def test_seed_changes_inputs_but_not_verdicts():
    a, _ = run_suites(SuiteConfig(suites=["poisson"], seed=1, **SMALL))
    b, _ = run_suites(SuiteConfig(suites=["poisson"], seed=2, **SMALL))
    assert [r["inputs"] for r in a] != [r["inputs"] for r in b]
    assert all(r["status"] == "pass" for r in a + b)


def test_family_filter():
    records = run_suite("twist", SuiteConfig(suites=["twist"], families=["jordanian"], **SMALL))
    assert {r["family"] for r in records} == {"jordanian"}


def test_digest_is_stable():
    f = parse_function("x1 + 2*x2", 2)
    assert digest([f, [f, "a"]]) == digest([parse_function("2*x2 + x1", 2), [f, "a"]])
    assert len(digest([])) == 16


def test_render_series():
    f = parse_function("x1*x2", 2)
    s = LambdaSeries({0: f, 1: parse_function("i/2", 2), 2: parse_function("x1 - x2", 2)}, 3)
    assert render_series(s) == "x1*x2 + (1/2)i*L + (-x2 + x1)*L^2"
    assert render_series(LambdaSeries({1: -f}, 2)) == "-x1*x2*L"
    assert render_series(LambdaSeries({}, 2)) == "0"


def test_report_summary_and_timing_isolation():
    recs = [{"suite": "s", "id": "a", "family": "f", "cases": 2, "inputs": "0", "residual": {"0": 0},
             "status": "pass"},
            {"suite": "s", "id": "b", "family": "f", "cases": 1, "inputs": "0", "status": "fail"}]
    rep = build_report({"seed": 5}, recs, {"s": 1.5})
    assert rep["summary"] == {"checks": 2, "passed": 1, "failed": 1, "status": "fail"}
    assert rep["seed"] == 5
    plain = build_report({"seed": 5}, recs)
    assert dumps({k: v for k, v in rep.items() if k != "timing"}) == dumps(plain)
    lines = summary_lines(rep)
    assert lines[0].startswith("PASS") and lines[1].startswith("FAIL")
    assert lines[-1] == "2 checks, 1 passed, 1 failed"


def test_write_atomic(tmp_path):
    path = tmp_path / "r.json"
    path.write_text("old")
    write_atomic(str(path), dumps({"x": 1}))
    assert json.loads(path.read_text()) == {"x": 1}
    assert os.listdir(tmp_path) == ["r.json"]
