"""Report assembly, canonical text rendering and atomic JSON output."""
from __future__ import annotations

import json
import os
import tempfile
from typing import Dict, List, Sequence

from . import __version__
from .scalars import LambdaSeries

__all__ = ["render_series", "build_report", "dumps", "write_atomic", "summary_lines"]


def _with_lambda(text: str, single: bool, d: int) -> str:
    lam = "L" if d == 1 else "L^%d" % d
    body = text if single else "(%s)" % text
    return "%s*%s" % (body, lam)


def render_series(s: LambdaSeries, names: Sequence[str] | None = None) -> str:
    """``x1*x2 + (1/2)i*L``: one block per lambda-order, zero orders omitted."""
    parts = []
    for d, c in sorted(s.items(), key=lambda kv: kv[0]):
        text = c.render(names) if names is not None else c.render()
        if d == 0:
            parts.append(text)
        else:
            single = len(getattr(c, "terms", ())) == 1 or len(getattr(c, "comps", ())) == 1
            parts.append(_with_lambda(text, single, d))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def build_report(config: Dict, records: List[Dict], timing: Dict | None = None) -> Dict:
    failed = [r for r in records if r["status"] != "pass"]
    rep = {
        "tool": "twistgeom",
        "version": __version__,
        "seed": config.get("seed"),
        "config": config,
        "records": records,
        "summary": {"checks": len(records), "passed": len(records) - len(failed), "failed": len(failed),
                    "status": "pass" if not failed else "fail"},
    }
    if timing is not None:
        rep["timing"] = timing
    return rep


def dumps(report: Dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str):
    """Write through a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".report-", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def summary_lines(report: Dict) -> List[str]:
    lines = []
    for r in report["records"]:
        res = r.get("residual")
        tail = "" if res is None else " residual=%s" % ",".join("%s:%d" % kv for kv in sorted(res.items()))
        lines.append("%-4s %-9s %-32s %-16s cases=%d%s" % (
            "PASS" if r["status"] == "pass" else "FAIL", r["suite"], r["id"], r["family"], r["cases"], tail))
    s = report["summary"]
    lines.append("%d checks, %d passed, %d failed" % (s["checks"], s["passed"], s["failed"]))
    return lines
