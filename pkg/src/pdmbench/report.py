"""Render benchmark reports as text, CSV and JSON tables."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .bench.pipelines import PIPELINE_NAMES
from .bench.runner import REPORT_FORMAT_VERSION, BenchmarkReport

FORMATS = ("txt", "csv", "json")

PERFORMANCE_COLUMNS = ("Model", "Total Cost", "Savings", "Savings %", "Recall", "Precision",
                       "F1", "TP", "FP", "FN")
GENERALIZATION_COLUMNS = ("Model", "Train Savings %", "Test Savings %", "Gap (pp)")


class ReportFormatError(ValueError):
    pass


def _label(pid: str) -> str:
    return f"{pid}: {PIPELINE_NAMES.get(pid, pid)}"


def performance_rows(report: BenchmarkReport) -> list[dict]:
    avg = report.averages()
    rows = []
    for p in report.pipelines:
        a = avg[p]
        rows.append({
            "model": p, "n_seeds": a["n_seeds"],
            "total_cost": a["total_cost"], "savings_usd": a["savings_usd"],
            "savings_pct": a["savings_pct"], "recall": a["recall"],
            "precision": a["precision"], "f1": a["f1"],
            "tp": a["tp"], "fp": a["fp"], "fn": a["fn"],
        })
    return rows


def generalization_rows(report: BenchmarkReport) -> list[dict]:
    avg = report.averages()
    return [{"model": p, "n_seeds": avg[p]["n_seeds"],
             "train_savings_pct": avg[p]["train_savings_pct"],
             "test_savings_pct": avg[p]["test_savings_pct"],
             "gap_pp": avg[p]["gap_pp"]} for p in report.pipelines]


def _text_table(header, body) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *body)]
    line = lambda cells: "  ".join(  # noqa: E731
        str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(cells, widths)))
    sep = "-" * len(line(header))
    return "\n".join([sep, line(header), sep, *map(line, body), sep]) + "\n"


def _money(v):
    return "failed" if v is None else f"{int(round(v)):,}"


def _pct(v):
    return "failed" if v is None else f"{100 * v:.1f}%"


def _ratio(v):
    return "failed" if v is None else f"{v:.3f}"


def _count(v):
    if v is None:
        return "failed"
    return f"{v:.0f}" if float(v).is_integer() else f"{v:.1f}"


def _footer(report: BenchmarkReport, rows) -> str:
    n = len(report.seeds)
    notes = [f"Means over seeds {', '.join(map(str, report.seeds))}."]
    partial = [r["model"] for r in rows if r["n_seeds"] < n]
    if partial:
        notes.append("Incomplete (failed cells excluded from means): " + ", ".join(partial) + ".")
    return "\n".join(notes) + "\n"


def render_performance(report: BenchmarkReport, fmt: str = "txt") -> str:
    rows = performance_rows(report)
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(rows, ["model", "total_cost", "savings_usd", "savings_pct", "recall",
                           "precision", "f1", "tp", "fp", "fn", "n_seeds"])
    if fmt != "txt":
        raise ValueError(f"unknown format {fmt!r}")
    body = [[_label(r["model"]), _money(r["total_cost"]), _money(r["savings_usd"]),
             _pct(r["savings_pct"]), _pct(r["recall"]), _pct(r["precision"]), _ratio(r["f1"]),
             _count(r["tp"]), _count(r["fp"]), _count(r["fn"])] for r in rows]
    return ("Model performance, costs and savings (test set, USD)\n"
            + _text_table(PERFORMANCE_COLUMNS, body) + _footer(report, rows))


def render_generalization(report: BenchmarkReport, fmt: str = "txt") -> str:
    rows = generalization_rows(report)
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _csv(rows, ["model", "train_savings_pct", "test_savings_pct", "gap_pp", "n_seeds"])
    if fmt != "txt":
        raise ValueError(f"unknown format {fmt!r}")
    body = [[_label(r["model"]), _pct(r["train_savings_pct"]), _pct(r["test_savings_pct"]),
             "failed" if r["gap_pp"] is None else f"{r['gap_pp']:.2f}"] for r in rows]
    return ("Train-test savings comparison (gap = train - test, percentage points)\n"
            + _text_table(GENERALIZATION_COLUMNS, body) + _footer(report, rows))


def _csv(rows, fields) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(fields)
    for r in rows:
        w.writerow(["" if r[f] is None else repr(r[f]) if isinstance(r[f], float) else r[f]
                    for f in fields])
    return buf.getvalue()


def render_causal(report: BenchmarkReport) -> str:
    out = ["Causal graph"]
    out += ["  " + e for e in report.config.get("dag_edges", [])]
    out.append(f"  sha256 {report.config.get('dag_sha256', '?')}")
    out.append("")
    out.append("Backdoor identification and adjusted linear effects on failure (full dataset)")
    header = ("Treatment", "Adjustment set", "Coefficient", "Std. error")
    body = []
    for row in report.causal:
        if not row["identifiable"]:
            body.append([row["treatment"], "not identifiable", "-", "-"])
            continue
        z = "{" + ", ".join(row["adjustment"]) + "}" if row["adjustment"] else "{} (no backdoor path)"
        body.append([row["treatment"], z, f"{row['coefficient']:.6g}", f"{row['std_error']:.3g}"])
    out.append(_text_table(header, body).rstrip("\n"))
    per_seed = [(r.seed, r.diagnostics.get("causal_insights")) for r in report.results
                if r.pipeline == "L5" and r.ok and r.diagnostics.get("causal_insights")]
    if per_seed:
        out.append("")
        out.append("Per-seed estimates on training splits (L5)")
        header = ("Seed", "Treatment", "Coefficient", "Std. error")
        body = [[str(seed), row["treatment"],
                 "-" if row["coefficient"] is None else f"{row['coefficient']:.6g}",
                 "-" if row["std_error"] is None else f"{row['std_error']:.3g}"]
                for seed, rows in per_seed for row in rows]
        out.append(_text_table(header, body).rstrip("\n"))
    return "\n".join(out) + "\n"


def _jsonable(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def dump_report(report: BenchmarkReport) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=_jsonable) + "\n"


def load_report(text: str | bytes) -> BenchmarkReport:
    raw = text if isinstance(text, bytes) else text.encode("utf-8")
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ReportFormatError(f"results dump is not UTF-8 (byte offset {exc.start})") from None
    except json.JSONDecodeError as exc:
        offset = len(raw.decode("utf-8")[: exc.pos].encode("utf-8"))
        raise ReportFormatError(f"corrupt results dump at byte offset {offset}: {exc.msg}") from None
    if not isinstance(data, dict) or "format_version" not in data:
        raise ReportFormatError("not a results dump: missing format_version")
    if data["format_version"] != REPORT_FORMAT_VERSION:
        raise ReportFormatError(f"incompatible results dump: format_version {data['format_version']}"
                                f" (this build reads {REPORT_FORMAT_VERSION})")
    try:
        return BenchmarkReport.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ReportFormatError(f"results dump is missing fields: {exc}") from None
