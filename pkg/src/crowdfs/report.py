"""Report serialization: canonical JSON, CSV rows and markdown tables."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

from . import __version__

SCHEMA = "crowdfs.report/1"


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def manifest(command: str, parameters: dict, datasets: list[dict]) -> dict:
    return {
        "command": command,
        "datasets": datasets,
        "parameters": parameters,
        "tool_version": __version__,
    }


def dataset_entry(path, label_column) -> dict:
    return {"path": str(path), "sha256": file_sha256(path), "label_column": label_column}


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _pct(v) -> str:
    return f"{v:.2f}"


def _accuracy_cells(acc: dict) -> list[str]:
    return [_pct(acc["mean"]), _pct(acc["std"]), _pct(acc["worst"]), _pct(acc["best"])]


def filter_table(results: list[dict]) -> str:
    """Markdown table with one row per dataset and a column group per method."""
    rows = [r for r in results if r.get("mode") == "filter" and "accuracy" in r]
    if not rows:
        return ""
    methods = list(dict.fromkeys(r["method"] for r in rows))
    datasets = list(dict.fromkeys(r["dataset"] for r in rows))
    head = ["dataset", "# features selected"]
    for m in methods:
        head += [f"{m} mean", "std", "worst", "best"]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for d in datasets:
        bym = {r["method"]: r for r in rows if r["dataset"] == d}
        k = next(iter(bym.values()))["k"]
        cells = [d, str(k)]
        for m in methods:
            cells += _accuracy_cells(bym[m]["accuracy"]) if m in bym else ["-"] * 4
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def wrapper_table(results: list[dict]) -> str:
    rows = [r for r in results if r.get("mode") == "wrapper" and "accuracy" in r]
    if not rows:
        return ""
    head = ["dataset", "# features for best accuracy", "mean", "std", "worst", "best"]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        frac = f"{r['best_run']['n_selected']}/{r['n_features']}"
        lines.append("| " + " | ".join([r["dataset"], frac] + _accuracy_cells(r["accuracy"])) + " |")
    return "\n".join(lines) + "\n"


def to_markdown(report: dict) -> str:
    if report["command"] == "rank":
        rk = report["ranking"]
        lines = [f"# Ranking ({rk['method']})", "", "| rank | index | feature | score |", "|---|---|---|---|"]
        for pos, f in enumerate(rk["features"], start=1):
            s = f["score"]
            score = f"{s['boundary_count']} + {s['finite_sum']:.6f}" if isinstance(s, dict) else f"{s:.6g}"
            lines.append(f"| {pos} | {f['index']} | {f['name']} | {score} |")
        return "\n".join(lines) + "\n"
    if report["command"] == "compare":
        lines = ["| dataset | A | B | U | p | method | significant at 0.05 |", "|---|---|---|---|---|---|---|"]
        for t in report["tests"]:
            lines.append(
                f"| {t['dataset']} | {t['a']} | {t['b']} | {t['U']:g} | {t['p_value']:.4g} | "
                f"{t['method']} | {'yes' if t['significant_at_0.05'] else 'no'} |"
            )
        return "\n".join(lines) + "\n"
    parts = []
    ft = filter_table(report["results"])
    if ft:
        parts += ["## Filter methods (accuracy %)", "", ft]
    wt = wrapper_table(report["results"])
    if wt:
        parts += ["## Wrapper (accuracy %)", "", wt]
    failed = [r for r in report["results"] if "error" in r]
    if failed:
        parts += ["## Failures", ""] + [f"- {r['dataset']}: {r['error']}" for r in failed] + [""]
    return "\n".join(parts)


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report["command"] == "rank":
        w.writerow(["rank", "index", "feature", "boundary_count", "finite_sum", "score"])
        for pos, f in enumerate(report["ranking"]["features"], start=1):
            s = f["score"]
            if isinstance(s, dict):
                w.writerow([pos, f["index"], f["name"], s["boundary_count"], repr(s["finite_sum"]), ""])
            else:
                w.writerow([pos, f["index"], f["name"], "", "", repr(s)])
        return buf.getvalue()
    if report["command"] == "compare":
        w.writerow(["dataset", "a", "b", "U", "p_value", "method", "significant_at_0.05"])
        for t in report["tests"]:
            w.writerow([t["dataset"], t["a"], t["b"], t["U"], t["p_value"], t["method"], t["significant_at_0.05"]])
        return buf.getvalue()
    w.writerow(["dataset", "mode", "method", "n_selected", "mean", "std", "worst", "best"])
    for r in report["results"]:
        if "error" in r:
            continue
        n_sel = r["k"] if r["mode"] == "filter" else r["best_run"]["n_selected"]
        a = r["accuracy"]
        w.writerow([r["dataset"], r["mode"], r["method"], n_sel, a["mean"], a["std"], a["worst"], a["best"]])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "markdown":
        return to_markdown(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")
