"""Command-line front end.

Exit codes: 0 success, 1 partial benchmark failure, 2 dataset error,
3 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .crowding import CrowdingScore
from .data import DatasetError, load_csv
from .evaluation import DEFAULT_SEED, ClassifierConfig, EvalConfig, repeated_eval, worker_count
from .rankers import METHODS, rank_features
from .report import SCHEMA, dataset_entry, file_sha256, manifest, render, to_json
from .selection import filter_select, repeated_wrapper
from .stats import wilcoxon_rank_sum

EXIT_OK, EXIT_PARTIAL, EXIT_DATASET, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _score_json(s):
    return s.as_dict() if isinstance(s, CrowdingScore) else float(s)


def _classifier(args) -> ClassifierConfig:
    return ClassifierConfig(args.classifier, args.knn_k, args.svm_lambda, args.svm_epochs)


def _run_parameters(args) -> dict:
    return {
        "mode": args.mode,
        "method": args.method,
        "k": args.k,
        "classifier": _classifier(args).as_dict(),
        "folds": args.folds,
        "reps": args.reps,
        "seed": args.seed,
        "threshold": args.threshold,
        "relieff_k": args.relieff_k,
        "trace": args.trace,
    }


def filter_entry(ds, method, k, ranking, classifier, ecfg, workers, timing=False) -> dict:
    sel = filter_select(ranking, k)
    rep = repeated_eval(ds, sel.selected, classifier, ecfg, workers=workers)
    out = {
        "dataset": ds.name,
        "mode": "filter",
        "method": method,
        "k": k,
        "n_features": ds.n_features,
        "selected": list(sel.selected),
        "selected_names": [ds.feature_names[j] for j in sel.selected],
        "accuracy": rep.as_dict(),
    }
    if timing:
        out["runtime_s"] = rep.runtime
    return out


def wrapper_entry(ds, method, ranking, classifier, ecfg, threshold, workers, trace=False, timing=False) -> dict:
    runs = repeated_wrapper(ds, ranking, classifier, ecfg, threshold, workers=workers)
    run_dicts = []
    for r, res in enumerate(runs.runs):
        d = {
            "repetition": r,
            "best_accuracy": res.best_accuracy,
            "n_selected": len(res.selected),
            "selected": list(res.selected),
        }
        if trace:
            d["trace"] = res.as_dict()["trace"]
        run_dicts.append(d)
    best_idx = runs.runs.index(runs.best_run)
    best = dict(run_dicts[best_idx])
    best.pop("trace", None)
    best["selected_names"] = [ds.feature_names[j] for j in runs.best_run.selected]
    out = {
        "dataset": ds.name,
        "mode": "wrapper",
        "method": method,
        "threshold": threshold,
        "n_features": ds.n_features,
        "accuracy": runs.report.as_dict(),
        "best_run": best,
        "runs": run_dicts,
    }
    if timing:
        out["runtime_s"] = runs.report.runtime
    return out


def cmd_rank(args) -> dict:
    ds = load_csv(args.dataset, args.label_col)
    ranking = rank_features(ds, args.method, args.relieff_k)
    return {
        "schema": SCHEMA,
        "command": "rank",
        "manifest": manifest(
            "rank",
            {"method": args.method, "relieff_k": args.relieff_k},
            [dataset_entry(args.dataset, args.label_col)],
        ),
        "ranking": {
            "dataset": ds.name,
            "method": ranking.method,
            "order": list(ranking.order),
            "features": [
                {"index": j, "name": ds.feature_names[j], "score": _score_json(ranking.scores[j])}
                for j in ranking.order
            ],
        },
    }


def cmd_select(args) -> dict:
    if args.mode == "filter" and args.k is None:
        raise UsageError("--mode filter requires --k")
    if args.mode == "wrapper":
        args.k = None
    classifier = _classifier(args)
    ecfg = EvalConfig(args.folds, args.reps, args.seed)
    ds = load_csv(args.dataset, args.label_col)
    if args.mode == "filter" and not 1 <= args.k <= ds.n_features:
        raise UsageError(f"--k must be between 1 and {ds.n_features}")
    ranking = rank_features(ds, args.method, args.relieff_k)
    workers = worker_count()
    if args.mode == "filter":
        entry = filter_entry(ds, args.method, args.k, ranking, classifier, ecfg, workers, args.timing)
    else:
        entry = wrapper_entry(
            ds, args.method, ranking, classifier, ecfg, args.threshold, workers, args.trace, args.timing
        )
    return {
        "schema": SCHEMA,
        "command": "select",
        "manifest": manifest("select", _run_parameters(args), [dataset_entry(args.dataset, args.label_col)]),
        "results": [entry],
    }


def _load_benchmark_config(path: Path) -> dict:
    try:
        cfg = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"no such config file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {path}: {exc}") from None
    if not isinstance(cfg, dict) or not cfg.get("datasets"):
        raise UsageError("benchmark config must list at least one dataset")
    for m in cfg.get("methods", []):
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r} in config")
    for d in cfg["datasets"]:
        if "path" not in d or "k" not in d:
            raise UsageError("every dataset entry needs 'path' and 'k'")
    return cfg


def cmd_benchmark(args) -> tuple[dict, int]:
    cfg_path = Path(args.config)
    cfg = _load_benchmark_config(cfg_path)
    base = cfg_path.parent
    classifier = ClassifierConfig(**cfg.get("classifier", {}))
    ecfg = EvalConfig(cfg.get("folds", 5), cfg.get("reps", 30), cfg.get("seed", DEFAULT_SEED))
    methods = cfg.get("methods", list(METHODS))
    run_wrapper = cfg.get("wrapper", True)
    wrapper_method = cfg.get("wrapper_method", "crowding")
    threshold = cfg.get("threshold")
    relieff_k = cfg.get("relieff_k")
    timing = args.timing

    def run_dataset(entry: dict) -> tuple[list[dict], dict | None]:
        path = base / entry["path"]
        label_col = entry.get("label_column")
        name = entry.get("name", path.stem)
        try:
            ds = replace(load_csv(path, label_col), name=name)
            rows = []
            rankings = {}
            for method in methods:
                rankings[method] = rank_features(ds, method, relieff_k)
                rows.append(filter_entry(ds, method, entry["k"], rankings[method], classifier, ecfg, 1, timing))
            if run_wrapper:
                ranking = rankings.get(wrapper_method) or rank_features(ds, wrapper_method, relieff_k)
                rows.append(wrapper_entry(ds, wrapper_method, ranking, classifier, ecfg, threshold, 1, False, timing))
            return rows, {
                "name": name,
                "path": entry["path"],
                "sha256": file_sha256(path),
                "label_column": label_col,
            }
        except (DatasetError, ValueError) as exc:
            return [{"dataset": name, "error": str(exc)}], None

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_dataset, cfg["datasets"]))
    else:
        outcomes = [run_dataset(e) for e in cfg["datasets"]]

    results, datasets = [], []
    for rows, ds_entry in outcomes:
        results += rows
        if ds_entry is not None:
            datasets.append(ds_entry)
    params = {
        "config": str(cfg_path),
        "classifier": classifier.as_dict(),
        "folds": ecfg.folds,
        "reps": ecfg.repetitions,
        "seed": ecfg.seed,
        "methods": methods,
        "wrapper": run_wrapper,
        "wrapper_method": wrapper_method,
        "threshold": threshold,
        "relieff_k": relieff_k,
    }
    report = {
        "schema": SCHEMA,
        "command": "benchmark",
        "manifest": manifest("benchmark", params, datasets),
        "results": results,
    }
    failed = any("error" in r for r in results)
    return report, EXIT_PARTIAL if failed else EXIT_OK


def _read_report(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report {path}: {exc}") from None


def _pick(report: dict, dataset: str, method: str | None, mode: str | None, label: str) -> dict:
    found = [
        r
        for r in report.get("results", [])
        if r.get("dataset") == dataset
        and "error" not in r
        and (method is None or r.get("method") == method)
        and (mode is None or r.get("mode") == mode)
    ]
    if not found:
        raise UsageError(f"report {label} has no results for dataset {dataset!r}")
    if len(found) > 1:
        raise UsageError(
            f"report {label} has {len(found)} results for {dataset!r}; narrow with --method-{label.lower()} / --mode-{label.lower()}"
        )
    runs = found[0].get("accuracy", {}).get("per_run")
    if not runs:
        raise UsageError(f"report {label} has no per_run accuracies for {dataset!r}")
    return found[0]


def cmd_compare(args) -> dict:
    a_rep, b_rep = _read_report(args.report_a), _read_report(args.report_b)
    a = _pick(a_rep, args.dataset, args.method_a, args.mode_a, "A")
    b = _pick(b_rep, args.dataset, args.method_b, args.mode_b, "B")
    outcome = wilcoxon_rank_sum(a["accuracy"]["per_run"], b["accuracy"]["per_run"])
    return {
        "schema": SCHEMA,
        "command": "compare",
        "inputs": {"a": str(args.report_a), "b": str(args.report_b)},
        "tests": [
            {
                "dataset": args.dataset,
                "a": f"{a['mode']}:{a['method']}",
                "b": f"{b['mode']}:{b['method']}",
                **outcome.as_dict(),
            }
        ],
    }


def cmd_replay(args) -> tuple[dict, int]:
    original = _read_report(args.report)
    man = original.get("manifest")
    if not man:
        raise UsageError("report has no manifest")
    p = man["parameters"]
    if man["command"] == "rank":
        ns = argparse.Namespace(
            dataset=man["datasets"][0]["path"], label_col=man["datasets"][0]["label_column"], **p
        )
        report = cmd_rank(ns)
        code = EXIT_OK
    elif man["command"] == "select":
        c = p["classifier"]
        ns = argparse.Namespace(
            dataset=man["datasets"][0]["path"],
            label_col=man["datasets"][0]["label_column"],
            mode=p["mode"],
            method=p["method"],
            k=p["k"],
            classifier=c["kind"],
            knn_k=c["knn_k"],
            svm_lambda=c["svm_lambda"],
            svm_epochs=c["svm_epochs"],
            folds=p["folds"],
            reps=p["reps"],
            seed=p["seed"],
            threshold=p["threshold"],
            relieff_k=p["relieff_k"],
            trace=p["trace"],
            timing=False,
        )
        report = cmd_select(ns)
        code = EXIT_OK
    elif man["command"] == "benchmark":
        report, code = cmd_benchmark(argparse.Namespace(config=p["config"], timing=False))
    else:
        raise UsageError(f"cannot replay command {man['command']!r}")
    if args.check:
        same = to_json(report) == to_json(original)
        print("identical" if same else "DIFFERENT", file=sys.stderr)
        return report, code if same else EXIT_PARTIAL
    return report, code


def _add_common(p, with_format=True):
    if with_format:
        p.add_argument("--format", choices=("json", "markdown", "csv"), default="json")
        p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crowdfs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", help="rank the features of a CSV dataset")
    p.add_argument("dataset")
    p.add_argument("--method", choices=METHODS, default="crowding")
    p.add_argument("--label-col", dest="label_col", default=None)
    p.add_argument("--relieff-k", dest="relieff_k", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("select", help="filter or wrapper selection plus repeated CV evaluation")
    p.add_argument("dataset")
    p.add_argument("--mode", choices=("filter", "wrapper"), default="filter")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default="crowding")
    p.add_argument("--classifier", choices=("knn", "linear_svm"), default="knn")
    p.add_argument("--knn-k", dest="knn_k", type=int, default=5)
    p.add_argument("--svm-lambda", dest="svm_lambda", type=float, default=1e-3)
    p.add_argument("--svm-epochs", dest="svm_epochs", type=int, default=50)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--label-col", dest="label_col", default=None)
    p.add_argument("--relieff-k", dest="relieff_k", type=int, default=None)
    p.add_argument("--trace", action="store_true", help="include every wrapper step in the report")
    p.add_argument("--timing", action="store_true", help="add wall-clock runtimes (breaks byte-identity)")
    _add_common(p)

    p = sub.add_parser("benchmark", help="run a JSON benchmark config")
    p.add_argument("config")
    p.add_argument("--timing", action="store_true")
    _add_common(p)

    p = sub.add_parser("compare", help="Wilcoxon rank-sum test between two reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--dataset", required=True)
    p.add_argument("--method-a", dest="method_a")
    p.add_argument("--method-b", dest="method_b")
    p.add_argument("--mode-a", dest="mode_a", choices=("filter", "wrapper"))
    p.add_argument("--mode-b", dest="mode_b", choices=("filter", "wrapper"))
    _add_common(p)

    p = sub.add_parser("replay", help="rerun the command recorded in a report's manifest")
    p.add_argument("report")
    p.add_argument("--check", action="store_true", help="exit 1 unless the rerun is byte-identical")
    _add_common(p)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rank":
            report, code = cmd_rank(args), EXIT_OK
        elif args.command == "select":
            report, code = cmd_select(args), EXIT_OK
        elif args.command == "benchmark":
            report, code = cmd_benchmark(args)
        elif args.command == "compare":
            report, code = cmd_compare(args), EXIT_OK
        else:
            report, code = cmd_replay(args)
    except DatasetError as exc:
        print(f"crowdfs: dataset error: {exc}", file=sys.stderr)
        return EXIT_DATASET
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"crowdfs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(render(report, args.format), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
