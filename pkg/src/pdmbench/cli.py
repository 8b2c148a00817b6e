"""Command-line entry point: ``pdmbench validate | run | report | simulate``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 the run finished but some (pipeline, seed) cells failed.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .bench import ALL_PIPELINES, DEFAULT_SEEDS, BenchConfig, PipelineId, run_benchmark
from .causal import DagError, build_default_dag, load_edge_list
from .costmodel import CostSchedule
from .data import (DataError, build_labeled, check_dataset, failure_counts, parse_dataset,
                   prevalence, serialize_dataset)
from .report import (ReportFormatError, dump_report, load_report, render_causal,
                     render_generalization, render_performance)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_PARTIAL = 0, 1, 2, 3

log = logging.getLogger("pdmbench")

_FORMAT_ALIASES = {"txt": "txt", "text": "txt", "table-text": "txt", "csv": "csv", "json": "json"}

# learner sections reachable as "<section>.<field>" config keys
_SECTIONS = ("logistic", "tree", "gbm", "mcmc")
_SCALARS = ("prior_sd", "rule_budget", "test_fraction", "grid_start", "grid_stop", "grid_step")
_RUN_KEYS = ("dataset", "seeds", "pipelines", "tp_cost", "fp_cost", "fn_cost", "tn_cost",
             "dag", "out", "format")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _split_list(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split() if t]


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise UsageError(f"{source}:{n}: empty key")
        out[key.replace("-", "_")] = value
    return out


def _coerce(value: str, like, key: str):
    try:
        if isinstance(like, bool):
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(value)
            return value.lower() in ("true", "1", "yes")
        if isinstance(like, int):
            f = float(value)
            if f != int(f):
                raise ValueError(value)
            return int(f)
        if isinstance(like, float):
            return float(value)
    except ValueError:
        raise UsageError(f"bad value for {key}: {value!r}") from None
    return value


def build_bench_config(settings: dict[str, str], dag=None) -> BenchConfig:
    base = BenchConfig() if dag is None else BenchConfig(dag=dag)
    changes: dict = {}
    sections = {s: {} for s in _SECTIONS}
    for key, value in settings.items():
        if key in _RUN_KEYS:
            continue
        if key in _SCALARS:
            changes[key] = _coerce(value, getattr(base, key), key)
            continue
        section, _, name = key.partition(".")
        if section in sections and name:
            current = getattr(base, section)
            if name not in {f.name for f in dataclasses.fields(current)}:
                raise UsageError(f"unknown setting {key!r}")
            sections[section][name] = _coerce(value, getattr(current, name), key)
            continue
        raise UsageError(f"unknown setting {key!r}")
    for section, fields in sections.items():
        if fields:
            changes[section] = dataclasses.replace(getattr(base, section), **fields)
    try:
        cfg = dataclasses.replace(base, **changes)
        cfg.grid  # validates the grid bounds
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None
    return cfg


def _read_text(path: str, what: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {what} {path!r}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{what} {path!r} is not UTF-8 text (byte offset {exc.start})") from None


# ---------------------------------------------------------------- validate

def cmd_validate(args) -> int:
    text = _read_text(args.path, "dataset")
    if not text.strip():
        print(f"error: {args.path}: no data rows", file=sys.stderr)
        return EXIT_DATA
    records, errors = check_dataset(text, max_errors=args.max_errors)
    if not errors and not records:
        print(f"error: {args.path}: no data rows", file=sys.stderr)
        return EXIT_DATA
    if errors:
        print(f"error: {args.path}: schema validation failed", file=sys.stderr)
        for e in errors:
            print(f"  {e}", file=sys.stderr)
        if len(errors) >= args.max_errors:
            print(f"  (stopped after {args.max_errors} errors)", file=sys.stderr)
        return EXIT_DATA
    labeled = build_labeled(records)
    counts = failure_counts(records)
    print(f"rows: {len(records)}")
    print(f"  Machine failure: {counts['machine_failure']}")
    for flag in ("TWF", "HDF", "PWF", "OSF", "RNF"):
        print(f"  {flag}: {counts[flag]}")
    print(f"rows after RNF filter: {len(labeled)}")
    print(f"deterministic failures: {sum(r.label for r in labeled)}")
    print(f"prevalence: {100 * prevalence(labeled):.2f}%")
    return EXIT_OK


# ---------------------------------------------------------------- run

def _formats(value: str) -> list[str]:
    out = []
    for tok in _split_list(value):
        if tok.lower() not in _FORMAT_ALIASES:
            raise UsageError(f"unknown format {tok!r}; choose from txt, csv, json")
        f = _FORMAT_ALIASES[tok.lower()]
        if f not in out:
            out.append(f)
    if not out:
        raise UsageError("at least one output format is required")
    return out


def _seeds(value: str) -> list[int]:
    try:
        seeds = [int(s) for s in _split_list(value)]
    except ValueError:
        raise UsageError(f"seeds must be integers: {value!r}") from None
    if not seeds:
        raise UsageError("at least one seed is required")
    if len(set(seeds)) != len(seeds):
        raise UsageError("duplicate seeds")
    return seeds


def _pipelines(value: str) -> list[str]:
    out = []
    for tok in _split_list(value):
        try:
            pid = PipelineId(tok.upper()).value
        except ValueError:
            raise UsageError(f"unknown pipeline {tok!r}; choose from {', '.join(ALL_PIPELINES)}") from None
        if pid not in out:
            out.append(pid)
    if not out:
        raise UsageError("at least one pipeline is required")
    return out


def resolve_settings(args) -> dict[str, str]:
    """Config file values overlaid by ``--set`` pairs and then by explicit flags."""
    settings: dict[str, str] = {}
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc.strerror}") from None
        settings.update(parse_config_text(text, args.config))
    for pair in args.set or ():
        settings.update(parse_config_text(pair, "--set"))
    for key in _RUN_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = " ".join(v) if isinstance(v, list) else str(v)
    return settings


def write_reports(report, out_dir: Path, formats) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        p = out_dir / name
        p.write_text(text, encoding="utf-8", newline="\n")
        written.append(p)

    for fmt in formats:
        put(f"performance.{fmt}", render_performance(report, fmt))
        put(f"generalization.{fmt}", render_generalization(report, fmt))
    put("causal_insights.txt", render_causal(report))
    put("results.json", dump_report(report))
    return written


def cmd_run(args) -> int:
    settings = resolve_settings(args)
    if "dataset" not in settings:
        raise UsageError("no dataset given (use --dataset or set dataset = <path> in the config)")
    seeds = _seeds(settings.get("seeds", " ".join(map(str, DEFAULT_SEEDS))))
    pipelines = _pipelines(settings.get("pipelines", " ".join(ALL_PIPELINES)))
    formats = _formats(settings.get("format", "txt csv json"))
    try:
        schedule = CostSchedule(**{k: _coerce(settings[k], 0, k)
                                   for k in ("tp_cost", "fp_cost", "fn_cost", "tn_cost")
                                   if k in settings})
    except ValueError as exc:
        raise UsageError(f"invalid cost schedule: {exc}") from None
    dag_path = settings.get("dag")
    try:
        dag = load_edge_list(dag_path) if dag_path else build_default_dag()
    except OSError as exc:
        raise UsageError(f"cannot read DAG file {dag_path!r}: {exc.strerror}") from None
    except DagError as exc:
        raise UsageError(f"invalid DAG file {dag_path!r}: {exc}") from None
    config = build_bench_config(settings, dag)

    path = settings["dataset"]
    text = _read_text(path, "dataset")
    records = parse_dataset(text)
    if not records:
        raise DataError(f"{path}: no data rows")
    labeled = build_labeled(records)
    info = {"file": os.path.basename(path),
            "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            "n_raw_rows": len(records)}
    report = run_benchmark(labeled, pipelines, seeds, schedule, config, dataset_info=info)

    out_dir = Path(settings.get("out", "pdmbench-out"))
    for p in write_reports(report, out_dir, formats):
        log.info("wrote %s", p)
    if "txt" in formats:
        sys.stdout.write(render_performance(report, "txt"))
        sys.stdout.write("\n")
        sys.stdout.write(render_generalization(report, "txt"))
    failed = report.failed_cells
    if failed:
        for pid, seed in failed:
            err = report.cell(pid, seed).error
            print(f"warning: {pid} seed {seed} failed: {err}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


# ---------------------------------------------------------------- report

def cmd_report(args) -> int:
    try:
        raw = Path(args.dump).read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read results dump {args.dump!r}: {exc.strerror}") from None
    try:
        report = load_report(raw)
    except ReportFormatError as exc:
        print(f"error: {args.dump}: {exc}", file=sys.stderr)
        return EXIT_DATA
    formats = _formats(" ".join(args.format) if args.format else "txt")
    for i, fmt in enumerate(formats):
        if i:
            sys.stdout.write("\n")
        sys.stdout.write(render_performance(report, fmt))
        sys.stdout.write("\n")
        sys.stdout.write(render_generalization(report, fmt))
    if args.causal:
        sys.stdout.write("\n")
        sys.stdout.write(render_causal(report))
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    from .simulate import simulate_records

    if args.rows < 1:
        raise UsageError("--rows must be positive")
    text = serialize_dataset(simulate_records(args.rows, args.seed))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8", newline="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pdmbench", description="Cost-sensitive predictive maintenance benchmark.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a dataset CSV against the expected schema")
    v.add_argument("path")
    v.add_argument("--max-errors", type=int, default=50)
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("run", help="run the benchmark and write report files")
    r.add_argument("--config", help="flat key = value settings file")
    r.add_argument("--dataset", help="path to the CNC dataset CSV")
    r.add_argument("--seeds", nargs="+", metavar="N")
    r.add_argument("--pipelines", nargs="+", metavar="ID")
    for name in ("tp", "fp", "fn", "tn"):
        r.add_argument(f"--{name}-cost", dest=f"{name}_cost", metavar="USD")
    r.add_argument("--dag", help="edge-list file replacing the bundled graph")
    r.add_argument("--out", help="output directory (default pdmbench-out)")
    r.add_argument("--format", nargs="+", metavar="FMT", help="txt, csv and/or json")
    r.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="hyperparameter override, e.g. gbm.n_trees=200")
    r.set_defaults(func=cmd_run)

    rep = sub.add_parser("report", help="re-render tables from a results.json dump")
    rep.add_argument("dump")
    rep.add_argument("--format", nargs="+", metavar="FMT")
    rep.add_argument("--causal", action="store_true", help="also print the causal section")
    rep.set_defaults(func=cmd_report)

    s = sub.add_parser("simulate", help="write a synthetic dataset with the same schema")
    s.add_argument("--rows", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pdmbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"pdmbench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
