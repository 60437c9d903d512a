"""Command line for drxsim: simulate, gen-trace, analyze, compare, sweep.

Exit status is 0 on success, 1 for runtime/domain errors and 2 for
configuration or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from drxsim.config import RunConfig, load_config
from drxsim.engine import EnergyReport, compare, simulate, sweep
from drxsim.errors import ConfigError, DrxSimError, ParseError
from drxsim.hygiene import analysis_json, analyze_series, parse_sample_series
from drxsim.workload import format_packet_trace, generate_trace

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2
FORMATS = ("json", "csv", "svg")


def _formats(args: argparse.Namespace, cfg: RunConfig | None) -> tuple[str, ...]:
    if getattr(args, "format", None):
        fmts = tuple(f.strip() for f in args.format.split(",") if f.strip())
        bad = [f for f in fmts if f not in FORMATS]
        if bad or not fmts:
            raise ConfigError(f"unknown format(s) {bad}; choose from {list(FORMATS)}", "--format")
        return fmts
    return cfg.formats if cfg else ("json", "csv")


def _out_dir(args: argparse.Namespace, cfg: RunConfig | None) -> Path | None:
    d = getattr(args, "out_dir", None) or (cfg.out_dir if cfg else None) or os.environ.get("DRXSIM_OUT")
    if d is None:
        return None
    p = Path(d)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _need_config(args: argparse.Namespace) -> RunConfig:
    if not getattr(args, "config", None):
        raise ConfigError("this command needs --config", "--config")
    return load_config(args.config)


def _write(path: Path, text: str) -> None:
    path.write_text(text)
    print(path)


def _selected(cfg: RunConfig, labels: str | None):
    if not labels:
        return list(cfg.scenarios)
    return [cfg.scenario(lab.strip()) for lab in labels.split(",")]


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _need_config(args)
    out = _out_dir(args, cfg) or Path(".")
    fmts = _formats(args, cfg)
    reports = [simulate(s) for s in _selected(cfg, args.scenario)]
    for r in reports:
        _write(out / f"{r.label}.json", r.to_json(config_sha256=cfg.fingerprint))
    if len(reports) > 1 and ("csv" in fmts or "svg" in fmts):
        table = compare(reports, args.baseline or reports[0].label)
        if "csv" in fmts:
            _write(out / "comparison.csv", table.to_csv())
        if "svg" in fmts:
            from drxsim.plotting import bar_chart

            bar_chart([r.label for r in table.rows], [r.ratio for r in table.rows], out / "comparison.svg")
            print(out / "comparison.svg")
    return EXIT_OK


def cmd_gen_trace(args: argparse.Namespace) -> int:
    cfg = _need_config(args)
    out = _out_dir(args, cfg) or Path(".")
    for s in _selected(cfg, args.scenario):
        trace = generate_trace(s.workload, s.path)
        _write(out / f"{s.label}.trace.csv", format_packet_trace(trace))
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if getattr(args, "config", None) else None
    slot_len = args.slot_len if args.slot_len is not None else (cfg.slot_len if cfg else 3600.0)
    warmup = args.warmup if args.warmup is not None else (cfg.warmup if cfg else 0.0)
    try:
        with open(args.series) as f:
            series = parse_sample_series(f)
    except OSError as exc:
        raise ConfigError(f"cannot read series: {exc}", "series") from exc
    text = analysis_json(analyze_series(series, slot_len, warmup))
    out = _out_dir(args, cfg)
    if out is None:
        sys.stdout.write(text)
    else:
        _write(out / f"{Path(args.series).stem}.analysis.json", text)
    return EXIT_OK


def _load_report(path: str) -> EnergyReport:
    try:
        with open(path) as f:
            return EnergyReport.from_dict(json.load(f))
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"unreadable report: {exc}", path) from exc


def cmd_compare(args: argparse.Namespace) -> int:
    if len(args.reports) < 2:
        raise ConfigError("compare needs at least two reports", "reports")
    reports = [_load_report(p) for p in args.reports]
    table = compare(reports, args.baseline)
    out = _out_dir(args, None)
    fmts = _formats(args, None)
    if out is None:
        sys.stdout.write(table.to_csv())
        return EXIT_OK
    if "csv" in fmts or "json" in fmts:
        _write(out / "comparison.csv", table.to_csv())
    if "svg" in fmts:
        from drxsim.plotting import bar_chart

        bar_chart([r.label for r in table.rows], [r.ratio for r in table.rows], out / "comparison.svg")
        print(out / "comparison.svg")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _need_config(args)
    parameter = args.parameter or cfg.sweep_parameter
    if not parameter:
        raise ConfigError("no sweep parameter given", "sweep.parameter")
    if args.values:
        try:
            values = [float(v) for v in args.values.split(",")]
        except ValueError as exc:
            raise ConfigError(str(exc), "--values") from None
    else:
        values = list(cfg.sweep_values)
    out = _out_dir(args, cfg) or Path(".")
    fmts = _formats(args, cfg)
    scenarios = _selected(cfg, args.scenario)
    runs = {s.label: sweep(s, parameter, values, max_workers=args.workers) for s in scenarios}
    baseline = args.baseline or cfg.sweep_baseline or scenarios[0].label
    if baseline not in runs:
        raise ConfigError(f"baseline {baseline!r} is not a selected scenario", "--baseline")

    if "json" in fmts:
        for reports in runs.values():
            for r in reports:
                _write(out / f"{r.label}.json", r.to_json(config_sha256=cfg.fingerprint))
    rows = ["parameter,value,label,total_J,mean_W,mean_A,ratio"]
    for i, v in enumerate(values):
        column = [runs[s.label][i] for s in scenarios]
        base = runs[baseline][i]
        for s, r in zip(scenarios, column):
            rows.append(
                f"{parameter},{v!r},{s.label},{r.total_energy!r},{r.mean_power!r},"
                f"{r.mean_current!r},{r.total_energy / base.total_energy!r}"
            )
    if "csv" in fmts:
        _write(out / "sweep.csv", "\n".join(rows) + "\n")
    if "svg" in fmts and values:
        from drxsim.plotting import grouped_bar_chart

        groups = {s.label: [r.mean_current * 1e3 for r in runs[s.label]] for s in scenarios}
        grouped_bar_chart([f"{v:g}" for v in values], groups, out / "sweep.svg", xlabel=parameter)
        print(out / "sweep.svg")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="run configuration JSON (or preset name)")
    common.add_argument("--out-dir", default=argparse.SUPPRESS, help="output directory (fallback: $DRXSIM_OUT)")
    common.add_argument("--format", default=argparse.SUPPRESS, help="comma separated subset of json,csv,svg")

    ap = argparse.ArgumentParser(prog="drxsim", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate every scenario in a config")
    p.add_argument("--scenario", help="comma separated labels to run (default: all)")
    p.add_argument("--baseline", help="baseline label for comparison.csv (default: first scenario)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen-trace", parents=[common], help="write the synthetic packet trace of each scenario")
    p.add_argument("--scenario")
    p.set_defaults(func=cmd_gen_trace)

    p = sub.add_parser("analyze", parents=[common], help="warm-up discard and slot-minimum analysis")
    p.add_argument("series", help="sample-series CSV (t_seconds,value with '# unit:' header)")
    p.add_argument("--slot-len", type=float, help="slot length in seconds")
    p.add_argument("--warmup", type=float, help="warm-up to discard in seconds")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compare", parents=[common], help="energy ratio of reports to a baseline")
    p.add_argument("reports", nargs="+")
    p.add_argument("--baseline", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", parents=[common], help="sweep one numeric parameter")
    p.add_argument("--parameter", help="dotted path, e.g. workload.resource_bytes")
    p.add_argument("--values", help="comma separated values")
    p.add_argument("--scenario")
    p.add_argument("--baseline")
    p.add_argument("--workers", type=int, default=None, help="worker processes")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"drxsim: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DrxSimError as exc:
        print(f"drxsim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
