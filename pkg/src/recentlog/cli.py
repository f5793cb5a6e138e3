"""Command-line entry point: ``recentlog {analyze,score,segment,gen}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .log_model import LogError, parse_log, write_log
from .pipeline import OUTPUT_FORMATS, AnalysisConfig, analyze
from .recency import InsufficientWeeks, score_series, split_by_week
from .segmentation import InvalidSlot, apply_segments, build_segments
from .synth import generate_log, random_drift_spec

log = logging.getLogger("recentlog")

SERIES_COLUMNS = ["newer", "older", "shared", "conflicts", "score", "only_newer", "only_older"]


class CliError(Exception):
    pass


def _load(path):
    path = Path(path)
    if not path.is_file():
        raise CliError(f"input file not found: {path}")
    with path.open(newline="") as fh:
        parsed = parse_log(fh)
    for bad in parsed.malformed:
        log.warning("row %d skipped: %s", bad.row, bad.reason)
    return parsed.records


def _config(args) -> AnalysisConfig:
    overrides = {
        "threshold": getattr(args, "threshold", None),
        "min_support": getattr(args, "min_support", None),
        "base_slot": getattr(args, "base_slot", None),
        "output_format": getattr(args, "out", None),
        "jobs": getattr(args, "jobs", None),
    }
    if getattr(args, "config", None):
        return AnalysisConfig.from_file(args.config, **overrides)
    return AnalysisConfig.layered(None, **overrides)


def _series_csv(series, boundary=None, flag_boundary=True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_COLUMNS + (["boundary"] if flag_boundary else []))
    for s in series:
        row = [s.pair[0], s.pair[1], s.shared, s.conflicts, "" if s.score is None else s.score,
               s.only_newer, s.only_older]
        if flag_boundary:
            row.append(int(boundary is not None and tuple(boundary) == s.pair))
        writer.writerow(row)
    return buf.getvalue()


def render_report(result, output_format: str) -> str:
    if output_format == "csv":
        return _series_csv(result.series, result.boundary)
    return json.dumps(result.to_json(), indent=2) + "\n"


def cmd_analyze(args) -> str:
    config = _config(args)
    result = analyze(_load(args.input), config).result
    log.info("recent window: %d of %d weeks", result.recent_weeks, result.total_weeks)
    return render_report(result, config.output_format)


def cmd_score(args) -> str:
    config = _config(args)
    records = _load(args.input)
    labelled = apply_segments(records, build_segments(records, config.base_slot))
    series = score_series(split_by_week(labelled), config.min_support, config.attributes, config.jobs)
    if config.output_format == "csv":
        return _series_csv(series, flag_boundary=False)
    return json.dumps([s.to_json() for s in series], indent=2) + "\n"


def cmd_segment(args) -> str:
    segments = build_segments(_load(args.input), args.base_slot)
    return json.dumps([s.to_json() for s in segments], indent=2) + "\n"


def cmd_generate(args) -> str:
    spec = random_drift_spec(
        seed=args.seed,
        total_weeks=args.weeks,
        drift_week=args.drift_week,
        n_templates=args.templates,
        records_per_week=args.per_week,
        noise=args.noise,
        drift=not args.no_drift,
        min_support=args.min_support,
    )
    buf = io.StringIO()
    write_log(generate_log(spec), buf)
    Path(args.out).write_text(buf.getvalue(), newline="")
    log.info("wrote %s (expected recent window: %d weeks)", args.out,
             spec.recent_weeks if not args.no_drift else spec.total_weeks)
    return ""


def _add_analysis_flags(p):
    p.add_argument("input", help="call log CSV")
    p.add_argument("--threshold", type=float, help="conflict percentage that ends the recent window")
    p.add_argument("--min-support", type=int, help="minimum records per association")
    p.add_argument("--base-slot", type=int, help="segmentation slot width in minutes")
    p.add_argument("--out", choices=OUTPUT_FORMATS, help="report format")
    p.add_argument("--config", help="JSON config file; flags take precedence")
    p.add_argument("--jobs", type=int, help="worker processes for week mining")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="recentlog", description="Find the recent behavioral window of a call log.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="score adjacent weeks and detect the recent window")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("score", help="emit the adjacent-week conflict series only")
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("segment", help="print the time segmentation as JSON")
    p.add_argument("input")
    p.add_argument("--base-slot", type=int, default=60)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("gen", help="write a synthetic log with a planted behavior change")
    p.add_argument("--weeks", type=int, required=True)
    p.add_argument("--drift-week", type=int, required=True, help="last week (from the oldest) of the old behavior")
    p.add_argument("--per-week", type=int, default=60)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--templates", type=int, default=6)
    p.add_argument("--min-support", type=int, default=3)
    p.add_argument("--no-drift", action="store_true", help="keep the same profile in every week")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)
    return parser


def _configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        text = args.func(args)
    except (CliError, LogError, InsufficientWeeks, InvalidSlot, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
