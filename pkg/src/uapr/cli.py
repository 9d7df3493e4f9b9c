"""Command-line surface.

Subcommands: eval-batch, eval-session, synth, curves, split-errors.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import fields
from pathlib import Path

from . import protocol as proto
from .container import read_descriptor_file, write_descriptor_file
from .errors import UaprError
from .report import build_report, read_report, split_reports, write_report
from .synth import WorldSpec, generate, generate_session
from .types import Method, MethodConfig, UncertaintySource


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_method_args(p: argparse.ArgumentParser):
    p.add_argument("--method", required=True, choices=[m.value for m in Method])
    p.add_argument("--top-k", type=int, default=1)
    p.add_argument(
        "--uncertainty-source",
        choices=[u.value for u in UncertaintySource],
        default=UncertaintySource.NEGATIVE_MEAN_SIMILARITY.value,
    )
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True)


def _build_parser() -> _Parser:
    parser = _Parser(prog="uapr", description="Uncertainty-aware place recognition evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-batch", help="evaluate a query traversal against a database traversal")
    p.add_argument("--queries", required=True)
    p.add_argument("--database", required=True)
    p.add_argument("--radius", type=float, default=proto.BATCH_REVISIT_RADIUS)
    _add_method_args(p)

    p = sub.add_parser("eval-session", help="online evaluation of one timestamped run")
    p.add_argument("--run", required=True)
    p.add_argument("--radius", type=float, default=proto.SESSION_REVISIT_RADIUS)
    p.add_argument("--exclusion", type=float, default=proto.SESSION_EXCLUSION_WINDOW)
    _add_method_args(p)

    p = sub.add_parser("synth", help="generate a synthetic world from a spec document")
    p.add_argument("--spec", required=True)
    p.add_argument("--out-prefix", required=True)

    p = sub.add_parser("curves", help="emit one x,y CSV per curve series of a report")
    p.add_argument("--report", required=True)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("split-errors", help="write per-error-type sub-reports")
    p.add_argument("--report", required=True)
    p.add_argument("--out-dir", required=True)

    return parser


def _method_config(args) -> MethodConfig:
    return MethodConfig(
        method=Method(args.method),
        top_k=args.top_k,
        uncertainty_source=UncertaintySource(args.uncertainty_source),
    )


def _cmd_eval_batch(args) -> int:
    queries = read_descriptor_file(args.queries)
    database = read_descriptor_file(args.database)
    config = proto.ProtocolConfig.batch(revisit_radius=args.radius, top_k=args.top_k)
    method = _method_config(args)
    t0 = time.perf_counter()
    run = proto.run_batch(queries, database, config, method, workers=args.workers)
    elapsed = time.perf_counter() - t0
    write_report(build_report(run, method, config, elapsed), args.out)
    return 0


def _cmd_eval_session(args) -> int:
    run_set = read_descriptor_file(args.run)
    config = proto.ProtocolConfig.session(
        revisit_radius=args.radius, exclusion_window=args.exclusion, top_k=args.top_k
    )
    method = _method_config(args)
    t0 = time.perf_counter()
    run = proto.run_session(run_set, config, method, workers=args.workers)
    elapsed = time.perf_counter() - t0
    write_report(build_report(run, method, config, elapsed), args.out)
    return 0


def _cmd_synth(args) -> int:
    doc = json.loads(Path(args.spec).read_text())
    mode = doc.pop("mode", "batch")
    if "UAPR_SEED" in os.environ:
        doc["seed"] = int(os.environ["UAPR_SEED"])
    known = {f.name for f in fields(WorldSpec)}
    unknown = set(doc) - known
    if unknown:
        raise UaprError(f"unknown world spec fields: {sorted(unknown)}")
    spec = WorldSpec(**doc)
    prefix = args.out_prefix
    if mode == "batch":
        queries, database, _ = generate(spec)
        write_descriptor_file(f"{prefix}_queries.uapr", queries)
        write_descriptor_file(f"{prefix}_database.uapr", database)
    elif mode == "session":
        run, _ = generate_session(spec)
        write_descriptor_file(f"{prefix}_run.uapr", run)
    else:
        raise UaprError(f"unknown synth mode: {mode}")
    return 0


def _cmd_curves(args) -> int:
    write_report(read_report(args.report), args.out_dir, fmt="csv-curves")
    return 0


def _cmd_split_errors(args) -> int:
    im_report, nm_report = split_reports(read_report(args.report))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report(im_report, out / "incorrect_match.json")
    write_report(nm_report, out / "no_match.json")
    return 0


_COMMANDS = {
    "eval-batch": _cmd_eval_batch,
    "eval-session": _cmd_eval_session,
    "synth": _cmd_synth,
    "curves": _cmd_curves,
    "split-errors": _cmd_split_errors,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except (UaprError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    entrypoint()
