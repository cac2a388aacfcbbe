"""Command-line entry point wiring CSV files to the pipeline.

Exit codes: 0 success, 1 domain error (validation findings, unsupported
kind, ...), 2 usage or IO error (missing files, malformed CSV, bad flags).
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path

from . import csvio
from .errors import InputFormatError, InvalidFeatureSpace, NomoforgeError, OutOfRange, ValidationFailed
from .pipeline import DEFAULT_THRESHOLD, build_nomogram
from .reader import read_tabular, read_type1
from .tabular import ESTIMATE, PROBABILITY, NomogramKind, validate_inputs

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _add_input_args(parser: argparse.ArgumentParser, shap_help: str = "explainability CSV (optional)"):
    parser.add_argument("--features", required=True, help="features CSV, one column per predictor")
    parser.add_argument("--outputs", required=True, help="outputs CSV with a single 'output' column")
    parser.add_argument("--manifest", required=True, help="manifest CSV with feature,category columns")
    parser.add_argument("--shap", default=None, help=shap_help)


def _add_kind_args(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--prob", action="store_true", help="binary outcome with a probability axis")
    group.add_argument("--estimate", action="store_true", help="continuous outcome")
    parser.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                        help="probability cut point (default 0.5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nomoforge",
        description="Turn a model's exhaustive input-output table into an explainable nomogram.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check the input files and print findings")
    _add_input_args(p_validate)
    _add_kind_args(p_validate)

    p_create = sub.add_parser("create", help="render a nomogram to SVG or JSON")
    _add_input_args(p_create)
    _add_kind_args(p_create)
    p_create.add_argument("--out", default="nomogram.svg", help="output file path")
    p_create.add_argument("--format", choices=["svg", "layout-json", "rules-json"], default="svg")
    p_create.add_argument("--absolute", action="store_true",
                          help="rank predictors by absolute explainability values")

    p_read = sub.add_parser("read", help="read a prediction for one sample")
    _add_input_args(p_read)
    _add_kind_args(p_read)
    p_read.add_argument("sample", nargs="+", metavar="FEATURE=VALUE",
                        help="one assignment per feature")
    p_read.add_argument("--json", action="store_true", help="print the trace as JSON")

    p_serve = sub.add_parser("serve", help="start the HTTP service and web UI")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--static-dir", default=None,
                         help="directory of web UI assets to host at / (default: bundled build)")

    return parser


def _load(args):
    output_kind = ESTIMATE if args.estimate else PROBABILITY
    return csvio.load_inputs(
        args.features, args.outputs, args.manifest, args.shap, output_kind=output_kind,
    )


def _print_findings(findings, stream=None):
    stream = stream if stream is not None else sys.stdout
    for f in findings:
        location = ""
        if f.columns:
            location += f" columns={list(f.columns)}"
        if f.rows:
            shown = list(f.rows[:8])
            suffix = "..." if len(f.rows) > 8 else ""
            location += f" rows={shown}{suffix}"
        print(f"{f.code}: {f.message}{location}", file=stream)


def cmd_validate(args) -> int:
    space, combos, outputs, shap = _load(args)
    report = validate_inputs(space, combos, outputs, shap)
    if report.ok:
        print(f"ok: {len(combos)} combinations, {len(space.features)} predictors")
        return EXIT_OK
    _print_findings(report.findings)
    return EXIT_DOMAIN


def cmd_create(args) -> int:
    space, combos, outputs, shap = _load(args)
    artifacts = build_nomogram(
        space, combos, outputs, shap=shap,
        probability=args.prob, estimate=args.estimate,
        threshold=args.threshold, use_absolute=args.absolute,
    )
    out_path = Path(args.out)
    if args.format == "svg":
        payload = artifacts.svg
    elif args.format == "layout-json":
        payload = (json.dumps(artifacts.layout.to_json_dict(), indent=2) + "\n").encode("utf-8")
    else:
        if artifacts.rules is None:
            print("error: rules exist only for the all-categorical, no-probability kind",
                  file=sys.stderr)
            return EXIT_DOMAIN
        payload = (json.dumps(artifacts.rules.to_json_dict(), indent=2) + "\n").encode("utf-8")
    out_path.write_bytes(payload)
    print(f"wrote {args.format} ({artifacts.kind.name}, type {artifacts.kind.value}) to {out_path}")
    return EXIT_OK


def _parse_sample(space, pairs):
    sample = {}
    for pair in pairs:
        if "=" not in pair:
            raise InputFormatError(f"sample assignment {pair!r} is not FEATURE=VALUE")
        name, _, value = pair.partition("=")
        name = name.strip()
        if name not in space.names:
            raise InputFormatError(f"unknown feature {name!r}; expected one of {list(space.names)}")
        f = space.feature(name)
        if f.is_numeric:
            try:
                sample[name] = float(value)
            except ValueError as exc:
                raise InputFormatError(f"{name}: {value!r} is not a number") from exc
        else:
            sample[name] = value.strip()
    missing = [n for n in space.names if n not in sample]
    if missing:
        raise InputFormatError(f"missing assignment(s) for: {missing}")
    return sample


def cmd_read(args) -> int:
    space, combos, outputs, shap = _load(args)
    sample = _parse_sample(space, args.sample)
    artifacts = build_nomogram(
        space, combos, outputs, shap=shap,
        probability=args.prob, estimate=args.estimate, threshold=args.threshold,
    )
    if artifacts.kind is NomogramKind.CAT_BIN:
        trace = read_type1(space, artifacts.rules, sample)
    else:
        trace = read_tabular(combos, outputs, sample)
    if args.json:
        print(json.dumps(trace.to_json_dict(), indent=2))
    else:
        for step in trace.steps:
            print(f"- {step.description}")
        if trace.polarity is not None:
            rule = trace.matched_rule
            shown = ", ".join(f"{f}={v}" for f, v in rule.assignments)
            print(f"result: {trace.polarity} (rule [{shown}] at iteration {rule.iteration})")
        else:
            print(f"result: {trace.output:g} (row {trace.matched_row})")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    # Probe the port first so a friendly message replaces a uvicorn traceback.
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        try:
            probe.bind((args.host, args.port))
        except OSError as exc:
            print(f"error: cannot bind {args.host}:{args.port} ({exc})", file=sys.stderr)
            return EXIT_USAGE

    static_dir = args.static_dir
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = str(bundled) if bundled.is_dir() else None
    app = create_app(static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handlers = {
        "validate": cmd_validate,
        "create": cmd_create,
        "read": cmd_read,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationFailed as exc:
        _print_findings(exc.report.findings, stream=sys.stderr)
        return EXIT_DOMAIN
    except InvalidFeatureSpace as exc:
        if exc.findings:
            _print_findings(exc.findings, stream=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NomoforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
