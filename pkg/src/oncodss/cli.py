"""Command-line entry points.

Subcommands: ingest (validate + summarize inputs), analyze (survival +
DEG + enrichment), train (scenario grid + model persistence), report
(render tables from a finished run), run (full pipeline), serve (HTTP
service) and fixture (write the bundled synthetic cohort).

Exit codes: 0 success, 2 validation error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import OncodssError, StageError, ValidationError
from .pipeline import MANIFEST_NAME, PipelineConfig, run_pipeline
from .report import format_p

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_STAGE = 3


def _add_common(parser: argparse.ArgumentParser, *, config_required: bool = True) -> None:
    parser.add_argument("--config", required=config_required, help="pipeline config JSON")
    parser.add_argument("--out", default=None, help="output directory (overrides config)")
    parser.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
    parser.add_argument("--k", type=int, default=None, help="CV fold count (overrides config)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oncodss", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [
        ("ingest", "parse and validate the inputs, print a cohort summary"),
        ("analyze", "run ingest + survival + differential expression + enrichment"),
        ("train", "run the full pipeline through model training"),
        ("run", "run the full pipeline"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)

    p = sub.add_parser("report", help="render tables from a finished run")
    p.add_argument("--out", required=True, help="bundle directory of a finished run")

    p = sub.add_parser("serve", help="serve a finished bundle over HTTP")
    p.add_argument("--out", required=True, help="bundle directory of a finished run")
    p.add_argument("--port", type=int, default=None, help="port (default: ONCODSS_PORT or 8080)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", default=None, help="directory of console static files to mount")

    p = sub.add_parser("fixture", help="write the synthetic demo cohort")
    p.add_argument("--out", required=True, help="directory for the fixture files")
    p.add_argument("--seed", type=int, default=13)

    return parser


def _load_config(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig.from_file(args.config, out=args.out, seed=args.seed, k=args.k)


# command -> last pipeline stage to execute
_COMMAND_STAGES = {"ingest": "ingest", "analyze": "enrichment", "train": "train", "run": "train"}


def _cmd_pipeline(args: argparse.Namespace) -> int:
    config = _load_config(args)
    bundle = run_pipeline(config, last_stage=_COMMAND_STAGES[args.command])
    if args.command == "ingest":
        print(json.dumps(bundle.cohort.provenance.as_dict(), indent=2, sort_keys=True))
    elif args.command == "analyze":
        for name, results in bundle.enrichment.items():
            top = [r.term for r in results[:3]]
            print(f"{name}: top terms {top}")
        print(f"significant DEGs: {len(bundle.degs.up)} up, {len(bundle.degs.down)} down")
    else:
        print(f"bundle written to {config.out} ({len(bundle.reports)} evaluation cells)")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    out = Path(args.out)
    manifest_path = out / MANIFEST_NAME
    if not manifest_path.exists():
        print(f"error: {out} has no {MANIFEST_NAME}", file=sys.stderr)
        return EXIT_VALIDATION
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    print(f"bundle status: {manifest['status']} (seed {manifest['seed']})")
    for name in ("survival_table.tsv", "metrics_grid.tsv"):
        path = out / name
        if path.exists():
            print(f"\n== {name} ==")
            print(path.read_text(encoding="utf-8"), end="")
    for relpath in sorted(manifest["outputs"]):
        if relpath.startswith("enrichment_") and relpath.endswith(".json"):
            payload = json.loads((out / relpath).read_text(encoding="utf-8"))
            alpha = manifest["config"]["enrichment_alpha"]
            hits = [r for r in payload if r["q"] < alpha]
            print(f"\n== {relpath} ==")
            for r in hits:
                print(f"{r['term']}\tk={r['k']}/{r['K']}\tp={format_p(r['p'])}\tq={format_p(r['q'])}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in _COMMAND_STAGES:
            return _cmd_pipeline(args)
        if args.command == "report":
            return _cmd_report(args)
        if args.command == "serve":
            from .service import serve

            serve(args.out, port=args.port, host=args.host, static_dir=args.static)
            return EXIT_OK
        if args.command == "fixture":
            from .fixture import write_fixture

            paths = write_fixture(args.out, seed=args.seed)
            for role, path in paths.items():
                print(f"{role}: {path}")
            return EXIT_OK
        raise ValidationError(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except StageError as exc:
        print(f"stage failure: {exc}", file=sys.stderr)
        return EXIT_STAGE
    except OncodssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
