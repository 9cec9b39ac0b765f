"""Command line entry point: pipeline, serve, replay, config, synth."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import default_config_json, load_config, require_monitored_targets
from .errors import ConfigInvalid, SourceUnavailable


def _add_archive_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--events", required=True, help="events archive (JSONL)")
    parser.add_argument("--profiles", required=True, help="profiles archive (JSONL)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="modkit",
                                     description="user-side moderation engine")
    sub = parser.add_subparsers(dest="command", required=True)

    pipe = sub.add_parser("pipeline", parents=[common], help="batch-enrich an archive")
    _add_archive_args(pipe)
    pipe.add_argument("--out", required=True, help="enriched records output (JSONL)")

    serve = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    serve.add_argument("--store", default=None, help="snapshot/state directory")
    serve.add_argument("--profiles", default=None, help="profiles archive to preload")

    replay = sub.add_parser("replay", parents=[common], help="deterministic offline replay")
    _add_archive_args(replay)
    replay.add_argument("--decisions", default=None, help="decision script (JSONL)")
    replay.add_argument("--actions-out", required=True, help="action log output (JSONL)")
    replay.add_argument("--transcript-out", required=True, help="prompt transcript output (JSONL)")
    replay.add_argument("--monitored", default=None,
                        help="comma-separated monitored user ids (overrides config)")

    cfg = sub.add_parser("config", parents=[common], help="configuration helpers")
    cfg.add_argument("--print-defaults", action="store_true")

    synth = sub.add_parser("synth", parents=[common], help="regenerate the bundled synthetic corpus")
    synth.add_argument("--out", required=True, help="output directory")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
    except ConfigInvalid as exc:
        for violation in exc.violations:
            print(f"config error: {violation}", file=sys.stderr)
        return 2

    if args.command == "config":
        print(json.dumps(default_config_json(), indent=2, sort_keys=True))
        return 0

    if args.command == "synth":
        from .synth import generate_all

        generate_all(args.out)
        print(f"synthetic corpus written under {args.out}")
        return 0

    if args.command == "pipeline":
        from .pipeline import run_pipeline

        try:
            summary = run_pipeline(args.events, args.profiles, args.out, config)
        except SourceUnavailable as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(json.dumps(summary.to_json(), sort_keys=True))
        if summary.emitted == 0:
            print("diagnostic: zero records emitted - check that the corpus "
                  "contains in-scope (female-target) interactions and that "
                  "profiles resolve", file=sys.stderr)
            return 1
        return 0

    if args.command == "replay":
        from .replay import run_replay

        if args.monitored:
            config.monitored_targets = [t for t in args.monitored.split(",") if t]
        try:
            require_monitored_targets(config)
        except ConfigInvalid as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            summary = run_replay(args.events, args.profiles, args.decisions,
                                 args.actions_out, args.transcript_out, config)
        except SourceUnavailable as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(json.dumps(summary.to_json(), sort_keys=True))
        return 0

    if args.command == "serve":
        import uvicorn

        from .service import build_engine, create_app

        if args.store:
            config.store_dir = args.store
        try:
            require_monitored_targets(config)
        except ConfigInvalid as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        engine = build_engine(config, profiles_path=args.profiles)
        app = create_app(config, engine)
        host, port = config.listen_host_port()
        try:
            uvicorn.run(app, host=host, port=port, log_level="info")
        except OSError as exc:
            print(f"error: cannot listen on {config.listen_address}: {exc}", file=sys.stderr)
            return 2
        return 0

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
