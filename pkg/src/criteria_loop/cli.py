"""Operator command line: serve the API, run simulations, export, replay.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import EngineError
from .export import EXPORT_FORMATS, export_criteria
from .history import summarize
from .model import ProviderKind, SessionConfig
from .simulate import load_profile, run_simulation
from .store import load_session_file

USAGE_EXIT = 1
RUNTIME_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="criteria-loop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--store-dir", default="./sessions")
    serve.add_argument("--provider", choices=["stub", "external"], default="stub")
    serve.add_argument("--seed", type=int, default=0)

    simulate = sub.add_parser("simulate", help="run a scripted oracle session")
    simulate.add_argument("--profile", required=True, help="preference profile JSON file")
    simulate.add_argument("--rounds", type=int, default=3)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", default="", help="write the report here instead of stdout")
    simulate.add_argument(
        "--assertive",
        action="store_true",
        help="oracle adds one custom criterion per round",
    )

    export = sub.add_parser("export", help="export criteria from a session file")
    export.add_argument("--session-file", required=True)
    export.add_argument("--format", choices=list(EXPORT_FORMATS), default="json")

    replay = sub.add_parser("replay", help="validate a session file and print its summary")
    replay.add_argument("--session-file", required=True)

    return parser


def _run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app
    from .service import SessionService
    from .store import SessionStore

    config = SessionConfig(provider=ProviderKind(args.provider), seed=args.seed)
    service = SessionService(SessionStore(args.store_dir), default_config=config)
    uvicorn.run(create_app(service), host=args.host, port=args.port, log_level="warning")
    return 0


def _run_simulate(args: argparse.Namespace) -> int:
    profile = load_profile(args.profile)
    report = run_simulation(
        profile, rounds=args.rounds, seed=args.seed, assertive=args.assertive
    )
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _run_export(args: argparse.Namespace) -> int:
    loaded = load_session_file(args.session_file)
    sys.stdout.write(export_criteria(loaded.session, args.format))
    return 0


def _run_replay(args: argparse.Namespace) -> int:
    loaded = load_session_file(args.session_file)
    summary = summarize(loaded.file.log)
    session = loaded.session
    print(f"session {session.id}: {session.phase.kind.value} (round {session.phase.round}), "
          f"{summary.total_events} events")
    for digest in summary.rounds:
        print(
            f"  round {digest.round}: {digest.options_generated} generated, "
            f"{digest.options_kept} kept, {digest.options_removed} removed, "
            f"{len(digest.criteria_installed)} criteria installed, "
            f"{len(digest.criteria_added)} added, {len(digest.criteria_removed)} removed, "
            f"{digest.definitions_selected} definitions selected"
        )
    for timeline in summary.criteria:
        moves = " -> ".join(t.tier.value for t in timeline.tier_changes) or "never tiered"
        removed = f", removed round {timeline.removed_round}" if timeline.removed_round else ""
        print(
            f"  criterion '{timeline.label}' ({timeline.origin.value}, "
            f"round {timeline.introduced_round}): {moves}{removed}"
        )
    return 0


_RUNNERS = {
    "serve": _run_serve,
    "simulate": _run_simulate,
    "export": _run_export,
    "replay": _run_replay,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        return _RUNNERS[args.command](args)
    except EngineError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return RUNTIME_EXIT
    except OSError as exc:
        print(f"error [io-error]: {exc}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
