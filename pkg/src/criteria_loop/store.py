"""One JSON file per session, written canonically so saves are byte-stable.

A session file carries the full event log plus enough envelope (config,
lineage, format version) to validate it without replaying first. Loading
always re-folds the log and cross-checks the envelope, so a corrupted or
hand-edited file surfaces as a typed error instead of undefined state.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .errors import EngineError
from .events import EventKind, Lineage
from .history import EventLog
from .model import DecisionSession, SessionConfig

FORMAT_VERSION = 1

_FILE_FIELDS = {"format_version", "session_id", "lineage", "config", "events"}


def canonical_bytes(data: Mapping[str, Any]) -> bytes:
    text = json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2)
    return (text + "\n").encode("utf-8")


@dataclass(frozen=True)
class SessionFile:
    session_id: str
    lineage: Lineage
    config: SessionConfig
    log: EventLog
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            "format_version": self.format_version,
            "session_id": self.session_id,
            "lineage": self.lineage.to_dict(),
            "config": self.config.to_dict(),
            "events": self.log.to_dicts(),
        }


@dataclass(frozen=True)
class LoadedSession:
    file: SessionFile
    session: DecisionSession


def parse_session_file(raw: bytes, source: str = "<bytes>") -> LoadedSession:
    """Parse, replay, and cross-check a serialized session."""
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise EngineError("corrupt-log", f"{source}: not valid UTF-8 at byte {exc.start}") from exc
    except json.JSONDecodeError as exc:
        raise EngineError(
            "corrupt-log", f"{source}: invalid JSON at byte {exc.pos}: {exc.msg}", offset=exc.pos
        ) from exc
    if not isinstance(data, dict):
        raise EngineError("corrupt-log", f"{source}: top level must be an object")

    extra = set(data) - _FILE_FIELDS
    if extra:
        raise EngineError(
            "unsupported-version",
            f"{source}: unrecognized fields {sorted(extra)}; "
            f"this build reads format_version {FORMAT_VERSION}",
            fields=sorted(extra),
        )
    missing = _FILE_FIELDS - set(data)
    if missing:
        raise EngineError("corrupt-log", f"{source}: missing fields {sorted(missing)}")
    if data["format_version"] != FORMAT_VERSION:
        raise EngineError(
            "unsupported-version",
            f"{source}: format_version {data['format_version']!r} not supported "
            f"(this build reads {FORMAT_VERSION})",
            found=data["format_version"],
            supported=FORMAT_VERSION,
        )

    try:
        config = SessionConfig.from_dict(data["config"])
        lineage = Lineage.from_dict(data["lineage"])
    except EngineError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise EngineError("corrupt-log", f"{source}: bad envelope: {exc}") from exc

    if not isinstance(data["events"], list):
        raise EngineError("corrupt-log", f"{source}: events must be a list")
    log = EventLog.from_dicts(data["events"])
    session = log.replay()

    if session.id != data["session_id"]:
        raise EngineError(
            "corrupt-log",
            f"{source}: session_id {data['session_id']!r} does not match replayed id {session.id!r}",
        )
    if session.config != config:
        raise EngineError("corrupt-log", f"{source}: config does not match the replayed log")
    _check_lineage(source, lineage, log)

    file = SessionFile(
        session_id=session.id, lineage=lineage, config=config, log=log
    )
    return LoadedSession(file=file, session=session)


def _check_lineage(source: str, lineage: Lineage, log: EventLog) -> None:
    last_branch = None
    for event in log:
        if event.kind == EventKind.SESSION_BRANCHED:
            last_branch = event
    if last_branch is None:
        if lineage.is_branch:
            raise EngineError(
                "corrupt-log", f"{source}: lineage set but log has no session_branched event"
            )
        return
    payload = last_branch.payload
    if (
        lineage.parent_session_id != payload.get("parent_session_id")
        or lineage.branch_point_seq != payload.get("branch_point_seq")
    ):
        raise EngineError(
            "corrupt-log", f"{source}: lineage does not match the session_branched event"
        )


class SessionStore:
    """Directory of session files, one per session id."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise EngineError("io-error", f"cannot create store directory: {exc}") from exc

    def path_for(self, session_id: str) -> Path:
        return self.directory / f"{session_id}.json"

    def save(self, file: SessionFile) -> Path:
        path = self.path_for(file.session_id)
        tmp = path.with_suffix(".json.tmp")
        try:
            tmp.write_bytes(canonical_bytes(file.to_dict()))
            os.replace(tmp, path)
        except OSError as exc:
            raise EngineError("io-error", f"cannot write {path}: {exc}") from exc
        return path

    def load(self, session_id: str) -> LoadedSession:
        path = self.path_for(session_id)
        if not path.exists():
            raise EngineError(
                "unknown-session", f"no stored session {session_id!r}", session_id=session_id
            )
        return load_session_file(path)

    def exists(self, session_id: str) -> bool:
        return self.path_for(session_id).exists()

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.json"))


def load_session_file(path: str | Path) -> LoadedSession:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise EngineError("io-error", f"cannot read {path}: {exc}") from exc
    return parse_session_file(raw, source=str(path))
