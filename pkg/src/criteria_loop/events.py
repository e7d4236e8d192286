"""Append-only session events.

A session is exactly the fold of its event log. All nondeterminism (fresh
ids, generated content) is captured in event payloads at command time, so
replaying a log never consults a clock, an id generator, or a provider.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

from .errors import EngineError


class EventKind(str, Enum):
    SESSION_CREATED = "session_created"
    FRAMING_SUBMITTED = "framing_submitted"
    OPTIONS_INSTALLED = "options_installed"
    OPTION_TOGGLED = "option_toggled"
    CUSTOM_OPTION_ADDED = "custom_option_added"
    NARROWING_CONFIRMED = "narrowing_confirmed"
    CRITERIA_INSTALLED = "criteria_installed"
    TIER_SET = "tier_set"
    CRITERION_ADDED = "criterion_added"
    CRITERION_REMOVED = "criterion_removed"
    PRIORITIZATION_CONFIRMED = "prioritization_confirmed"
    DEFINITIONS_INSTALLED = "definitions_installed"
    DEFINITIONS_SELECTED = "definitions_selected"
    REDEFINITION_CONFIRMED = "redefinition_confirmed"
    SESSION_FINISHED = "session_finished"
    SESSION_BRANCHED = "session_branched"


def _now_iso() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()) + "Z"


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    kind: EventKind
    payload: Mapping[str, Any] = field(default_factory=dict)
    # Wall clock, informational only: excluded from replay and equality
    # semantics (two logs differing only in timestamps fold identically).
    timestamp: str = field(default_factory=_now_iso, compare=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "seq": self.seq,
            "kind": self.kind.value,
            "payload": dict(self.payload),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SessionEvent":
        extra = set(data) - {"seq", "kind", "payload", "timestamp"}
        if extra:
            raise EngineError(
                "corrupt-log", f"event carries unknown fields: {sorted(extra)}", fields=sorted(extra)
            )
        try:
            return cls(
                seq=int(data["seq"]),
                kind=EventKind(data["kind"]),
                payload=dict(data["payload"]),
                timestamp=str(data["timestamp"]),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise EngineError("corrupt-log", f"malformed event record: {exc}") from exc


@dataclass(frozen=True)
class Lineage:
    """Where a branched session came from. Both fields set or both absent."""

    parent_session_id: str | None = None
    branch_point_seq: int | None = None

    def __post_init__(self) -> None:
        if (self.parent_session_id is None) != (self.branch_point_seq is None):
            raise EngineError(
                "invalid-payload", "lineage requires both parent_session_id and branch_point_seq"
            )

    @property
    def is_branch(self) -> bool:
        return self.parent_session_id is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "parent_session_id": self.parent_session_id,
            "branch_point_seq": self.branch_point_seq,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Lineage":
        return cls(
            parent_session_id=data.get("parent_session_id"),
            branch_point_seq=data.get("branch_point_seq"),
        )
