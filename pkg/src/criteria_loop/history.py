"""Append-only event log with replay, branching, and process summaries.

The log is the source of truth: a session is whatever folding its events
through the state machine yields. Branching copies the prefix into a new
log (no structural sharing) and stamps a ``session_branched`` marker so
the child's own log records where it came from. Summaries are recomputed
from the log on every call, never cached.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .errors import EngineError
from .events import EventKind, Lineage, SessionEvent
from .model import (
    CriterionOrigin,
    DecisionSession,
    OptionOrigin,
    OptionStatus,
    PhaseKind,
    Tier,
)
from .session import apply_event, new_id


class EventLog:
    """Ordered, append-only sequence of session events."""

    def __init__(self, events: Iterable[SessionEvent] = ()) -> None:
        self._events: list[SessionEvent] = []
        for event in events:
            self.append(event)

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[SessionEvent]:
        return iter(self._events)

    @property
    def events(self) -> tuple[SessionEvent, ...]:
        return tuple(self._events)

    def append(self, event: SessionEvent) -> "EventLog":
        expected = len(self._events) + 1
        if event.seq != expected:
            raise EngineError(
                "seq-gap",
                f"append expected seq {expected}, got {event.seq}",
                expected=expected,
                actual=event.seq,
            )
        self._events.append(event)
        return self

    def replay(self, upto_seq: int | None = None) -> DecisionSession:
        """Fold events (optionally only the first *upto_seq*) into a session."""
        events = self._events if upto_seq is None else self._events[:upto_seq]
        if not events:
            raise EngineError("corrupt-log", "log is empty; expected session_created first")
        session: DecisionSession | None = None
        for event in events:
            try:
                session = apply_event(session, event)
            except EngineError as exc:
                if exc.code == "corrupt-log":
                    raise
                raise EngineError(
                    "corrupt-log",
                    f"event seq {event.seq} ({event.kind.value}) rejected: {exc.message}",
                    seq=event.seq,
                    cause=exc.code,
                ) from exc
        assert session is not None
        return session

    def to_dicts(self) -> list[dict[str, Any]]:
        return [e.to_dict() for e in self._events]

    @classmethod
    def from_dicts(cls, raw: Iterable[Any]) -> "EventLog":
        log = cls()
        for item in raw:
            try:
                event = SessionEvent.from_dict(item)
            except EngineError:
                raise
            except (KeyError, TypeError, ValueError) as exc:
                raise EngineError("corrupt-log", f"bad event record: {exc}") from exc
            log.append(event)
        return log


@dataclass(frozen=True)
class BranchResult:
    log: EventLog
    session: DecisionSession
    lineage: Lineage


def branch(log: EventLog, at_seq: int, child_session_id: str | None = None) -> BranchResult:
    """Fork a new session from the first *at_seq* events of *log*.

    The child log is a deep copy of the prefix plus a ``session_branched``
    marker carrying the fresh id; the parent log is untouched.
    """
    if not isinstance(at_seq, int) or isinstance(at_seq, bool) or not 1 <= at_seq <= len(log):
        raise EngineError(
            "bad-branch-point",
            f"branch point must be within 1..{len(log)}, got {at_seq!r}",
            at_seq=at_seq,
            log_length=len(log),
        )
    prefix_state = log.replay(upto_seq=at_seq)
    child_id = child_session_id or new_id()
    child_log = EventLog(copy.deepcopy(log.events[:at_seq]))
    marker = SessionEvent(
        seq=at_seq + 1,
        kind=EventKind.SESSION_BRANCHED,
        payload={
            "child_session_id": child_id,
            "parent_session_id": prefix_state.id,
            "branch_point_seq": at_seq,
        },
    )
    child_log.append(marker)
    child = apply_event(prefix_state, marker)
    lineage = Lineage(parent_session_id=prefix_state.id, branch_point_seq=at_seq)
    return BranchResult(log=child_log, session=child, lineage=lineage)


# ---------------------------------------------------------------------------
# Summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TierChange:
    round: int
    tier: Tier

    def to_dict(self) -> dict[str, Any]:
        return {"round": self.round, "tier": self.tier.value}


@dataclass(frozen=True)
class CriterionTimeline:
    """Life of one criterion: origin, tier moves, and removal if any."""

    criterion_id: str
    label: str
    origin: CriterionOrigin
    introduced_round: int
    removed_round: int | None = None
    tier_changes: tuple[TierChange, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "criterion_id": self.criterion_id,
            "label": self.label,
            "origin": self.origin.value,
            "introduced_round": self.introduced_round,
            "removed_round": self.removed_round,
            "tier_changes": [t.to_dict() for t in self.tier_changes],
        }


@dataclass(frozen=True)
class RoundDigest:
    round: int
    options_generated: int = 0
    options_custom: int = 0
    options_kept: int = 0
    options_removed: int = 0
    criteria_installed: tuple[str, ...] = ()
    criteria_added: tuple[str, ...] = ()
    criteria_removed: tuple[str, ...] = ()
    criteria_retiered: tuple[str, ...] = ()
    definitions_selected: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "round": self.round,
            "options_generated": self.options_generated,
            "options_custom": self.options_custom,
            "options_kept": self.options_kept,
            "options_removed": self.options_removed,
            "criteria_installed": list(self.criteria_installed),
            "criteria_added": list(self.criteria_added),
            "criteria_removed": list(self.criteria_removed),
            "criteria_retiered": list(self.criteria_retiered),
            "definitions_selected": self.definitions_selected,
        }


@dataclass(frozen=True)
class ProcessSummary:
    session_id: str
    finished: bool
    round: int
    total_events: int
    rounds: tuple[RoundDigest, ...] = ()
    criteria: tuple[CriterionTimeline, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "finished": self.finished,
            "round": self.round,
            "total_events": self.total_events,
            "rounds": [r.to_dict() for r in self.rounds],
            "criteria": [c.to_dict() for c in self.criteria],
        }


@dataclass
class _DigestDraft:
    criteria_installed: list[str] = field(default_factory=list)
    criteria_added: list[str] = field(default_factory=list)
    criteria_removed: list[str] = field(default_factory=list)
    criteria_retiered: list[str] = field(default_factory=list)
    # Last selection per criterion wins; repeated picks in a round are revisions.
    selection_counts: dict[str, int] = field(default_factory=dict)


def summarize(log: EventLog) -> ProcessSummary:
    """Digest the log per round plus a per-criterion tier timeline."""
    final = log.replay()

    drafts: dict[int, _DigestDraft] = {}
    timelines: dict[str, dict[str, Any]] = {}

    def draft(rnd: int) -> _DigestDraft:
        return drafts.setdefault(rnd, _DigestDraft())

    state: DecisionSession | None = None
    for event in log:
        before = state
        state = apply_event(state, event)
        if before is None:
            continue
        rnd = before.phase.round
        if event.kind == EventKind.CRITERIA_INSTALLED:
            for item in event.payload.get("criteria", []):
                draft(rnd).criteria_installed.append(item["label"])
                timelines[item["id"]] = {
                    "label": item["label"],
                    "origin": CriterionOrigin.INFERRED,
                    "introduced_round": rnd,
                    "removed_round": None,
                    "tier_changes": [],
                }
        elif event.kind == EventKind.CRITERION_ADDED:
            cid = event.payload["criterion_id"]
            draft(rnd).criteria_added.append(event.payload["label"])
            timelines[cid] = {
                "label": event.payload["label"],
                "origin": CriterionOrigin.USER_ADDED,
                "introduced_round": rnd,
                "removed_round": None,
                "tier_changes": [],
            }
        elif event.kind == EventKind.CRITERION_REMOVED:
            cid = event.payload["criterion_id"]
            previous = before.find_criterion(cid)
            if previous is not None:
                draft(rnd).criteria_removed.append(previous.label)
            timelines[cid]["removed_round"] = rnd
        elif event.kind == EventKind.TIER_SET:
            cid = event.payload["criterion_id"]
            previous = before.find_criterion(cid)
            new_tier = Tier(event.payload["tier"])
            if previous is not None and previous.tier != new_tier:
                timelines[cid]["tier_changes"].append(TierChange(rnd, new_tier))
                if previous.tier != Tier.UNASSIGNED:
                    draft(rnd).criteria_retiered.append(previous.label)
        elif event.kind == EventKind.DEFINITIONS_SELECTED:
            count = len(event.payload.get("selected_ids", [])) + len(
                event.payload.get("custom_definitions", [])
            )
            draft(rnd).selection_counts[event.payload["criterion_id"]] = count

    digests = []
    for rnd in range(1, final.phase.round + 1):
        cards = final.options.get(rnd, ())
        d = drafts.get(rnd, _DigestDraft())
        digests.append(
            RoundDigest(
                round=rnd,
                options_generated=sum(1 for c in cards if c.origin == OptionOrigin.GENERATED),
                options_custom=sum(1 for c in cards if c.origin == OptionOrigin.USER_AUTHORED),
                options_kept=sum(1 for c in cards if c.status == OptionStatus.KEPT),
                options_removed=sum(1 for c in cards if c.status == OptionStatus.REMOVED),
                criteria_installed=tuple(d.criteria_installed),
                criteria_added=tuple(d.criteria_added),
                criteria_removed=tuple(d.criteria_removed),
                criteria_retiered=tuple(d.criteria_retiered),
                definitions_selected=sum(d.selection_counts.values()),
            )
        )

    ordered = [
        CriterionTimeline(
            criterion_id=cid,
            label=entry["label"],
            origin=entry["origin"],
            introduced_round=entry["introduced_round"],
            removed_round=entry["removed_round"],
            tier_changes=tuple(entry["tier_changes"]),
        )
        for cid, entry in timelines.items()
    ]
    return ProcessSummary(
        session_id=final.id,
        finished=final.phase.kind == PhaseKind.FINISHED,
        round=final.phase.round,
        total_events=len(log),
        rounds=tuple(digests),
        criteria=tuple(ordered),
    )
