"""Event log mechanics: append discipline, replay, branching, summaries."""

from __future__ import annotations

import pytest

from criteria_loop.errors import EngineError
from criteria_loop.events import EventKind, SessionEvent
from criteria_loop.history import EventLog, branch, summarize
from criteria_loop.model import (
    CriterionOrigin,
    OptionStatus,
    SessionConfig,
    Tier,
)
from criteria_loop.session import perform

from .driver import random_walk, scripted_loop
from .test_session import make_cards, make_criteria


def fresh_log(session_id: str = "log-test") -> tuple[EventLog, object]:
    config = SessionConfig(seed=3)
    session, event = perform(
        None, EventKind.SESSION_CREATED, {"session_id": session_id, "config": config.to_dict()}
    )
    return EventLog([event]), session


class TestEventLog:
    def test_append_requires_contiguous_seq(self):
        log, _ = fresh_log()
        stray = SessionEvent(seq=5, kind=EventKind.SESSION_FINISHED)
        with pytest.raises(EngineError) as excinfo:
            log.append(stray)
        assert excinfo.value.code == "seq-gap"
        assert excinfo.value.details == {"expected": 2, "actual": 5}
        assert len(log) == 1

    def test_duplicate_seq_rejected(self):
        log, _ = fresh_log()
        with pytest.raises(EngineError) as excinfo:
            log.append(SessionEvent(seq=1, kind=EventKind.SESSION_FINISHED))
        assert excinfo.value.code == "seq-gap"

    def test_replay_of_empty_log_is_corrupt(self):
        with pytest.raises(EngineError) as excinfo:
            EventLog().replay()
        assert excinfo.value.code == "corrupt-log"

    def test_replay_wraps_semantic_rejection_as_corruption(self):
        # A log is trusted input; an event the state machine rejects means
        # the file was tampered with, not that the user made a mistake.
        log, _ = fresh_log()
        log.append(SessionEvent(seq=2, kind=EventKind.NARROWING_CONFIRMED))
        with pytest.raises(EngineError) as excinfo:
            log.replay()
        assert excinfo.value.code == "corrupt-log"
        assert excinfo.value.details["seq"] == 2
        assert excinfo.value.details["cause"] == "wrong-phase"

    def test_from_dicts_rejects_garbage_records(self):
        for garbage in (["nonsense"], [{"seq": 1}], [{"seq": 1, "kind": "no-such-kind", "payload": {}, "timestamp": "t"}]):
            with pytest.raises(EngineError) as excinfo:
                EventLog.from_dicts(garbage)
            assert excinfo.value.code == "corrupt-log"

    def test_round_trip_preserves_timestamps(self):
        walk = random_walk(seed=5, max_rounds=1, sprinkle_invalid=False)
        revived = EventLog.from_dicts(walk.log.to_dicts())
        assert [e.timestamp for e in revived] == [e.timestamp for e in walk.log]


class TestBranch:
    def test_child_is_prefix_plus_marker(self):
        walk = random_walk(seed=21, max_rounds=2, sprinkle_invalid=False)
        at = len(walk.log) // 2
        result = branch(walk.log, at, child_session_id="child-a")
        assert len(result.log) == at + 1
        marker = result.log.events[-1]
        assert marker.kind == EventKind.SESSION_BRANCHED
        assert marker.payload["branch_point_seq"] == at
        assert result.session.id == "child-a"
        assert result.lineage.parent_session_id == walk.session.id
        assert result.lineage.branch_point_seq == at
        assert result.log.replay() == result.session

    def test_child_state_matches_parent_prefix_except_id(self):
        walk = random_walk(seed=22, max_rounds=2, sprinkle_invalid=False)
        at = len(walk.log) - 3
        result = branch(walk.log, at, child_session_id="child-b")
        prefix = walk.log.replay(upto_seq=at)
        assert result.session.phase == prefix.phase
        assert result.session.framing == prefix.framing
        assert result.session.options == prefix.options
        assert result.session.criteria == prefix.criteria
        assert result.session.event_seq == at + 1

    def test_parent_log_untouched(self):
        walk = random_walk(seed=23, max_rounds=1, sprinkle_invalid=False)
        before = walk.log.events
        branch(walk.log, 4)
        assert walk.log.events == before

    def test_no_structural_sharing_with_parent(self):
        walk = random_walk(seed=24, max_rounds=1, sprinkle_invalid=False)
        result = branch(walk.log, 3, child_session_id="child-c")
        # Mutating a parent payload in place must not leak into the child.
        dict(walk.log.events[2].payload).clear()
        parent_payload = walk.log.events[2].payload
        child_payload = result.log.events[2].payload
        assert parent_payload == child_payload
        assert parent_payload is not child_payload

    def test_divergence_is_independent(self):
        walk = random_walk(seed=25, max_rounds=1, sprinkle_invalid=False)
        at = 4  # inside round 1, right after options landed
        result = branch(walk.log, at, child_session_id="child-d")
        parent_before = walk.log.replay()
        child_state = result.session
        card = child_state.current_round_options()[0]
        toggled, event = perform(
            child_state,
            EventKind.OPTION_TOGGLED,
            {"option_id": card.id, "status": OptionStatus.KEPT.value},
        )
        result.log.append(event)
        assert walk.log.replay() == parent_before
        assert result.log.replay() == toggled

    @pytest.mark.parametrize("bad", [0, -1, 10_000, True, False])
    def test_branch_point_must_exist(self, bad):
        walk = random_walk(seed=26, max_rounds=1, sprinkle_invalid=False)
        with pytest.raises(EngineError) as excinfo:
            branch(walk.log, bad)
        assert excinfo.value.code == "bad-branch-point"

    def test_branch_at_last_event_allowed(self):
        walk = random_walk(seed=27, max_rounds=1, sprinkle_invalid=False)
        result = branch(walk.log, len(walk.log))
        assert result.session.phase == walk.session.phase


class TestSummaries:
    def test_scripted_run_digests(self):
        walk = scripted_loop(seed=11, rounds=2)
        summary = summarize(walk.log)
        assert summary.session_id == "fixture-11"
        assert summary.finished is True
        assert summary.round == 2
        assert summary.total_events == len(walk.log)
        assert len(summary.rounds) == 2
        first = summary.rounds[0]
        assert first.options_generated == 8
        assert first.options_custom == 0
        assert first.options_kept == 3
        assert first.options_removed == 5
        assert len(first.criteria_installed) >= 1
        assert first.definitions_selected == 2 * len(first.criteria_installed)
        for timeline in summary.criteria:
            assert timeline.origin == CriterionOrigin.INFERRED
            assert timeline.removed_round is None
            assert timeline.tier_changes[0].round == timeline.introduced_round

    def test_retier_and_removal_show_up(self):
        config = SessionConfig(seed=1)
        state = None
        log = EventLog()

        def do(kind, payload):
            nonlocal state
            state, event = perform(state, kind, payload)
            log.append(event)

        do(EventKind.SESSION_CREATED, {"session_id": "summary-case", "config": config.to_dict()})
        do(EventKind.FRAMING_SUBMITTED, {"decision_text": "Pick a lane", "ideal_qualities_text": ""})
        do(EventKind.OPTIONS_INSTALLED, {"cards": [c.to_dict() for c in make_cards(1)]})
        for i, card in enumerate(state.current_round_options()):
            status = OptionStatus.KEPT if i < 3 else OptionStatus.REMOVED
            do(EventKind.OPTION_TOGGLED, {"option_id": card.id, "status": status.value})
        do(EventKind.NARROWING_CONFIRMED, {})
        crits = make_criteria(1, ["alpha depth", "beta depth", "gamma depth"])
        do(EventKind.CRITERIA_INSTALLED, {"criteria": [c.to_dict() for c in crits]})
        do(EventKind.TIER_SET, {"criterion_id": crits[0].id, "tier": Tier.MUST_HAVE.value})
        do(EventKind.TIER_SET, {"criterion_id": crits[1].id, "tier": Tier.SHOULD_HAVE.value})
        # Same value again: not a change, the timeline must not record it.
        do(EventKind.TIER_SET, {"criterion_id": crits[1].id, "tier": Tier.SHOULD_HAVE.value})
        # A real re-tier after first assignment.
        do(EventKind.TIER_SET, {"criterion_id": crits[0].id, "tier": Tier.COULD_HAVE.value})
        do(EventKind.CRITERION_REMOVED, {"criterion_id": crits[2].id})

        summary = summarize(log)
        first = summary.rounds[0]
        assert first.criteria_retiered == ("alpha depth",)
        assert first.criteria_removed == ("gamma depth",)
        timeline = {t.label: t for t in summary.criteria}
        assert [c.tier for c in timeline["alpha depth"].tier_changes] == [
            Tier.MUST_HAVE,
            Tier.COULD_HAVE,
        ]
        assert len(timeline["beta depth"].tier_changes) == 1
        assert timeline["gamma depth"].removed_round == 1

    def test_summary_is_pure_function_of_log(self):
        walk = random_walk(seed=31, max_rounds=2, sprinkle_invalid=False)
        assert summarize(walk.log) == summarize(walk.log)
        revived = EventLog.from_dicts(walk.log.to_dicts())
        assert summarize(revived) == summarize(walk.log)
