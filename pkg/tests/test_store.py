"""Session persistence: canonical bytes, validation on load, atomic saves."""

from __future__ import annotations

import json

import pytest

from criteria_loop.errors import EngineError
from criteria_loop.events import Lineage
from criteria_loop.history import branch
from criteria_loop.store import (
    FORMAT_VERSION,
    SessionFile,
    SessionStore,
    canonical_bytes,
    load_session_file,
    parse_session_file,
)

from .driver import random_walk, scripted_loop


def session_file_for(walk, lineage: Lineage = Lineage()) -> SessionFile:
    return SessionFile(
        session_id=walk.session.id,
        lineage=lineage,
        config=walk.session.config,
        log=walk.log,
    )


@pytest.fixture()
def store(tmp_path) -> SessionStore:
    return SessionStore(tmp_path / "sessions")


class TestRoundTrip:
    def test_save_load_replay_equality(self, store):
        walk = random_walk(seed=41, max_rounds=2, sprinkle_invalid=False)
        store.save(session_file_for(walk))
        loaded = store.load(walk.session.id)
        assert loaded.session == walk.session
        assert loaded.file.log.events == walk.log.events
        assert loaded.file.config == walk.session.config

    def test_save_is_byte_stable(self, store):
        walk = scripted_loop(seed=11, rounds=1)
        file = session_file_for(walk)
        path = store.save(file)
        first = path.read_bytes()
        store.save(file)
        assert path.read_bytes() == first
        # Loading and re-saving must also reproduce the same bytes.
        loaded = store.load(walk.session.id)
        store.save(loaded.file)
        assert path.read_bytes() == first

    def test_canonical_bytes_sorted_and_trailing_newline(self):
        raw = canonical_bytes({"b": 1, "a": {"z": 2, "y": 3}})
        text = raw.decode("utf-8")
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {"b": 1, "a": {"z": 2, "y": 3}}

    def test_no_tmp_file_left_behind(self, store):
        walk = random_walk(seed=42, max_rounds=1, sprinkle_invalid=False)
        store.save(session_file_for(walk))
        leftovers = list(store.directory.glob("*.tmp"))
        assert leftovers == []

    def test_branch_file_round_trips_with_lineage(self, store):
        walk = random_walk(seed=43, max_rounds=1, sprinkle_invalid=False)
        result = branch(walk.log, 4, child_session_id="stored-child")
        file = SessionFile(
            session_id="stored-child",
            lineage=result.lineage,
            config=result.session.config,
            log=result.log,
        )
        store.save(file)
        loaded = store.load("stored-child")
        assert loaded.file.lineage == result.lineage
        assert loaded.session == result.session

    def test_list_ids(self, store):
        for seed in (44, 45):
            walk = random_walk(seed=seed, max_rounds=1, sprinkle_invalid=False)
            store.save(session_file_for(walk))
        ids = store.list_ids()
        assert len(ids) == 2
        assert ids == sorted(ids)


class TestLoadValidation:
    def _dump(self, walk) -> dict:
        return session_file_for(walk).to_dict()

    @pytest.fixture()
    def walk(self):
        return random_walk(seed=50, max_rounds=1, sprinkle_invalid=False)

    def expect_code(self, data, code: str):
        with pytest.raises(EngineError) as excinfo:
            parse_session_file(canonical_bytes(data))
        assert excinfo.value.code == code
        return excinfo.value

    def test_unknown_session(self, store):
        with pytest.raises(EngineError) as excinfo:
            store.load("never-saved")
        assert excinfo.value.code == "unknown-session"
        assert excinfo.value.details["session_id"] == "never-saved"

    def test_invalid_utf8(self):
        with pytest.raises(EngineError) as excinfo:
            parse_session_file(b"\xff\xfe{}")
        assert excinfo.value.code == "corrupt-log"

    def test_truncated_json_reports_offset(self, walk):
        raw = canonical_bytes(self._dump(walk))[:-40]
        with pytest.raises(EngineError) as excinfo:
            parse_session_file(raw)
        assert excinfo.value.code == "corrupt-log"
        assert 0 < excinfo.value.details["offset"] <= len(raw)

    def test_non_object_top_level(self):
        with pytest.raises(EngineError) as excinfo:
            parse_session_file(b"[1, 2, 3]\n")
        assert excinfo.value.code == "corrupt-log"

    def test_future_format_version(self, walk):
        data = self._dump(walk)
        data["format_version"] = 99
        err = self.expect_code(data, "unsupported-version")
        assert err.details == {"found": 99, "supported": FORMAT_VERSION}

    def test_unrecognized_envelope_field(self, walk):
        data = self._dump(walk)
        data["surprise"] = True
        err = self.expect_code(data, "unsupported-version")
        assert err.details["fields"] == ["surprise"]

    def test_missing_field(self, walk):
        data = self._dump(walk)
        del data["events"]
        self.expect_code(data, "corrupt-log")

    def test_session_id_mismatch(self, walk):
        data = self._dump(walk)
        data["session_id"] = "someone-else"
        self.expect_code(data, "corrupt-log")

    def test_config_mismatch(self, walk):
        data = self._dump(walk)
        data["config"]["keep_target"] = data["config"]["keep_target"] + 1
        self.expect_code(data, "corrupt-log")

    def test_lineage_without_branch_event(self, walk):
        data = self._dump(walk)
        data["lineage"] = {"parent_session_id": "ghost", "branch_point_seq": 2}
        self.expect_code(data, "corrupt-log")

    def test_lineage_contradicting_branch_event(self, walk):
        result = branch(walk.log, 3, child_session_id="lineage-case")
        data = SessionFile(
            session_id="lineage-case",
            lineage=Lineage(parent_session_id="wrong-parent", branch_point_seq=3),
            config=walk.session.config,
            log=result.log,
        ).to_dict()
        self.expect_code(data, "corrupt-log")

    def test_tampered_event_stream(self, walk):
        data = self._dump(walk)
        # Reordering two events breaks seq continuity.
        data["events"][2], data["events"][3] = data["events"][3], data["events"][2]
        with pytest.raises(EngineError) as excinfo:
            parse_session_file(canonical_bytes(data))
        assert excinfo.value.code in ("corrupt-log", "seq-gap")

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(EngineError) as excinfo:
            load_session_file(tmp_path / "absent.json")
        assert excinfo.value.code == "io-error"
