"""Session orchestration: commands, server-side generation, persistence.

Each session has exactly one writer at a time (a per-session lock); every
accepted command appends one event and saves the file before returning.
Entering an awaiting_* phase parks the session until :meth:`drive` runs
the pending generation, appends the install events, and moves on. The
HTTP layer schedules that as a background task so mutations return
immediately and clients poll the phase.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .errors import EngineError, GenerationError
from .events import EventKind, Lineage
from .export import export_criteria
from .generation import (
    Provider,
    StubProvider,
    build_context,
    generate_definitions,
    generate_options,
    infer_criteria,
    plan_strategies,
)
from .history import EventLog, ProcessSummary, branch, summarize
from .model import (
    AWAITING_KINDS,
    DecisionSession,
    PhaseKind,
    ProviderKind,
    SessionConfig,
)
from .session import new_id, perform
from .store import SessionFile, SessionStore

ProviderFactory = Callable[[SessionConfig], Provider]


def default_provider_factory(config: SessionConfig) -> Provider:
    if config.provider == ProviderKind.EXTERNAL:
        from .generation import ExternalProvider

        return ExternalProvider()
    return StubProvider(config.seed)


@dataclass
class _Live:
    log: EventLog
    session: DecisionSession
    lineage: Lineage = field(default_factory=Lineage)
    lock: threading.Lock = field(default_factory=threading.Lock)
    generation_error: dict[str, Any] | None = None


class SessionService:
    """All session operations behind the API and CLI."""

    def __init__(
        self,
        store: SessionStore,
        provider_factory: ProviderFactory = default_provider_factory,
        default_config: SessionConfig | None = None,
    ):
        self._store = store
        self._provider_factory = provider_factory
        self._default_config = default_config or SessionConfig()
        self._registry: dict[str, _Live] = {}
        self._registry_lock = threading.Lock()

    # -- session access ------------------------------------------------------

    def _live(self, session_id: str) -> _Live:
        with self._registry_lock:
            live = self._registry.get(session_id)
            if live is not None:
                return live
        loaded = self._store.load(session_id)
        live = _Live(log=loaded.file.log, session=loaded.session, lineage=loaded.file.lineage)
        with self._registry_lock:
            return self._registry.setdefault(session_id, live)

    def _persist(self, live: _Live) -> None:
        self._store.save(
            SessionFile(
                session_id=live.session.id,
                lineage=live.lineage,
                config=live.session.config,
                log=live.log,
            )
        )

    def state(self, session_id: str) -> dict[str, Any]:
        return self._envelope(self._live(session_id))

    def _envelope(self, live: _Live) -> dict[str, Any]:
        return {
            "session": live.session.to_dict(),
            "lineage": live.lineage.to_dict(),
            "pending_generation": live.session.phase.kind in AWAITING_KINDS,
            "generation_error": live.generation_error,
        }

    # -- commands ------------------------------------------------------------

    def create_session(self, config_overrides: Mapping[str, Any] | None = None) -> dict[str, Any]:
        config = self._merged_config(config_overrides)
        config.validate()
        session_id = new_id()
        session, event = perform(
            None, EventKind.SESSION_CREATED, {"session_id": session_id, "config": config.to_dict()}
        )
        live = _Live(log=EventLog([event]), session=session)
        with self._registry_lock:
            self._registry[session_id] = live
        self._persist(live)
        return self._envelope(live)

    def _merged_config(self, overrides: Mapping[str, Any] | None) -> SessionConfig:
        data = self._default_config.to_dict()
        for key, value in dict(overrides or {}).items():
            if key not in data:
                raise EngineError("invalid-payload", f"unknown config field {key!r}", field=key)
            if key == "provider":
                # The server decides how content is produced; a client cannot
                # point a session at a different provider.
                continue
            data[key] = value
        return SessionConfig.from_dict(data)

    def _mutate(self, session_id: str, kind: EventKind, payload: Mapping[str, Any]) -> dict[str, Any]:
        live = self._live(session_id)
        with live.lock:
            session, event = perform(live.session, kind, payload)
            live.log.append(event)
            live.session = session
            live.generation_error = None
            self._persist(live)
            return self._envelope(live)

    def submit_framing(
        self, session_id: str, decision_text: str, ideal_qualities_text: str = ""
    ) -> dict[str, Any]:
        return self._mutate(
            session_id,
            EventKind.FRAMING_SUBMITTED,
            {"decision_text": decision_text, "ideal_qualities_text": ideal_qualities_text},
        )

    def set_option_status(self, session_id: str, option_id: str, status: str) -> dict[str, Any]:
        return self._mutate(
            session_id, EventKind.OPTION_TOGGLED, {"option_id": option_id, "status": status}
        )

    def add_custom_option(self, session_id: str, text: str) -> dict[str, Any]:
        return self._mutate(
            session_id, EventKind.CUSTOM_OPTION_ADDED, {"option_id": new_id(), "text": text}
        )

    def confirm_narrowing(self, session_id: str) -> dict[str, Any]:
        return self._mutate(session_id, EventKind.NARROWING_CONFIRMED, {})

    def add_criterion(self, session_id: str, label: str) -> dict[str, Any]:
        return self._mutate(
            session_id, EventKind.CRITERION_ADDED, {"criterion_id": new_id(), "label": label}
        )

    def set_tier(self, session_id: str, criterion_id: str, tier: str) -> dict[str, Any]:
        return self._mutate(
            session_id, EventKind.TIER_SET, {"criterion_id": criterion_id, "tier": tier}
        )

    def remove_criterion(self, session_id: str, criterion_id: str) -> dict[str, Any]:
        return self._mutate(session_id, EventKind.CRITERION_REMOVED, {"criterion_id": criterion_id})

    def confirm_prioritization(self, session_id: str) -> dict[str, Any]:
        return self._mutate(session_id, EventKind.PRIORITIZATION_CONFIRMED, {})

    def select_definitions(
        self,
        session_id: str,
        criterion_id: str,
        selected_ids: Sequence[str],
        custom_texts: Sequence[str] = (),
    ) -> dict[str, Any]:
        return self._mutate(
            session_id,
            EventKind.DEFINITIONS_SELECTED,
            {
                "criterion_id": criterion_id,
                "selected_ids": list(selected_ids),
                "custom_definitions": [{"id": new_id(), "text": t} for t in custom_texts],
            },
        )

    def confirm_redefinition(self, session_id: str, finish: bool = False) -> dict[str, Any]:
        kind = EventKind.SESSION_FINISHED if finish else EventKind.REDEFINITION_CONFIRMED
        return self._mutate(session_id, kind, {})

    # -- generation ----------------------------------------------------------

    def drive(self, session_id: str) -> dict[str, Any]:
        """Run pending generation until the session leaves awaiting_* phases.

        Raises GenerationError when the provider cannot deliver; the session
        stays parked in its awaiting phase and the failure is kept on the
        state envelope until the next successful command.
        """
        live = self._live(session_id)
        with live.lock:
            try:
                self._drive_locked(live)
            except GenerationError as exc:
                live.generation_error = exc.to_dict()
                raise
            live.generation_error = None
            return self._envelope(live)

    def drive_quietly(self, session_id: str) -> None:
        """Background-task entry point: failures land on the envelope only."""
        try:
            self.drive(session_id)
        except GenerationError:
            pass

    def _drive_locked(self, live: _Live) -> None:
        while live.session.phase.kind in AWAITING_KINDS:
            provider = self._provider_factory(live.session.config)
            context = build_context(live.session)
            phase = live.session.phase.kind
            if phase == PhaseKind.AWAITING_OPTIONS:
                plan = plan_strategies(context)
                cards = generate_options(provider, context, plan)
                kind, payload = EventKind.OPTIONS_INSTALLED, {"cards": [c.to_dict() for c in cards]}
            elif phase == PhaseKind.AWAITING_CRITERIA:
                inferred = infer_criteria(provider, context)
                kind, payload = (
                    EventKind.CRITERIA_INSTALLED,
                    {"criteria": [c.to_dict() for c in inferred]},
                )
            else:
                criterion = next(
                    c for c in live.session.active_criteria() if not c.definitions
                )
                defs = generate_definitions(provider, context, criterion)
                kind, payload = (
                    EventKind.DEFINITIONS_INSTALLED,
                    {"criterion_id": criterion.id, "definitions": [d.to_dict() for d in defs]},
                )
            session, event = perform(live.session, kind, payload)
            live.log.append(event)
            live.session = session
            self._persist(live)

    # -- history -------------------------------------------------------------

    def events(self, session_id: str) -> list[dict[str, Any]]:
        return self._live(session_id).log.to_dicts()

    def export(self, session_id: str, format: str = "json") -> str:
        return export_criteria(self._live(session_id).session, format)

    def summary(self, session_id: str) -> ProcessSummary:
        return summarize(self._live(session_id).log)

    def branch_session(self, session_id: str, at_seq: int) -> dict[str, Any]:
        parent = self._live(session_id)
        with parent.lock:
            parent_log = EventLog(parent.log.events)
        result = branch(parent_log, at_seq, child_session_id=new_id())
        live = _Live(log=result.log, session=result.session, lineage=result.lineage)
        with self._registry_lock:
            self._registry[result.session.id] = live
        self._persist(live)
        return self._envelope(live)
