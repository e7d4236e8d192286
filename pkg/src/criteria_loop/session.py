"""Pure state machine for the criteria-prototyping loop.

The loop advances through::

    describing -> awaiting_options -> narrowing -> awaiting_criteria
        -> prioritizing -> awaiting_definitions -> redefining
        -> (awaiting_options, round+1)  |  finished

Every command is validated and applied by :func:`apply_event`, the single
fold step shared by live execution and log replay. Commands never mutate
their input session; a rejected command raises :class:`EngineError` and
leaves the input untouched.
"""

from __future__ import annotations

import uuid
from dataclasses import replace
from typing import Any, Iterable, Mapping, Sequence

from .errors import EngineError, wrong_phase
from .events import EventKind, SessionEvent
from .model import (
    Criterion,
    CriterionOrigin,
    DecisionFraming,
    DecisionSession,
    Definition,
    DefinitionFlavor,
    OptionCard,
    OptionOrigin,
    OptionStatus,
    Phase,
    PhaseKind,
    SessionConfig,
    Strategy,
    Tier,
    normalize,
)

# Phases in which the framing may still be revised mid-loop.
_FRAMING_PHASES = frozenset(
    {PhaseKind.DESCRIBING, PhaseKind.NARROWING, PhaseKind.PRIORITIZING, PhaseKind.REDEFINING}
)


def new_id() -> str:
    return uuid.uuid4().hex[:12]


# ---------------------------------------------------------------------------
# Event application (the fold step)
# ---------------------------------------------------------------------------


def apply_event(session: DecisionSession | None, event: SessionEvent) -> DecisionSession:
    """Validate *event* against *session* and return the next session state.

    ``session`` is ``None`` only for the initial ``session_created`` event.
    Raises :class:`EngineError` on any violation; the input is never mutated.
    """
    if event.kind == EventKind.SESSION_CREATED:
        if session is not None:
            raise EngineError("invalid-payload", "session_created only valid as the first event")
        if event.seq != 1:
            raise EngineError("seq-gap", f"creation event must have seq 1, got {event.seq}")
        return _apply_created(event.payload)

    if session is None:
        raise EngineError("corrupt-log", f"log must start with session_created, got {event.kind.value}")
    if event.seq != session.event_seq + 1:
        raise EngineError(
            "seq-gap",
            f"expected seq {session.event_seq + 1}, got {event.seq}",
            expected=session.event_seq + 1,
            actual=event.seq,
        )
    if session.phase.kind == PhaseKind.FINISHED and event.kind != EventKind.SESSION_BRANCHED:
        raise wrong_phase("any non-terminal", PhaseKind.FINISHED.value)

    handler = _HANDLERS.get(event.kind)
    if handler is None:  # pragma: no cover - enum is closed
        raise EngineError("invalid-payload", f"unhandled event kind {event.kind.value}")
    updated = handler(session, event.payload)
    return replace(updated, event_seq=session.event_seq + 1)


def _apply_created(payload: Mapping[str, Any]) -> DecisionSession:
    try:
        session_id = str(payload["session_id"])
        config = SessionConfig.from_dict(payload["config"])
    except (KeyError, TypeError, ValueError) as exc:
        raise EngineError("invalid-payload", f"bad session_created payload: {exc}") from exc
    if not session_id:
        raise EngineError("invalid-payload", "session_id must be nonempty")
    config.validate()
    return DecisionSession(id=session_id, config=config, event_seq=1)


def _apply_framing(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind not in _FRAMING_PHASES:
        raise wrong_phase("describing|narrowing|prioritizing|redefining", session.phase.kind.value)
    decision_text = str(payload.get("decision_text", "")).strip()
    ideal_qualities_text = str(payload.get("ideal_qualities_text", "")).strip()
    if not decision_text:
        raise EngineError("empty-decision-text", "decision_text must be nonempty")
    framing = DecisionFraming(
        decision_text=decision_text,
        ideal_qualities_text=ideal_qualities_text,
        revision=session.framing.revision + 1,
    )
    phase = session.phase
    if phase.kind == PhaseKind.DESCRIBING:
        phase = Phase(PhaseKind.AWAITING_OPTIONS, phase.round)
    return replace(session, framing=framing, phase=phase)


def _parse_cards(raw: Any) -> list[OptionCard]:
    if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
        raise EngineError("invalid-payload", "cards must be a list")
    try:
        return [OptionCard.from_dict(c) for c in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise EngineError("invalid-payload", f"bad option card: {exc}") from exc


def _apply_options_installed(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.AWAITING_OPTIONS:
        raise wrong_phase(PhaseKind.AWAITING_OPTIONS.value, session.phase.kind.value)
    cards = _parse_cards(payload.get("cards"))
    want = session.config.options_per_round
    if len(cards) != want:
        raise EngineError(
            "wrong-count",
            f"expected {want} generated cards, got {len(cards)}",
            actual=len(cards),
            target=want,
        )
    rnd = session.phase.round
    for card in cards:
        if card.round != rnd:
            raise wrong_phase(f"cards for round {rnd}", f"card {card.id} stamped round {card.round}")
        if card.origin != OptionOrigin.GENERATED or card.strategy == Strategy.NONE:
            raise EngineError(
                "invalid-payload", f"installed cards must be generated with a strategy ({card.id})"
            )
        if not card.text.strip():
            raise EngineError("invalid-payload", f"card {card.id} has empty text")
    _require_unique("card id", [c.id for c in cards], existing=_all_option_ids(session))
    texts = [normalize(c.text) for c in cards]
    if len(set(texts)) != len(texts):
        raise EngineError("invalid-payload", "card texts must be pairwise distinct")

    installed = tuple(replace(c, status=OptionStatus.UNDECIDED) for c in cards)
    options = dict(session.options)
    options[rnd] = installed
    return replace(session, options=options, phase=Phase(PhaseKind.NARROWING, rnd))


def _apply_option_toggled(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.NARROWING:
        raise wrong_phase(PhaseKind.NARROWING.value, session.phase.kind.value)
    option_id = str(payload.get("option_id", ""))
    try:
        status = OptionStatus(payload.get("status"))
    except ValueError as exc:
        raise EngineError("invalid-payload", f"bad status: {payload.get('status')!r}") from exc
    card = session.find_option(option_id)
    if card is None:
        raise EngineError(
            "unknown-option", f"no option {option_id!r} in round {session.phase.round}", option_id=option_id
        )
    return session.with_option(replace(card, status=status))


def _apply_custom_option(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.NARROWING:
        raise wrong_phase(PhaseKind.NARROWING.value, session.phase.kind.value)
    text = str(payload.get("text", "")).strip()
    if not text:
        raise EngineError("empty-text", "custom option text must be nonempty")
    option_id = str(payload.get("option_id", ""))
    _require_unique("card id", [option_id], existing=_all_option_ids(session))
    rnd = session.phase.round
    card = OptionCard(
        id=option_id,
        text=text,
        origin=OptionOrigin.USER_AUTHORED,
        round=rnd,
        status=OptionStatus.KEPT,
        strategy=Strategy.NONE,
    )
    options = dict(session.options)
    options[rnd] = tuple(options.get(rnd, ())) + (card,)
    return replace(session, options=options)


def _apply_narrowing_confirmed(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.NARROWING:
        raise wrong_phase(PhaseKind.NARROWING.value, session.phase.kind.value)
    kept = session.kept_count()
    target = session.config.keep_target
    if kept != target:
        raise EngineError(
            "wrong-keep-count",
            f"narrowing requires exactly {target} kept options, found {kept}",
            actual=kept,
            target=target,
        )
    return replace(session, phase=Phase(PhaseKind.AWAITING_CRITERIA, session.phase.round))


def _apply_criteria_installed(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.AWAITING_CRITERIA:
        raise wrong_phase(PhaseKind.AWAITING_CRITERIA.value, session.phase.kind.value)
    raw = payload.get("criteria")
    if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
        raise EngineError("invalid-payload", "criteria must be a list")
    try:
        inferred = [Criterion.from_dict(c) for c in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise EngineError("invalid-payload", f"bad criterion: {exc}") from exc

    cap = session.config.max_inferred_criteria
    if len(inferred) > cap:
        raise EngineError(
            "too-many-criteria",
            f"at most {cap} inferred criteria per round, got {len(inferred)}",
            actual=len(inferred),
            target=cap,
        )
    rnd = session.phase.round
    for crit in inferred:
        if (
            crit.origin != CriterionOrigin.INFERRED
            or crit.tier != Tier.UNASSIGNED
            or not crit.active
            or crit.definitions
            or crit.introduced_round != rnd
        ):
            raise EngineError(
                "invalid-payload",
                f"installed criteria must be fresh inferred records for round {rnd} ({crit.id})",
            )
        if not crit.label.strip():
            raise EngineError("invalid-payload", f"criterion {crit.id} has empty label")
    _require_unique(
        "criterion id", [c.id for c in inferred], existing={c.id for c in session.criteria}
    )
    _require_fresh_labels(session, [c.label for c in inferred])
    return replace(
        session,
        criteria=session.criteria + tuple(inferred),
        phase=Phase(PhaseKind.PRIORITIZING, rnd),
    )


def _apply_tier_set(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.PRIORITIZING:
        raise wrong_phase(PhaseKind.PRIORITIZING.value, session.phase.kind.value)
    criterion = _require_active_criterion(session, payload.get("criterion_id"))
    try:
        tier = Tier(payload.get("tier"))
    except ValueError as exc:
        raise EngineError("invalid-payload", f"bad tier: {payload.get('tier')!r}") from exc
    return session.with_criterion(replace(criterion, tier=tier))


def _apply_criterion_added(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.PRIORITIZING:
        raise wrong_phase(PhaseKind.PRIORITIZING.value, session.phase.kind.value)
    label = str(payload.get("label", "")).strip()
    if not label:
        raise EngineError("empty-text", "criterion label must be nonempty")
    criterion_id = str(payload.get("criterion_id", ""))
    _require_unique(
        "criterion id", [criterion_id], existing={c.id for c in session.criteria}
    )
    _require_fresh_labels(session, [label])
    criterion = Criterion(
        id=criterion_id,
        label=label,
        origin=CriterionOrigin.USER_ADDED,
        tier=Tier.UNASSIGNED,
        introduced_round=session.phase.round,
    )
    return replace(session, criteria=session.criteria + (criterion,))


def _apply_criterion_removed(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.PRIORITIZING:
        raise wrong_phase(PhaseKind.PRIORITIZING.value, session.phase.kind.value)
    criterion = _require_active_criterion(session, payload.get("criterion_id"))
    # Retained inactive: history and generation context keep the record.
    return session.with_criterion(replace(criterion, active=False))


def _apply_prioritization_confirmed(
    session: DecisionSession, payload: Mapping[str, Any]
) -> DecisionSession:
    if session.phase.kind != PhaseKind.PRIORITIZING:
        raise wrong_phase(PhaseKind.PRIORITIZING.value, session.phase.kind.value)
    active = session.active_criteria()
    if not active:
        raise EngineError("no-active-criteria", "at least one active criterion is required")
    unassigned = [c.id for c in active if c.tier == Tier.UNASSIGNED]
    if unassigned:
        raise EngineError(
            "unassigned-tiers",
            f"{len(unassigned)} active criteria still unassigned",
            criterion_ids=unassigned,
        )
    # From round 2 a session can re-enter this gate with every carried
    # criterion already defined and nothing new installed; awaiting_definitions
    # would then have no exit, so skip straight to redefining.
    if all(c.definitions for c in active):
        return replace(session, phase=Phase(PhaseKind.REDEFINING, session.phase.round))
    return replace(session, phase=Phase(PhaseKind.AWAITING_DEFINITIONS, session.phase.round))


def _apply_definitions_installed(
    session: DecisionSession, payload: Mapping[str, Any]
) -> DecisionSession:
    if session.phase.kind != PhaseKind.AWAITING_DEFINITIONS:
        raise wrong_phase(PhaseKind.AWAITING_DEFINITIONS.value, session.phase.kind.value)
    criterion = _require_active_criterion(session, payload.get("criterion_id"))
    raw = payload.get("definitions")
    if not isinstance(raw, Sequence) or isinstance(raw, (str, bytes)):
        raise EngineError("invalid-payload", "definitions must be a list")
    try:
        defs = [Definition.from_dict(d) for d in raw]
    except (KeyError, TypeError, ValueError) as exc:
        raise EngineError("invalid-payload", f"bad definition: {exc}") from exc

    want = session.config.definitions_per_criterion
    if len(defs) != want:
        raise EngineError(
            "wrong-count",
            f"expected {want} definitions, got {len(defs)}",
            actual=len(defs),
            target=want,
        )
    for definition in defs:
        if definition.flavor == DefinitionFlavor.USER_AUTHORED:
            raise EngineError(
                "invalid-payload", "installed definitions must be common or provocative"
            )
        if not definition.text.strip():
            raise EngineError("invalid-payload", f"definition {definition.id} has empty text")
    _require_unique("definition id", [d.id for d in defs])
    texts = [normalize(d.text) for d in defs]
    if len(set(texts)) != len(texts):
        raise EngineError("duplicate-definition", "definition texts must be pairwise distinct")

    installed = tuple(replace(d, selected=False) for d in defs)
    updated = session.with_criterion(replace(criterion, definitions=installed))
    if all(c.definitions for c in updated.active_criteria()):
        return replace(updated, phase=Phase(PhaseKind.REDEFINING, session.phase.round))
    return updated


def _apply_definitions_selected(
    session: DecisionSession, payload: Mapping[str, Any]
) -> DecisionSession:
    if session.phase.kind != PhaseKind.REDEFINING:
        raise wrong_phase(PhaseKind.REDEFINING.value, session.phase.kind.value)
    criterion = _require_active_criterion(session, payload.get("criterion_id"))
    selected_ids = payload.get("selected_ids", [])
    if not isinstance(selected_ids, Sequence) or isinstance(selected_ids, (str, bytes)):
        raise EngineError("invalid-payload", "selected_ids must be a list")
    selected_ids = [str(i) for i in selected_ids]
    known = {d.id for d in criterion.definitions}
    for def_id in selected_ids:
        if def_id not in known:
            raise EngineError(
                "unknown-definition",
                f"criterion {criterion.id} has no definition {def_id!r}",
                definition_id=def_id,
            )

    raw_customs = payload.get("custom_definitions", [])
    if not isinstance(raw_customs, Sequence) or isinstance(raw_customs, (str, bytes)):
        raise EngineError("invalid-payload", "custom_definitions must be a list")
    customs: list[Definition] = []
    seen_texts = {normalize(d.text) for d in criterion.definitions}
    for item in raw_customs:
        try:
            def_id, text = str(item["id"]), str(item["text"])
        except (KeyError, TypeError) as exc:
            raise EngineError("invalid-payload", f"bad custom definition: {exc}") from exc
        if not text.strip():
            raise EngineError("empty-text", "custom definition text must be nonempty")
        norm = normalize(text)
        if norm in seen_texts:
            raise EngineError(
                "duplicate-definition", f"definition {text!r} already exists for this criterion"
            )
        seen_texts.add(norm)
        customs.append(
            Definition(id=def_id, text=text.strip(), flavor=DefinitionFlavor.USER_AUTHORED, selected=True)
        )
    _require_unique("definition id", [d.id for d in customs], existing=known)

    chosen = set(selected_ids)
    definitions = tuple(
        replace(d, selected=d.id in chosen) for d in criterion.definitions
    ) + tuple(customs)
    return session.with_criterion(replace(criterion, definitions=definitions))


def _apply_redefinition_confirmed(
    session: DecisionSession, payload: Mapping[str, Any]
) -> DecisionSession:
    if session.phase.kind != PhaseKind.REDEFINING:
        raise wrong_phase(PhaseKind.REDEFINING.value, session.phase.kind.value)
    # Loop back: active criteria (tiers, selected definitions) carry over as-is.
    return replace(session, phase=Phase(PhaseKind.AWAITING_OPTIONS, session.phase.round + 1))


def _apply_session_finished(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    if session.phase.kind != PhaseKind.REDEFINING:
        raise wrong_phase(PhaseKind.REDEFINING.value, session.phase.kind.value)
    return replace(session, phase=Phase(PhaseKind.FINISHED, session.phase.round))


def _apply_session_branched(session: DecisionSession, payload: Mapping[str, Any]) -> DecisionSession:
    child_id = str(payload.get("child_session_id", ""))
    if not child_id:
        raise EngineError("invalid-payload", "session_branched requires child_session_id")
    return replace(session, id=child_id)


_HANDLERS = {
    EventKind.FRAMING_SUBMITTED: _apply_framing,
    EventKind.OPTIONS_INSTALLED: _apply_options_installed,
    EventKind.OPTION_TOGGLED: _apply_option_toggled,
    EventKind.CUSTOM_OPTION_ADDED: _apply_custom_option,
    EventKind.NARROWING_CONFIRMED: _apply_narrowing_confirmed,
    EventKind.CRITERIA_INSTALLED: _apply_criteria_installed,
    EventKind.TIER_SET: _apply_tier_set,
    EventKind.CRITERION_ADDED: _apply_criterion_added,
    EventKind.CRITERION_REMOVED: _apply_criterion_removed,
    EventKind.PRIORITIZATION_CONFIRMED: _apply_prioritization_confirmed,
    EventKind.DEFINITIONS_INSTALLED: _apply_definitions_installed,
    EventKind.DEFINITIONS_SELECTED: _apply_definitions_selected,
    EventKind.REDEFINITION_CONFIRMED: _apply_redefinition_confirmed,
    EventKind.SESSION_FINISHED: _apply_session_finished,
    EventKind.SESSION_BRANCHED: _apply_session_branched,
}


# ---------------------------------------------------------------------------
# Validation helpers
# ---------------------------------------------------------------------------


def _all_option_ids(session: DecisionSession) -> set[str]:
    return {card.id for cards in session.options.values() for card in cards}


def _require_unique(what: str, ids: Iterable[str], existing: set[str] | None = None) -> None:
    seen = set(existing or ())
    for item in ids:
        if not item:
            raise EngineError("invalid-payload", f"{what} must be nonempty")
        if item in seen:
            raise EngineError("invalid-payload", f"duplicate {what}: {item!r}")
        seen.add(item)


def _require_fresh_labels(session: DecisionSession, labels: Iterable[str]) -> None:
    taken = {normalize(c.label) for c in session.active_criteria()}
    for label in labels:
        norm = normalize(label)
        if norm in taken:
            raise EngineError(
                "duplicate-label", f"criterion label {label!r} already active", label=label
            )
        taken.add(norm)


def _require_active_criterion(session: DecisionSession, criterion_id: Any) -> Criterion:
    criterion_id = str(criterion_id or "")
    criterion = session.find_criterion(criterion_id)
    if criterion is None or not criterion.active:
        raise EngineError(
            "unknown-criterion",
            f"no active criterion {criterion_id!r}",
            criterion_id=criterion_id,
        )
    return criterion


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def perform(
    session: DecisionSession | None, kind: EventKind, payload: Mapping[str, Any]
) -> tuple[DecisionSession, SessionEvent]:
    """Build the event for a command, validate it, and apply it."""
    seq = 1 if session is None else session.event_seq + 1
    event = SessionEvent(seq=seq, kind=kind, payload=dict(payload))
    return apply_event(session, event), event


def create_session(config: SessionConfig, session_id: str | None = None) -> DecisionSession:
    session, _ = perform(
        None,
        EventKind.SESSION_CREATED,
        {"session_id": session_id or new_id(), "config": config.to_dict()},
    )
    return session


def submit_framing(
    session: DecisionSession, decision_text: str, ideal_qualities_text: str = ""
) -> DecisionSession:
    session, _ = perform(
        session,
        EventKind.FRAMING_SUBMITTED,
        {"decision_text": decision_text, "ideal_qualities_text": ideal_qualities_text},
    )
    return session


def install_options(session: DecisionSession, cards: Sequence[OptionCard]) -> DecisionSession:
    session, _ = perform(
        session, EventKind.OPTIONS_INSTALLED, {"cards": [c.to_dict() for c in cards]}
    )
    return session


def toggle_option(session: DecisionSession, option_id: str, to: OptionStatus) -> DecisionSession:
    session, _ = perform(
        session, EventKind.OPTION_TOGGLED, {"option_id": option_id, "status": to.value}
    )
    return session


def add_custom_option(
    session: DecisionSession, text: str, option_id: str | None = None
) -> DecisionSession:
    session, _ = perform(
        session,
        EventKind.CUSTOM_OPTION_ADDED,
        {"option_id": option_id or new_id(), "text": text},
    )
    return session


def confirm_narrowing(session: DecisionSession) -> DecisionSession:
    session, _ = perform(session, EventKind.NARROWING_CONFIRMED, {})
    return session


def install_criteria(session: DecisionSession, inferred: Sequence[Criterion]) -> DecisionSession:
    session, _ = perform(
        session, EventKind.CRITERIA_INSTALLED, {"criteria": [c.to_dict() for c in inferred]}
    )
    return session


def set_tier(session: DecisionSession, criterion_id: str, tier: Tier) -> DecisionSession:
    session, _ = perform(
        session, EventKind.TIER_SET, {"criterion_id": criterion_id, "tier": tier.value}
    )
    return session


def add_criterion(
    session: DecisionSession, label: str, criterion_id: str | None = None
) -> DecisionSession:
    session, _ = perform(
        session,
        EventKind.CRITERION_ADDED,
        {"criterion_id": criterion_id or new_id(), "label": label},
    )
    return session


def remove_criterion(session: DecisionSession, criterion_id: str) -> DecisionSession:
    session, _ = perform(session, EventKind.CRITERION_REMOVED, {"criterion_id": criterion_id})
    return session


def confirm_prioritization(session: DecisionSession) -> DecisionSession:
    session, _ = perform(session, EventKind.PRIORITIZATION_CONFIRMED, {})
    return session


def install_definitions(
    session: DecisionSession, criterion_id: str, defs: Sequence[Definition]
) -> DecisionSession:
    session, _ = perform(
        session,
        EventKind.DEFINITIONS_INSTALLED,
        {"criterion_id": criterion_id, "definitions": [d.to_dict() for d in defs]},
    )
    return session


def select_definitions(
    session: DecisionSession,
    criterion_id: str,
    selected_ids: Sequence[str],
    custom_texts: Sequence[str] = (),
) -> DecisionSession:
    session, _ = perform(
        session,
        EventKind.DEFINITIONS_SELECTED,
        {
            "criterion_id": criterion_id,
            "selected_ids": list(selected_ids),
            "custom_definitions": [{"id": new_id(), "text": t} for t in custom_texts],
        },
    )
    return session


def confirm_redefinition(session: DecisionSession, finish: bool = False) -> DecisionSession:
    kind = EventKind.SESSION_FINISHED if finish else EventKind.REDEFINITION_CONFIRMED
    session, _ = perform(session, kind, {})
    return session
