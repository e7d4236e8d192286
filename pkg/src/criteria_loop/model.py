"""Domain types for a decision-criteria prototyping session.

Everything here is an immutable value: session transitions produce new
values, which is what makes event replay, branching, and the
error-leaves-state-untouched guarantee cheap to uphold.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping

from .errors import EngineError

DEFAULT_OPTIONS_PER_ROUND = 8
DEFAULT_KEEP_TARGET = 3
DEFAULT_MAX_INFERRED_CRITERIA = 6
DEFAULT_DEFINITIONS_PER_CRITERION = 8


def normalize(text: str) -> str:
    """Normalization used for all label/text dedup: trim + case-fold."""
    return text.strip().casefold()


class OptionOrigin(str, Enum):
    GENERATED = "generated"
    USER_AUTHORED = "user_authored"


class OptionStatus(str, Enum):
    UNDECIDED = "undecided"
    KEPT = "kept"
    REMOVED = "removed"


class Strategy(str, Enum):
    """How a generated option card is meant to provoke the user."""

    ASSUMPTION_TEST = "assumption_test"
    ALIGN = "align"
    CHALLENGE = "challenge"
    EDGE_CASE = "edge_case"
    NONE = "none"  # user-authored cards only


class CriterionOrigin(str, Enum):
    INFERRED = "inferred"
    USER_ADDED = "user_added"


class Tier(str, Enum):
    MUST_HAVE = "must_have"
    SHOULD_HAVE = "should_have"
    COULD_HAVE = "could_have"
    UNASSIGNED = "unassigned"


class DefinitionFlavor(str, Enum):
    COMMON = "common"
    PROVOCATIVE = "provocative"
    USER_AUTHORED = "user_authored"


class PhaseKind(str, Enum):
    DESCRIBING = "describing"
    AWAITING_OPTIONS = "awaiting_options"
    NARROWING = "narrowing"
    AWAITING_CRITERIA = "awaiting_criteria"
    PRIORITIZING = "prioritizing"
    AWAITING_DEFINITIONS = "awaiting_definitions"
    REDEFINING = "redefining"
    FINISHED = "finished"


#: Phases in which the server is expected to run generation.
AWAITING_KINDS = frozenset(
    {PhaseKind.AWAITING_OPTIONS, PhaseKind.AWAITING_CRITERIA, PhaseKind.AWAITING_DEFINITIONS}
)


@dataclass(frozen=True)
class DecisionFraming:
    decision_text: str = ""
    ideal_qualities_text: str = ""
    revision: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "decision_text": self.decision_text,
            "ideal_qualities_text": self.ideal_qualities_text,
            "revision": self.revision,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DecisionFraming":
        return cls(
            decision_text=data["decision_text"],
            ideal_qualities_text=data["ideal_qualities_text"],
            revision=data["revision"],
        )


@dataclass(frozen=True)
class OptionCard:
    id: str
    text: str
    origin: OptionOrigin
    round: int
    status: OptionStatus = OptionStatus.UNDECIDED
    strategy: Strategy = Strategy.NONE

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "origin": self.origin.value,
            "round": self.round,
            "status": self.status.value,
            "strategy": self.strategy.value,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "OptionCard":
        return cls(
            id=data["id"],
            text=data["text"],
            origin=OptionOrigin(data["origin"]),
            round=data["round"],
            status=OptionStatus(data["status"]),
            strategy=Strategy(data["strategy"]),
        )


@dataclass(frozen=True)
class Definition:
    id: str
    text: str
    flavor: DefinitionFlavor
    selected: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "text": self.text,
            "flavor": self.flavor.value,
            "selected": self.selected,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Definition":
        return cls(
            id=data["id"],
            text=data["text"],
            flavor=DefinitionFlavor(data["flavor"]),
            selected=data["selected"],
        )


@dataclass(frozen=True)
class Criterion:
    id: str
    label: str
    origin: CriterionOrigin
    tier: Tier = Tier.UNASSIGNED
    active: bool = True
    definitions: tuple[Definition, ...] = ()
    introduced_round: int = 1

    def selected_definitions(self) -> tuple[Definition, ...]:
        return tuple(d for d in self.definitions if d.selected)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "label": self.label,
            "origin": self.origin.value,
            "tier": self.tier.value,
            "active": self.active,
            "definitions": [d.to_dict() for d in self.definitions],
            "introduced_round": self.introduced_round,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Criterion":
        return cls(
            id=data["id"],
            label=data["label"],
            origin=CriterionOrigin(data["origin"]),
            tier=Tier(data["tier"]),
            active=data["active"],
            definitions=tuple(Definition.from_dict(d) for d in data["definitions"]),
            introduced_round=data["introduced_round"],
        )


@dataclass(frozen=True)
class Phase:
    kind: PhaseKind
    round: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "round": self.round}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Phase":
        return cls(kind=PhaseKind(data["kind"]), round=data["round"])


class ProviderKind(str, Enum):
    STUB = "stub"
    EXTERNAL = "external"


@dataclass(frozen=True)
class SessionConfig:
    options_per_round: int = DEFAULT_OPTIONS_PER_ROUND
    keep_target: int = DEFAULT_KEEP_TARGET
    max_inferred_criteria: int = DEFAULT_MAX_INFERRED_CRITERIA
    definitions_per_criterion: int = DEFAULT_DEFINITIONS_PER_CRITERION
    provider: ProviderKind = ProviderKind.STUB
    seed: int = 0

    def validate(self) -> None:
        # options_per_round must fit one card per provocation strategy from
        # round 2 on; definitions_per_criterion must fit two of each flavor.
        if self.options_per_round < 3:
            raise EngineError(
                "invalid-config",
                f"options_per_round must be >= 3, got {self.options_per_round}",
            )
        if not 0 < self.keep_target < self.options_per_round:
            raise EngineError(
                "invalid-config",
                "keep_target must satisfy 0 < keep_target < options_per_round "
                f"(got keep_target={self.keep_target}, options_per_round={self.options_per_round})",
            )
        if self.max_inferred_criteria < 1:
            raise EngineError(
                "invalid-config",
                f"max_inferred_criteria must be >= 1, got {self.max_inferred_criteria}",
            )
        if self.definitions_per_criterion < 4:
            raise EngineError(
                "invalid-config",
                f"definitions_per_criterion must be >= 4, got {self.definitions_per_criterion}",
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "options_per_round": self.options_per_round,
            "keep_target": self.keep_target,
            "max_inferred_criteria": self.max_inferred_criteria,
            "definitions_per_criterion": self.definitions_per_criterion,
            "provider": self.provider.value,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SessionConfig":
        return cls(
            options_per_round=data["options_per_round"],
            keep_target=data["keep_target"],
            max_inferred_criteria=data["max_inferred_criteria"],
            definitions_per_criterion=data["definitions_per_criterion"],
            provider=ProviderKind(data["provider"]),
            seed=data["seed"],
        )


@dataclass(frozen=True)
class DecisionSession:
    id: str
    config: SessionConfig
    framing: DecisionFraming = field(default_factory=DecisionFraming)
    phase: Phase = field(default_factory=lambda: Phase(PhaseKind.DESCRIBING, 1))
    # Option cards keyed by the round they belong to.
    options: Mapping[int, tuple[OptionCard, ...]] = field(default_factory=dict)
    criteria: tuple[Criterion, ...] = ()
    event_seq: int = 0

    # -- lookups -------------------------------------------------------------

    def current_round_options(self) -> tuple[OptionCard, ...]:
        return tuple(self.options.get(self.phase.round, ()))

    def find_option(self, option_id: str) -> OptionCard | None:
        for card in self.current_round_options():
            if card.id == option_id:
                return card
        return None

    def active_criteria(self) -> tuple[Criterion, ...]:
        return tuple(c for c in self.criteria if c.active)

    def find_criterion(self, criterion_id: str) -> Criterion | None:
        for criterion in self.criteria:
            if criterion.id == criterion_id:
                return criterion
        return None

    def kept_count(self) -> int:
        return sum(1 for c in self.current_round_options() if c.status == OptionStatus.KEPT)

    # -- functional updates --------------------------------------------------

    def with_option(self, updated: OptionCard) -> "DecisionSession":
        cards = tuple(
            updated if card.id == updated.id else card for card in self.options[updated.round]
        )
        options = dict(self.options)
        options[updated.round] = cards
        return replace(self, options=options)

    def with_criterion(self, updated: Criterion) -> "DecisionSession":
        criteria = tuple(updated if c.id == updated.id else c for c in self.criteria)
        return replace(self, criteria=criteria)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "config": self.config.to_dict(),
            "framing": self.framing.to_dict(),
            "phase": self.phase.to_dict(),
            "options": {
                str(rnd): [c.to_dict() for c in cards] for rnd, cards in sorted(self.options.items())
            },
            "criteria": [c.to_dict() for c in self.criteria],
            "event_seq": self.event_seq,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DecisionSession":
        return cls(
            id=data["id"],
            config=SessionConfig.from_dict(data["config"]),
            framing=DecisionFraming.from_dict(data["framing"]),
            phase=Phase.from_dict(data["phase"]),
            options={
                int(rnd): tuple(OptionCard.from_dict(c) for c in cards)
                for rnd, cards in data["options"].items()
            },
            criteria=tuple(Criterion.from_dict(c) for c in data["criteria"]),
            event_seq=data["event_seq"],
        )
